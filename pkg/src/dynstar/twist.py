"""Quantum dynamical twists as truncated formal series.

A twist is stored order by order in the deformation parameter: order n is a
tensor-square (or tensor-cube) enveloping-algebra element whose coefficients
are rational in the remaining parameters but free of the deformation symbol.
The closed-form lowering/raising twist for sl(2), the dynamical-shift
operation, the defining cocycle identity and the classical limit all live
here.
"""

from __future__ import annotations

import math
from typing import Callable, Optional, Sequence

from .enveloping import EnvelopingError, PBWAlgebra, TensorUEA, UEAElement
from .lie import LieAlgebraData, Tensor2, Tensor3, alt, cyb
from .scalars import Context, FieldElement


class TwistError(ValueError):
    pass


class TwistSeries:
    """A truncated series sum_n q^n T_n of tensor enveloping elements.

    ``q`` names the deformation parameter (a declared context symbol);
    coefficients of every order must be free of it, so truncation orders
    compose exactly under multiplication.
    """

    def __init__(self, slots: Sequence[PBWAlgebra], orders: Sequence[TensorUEA],
                 deformation: str = "hbar", validate: bool = True):
        self.slots = tuple(slots)
        self.orders: list[TensorUEA] = list(orders)
        self.deformation = deformation
        if not self.orders:
            raise TwistError("need at least the constant order")
        ctx = self.ctx
        q = ctx.symbol(deformation)
        for t in self.orders:
            if t.slots != self.slots:
                raise TwistError("order has wrong slot signature")
            if validate:
                for v in t.terms.values():
                    if q in v.expr.free_symbols:
                        raise TwistError(
                            "order coefficient not free of the deformation symbol")

    @property
    def ctx(self) -> Context:
        return self.slots[0].ctx

    @property
    def truncation(self) -> int:
        return len(self.orders) - 1

    def order(self, n: int) -> TensorUEA:
        if n <= self.truncation:
            return self.orders[n]
        return TensorUEA(self.slots, {})

    def __mul__(self, other: "TwistSeries") -> "TwistSeries":
        if self.slots != other.slots or self.deformation != other.deformation:
            raise TwistError("series signature mismatch")
        N = min(self.truncation, other.truncation)
        out = []
        for r in range(N + 1):
            acc = TensorUEA(self.slots, {})
            for p in range(r + 1):
                acc = acc + self.order(p) * other.order(r - p)
            out.append(acc)
        return TwistSeries(self.slots, out, self.deformation, validate=False)

    def __sub__(self, other: "TwistSeries") -> "TwistSeries":
        if self.slots != other.slots or self.deformation != other.deformation:
            raise TwistError("series signature mismatch")
        N = min(self.truncation, other.truncation)
        return TwistSeries(
            self.slots,
            [self.order(r) - other.order(r) for r in range(N + 1)],
            self.deformation, validate=False)

    def is_zero(self) -> bool:
        return all(t.is_zero() for t in self.orders)

    def pruned(self) -> "TwistSeries":
        return TwistSeries(self.slots, [t.pruned() for t in self.orders],
                           self.deformation, validate=False)

    def map_orders(self, f: Callable[[TensorUEA], TensorUEA],
                   slots: Optional[Sequence[PBWAlgebra]] = None) -> "TwistSeries":
        mapped = [f(t) for t in self.orders]
        return TwistSeries(slots or mapped[0].slots, mapped,
                           self.deformation, validate=False)

    def starts_at_unit(self) -> bool:
        return (self.order(0) - TensorUEA.unit(self.slots)).is_zero()

    def to_json(self) -> dict:
        return {
            "deformation": self.deformation,
            "truncation": self.truncation,
            "orders": [t.to_json() for t in self.orders],
        }


def _h_powers(alg: PBWAlgebra, h_name: str, shift: int, kmax: int,
              lam_name: str) -> list[UEAElement]:
    """(h + shift)^k / lam^(k+1) for k = 0..kmax, as slot elements."""
    ctx = alg.ctx
    lam = ctx.var(lam_name)
    base = alg.gen(h_name) + alg.one().scale(shift)
    out = []
    acc = alg.one()
    for k in range(kmax + 1):
        out.append(acc.scale(lam ** (-(k + 1))))
        acc = acc * base
    return out


def abrr_factor_series(alg: PBWAlgebra, n: int, kmax: int,
                       h_name: str = "h", lam_name: str = "lam") -> list[UEAElement]:
    """Deformation-series coefficients of the resolvent product
    prod_{j=0}^{n-1} (lam - q(h+j))^(-1), truncated at q^kmax.

    Each factor expands as sum_k q^k (h+j)^k / lam^(k+1); the list entry m
    is the q^m coefficient of the product (a polynomial in h over the lam
    line).
    """
    series = [alg.one() if m == 0 else alg.zero() for m in range(kmax + 1)]
    for j in range(n):
        fj = _h_powers(alg, h_name, j, kmax, lam_name)
        new = [alg.zero() for _ in range(kmax + 1)]
        for m in range(kmax + 1):
            for k in range(m + 1):
                new[m] = new[m] + series[m - k] * fj[k]
        series = new
    return series


def abrr_twist(alg: PBWAlgebra, N: int, lowering: str = "y", raising: str = "x",
               h_name: str = "h", lam_name: str = "lam",
               deformation: str = "hbar") -> TwistSeries:
    """The closed-form dynamical twist for sl(2), truncated at order N.

    Term n is ((-1)^n / n!) q^n (y^n (x) x^n) with the resolvent product
    prod_{j<n} (lam - q(h+j))^(-1) acting on the right of the raising slot.
    Expanding the resolvents in q spreads term n over orders n, n+1, ...
    """
    ctx = alg.ctx
    orders = [TensorUEA((alg, alg), {}) for _ in range(N + 1)]
    for n in range(N + 1):
        pref = ctx((-1) ** n) / ctx(math.factorial(n))
        left = alg.gen(lowering) ** n
        right_base = alg.gen(raising) ** n
        factors = abrr_factor_series(alg, n, N - n, h_name, lam_name)
        for m, fm in enumerate(factors):
            right = right_base * fm
            for e1, c1 in left.terms.items():
                for e2, c2 in right.terms.items():
                    key = (e1, e2)
                    cur = orders[n + m].terms.get(key, ctx.zero())
                    orders[n + m].terms[key] = cur + pref * c1 * c2
    return TwistSeries((alg, alg), orders, deformation, validate=False)


def check_h_invariance(J: TwistSeries, h_name: str = "h") -> bool:
    """[h (x) 1 + 1 (x) h, J] = 0 at every order."""
    algs = J.slots
    h1 = TensorUEA(algs, {
        (_gen_exp(algs[0], h_name),) + tuple((0,) * a.ngens for a in algs[1:]):
            J.ctx.one()})
    total = h1
    for s in range(1, len(algs)):
        key = tuple(
            _gen_exp(a, h_name) if i == s else (0,) * a.ngens
            for i, a in enumerate(algs))
        total = total + TensorUEA(algs, {key: J.ctx.one()})
    for t in J.orders:
        if not (total * t - t * total).is_zero():
            return False
    return True


def _gen_exp(alg: PBWAlgebra, name: str):
    i = alg.order.index(name)
    return tuple(1 if j == i else 0 for j in range(alg.ngens))


def shift_twist(J: TwistSeries, lam_name: str = "lam",
                h_name: str = "h") -> TwistSeries:
    """J(lam - q h^(3)) acting in slots 1,2 of a tensor cube.

    Taylor expansion in the shift: coefficient c(lam) at order p contributes
    ((-1)^l / l!) d^l c/d lam^l at order p+l, with h^l placed in slot 3.
    """
    if len(J.slots) != 2:
        raise TwistError("shift applies to a two-slot twist")
    alg = J.slots[0]
    ctx = J.ctx
    N = J.truncation
    slots3 = (J.slots[0], J.slots[1], alg)
    h_i = alg.order.index(h_name)
    orders = [TensorUEA(slots3, {}) for _ in range(N + 1)]
    for p in range(N + 1):
        for (e1, e2), c in J.order(p).terms.items():
            for l in range(N - p + 1):
                if l == 0:
                    d = c
                else:
                    d = d.differentiate(lam_name)
                if d.is_zero():
                    break
                coeff = d * ctx((-1) ** l) / ctx(math.factorial(l))
                e3 = tuple(l if j == h_i else 0 for j in range(alg.ngens))
                key = (e1, e2, e3)
                cur = orders[p + l].terms.get(key, ctx.zero())
                orders[p + l].terms[key] = cur + coeff
    return TwistSeries(slots3, orders, J.deformation, validate=False)


def check_dynamical_twist(J: TwistSeries, lam_name: str = "lam",
                          h_name: str = "h") -> dict:
    """Verify the shifted cocycle identity through the truncation order.

    Left side: (Delta (x) id)(J) * J(lam - q h^(3))^{12}.
    Right side: (id (x) Delta)(J) * J^{23}.
    Returns per-order residual flags and the first failing order, if any.
    """
    if len(J.slots) != 2:
        raise TwistError("cocycle identity applies to a two-slot twist")
    lhs = J.map_orders(lambda t: t.slot_coproduct(0)) * shift_twist(J, lam_name, h_name)
    rhs = J.map_orders(lambda t: t.slot_coproduct(1)) * \
        J.map_orders(lambda t: t.insert_unit(0))
    diff = lhs - rhs
    residual_orders = []
    for r, t in enumerate(diff.orders):
        if not t.is_zero():
            residual_orders.append(r)
    return {
        "checked_through": diff.truncation,
        "ok": not residual_orders,
        "failing_orders": residual_orders,
        "first_residual": (diff.order(residual_orders[0]).pruned().to_json()
                           if residual_orders else None),
    }


def classical_limit_r(J: TwistSeries) -> Tensor2:
    """The classical dynamical r-matrix of a twist: r = j - j^21 where j is
    the first-order term, which must lie in g (x) g."""
    if len(J.slots) != 2:
        raise TwistError("classical limit applies to a two-slot twist")
    if not J.starts_at_unit():
        raise TwistError("twist must start at 1 (x) 1")
    alg = J.slots[0]
    g = alg.lie
    j: dict[tuple, FieldElement] = {}
    for (e1, e2), c in J.order(1).pruned().terms.items():
        if sum(e1) != 1 or sum(e2) != 1:
            raise TwistError("first-order term does not lie in g (x) g")
        i1 = alg._lie_index[e1.index(1)]
        i2 = alg._lie_index[e2.index(1)]
        j[(i1, i2)] = j.get((i1, i2), g.ctx.zero()) + c
    jt = Tensor2(g, j)
    return jt - jt.transpose()


def check_cdybe(r: Tensor2, couplings: Sequence[tuple[str, str]]) -> dict:
    """Classical dynamical Yang-Baxter residual:
    Alt(sum_i h_i (x) dr/dlam_i) + CYB(r), with Alt the cyclic-rotation sum.

    ``couplings`` pairs each Cartan basis name with its dynamical parameter.
    """
    g = r.algebra
    z = g.ctx.zero()
    acc: dict[tuple, FieldElement] = {}
    for h_name, lam_name in couplings:
        hi = g.index[h_name]
        for (a, b), v in r.coeffs.items():
            dv = v.differentiate(lam_name)
            if dv.is_zero():
                continue
            key = (hi, a, b)
            acc[key] = acc.get(key, z) + dv
    residual = alt(Tensor3(g, acc)) + cyb(r)
    ok = residual.is_zero()
    from .lie import tensor_to_json
    return {"ok": ok, "residual": [] if ok else tensor_to_json(residual.pruned())}
