"""Polynomial functions on SL(2) and the equivariant star-product on the
coadjoint orbit through (lam/2) h.

Functions are polynomials in the matrix entries g11, g12, g21, g22 kept in
normal form modulo the determinant relation: any monomial divisible by
g11*g22 is rewritten through g11*g22 -> g12*g21 + 1, which is confluent
because the relation is principal and the substitution lowers the g11
exponent.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .enveloping import PBWAlgebra, UEAElement
from .scalars import Context, FieldElement

MATRIX_VARS = ("g11", "g12", "g21", "g22")
MExp = tuple[int, int, int, int]


class OrbitError(ValueError):
    pass


def _normalize(ctx: Context, terms: Mapping[MExp, FieldElement]) -> dict[MExp, FieldElement]:
    z = ctx.zero()
    out: dict[MExp, FieldElement] = {}
    for (a, b, c, d), v in terms.items():
        if v._expr == 0:
            continue
        k = min(a, d)
        if k == 0:
            key = (a, b, c, d)
            out[key] = out.get(key, z) + v
            continue
        # g11^a g22^d = g11^(a-k) g22^(d-k) (g12 g21 + 1)^k
        for i in range(k + 1):
            key = (a - k, b + i, c + i, d - k)
            out[key] = out.get(key, z) + v * math.comb(k, i)
    return {k: v for k, v in out.items() if v._expr != 0}


class OrbitFunction:
    """A polynomial function on SL(2) in determinant normal form."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Context, terms: Mapping[MExp, FieldElement]):
        self.ctx = ctx
        self.terms = _normalize(ctx, terms)

    @classmethod
    def constant(cls, ctx: Context, value) -> "OrbitFunction":
        return cls(ctx, {(0, 0, 0, 0): ctx(value)})

    @classmethod
    def coordinate(cls, ctx: Context, name: str) -> "OrbitFunction":
        i = MATRIX_VARS.index(name)
        e = [0, 0, 0, 0]
        e[i] = 1
        return cls(ctx, {tuple(e): ctx.one()})

    def __add__(self, other: "OrbitFunction") -> "OrbitFunction":
        z = self.ctx.zero()
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, z) + v
        return OrbitFunction(self.ctx, out)

    def __sub__(self, other: "OrbitFunction") -> "OrbitFunction":
        return self + (-other)

    def __neg__(self) -> "OrbitFunction":
        return OrbitFunction(self.ctx, {k: -v for k, v in self.terms.items()})

    def scale(self, s) -> "OrbitFunction":
        s = self.ctx(s)
        return OrbitFunction(self.ctx, {k: s * v for k, v in self.terms.items()})

    def __mul__(self, other) -> "OrbitFunction":
        if not isinstance(other, OrbitFunction):
            return self.scale(other)
        z = self.ctx.zero()
        out: dict[MExp, FieldElement] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, z) + c1 * c2
        return OrbitFunction(self.ctx, out)

    def __rmul__(self, other) -> "OrbitFunction":
        if isinstance(other, OrbitFunction):
            return NotImplemented
        return self.scale(other)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.terms.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrbitFunction):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("OrbitFunction is unhashable")

    def degree(self) -> int:
        degs = [sum(e) for e, v in self.terms.items() if not v.is_zero()]
        return max(degs) if degs else 0

    def evaluate_matrix(self, point: Mapping[str, object]) -> FieldElement:
        """Evaluate at explicit matrix entries (the caller is responsible
        for the point satisfying det = 1 if that matters)."""
        vals = [self.ctx(point[n]) for n in MATRIX_VARS]
        acc = self.ctx.zero()
        for e, c in self.terms.items():
            term = c
            for v, p in zip(vals, e):
                term = term * v ** p
            acc = acc + term
        return acc

    def to_json(self) -> list[dict]:
        return [
            {"exp": list(e), "coeff": v.to_string()}
            for e, v in sorted(self.terms.items()) if not v.is_zero()
        ]

    def __repr__(self) -> str:
        parts = []
        for e, v in sorted(self.terms.items()):
            if v.is_zero():
                continue
            mono = "*".join(
                f"{n}^{p}" if p > 1 else n
                for n, p in zip(MATRIX_VARS, e) if p > 0
            ) or "1"
            parts.append(f"({v.to_string()})*{mono}")
        return " + ".join(parts) or "0"


def orbit_function(ctx: Context, a: Union[str, Mapping[str, object]],
                   lam_name: str = "lam") -> OrbitFunction:
    """The linear function f_a on the orbit through (lam/2) h:
    f_a(g) = (lam/2) trace(g h g^adj a), with g^adj the adjugate.

    ``a`` is a basis name or a mapping of sl(2) basis names to coefficients.
    """
    if isinstance(a, str):
        a = {a: 1}
    p = ctx(a.get("h", 0))
    q = ctx(a.get("x", 0))
    r = ctx(a.get("y", 0))
    lam = ctx.var(lam_name)
    # trace(g h g^adj a)/2 = p (g11 g22 + g12 g21) - r g11 g12 + q g21 g22
    return OrbitFunction(ctx, {
        (1, 0, 0, 1): lam * p,
        (0, 1, 1, 0): lam * p,
        (1, 1, 0, 0): -lam * r,
        (0, 0, 1, 1): lam * q,
    })


_GEN_MATRICES: dict[str, tuple[tuple[int, int], tuple[int, int]]] = {
    "x": ((0, 1), (0, 0)),
    "y": ((0, 0), (1, 0)),
    "h": ((1, 0), (0, -1)),
}


def _vector_field(f: OrbitFunction, coeff_of_dkl) -> OrbitFunction:
    """Apply sum_{kl} coeff(k,l) d/dg_{kl} where each coefficient is an
    OrbitFunction-style term map."""
    ctx = f.ctx
    z = ctx.zero()
    out: dict[MExp, FieldElement] = {}
    for e, c in f.terms.items():
        for pos in range(4):
            if e[pos] == 0:
                continue
            de = list(e)
            de[pos] -= 1
            for me, mc in coeff_of_dkl[pos].items():
                key = tuple(a + b for a, b in zip(de, me))
                out[key] = out.get(key, z) + c * e[pos] * mc
    return OrbitFunction(ctx, out)


def _left_invariant_coeffs(ctx: Context, name: str):
    """(g v)_{kl} for the generator v, indexed by the flattened position of
    g_{kl} in MATRIX_VARS."""
    v = _GEN_MATRICES[name]
    # g rows are (g11, g12) and (g21, g22); position (k,l) -> 2k+l
    coeffs = []
    for k in range(2):
        for l in range(2):
            poly: dict[MExp, FieldElement] = {}
            for m in range(2):
                if v[m][l] == 0:
                    continue
                e = [0, 0, 0, 0]
                e[2 * k + m] = 1
                poly[tuple(e)] = ctx(v[m][l])
            coeffs.append(poly)
    return coeffs


def _left_action_coeffs(ctx: Context, name: str):
    """(v g)_{kl}: the infinitesimal left translation, which commutes with
    every left-invariant operator."""
    v = _GEN_MATRICES[name]
    coeffs = []
    for k in range(2):
        for l in range(2):
            poly: dict[MExp, FieldElement] = {}
            for m in range(2):
                if v[k][m] == 0:
                    continue
                e = [0, 0, 0, 0]
                e[2 * m + l] = 1
                poly[tuple(e)] = ctx(v[k][m])
            coeffs.append(poly)
    return coeffs


def generator_derivative(f: OrbitFunction, name: str) -> OrbitFunction:
    """The left-invariant vector field of one sl(2) generator."""
    return _vector_field(f, _left_invariant_coeffs(f.ctx, name))


def group_action_derivative(f: OrbitFunction, name: str) -> OrbitFunction:
    """The generator of the left G-translation action on functions."""
    return _vector_field(f, _left_action_coeffs(f.ctx, name))


def invariant_derivative(u: Union[UEAElement, Mapping], f: OrbitFunction) -> OrbitFunction:
    """Apply an enveloping-algebra element as a left-invariant differential
    operator: in each PBW word the rightmost generator acts first."""
    ctx = f.ctx
    if isinstance(u, UEAElement):
        order = u.algebra.order
        items = list(u.terms.items())
    else:
        raise OrbitError("expected a UEAElement")
    out = OrbitFunction(ctx, {})
    for exp, c in items:
        g = f
        for i in range(len(order) - 1, -1, -1):
            for _ in range(exp[i]):
                g = generator_derivative(g, order[i])
        out = out + g.scale(c)
    return out


def is_h_invariant(f: OrbitFunction) -> bool:
    return generator_derivative(f, "h").is_zero()


def star_product(f1: OrbitFunction, f2: OrbitFunction,
                 mode: str = "hbar_one", lam_name: str = "lam",
                 hbar_name: str = "hbar", max_terms: int = 64) -> OrbitFunction:
    """The orbit star-product sum_n c_n (y^n . f1)(x^n . f2) with scalar
    coefficients c_n = (-1)^n q^n / (n! lam (lam-q) ... (lam-(n-1)q)).

    On right-H-invariant inputs the h-dependent twist factors act by their
    value at h = 0, which collapses to these scalars; non-invariant inputs
    are rejected. ``mode`` is "hbar_one" (q set to 1, lam symbolic so the
    finitely many poles never trigger) or "formal" (q kept symbolic; the
    series terminates, so the result is still exact).
    """
    ctx = f1.ctx
    if not is_h_invariant(f1) or not is_h_invariant(f2):
        raise OrbitError("star-product inputs must be right-H-invariant")
    if mode not in ("hbar_one", "formal"):
        raise OrbitError(f"unknown mode {mode!r}")
    lam = ctx.var(lam_name)
    q = ctx.one() if mode == "hbar_one" else ctx.var(hbar_name)
    out = f1 * f2
    left, right = f1, f2
    coeff = ctx.one()
    for n in range(1, max_terms + 1):
        left = generator_derivative(left, "y")
        right = generator_derivative(right, "x")
        if left.is_zero() or right.is_zero():
            return out
        coeff = coeff * (-q) / (ctx(n) * (lam - (n - 1) * q))
        out = out + (left * right).scale(coeff)
    raise OrbitError("star-product series did not terminate")


def apply_twist_orders(J, f1: OrbitFunction, f2: OrbitFunction) -> list[OrbitFunction]:
    """Apply a TwistSeries as a bidifferential operator, order by order in
    the deformation parameter. No invariance assumption: the full expanded
    h-dependence acts."""
    out = []
    for t in J.orders:
        acc = OrbitFunction(f1.ctx, {})
        for (e1, e2), c in t.terms.items():
            a1 = invariant_derivative(UEAElement(J.slots[0], {e1: f1.ctx.one()}), f1)
            a2 = invariant_derivative(UEAElement(J.slots[1], {e2: f1.ctx.one()}), f2)
            acc = acc + (a1 * a2).scale(c)
        out.append(acc)
    return out


def _basis_functions(ctx: Context, lam_name: str = "lam") -> dict[str, OrbitFunction]:
    return {n: orbit_function(ctx, n, lam_name) for n in ("x", "y", "h")}


def _span_rank(funcs: Sequence[OrbitFunction], lam_name: str = "lam") -> int:
    """Rank of the span. The pool members are lam-homogeneous of degree
    equal to their polynomial degree, so evaluating lam at 1 rescales each
    spanning vector and preserves the rank while keeping the matrix
    rational."""
    import sympy as sp
    monos: dict[MExp, int] = {}
    rows = []
    for f in funcs:
        lam = f.ctx.symbol(lam_name)
        row = {}
        for e, c in f.terms.items():
            if e not in monos:
                monos[e] = len(monos)
            row[monos[e]] = c.expr.subs(lam, 1)
        rows.append(row)
    M = sp.zeros(len(rows), len(monos))
    for i, row in enumerate(rows):
        for j, v in row.items():
            M[i, j] = v
    return M.rank()


def verify_orbit_identities(ctx: Context, lam_name: str = "lam",
                            hbar_name: str = "hbar",
                            twist_order: int = 3,
                            max_filtration_degree: int = 4) -> dict:
    """Exact verification of the orbit-algebra identities.

    Checks, all in Q(lam):
      commutator      f_a * f_b - f_b * f_a = f_[a,b] on all basis pairs
      casimir         f_x*f_y + f_y*f_x + (1/2) f_h*f_h = lam(lam+2)/2
      associativity   on all triples of basis functions
      quasiclassical  first deformation order of the commutator is the
                      bivector (1/lam)(x (x) y - y (x) x)
      equivariance    left translations are derivations of the product
      scalar_reduction the full expanded twist operator agrees with the
                      scalar-coefficient product on invariant inputs
      degree_bound    the series on degree-d inputs stops at n = d
      filtration_dims products of basis functions of degree <= d span a
                      space of dimension (d+1)^2
    """
    from .lie import sl2
    fb = _basis_functions(ctx, lam_name)
    lam = ctx.var(lam_name)
    report: dict = {}

    brackets = {
        ("h", "x"): {"x": 2}, ("x", "h"): {"x": -2},
        ("h", "y"): {"y": -2}, ("y", "h"): {"y": 2},
        ("x", "y"): {"h": 1}, ("y", "x"): {"h": -1},
        ("x", "x"): {}, ("y", "y"): {}, ("h", "h"): {},
    }
    comm_fail = []
    for (a, b), br in brackets.items():
        lhs = star_product(fb[a], fb[b]) - star_product(fb[b], fb[a])
        rhs = OrbitFunction(ctx, {})
        for n, c in br.items():
            rhs = rhs + fb[n].scale(c)
        if not (lhs - rhs).is_zero():
            comm_fail.append((a, b))
    report["commutator"] = {"ok": not comm_fail, "failures": comm_fail}

    cas = star_product(fb["x"], fb["y"]) + star_product(fb["y"], fb["x"]) + \
        star_product(fb["h"], fb["h"]).scale(ctx(Fraction(1, 2)))
    cas_target = OrbitFunction.constant(ctx, lam * (lam + 2) / 2)
    report["casimir"] = {
        "ok": (cas - cas_target).is_zero(),
        "value": cas.to_json(),
    }

    names = ("x", "y", "h")
    assoc_fail = []
    for a in names:
        for b in names:
            for c in names:
                l = star_product(star_product(fb[a], fb[b]), fb[c])
                r = star_product(fb[a], star_product(fb[b], fb[c]))
                if not (l - r).is_zero():
                    assoc_fail.append((a, b, c))
    report["associativity"] = {"ok": not assoc_fail, "failures": assoc_fail,
                               "test_set": "all basis triples"}

    q = ctx.var(hbar_name)
    qc_fail = []
    for (a, b), br in brackets.items():
        comm = star_product(fb[a], fb[b], mode="formal") - \
            star_product(fb[b], fb[a], mode="formal")
        # first order in the deformation parameter
        first = OrbitFunction(ctx, {
            e: v.series_expand(hbar_name, 1)[1] for e, v in comm.terms.items()})
        biv = (generator_derivative(fb[a], "x") * generator_derivative(fb[b], "y")
               - generator_derivative(fb[a], "y") * generator_derivative(fb[b], "x")
               ).scale(1 / lam)
        if not (first - biv).is_zero():
            qc_fail.append((a, b))
    report["quasiclassical"] = {"ok": not qc_fail, "failures": qc_fail}

    equi_fail = []
    pairs = [("x", "y"), ("h", "h"), ("x", "h")]
    for v in names:
        for (a, b) in pairs:
            f1, f2 = fb[a], fb[b]
            lhs = group_action_derivative(star_product(f1, f2), v)
            rhs = star_product(group_action_derivative(f1, v), f2) + \
                star_product(f1, group_action_derivative(f2, v))
            if not (lhs - rhs).is_zero():
                equi_fail.append((v, a, b))
    report["equivariance"] = {"ok": not equi_fail, "failures": equi_fail}

    # full expanded twist operator vs scalar coefficients, per order
    from .twist import abrr_twist
    U = PBWAlgebra(sl2(ctx), order=("y", "h", "x"))
    J = abrr_twist(U, twist_order, lam_name=lam_name, deformation=hbar_name)
    red_fail = []
    for (a, b) in pairs:
        full = apply_twist_orders(J, fb[a], fb[b])
        scalar = star_product(fb[a], fb[b], mode="formal")
        for k, fk in enumerate(full):
            want = OrbitFunction(ctx, {
                e: v.series_expand(hbar_name, twist_order)[k]
                for e, v in scalar.terms.items()})
            if not (fk - want).is_zero():
                red_fail.append((a, b, k))
    report["scalar_reduction"] = {"ok": not red_fail, "failures": red_fail,
                                  "orders": twist_order}

    f_deg2 = fb["x"] * fb["y"]
    d2 = generator_derivative(generator_derivative(f_deg2, "y"), "y")
    d3 = generator_derivative(d2, "y")
    report["degree_bound"] = {"ok": (not d2.is_zero()) and d3.is_zero()}

    dims = []
    prods = {0: [OrbitFunction.constant(ctx, 1)]}
    for d in range(1, max_filtration_degree + 1):
        prods[d] = [p * fb[n] for p in prods[d - 1] for n in names]
    pool: list[OrbitFunction] = []
    dims_ok = True
    for d in range(max_filtration_degree + 1):
        pool.extend(prods[d])
        rank = _span_rank(pool)
        dims.append(rank)
        if rank != (d + 1) ** 2:
            dims_ok = False
    report["filtration_dims"] = {"ok": dims_ok, "dims": dims,
                                 "expected": [(d + 1) ** 2
                                              for d in range(max_filtration_degree + 1)]}

    report["all_ok"] = all(
        v["ok"] for k, v in report.items() if isinstance(v, dict))
    return report
