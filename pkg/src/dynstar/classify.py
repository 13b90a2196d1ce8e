"""Classification machinery for quasi-unitary solutions of the classical
dynamical Yang-Baxter equation on reductive quotients of classical Lie
algebras.

Coefficient families x_alpha are built from (Pi, Delta, U, t-parameters),
with the hyperbolic cotangent encoded rationally: the parameter t_alpha
stands for exp(2 alpha(h)), so x_alpha = (t_alpha + 1) / (2 (t_alpha - 1))
on the Levi part. Every verification below is an exact rational identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import sympy as sp

from . import rootsystems as rsys
from .rootsystems import Root, RootSystem, StructureTable, _add, _neg
from .lie import (
    LieAlgebraData, Tensor2, build_casimir_tensor, check_invariance, cyb,
    reduce_mod_u,
)
from .scalars import Context, FieldElement


class SpecError(ValueError):
    pass


class QuasiUnitarityError(ValueError):
    """The candidate tensor is not of the form Omega/2 + antisymmetric."""


@dataclass
class DynrSpec:
    """Classification data: a simple system, a Levi subset Delta, a reductive
    U inside the Levi root set N, and the exponential Cartan parameters."""

    system: RootSystem
    simple: tuple[Root, ...]
    positive: frozenset[Root]
    delta: tuple[Root, ...]
    U: frozenset[Root]
    t: dict[Root, FieldElement]        # per delta in Delta
    ctx: Context

    def __post_init__(self) -> None:
        rs = self.system
        for d in self.delta:
            if d not in self.simple:
                raise SpecError(f"{d} not in the chosen simple system")
        if not rsys.check_reductive_subset(rs, self.U):
            raise SpecError("U is not reductive")
        if not self.U <= self.levi_roots():
            raise SpecError("U not contained in the Levi set N")
        one = self.ctx.one()
        for d in self.delta:
            td = self.t.get(d)
            if td is None:
                raise SpecError(f"missing t-parameter for {d}")
            if d in self.U and not (td - one).is_zero():
                raise SpecError(f"t must be 1 on U (violated at {d})")
        for a in sorted(self.levi_roots()):
            ta = self.t_of(a)
            if a in self.U:
                if not (ta - one).is_zero():
                    raise SpecError(f"t_alpha must be 1 on U (violated at {a})")
            elif not ta.expr.free_symbols and (ta - one).is_zero():
                raise SpecError(f"t_alpha = 1 at {a} outside U (coth pole)")

    def levi_roots(self) -> frozenset[Root]:
        """N = (span Delta) cap R, computed in the chosen simple system."""
        rs = self.system
        if not self.delta:
            return frozenset()
        basis = sp.Matrix([list(d) for d in self.simple]).T
        dset = set(self.delta)
        out = set()
        for r in rs.roots:
            coords = basis.solve(sp.Matrix(list(r)))
            if all(c == 0 for c, s in zip(coords, self.simple) if s not in dset):
                out.add(r)
        return frozenset(out)

    def t_of(self, a: Root) -> FieldElement:
        """t_alpha extended multiplicatively over the Delta-expansion."""
        basis = sp.Matrix([list(d) for d in self.delta]).T
        coords = basis.solve(sp.Matrix(list(a)))
        out = self.ctx.one()
        for c, d in zip(coords, self.delta):
            if c != 0:
                out = out * self.t[d] ** int(c)
        return out


def make_spec(
    table: StructureTable,
    ctx: Context,
    delta: Sequence[Root],
    U: Iterable[Root],
    t: Optional[Mapping[Root, object]] = None,
    simple: Optional[Sequence[Root]] = None,
    positive: Optional[Iterable[Root]] = None,
) -> DynrSpec:
    """Convenience constructor using the standard simple system by default.

    Missing t-parameters default to 1 on U and to the context symbols
    t1, t2, ... (by simple-root index) elsewhere.
    """
    rs = table.system
    simple = tuple(tuple(s) for s in (simple or rs.simple))
    positive = frozenset(tuple(p) for p in (positive or rs.positive))
    delta = tuple(tuple(d) for d in delta)
    Uset = frozenset(tuple(a) for a in U)
    tmap: dict[Root, FieldElement] = {}
    for d in delta:
        if t is not None and d in t:
            tmap[d] = ctx(t[d])
        elif d in Uset:
            tmap[d] = ctx.one()
        else:
            k = (rs.simple.index(d) + 1) if d in rs.simple else (simple.index(d) + 1)
            tmap[d] = ctx.var(f"t{k}")
    spec = DynrSpec(rs, simple, positive, delta, Uset, tmap, ctx)
    spec.table = table
    return spec


@dataclass
class CoefficientFamily:
    system: RootSystem
    U: frozenset[Root]
    x: dict[Root, FieldElement]

    def __getitem__(self, a: Root) -> FieldElement:
        return self.x[tuple(a)]


def build_coefficients(spec: DynrSpec) -> CoefficientFamily:
    """x_alpha = 0 on U, (1/2)(t+1)/(t-1) on the Levi part outside U,
    +-1/2 outside the Levi set."""
    ctx = spec.ctx
    half = ctx(sp.Rational(1, 2))
    N = spec.levi_roots()
    x: dict[Root, FieldElement] = {}
    for a in spec.system.roots:
        if a in spec.U:
            x[a] = ctx.zero()
        elif a in N:
            t = spec.t_of(a)
            if not t.expr.free_symbols and (t - 1).is_zero():
                raise SpecError(f"coth pole: t_alpha = 1 at {a}")
            x[a] = half * (t + 1) / (t - 1)
        elif a in spec.positive:
            x[a] = half
        else:
            x[a] = -half
    return CoefficientFamily(spec.system, spec.U, x)


def check_coefficient_conditions(fam: CoefficientFamily,
                                 U: Optional[Iterable[Root]] = None) -> dict:
    """Exact verification of the four coefficient conditions; reports the
    first violating root/triple per condition."""
    rs = fam.system
    Uset = frozenset(tuple(a) for a in U) if U is not None else fam.U
    allroots = set(rs.roots)
    rest = allroots - Uset
    report = {}

    bad = [a for a in sorted(Uset) if not fam[a].is_zero()]
    report["vanishes_on_u"] = {"ok": not bad, "witness": bad[:1]}

    bad = [a for a in sorted(allroots) if not (fam[_neg(a)] + fam[a]).is_zero()]
    report["odd"] = {"ok": not bad, "witness": bad[:1]}

    bad = []
    for a in sorted(rest):
        for b in sorted(rest):
            c = _neg(_add(a, b))
            if c in Uset and not (fam[a] + fam[b]).is_zero():
                bad.append((a, b, c))
    report["pair_sum_on_u"] = {"ok": not bad, "witness": bad[:1]}

    quarter = next(iter(fam.x.values())).context(sp.Rational(1, 4))
    bad = []
    for a in sorted(rest):
        for b in sorted(rest):
            c = _neg(_add(a, b))
            if c in rest:
                res = fam[a] * fam[b] + fam[b] * fam[c] + fam[c] * fam[a] + quarter
                if not res.is_zero():
                    bad.append((a, b, c))
    report["triple_product"] = {"ok": not bad, "witness": bad[:1]}

    report["all_ok"] = all(report[k]["ok"] for k in
                           ("vanishes_on_u", "odd", "pair_sum_on_u",
                            "triple_product"))
    return report


def check_shift_form(fam: CoefficientFamily) -> bool:
    """The equivalent form of the pair condition: x_{alpha+beta} = x_alpha
    whenever alpha lies outside U, beta in U and alpha+beta is a root."""
    rs = fam.system
    allroots = set(rs.roots)
    for a in allroots - fam.U:
        for b in fam.U:
            s = _add(a, b)
            if s in allroots and not (fam[s] - fam[a]).is_zero():
                return False
    return True


def coefficients_to_tensor(fam: CoefficientFamily, g: LieAlgebraData) -> Tensor2:
    """r = sum x_alpha E_alpha (x) E_{-alpha} + Omega/2 in the realized
    algebra; satisfies r + r^21 = Omega by construction."""
    omega = build_casimir_tensor(g)
    r = omega.scale(sp.Rational(1, 2))
    coeffs = dict(r.coeffs)
    z = g.ctx.zero()
    for a, xa in fam.x.items():
        i, j = g.root_index[a], g.root_index[_neg(a)]
        coeffs[(i, j)] = coeffs.get((i, j), z) + xa
    return Tensor2(g, coeffs)


def check_in_M_Omega(b: Tensor2, g: Optional[LieAlgebraData] = None) -> bool:
    """Tensor-level membership test: b = Omega/2 + B with B antisymmetric,
    supported on m (x) m and u-invariant, and CYB(b) = 0 in the quotient.

    Raises QuasiUnitarityError if b + b^21 != Omega (distinct from a False
    verdict)."""
    g = g or b.algebra
    omega = build_casimir_tensor(g)
    if not (b + b.transpose() - omega).is_zero():
        raise QuasiUnitarityError("b + b^21 != Omega")
    B = b - omega.scale(sp.Rational(1, 2))
    if not B.is_antisymmetric():
        return False
    mset = set(g.m_indices)
    if any(not (i in mset and j in mset) for (i, j) in B.support()):
        return False
    if not check_invariance(B, g.u_indices):
        return False
    return reduce_mod_u(cyb(b)).is_zero()


def recover_classification(fam: CoefficientFamily, ctx: Context,
                           table: Optional[StructureTable] = None) -> list[dict]:
    """Recover all (Pi, Delta, t) witnesses generating the family.

    P = {alpha : x_alpha != -1/2} must be parabolic; witnesses are the
    simple systems with P = R+ cup N and the t-values inverted through
    t = (2x + 1)/(2x - 1).
    """
    rs = fam.system
    half = ctx(sp.Rational(1, 2))
    P = frozenset(a for a in rs.roots if not (fam[a] + half).is_zero())
    if not rsys.check_parabolic(rs, P):
        raise SpecError("P = {x_alpha != -1/2} is not parabolic; family invalid")
    witnesses = []
    for pos in rsys.positive_systems(rs):
        simple = rsys.simple_roots_of(rs, pos)
        nroots_all = P - pos  # candidate Levi roots must cover this
        for k in range(len(simple) + 1):
            import itertools
            for delta in itertools.combinations(simple, k):
                N = _levi_of(rs, simple, delta)
                if pos | N != P:
                    continue
                if not fam.U <= N:
                    continue
                t = {}
                ok = True
                for d in delta:
                    if d in fam.U:
                        t[d] = ctx.one()
                    else:
                        denom = 2 * fam[d] - 1
                        if denom.is_zero():
                            ok = False
                            break
                        t[d] = (2 * fam[d] + 1) / denom
                if not ok:
                    continue
                spec = DynrSpec(rs, tuple(simple), frozenset(pos),
                                tuple(delta), fam.U, t, ctx)
                if table is not None:
                    spec.table = table
                rebuilt = build_coefficients(spec)
                if all((rebuilt[a] - fam[a]).is_zero() for a in rs.roots):
                    witnesses.append(
                        {"simple": tuple(simple), "delta": tuple(delta),
                         "t": t, "spec": spec})
    if not witnesses:
        raise SpecError("no witness found (family invalid)")
    return witnesses


def _levi_of(rs: RootSystem, simple: Sequence[Root],
             delta: Sequence[Root]) -> frozenset[Root]:
    if not delta:
        return frozenset()
    basis = sp.Matrix([list(s) for s in simple]).T
    dset = set(delta)
    out = set()
    for r in rs.roots:
        coords = basis.solve(sp.Matrix(list(r)))
        if all(c == 0 for c, s in zip(coords, simple) if s not in dset):
            out.add(r)
    return frozenset(out)


def recover_b_from_initial(pi_e: Tensor2, rho: Tensor2) -> Tensor2:
    """b = Omega/2 + pi_e + (m-projection of Lambda = rho - Omega/2)."""
    g = pi_e.algebra
    omega = build_casimir_tensor(g)
    if not (rho + rho.transpose() - omega).is_zero():
        raise QuasiUnitarityError("rho + rho^21 != Omega")
    if not pi_e.is_antisymmetric():
        raise QuasiUnitarityError("initial bivector not antisymmetric")
    mset = set(g.m_indices)
    if any(not (i in mset and j in mset) for (i, j) in pi_e.support()):
        raise QuasiUnitarityError("initial bivector not supported on m (x) m")
    lam = rho - omega.scale(sp.Rational(1, 2))
    proj = Tensor2(g, {k: v for k, v in lam.coeffs.items()
                       if all(i in mset for i in k)})
    return omega.scale(sp.Rational(1, 2)) + pi_e + proj


# ---------------------------------------------------------------------------
# the Lagrangian subalgebra of g x g
# ---------------------------------------------------------------------------

Vec = dict[int, FieldElement]


@dataclass
class LagrangianData:
    algebra: LieAlgebraData
    basis: list[tuple[Vec, Vec]]
    n_indices: tuple[int, ...]
    theta: dict[int, FieldElement]    # eigenvalue of theta on each n-basis index
    minus_free: tuple[int, ...]       # E_{-gamma}, gamma in R+ \ N
    plus_free: tuple[int, ...]        # E_{gamma}, gamma in R+ \ N

    def quad_form(self, v: tuple[Vec, Vec], w: tuple[Vec, Vec]) -> FieldElement:
        g = self.algebra
        s = g.ctx.zero()
        for i, a in v[0].items():
            for j, b in w[0].items():
                s = s + a * b * g.pairing(i, j)
        for i, a in v[1].items():
            for j, b in w[1].items():
                s = s - a * b * g.pairing(i, j)
        return s

    def contains(self, v: tuple[Vec, Vec]) -> bool:
        """Membership via the defining criterion: components in p_-, p_+,
        with theta of the n-part of the left slot equal to the n-part of
        the right slot."""
        g = self.algebra
        nset = set(self.n_indices)
        left_ok = set(self.minus_free) | nset
        right_ok = set(self.plus_free) | nset
        for i, a in v[0].items():
            if i not in left_ok and not a.is_zero():
                return False
        for i, a in v[1].items():
            if i not in right_ok and not a.is_zero():
                return False
        z = g.ctx.zero()
        for i in nset:
            lhs = self.theta[i] * v[0].get(i, z)
            if not (lhs - v[1].get(i, z)).is_zero():
                return False
        return True


def build_lagrangian(spec: DynrSpec, g: LieAlgebraData) -> tuple[LagrangianData, dict]:
    """Basis and verification report for the Lagrangian subalgebra of g x g
    attached to the classification data."""
    rs = spec.system
    ctx = spec.ctx
    N = spec.levi_roots()
    cartan = list(g.cartan_indices)
    n_indices = cartan + [g.root_index[a] for a in sorted(N)]
    theta: dict[int, FieldElement] = {i: ctx.one() for i in cartan}
    for a in sorted(N):
        theta[g.root_index[a]] = spec.t_of(a)
    y_pos = sorted(spec.positive - N)
    minus_free = tuple(g.root_index[_neg(a)] for a in y_pos)
    plus_free = tuple(g.root_index[a] for a in y_pos)

    one = ctx.one()
    basis: list[tuple[Vec, Vec]] = []
    for i in n_indices:
        basis.append(({i: one}, {i: theta[i]}))
    for i in minus_free:
        basis.append(({i: one}, {}))
    for i in plus_free:
        basis.append(({}, {i: one}))

    lag = LagrangianData(g, basis, tuple(n_indices), theta, minus_free, plus_free)

    report: dict = {"dim": len(basis), "dim_g": g.dim,
                    "dim_ok": len(basis) == g.dim}
    iso = all(
        lag.quad_form(v, w).is_zero()
        for i, v in enumerate(basis) for w in basis[i:]
    )
    report["isotropic"] = iso
    closed = True
    for i, v in enumerate(basis):
        for w in basis[i + 1:]:
            br = (g.bracket_vectors(v[0], w[0]), g.bracket_vectors(v[1], w[1]))
            if not lag.contains(br):
                closed = False
    report["bracket_closed"] = closed
    # intersection with the diagonal: fixed vectors of theta inside n
    fixed = sum(1 for i in n_indices if (theta[i] - one).is_zero())
    report["diag_intersection_dim"] = fixed
    report["dim_u"] = len(cartan) + len(spec.U)
    report["diag_is_u"] = fixed == report["dim_u"]
    report["all_ok"] = (report["dim_ok"] and iso and closed
                        and report["diag_is_u"])
    return lag, report
