"""Realized Lie algebras with an invariant form, and the rank-2/3 tensor
calculus on top of them: CYB, Alt, the split Casimir, invariance checks,
and reduction modulo a marked subalgebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import sympy as sp

from .rootsystems import Root, RootSystem, StructureTable, root_name, _neg
from .scalars import Context, FieldElement


class LieAlgebraError(ValueError):
    pass


class LieAlgebraData:
    """A finite-dimensional Lie algebra given by an ordered basis, a bracket
    table and a symmetric invariant form, optionally with a marked subalgebra
    u and u-invariant complement m.

    Brackets and form entries are FieldElements of a shared context.
    """

    def __init__(
        self,
        ctx: Context,
        names: Sequence[str],
        brackets: Mapping[tuple[int, int], Mapping[int, FieldElement]],
        form: Sequence[Sequence[FieldElement]],
        u_indices: Optional[Sequence[int]] = None,
        validate: bool = True,
    ):
        self.ctx = ctx
        self.names = tuple(names)
        self.dim = len(self.names)
        self.index = {n: i for i, n in enumerate(self.names)}
        # store the full antisymmetric table
        tbl: dict[tuple[int, int], dict[int, FieldElement]] = {}
        for (i, j), row in brackets.items():
            row = {k: ctx(v) for k, v in row.items() if not ctx(v).is_zero()}
            tbl[(i, j)] = row
            tbl[(j, i)] = {k: -v for k, v in row.items()}
        self._brackets = tbl
        self.form = [[ctx(x) for x in row] for row in form]
        self.u_indices = tuple(u_indices) if u_indices is not None else None
        self.m_indices = (
            tuple(i for i in range(self.dim) if i not in set(self.u_indices))
            if u_indices is not None
            else None
        )
        if validate:
            self._validate()

    # -- bracket -----------------------------------------------------------

    def bracket(self, i: int, j: int) -> dict[int, FieldElement]:
        """[e_i, e_j] as a sparse coordinate vector."""
        if i == j:
            return {}
        return self._brackets.get((i, j), {})

    def bracket_vectors(self, v: Mapping[int, FieldElement],
                        w: Mapping[int, FieldElement]) -> dict[int, FieldElement]:
        out: dict[int, FieldElement] = {}
        for i, a in v.items():
            for j, b in w.items():
                for k, c in self.bracket(i, j).items():
                    out[k] = out.get(k, self.ctx.zero()) + a * b * c
        return {k: x for k, x in out.items() if not x.is_zero()}

    def pairing(self, i: int, j: int) -> FieldElement:
        return self.form[i][j]

    # -- validation --------------------------------------------------------

    def _validate(self) -> None:
        z = self.ctx.zero()
        d = self.dim
        for i in range(d):
            for j in range(d):
                if not (self.form[i][j] - self.form[j][i]).is_zero():
                    raise LieAlgebraError("form not symmetric")
        # Jacobi on all basis triples
        for i in range(d):
            for j in range(i + 1, d):
                for k in range(j + 1, d):
                    acc: dict[int, FieldElement] = {}
                    for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                        inner = self.bracket(b, c)
                        for t, coeff in inner.items():
                            for s, coeff2 in self.bracket(a, t).items():
                                acc[s] = acc.get(s, z) + coeff * coeff2
                    if any(not v.is_zero() for v in acc.values()):
                        raise LieAlgebraError(
                            f"Jacobi fails on ({self.names[i]}, {self.names[j]}, "
                            f"{self.names[k]})")
        # ad-invariance of the form
        for zi in range(d):
            for a in range(d):
                for b in range(d):
                    s = z
                    for t, c in self.bracket(zi, a).items():
                        s = s + c * self.form[t][b]
                    for t, c in self.bracket(zi, b).items():
                        s = s + c * self.form[a][t]
                    if not s.is_zero():
                        raise LieAlgebraError("form not ad-invariant")
        if self.u_indices is not None:
            uset = set(self.u_indices)
            mset = set(self.m_indices)
            for i in uset:
                for j in uset:
                    if set(self.bracket(i, j)) - uset:
                        raise LieAlgebraError("u not a subalgebra")
                for j in mset:
                    if set(self.bracket(i, j)) - mset:
                        raise LieAlgebraError("[u, m] not contained in m")


def realize_lie_algebra(
    table: StructureTable,
    ctx: Context,
    U: Optional[Iterable[Root]] = None,
) -> LieAlgebraData:
    """Realize the algebra of a root-system structure table, optionally
    marking u = h + sum of root spaces over U."""
    rs = table.system
    n = rs.rank
    cartan_names = [f"H{i+1}" for i in range(n)]
    pos = sorted(rs.positive, key=lambda a: (sum(a), a))
    ordered_roots = pos + [_neg(a) for a in pos]
    names = cartan_names + [root_name(a) for a in ordered_roots]
    idx = {nm: i for i, nm in enumerate(names)}
    ridx = {a: idx[root_name(a)] for a in ordered_roots}

    brackets: dict[tuple[int, int], dict[int, FieldElement]] = {}
    for i in range(n):
        for a in ordered_roots:
            w = table.alpha_h[a][i]
            if w != 0:
                brackets[(i, ridx[a])] = {ridx[a]: ctx(sp.Rational(w))}
    for a in ordered_roots:
        for b in ordered_roots:
            if ridx[a] >= ridx[b]:
                continue
            key = (ridx[a], ridx[b])
            s = tuple(x + y for x, y in zip(a, b))
            if all(x == 0 for x in s):
                brackets[key] = {
                    i: ctx(sp.Rational(c))
                    for i, c in enumerate(table.cartan[a]) if c != 0
                }
            elif (a, b) in table.c:
                brackets[key] = {ridx[s]: ctx(sp.Rational(table.c[(a, b)]))}

    dim = len(names)
    zero = ctx.zero()
    form = [[zero for _ in range(dim)] for _ in range(dim)]
    for i in range(n):
        for j in range(n):
            form[i][j] = ctx(sp.Rational(table.gram_h[i, j]))
    for a in ordered_roots:
        form[ridx[a]][ridx[_neg(a)]] = ctx.one()

    u_indices = None
    if U is not None:
        uroots = {tuple(a) for a in U}
        u_indices = list(range(n)) + [ridx[a] for a in ordered_roots if a in uroots]
    g = LieAlgebraData(ctx, names, brackets, form, u_indices=u_indices)
    g.root_system = rs
    g.structure = table
    g.root_index = ridx
    g.cartan_indices = tuple(range(n))
    return g


def sl2(ctx: Context) -> LieAlgebraData:
    """sl(2) with basis (y, h, x), trace form: <x,y> = 1, <h,h> = 2."""
    names = ("y", "h", "x")
    one, two = ctx.one(), ctx(2)
    brackets = {
        (0, 1): {0: two},        # [y, h] = 2y
        (0, 2): {1: -one},       # [y, x] = -h
        (1, 2): {2: two},        # [h, x] = 2x
    }
    z = ctx.zero()
    form = [[z, z, one], [z, two, z], [one, z, z]]
    return LieAlgebraData(ctx, names, brackets, form)


# ---------------------------------------------------------------------------
# tensors
# ---------------------------------------------------------------------------

class _Tensor:
    rank: int

    def __init__(self, algebra: LieAlgebraData,
                 coeffs: Optional[Mapping[tuple, FieldElement]] = None):
        self.algebra = algebra
        self.coeffs: dict[tuple, FieldElement] = {}
        if coeffs:
            for k, v in coeffs.items():
                v = algebra.ctx(v)
                if v._expr != 0:
                    self.coeffs[tuple(k)] = v

    def __getitem__(self, key: tuple) -> FieldElement:
        return self.coeffs.get(tuple(key), self.algebra.ctx.zero())

    def _like(self, coeffs) -> "_Tensor":
        return type(self)(self.algebra, coeffs)

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, self.algebra.ctx.zero()) + v
        return self._like(out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, self.algebra.ctx.zero()) - v
        return self._like(out)

    def __neg__(self):
        return self._like({k: -v for k, v in self.coeffs.items()})

    def scale(self, s) -> "_Tensor":
        s = self.algebra.ctx(s)
        return self._like({k: s * v for k, v in self.coeffs.items()})

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.coeffs.values())

    def support(self) -> list[tuple]:
        return sorted(k for k, v in self.coeffs.items() if not v.is_zero())

    def pruned(self) -> "_Tensor":
        return self._like({k: v for k, v in self.coeffs.items() if not v.is_zero()})

    def map_names(self) -> dict:
        nm = self.algebra.names
        return {tuple(nm[i] for i in k): v.to_string()
                for k, v in self.coeffs.items() if not v.is_zero()}

    def __repr__(self):
        entries = ", ".join(
            "(" + ",".join(self.algebra.names[i] for i in k) + f"): {v.to_string()}"
            for k, v in sorted(self.coeffs.items()) if not v.is_zero()
        )
        return f"{type(self).__name__}{{{entries}}}"


class Tensor2(_Tensor):
    rank = 2

    def transpose(self) -> "Tensor2":
        """The 21-flip."""
        return Tensor2(self.algebra, {(j, i): v for (i, j), v in self.coeffs.items()})

    def is_symmetric(self) -> bool:
        return (self - self.transpose()).is_zero()

    def is_antisymmetric(self) -> bool:
        return (self + self.transpose()).is_zero()


class Tensor3(_Tensor):
    rank = 3


def build_casimir_tensor(g: LieAlgebraData) -> Tensor2:
    """The symmetric invariant tensor dual to the form (split Casimir)."""
    d = g.dim
    G = sp.Matrix(d, d, lambda i, j: g.form[i][j].expr)
    if G.det() == 0:
        raise LieAlgebraError("invariant form is degenerate")
    Ginv = G.inv()
    coeffs = {}
    for i in range(d):
        for j in range(d):
            if Ginv[i, j] != 0:
                coeffs[(i, j)] = g.ctx(Ginv[i, j])
    return Tensor2(g, coeffs)


def cyb(r: Tensor2) -> Tensor3:
    """CYB(r) = [r12, r13] + [r12, r23] + [r13, r23]."""
    g = r.algebra
    z = g.ctx.zero()
    out: dict[tuple, FieldElement] = {}

    def acc(key, val):
        out[key] = out.get(key, z) + val

    items = list(r.coeffs.items())
    for (a, b), v1 in items:
        for (c, d), v2 in items:
            v = v1 * v2
            for k, cf in g.bracket(a, c).items():   # [r12, r13]
                acc((k, b, d), v * cf)
            for k, cf in g.bracket(b, c).items():   # [r12, r23]
                acc((a, k, d), v * cf)
            for k, cf in g.bracket(b, d).items():   # [r13, r23]
                acc((a, c, k), v * cf)
    return Tensor3(g, out)


def alt(t: Tensor3) -> Tensor3:
    """Alt(t) = t^123 + t^231 + t^312 (sum of cyclic slot rotations)."""
    g = t.algebra
    z = g.ctx.zero()
    out: dict[tuple, FieldElement] = {}
    for (a, b, c), v in t.coeffs.items():
        for key in ((a, b, c), (c, a, b), (b, c, a)):
            out[key] = out.get(key, z) + v
    return Tensor3(g, out)


def reduce_mod_u(t: Tensor3) -> Tensor3:
    """Project each slot onto m along u (the image in the quotient of g by u,
    slot-wise). Requires a marked subalgebra."""
    g = t.algebra
    if g.m_indices is None:
        raise LieAlgebraError("algebra has no marked subalgebra u")
    mset = set(g.m_indices)
    return Tensor3(g, {k: v for k, v in t.coeffs.items()
                       if all(i in mset for i in k)})


def check_invariance(t: _Tensor, generators: Iterable[int]) -> bool:
    """True iff ad_z applied across all slots sums to zero for each z."""
    g = t.algebra
    z0 = g.ctx.zero()
    for zi in generators:
        out: dict[tuple, FieldElement] = {}
        for key, v in t.coeffs.items():
            for slot in range(t.rank):
                for k, cf in g.bracket(zi, key[slot]).items():
                    nk = key[:slot] + (k,) + key[slot + 1:]
                    out[nk] = out.get(nk, z0) + v * cf
        if any(not v.is_zero() for v in out.values()):
            return False
    return True


def tensor2_from_names(g: LieAlgebraData, entries: Mapping[tuple[str, str], object]) -> Tensor2:
    return Tensor2(g, {(g.index[a], g.index[b]): g.ctx(v)
                       for (a, b), v in entries.items()})


def tensor_to_json(t: _Tensor) -> list[dict]:
    return [
        {"slots": [t.algebra.names[i] for i in k], "coeff": v.to_string()}
        for k, v in sorted(t.coeffs.items()) if not v.is_zero()
    ]
