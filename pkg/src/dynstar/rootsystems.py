"""Root systems of classical type with a concrete matrix-realized Chevalley
basis.

Roots are stored as integer coordinate tuples in the simple-root basis.
Structure constants are read off from explicit matrix models (traceless
matrices for type A, antidiagonal orthogonal/symplectic models for B, C, D),
then rescaled so that <E_alpha, E_{-alpha}> = 1 under the trace form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import sympy as sp

Root = tuple[int, ...]

SUPPORTED_FAMILIES = ("A", "B", "C", "D")
MAX_RANK = 4


class RootSystemError(ValueError):
    pass


def _neg(a: Root) -> Root:
    return tuple(-x for x in a)


def _add(a: Root, b: Root) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Root, b: Root) -> Root:
    return tuple(x - y for x, y in zip(a, b))


@dataclass(frozen=True)
class RootSystem:
    family: str
    rank: int
    roots: tuple[Root, ...]            # simple-root-basis coordinates
    simple: tuple[Root, ...]           # the unit vectors, in order
    positive: frozenset[Root]
    euclid: dict[Root, tuple[sp.Rational, ...]] = field(compare=False, repr=False)
    ip_scale: sp.Rational = field(compare=False, repr=False, default=sp.Integer(1))

    @property
    def negative(self) -> frozenset[Root]:
        return frozenset(_neg(a) for a in self.positive)

    def is_root(self, a: Root) -> bool:
        return tuple(a) in set(self.roots)

    def inner(self, a: Root, b: Root) -> sp.Rational:
        """<a,b> normalized so long roots have squared length 2."""
        ea, eb = self.euclid[tuple(a)], self.euclid[tuple(b)]
        return self.ip_scale * sum(x * y for x, y in zip(ea, eb))

    def height(self, a: Root) -> int:
        return sum(a)

    def __str__(self) -> str:
        return f"{self.family}{self.rank} ({len(self.roots)} roots)"


def _euclid_roots(family: str, rank: int) -> tuple[list, list]:
    """Roots and Bourbaki simple roots in orthogonal e_i coordinates."""
    n = rank
    if family == "A":
        dim = n + 1
        e = lambda i: tuple(sp.Integer(1 if k == i else 0) for k in range(dim))
        roots = [tuple(a - b for a, b in zip(e(i), e(j)))
                 for i in range(dim) for j in range(dim) if i != j]
        simple = [tuple(a - b for a, b in zip(e(i), e(i + 1))) for i in range(n)]
        return roots, simple
    e = lambda i: tuple(sp.Integer(1 if k == i else 0) for k in range(n))
    pm = [sp.Integer(1), sp.Integer(-1)]
    long_short = []
    for i, j in itertools.combinations(range(n), 2):
        for si in pm:
            for sj in pm:
                long_short.append(tuple(si * a + sj * b for a, b in zip(e(i), e(j))))
    if family == "B":
        roots = long_short + [tuple(s * a for a in e(i)) for i in range(n) for s in pm]
        simple = [_sub_t(e(i), e(i + 1)) for i in range(n - 1)] + [e(n - 1)]
    elif family == "C":
        roots = long_short + [tuple(2 * s * a for a in e(i)) for i in range(n) for s in pm]
        simple = [_sub_t(e(i), e(i + 1)) for i in range(n - 1)] + [
            tuple(2 * a for a in e(n - 1))]
    elif family == "D":
        roots = long_short
        simple = [_sub_t(e(i), e(i + 1)) for i in range(n - 1)] + [
            _add_t(e(n - 2), e(n - 1))]
    else:
        raise RootSystemError(f"unsupported family {family!r}")
    return roots, simple


def _sub_t(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add_t(a, b):
    return tuple(x + y for x, y in zip(a, b))


def build_root_system(family: str, rank: int) -> RootSystem:
    """Construct the root system of the given classical type and rank."""
    family = family.upper()
    if family not in SUPPORTED_FAMILIES:
        raise RootSystemError(f"unsupported family {family!r}; supported: A, B, C, D")
    lo = {"A": 1, "B": 2, "C": 2, "D": 3}[family]
    if not (lo <= rank <= MAX_RANK):
        raise RootSystemError(f"rank {rank} out of range [{lo}, {MAX_RANK}] for {family}")
    eroots, esimple = _euclid_roots(family, rank)
    # change of basis: solve coordinates of each root in the simple system
    m = sp.Matrix([list(s) for s in esimple]).T
    coords = {}
    for r in eroots:
        sol = m.solve(sp.Matrix(list(r)))
        c = tuple(int(x) for x in sol)
        assert all(sp.Integer(ci) == si for ci, si in zip(c, sol))
        coords[r] = c
    roots = tuple(sorted(coords.values()))
    euclid = {coords[r]: tuple(r) for r in eroots}
    positive = frozenset(c for c in roots if _is_positive(c))
    maxlen = max(sum(x * x for x in euclid[r]) for r in roots)
    scale = sp.Rational(2, maxlen)
    simple = tuple(coords[s] for s in esimple)
    rs = RootSystem(family, rank, roots, simple, positive, euclid, scale)
    _validate(rs)
    return rs


def _is_positive(c: Root) -> bool:
    for x in c:
        if x != 0:
            return x > 0
    return False


def _validate(rs: RootSystem) -> None:
    s = set(rs.roots)
    assert all(_neg(a) in s for a in s), "not closed under negation"
    assert rs.positive | {_neg(a) for a in rs.positive} == s
    assert not (rs.positive & {_neg(a) for a in rs.positive})
    counts = {"A": rs.rank * (rs.rank + 1), "B": 2 * rs.rank ** 2,
              "C": 2 * rs.rank ** 2, "D": 2 * rs.rank * (rs.rank - 1)}
    assert len(s) == counts[rs.family]


# ---------------------------------------------------------------------------
# root-subset combinatorics (section on reductive / parabolic / Levi / Y sets)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootSubset:
    system: RootSystem
    roots: frozenset[Root]
    tag: str = "plain"

    def __contains__(self, a: Root) -> bool:
        return tuple(a) in self.roots


def _as_rootset(rs: RootSystem, roots: Iterable[Root]) -> frozenset[Root]:
    out = set()
    for a in roots:
        t = tuple(a)
        if not rs.is_root(t):
            raise RootSystemError(f"{t} is not a root of {rs}")
        out.add(t)
    return frozenset(out)


def check_reductive_subset(rs: RootSystem, U: Iterable[Root]) -> bool:
    """True iff (U+U) cap R is contained in U and -U = U."""
    u = _as_rootset(rs, U)
    if {_neg(a) for a in u} != u:
        return False
    allroots = set(rs.roots)
    for a in u:
        for b in u:
            c = _add(a, b)
            if c in allroots and c not in u:
                return False
    return True


def levi_subset(rs: RootSystem, delta: Sequence[Root]) -> RootSubset:
    """N = (span Delta) cap R for Delta a subset of the simple system."""
    d = [tuple(a) for a in delta]
    for a in d:
        if a not in rs.simple:
            raise RootSystemError(f"{a} is not a simple root")
    idx = [rs.simple.index(a) for a in d]
    span = frozenset(
        r for r in rs.roots if all(r[i] == 0 for i in range(rs.rank) if i not in idx)
    )
    sub = RootSubset(rs, span, tag="levi")
    assert check_reductive_subset(rs, sub.roots)
    return sub


def check_parabolic(rs: RootSystem, P: Iterable[Root]) -> bool:
    """True iff P cup (-P) = R and (P+P) cap R is contained in P."""
    p = _as_rootset(rs, P)
    if p | {_neg(a) for a in p} != set(rs.roots):
        return False
    allroots = set(rs.roots)
    for a in p:
        for b in p:
            c = _add(a, b)
            if c in allroots and c not in p:
                return False
    return True


def y_set_properties(rs: RootSystem, P: Iterable[Root]) -> dict:
    """Check the three closure properties of Y = R \\ P for parabolic P."""
    p = _as_rootset(rs, P)
    if not check_parabolic(rs, p):
        raise RootSystemError("P is not parabolic")
    y = set(rs.roots) - p
    allroots = set(rs.roots)
    a_ok = not ({_neg(a) for a in y} & y)
    b_ok = all(_add(a, b) in y for a in y for b in y if _add(a, b) in allroots)
    c_ok = all(
        _sub(a, b) in y
        for a in y for b in p
        if _sub(a, b) in allroots
    )
    return {
        "Y": sorted(y),
        "antisymmetric_disjoint": a_ok,
        "sum_closed": b_ok,
        "difference_closed": c_ok,
        "all_hold": a_ok and b_ok and c_ok,
    }


def positive_systems(rs: RootSystem) -> list[frozenset[Root]]:
    """All additively closed positive systems, by brute force over the sign
    choices on each opposite pair of roots."""
    pairs = sorted(rs.positive)
    allroots = set(rs.roots)
    out = []
    for signs in itertools.product((1, -1), repeat=len(pairs)):
        cand = frozenset(a if s == 1 else _neg(a) for a, s in zip(pairs, signs))
        ok = True
        for a in cand:
            for b in cand:
                c = _add(a, b)
                if c in allroots and c not in cand:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(cand)
    return out


def simple_roots_of(rs: RootSystem, pos: frozenset[Root]) -> tuple[Root, ...]:
    """Indecomposable elements of a positive system."""
    simple = []
    for a in pos:
        if not any(_sub(a, b) in pos for b in pos if b != a):
            simple.append(a)
    return tuple(sorted(simple))


# ---------------------------------------------------------------------------
# Chevalley structure constants from matrix models
# ---------------------------------------------------------------------------

@dataclass
class StructureTable:
    """Exact structure data of the matrix-realized algebra.

    c[(a, b)] is the constant in [E_a, E_b] = c E_{a+b};
    cartan[a] gives the H-basis coordinates of [E_a, E_{-a}];
    alpha_h[a][i] = a(H_i); gram_h is the trace-form Gram matrix on h.
    The normalization <E_a, E_{-a}> = 1 holds for every root.
    """

    system: RootSystem
    c: dict[tuple[Root, Root], sp.Rational]
    cartan: dict[Root, tuple[sp.Rational, ...]]
    alpha_h: dict[Root, tuple[sp.Rational, ...]]
    gram_h: sp.Matrix
    matrices: dict = None  # basis-name -> sympy Matrix, for oracle tests

    def constant(self, a: Root, b: Root) -> sp.Rational:
        return self.c.get((tuple(a), tuple(b)), sp.Integer(0))


def _matrix_model(rs: RootSystem):
    """Return (dim, membership matrix condition, cartan matrices, weight fn)."""
    n = rs.rank
    if rs.family == "A":
        m = n + 1
        cond = None
        cartan = [sp.zeros(m, m) for _ in range(n)]
        for i in range(n):
            cartan[i][i, i] = 1
            cartan[i][i + 1, i + 1] = -1

        def weight(euclid, i):  # alpha(H_i) for alpha in e-coordinates
            return euclid[i] - euclid[i + 1]

        return m, cond, cartan, weight
    if rs.family in ("B", "D"):
        m = 2 * n + 1 if rs.family == "B" else 2 * n
        M = sp.Matrix(m, m, lambda i, j: sp.Integer(1 if i + j == m - 1 else 0))
    else:  # C
        m = 2 * n
        M = sp.zeros(m, m)
        for i in range(m):
            M[i, m - 1 - i] = sp.Integer(1 if i < n else -1)
    cartan = [sp.zeros(m, m) for _ in range(n)]
    for i in range(n):
        cartan[i][i, i] = 1
        cartan[i][m - 1 - i, m - 1 - i] = -1

    def weight(euclid, i):
        return euclid[i]

    return m, M, cartan, weight


def chevalley_constants(rs: RootSystem) -> StructureTable:
    """Root vectors and structure constants from the matrix model."""
    n = rs.rank
    m, M, cartan, weight = _matrix_model(rs)

    evec: dict[Root, sp.Matrix] = {}
    for a in rs.roots:
        eu = rs.euclid[a]
        w = [weight(eu, i) for i in range(n)]
        # candidate positions (j,k) with matching ad-h weight
        positions = []
        for j in range(m):
            for k in range(m):
                if j == k:
                    continue
                wj = [cartan[i][j, j] - cartan[i][k, k] for i in range(n)]
                if wj == w:
                    positions.append((j, k))
        if not positions:
            raise RootSystemError(f"no matrix positions for root {a}")
        if M is None:
            # type A: single elementary position
            assert len(positions) == 1
            X = sp.zeros(m, m)
            X[positions[0]] = 1
        else:
            # solve X^T M + M X = 0 on the span of the candidate positions
            ncand = len(positions)
            rows = []
            for p in range(m):
                for q in range(m):
                    row = []
                    for (j, k) in positions:
                        E = sp.zeros(m, m)
                        E[j, k] = 1
                        row.append((E.T * M + M * E)[p, q])
                    if any(x != 0 for x in row):
                        rows.append(row)
            null = sp.Matrix(rows).nullspace() if rows else [
                sp.Matrix([1] * ncand)]
            if len(null) != 1:
                raise RootSystemError(f"root space for {a} not one-dimensional")
            coeffs = null[0]
            den = sp.lcm([sp.fraction(sp.Rational(x))[1] for x in coeffs])
            coeffs = [sp.Rational(x) * den for x in coeffs]
            X = sp.zeros(m, m)
            for (j, k), cx in zip(positions, coeffs):
                X[j, k] = cx
        evec[a] = X

    # normalization: keep E_a for positive a, rescale E_{-a}
    for a in sorted(rs.positive):
        pair = (evec[a] * evec[_neg(a)]).trace()
        if pair == 0:
            raise RootSystemError(f"degenerate pairing for {a}")
        evec[_neg(a)] = evec[_neg(a)] / pair

    # verify weights and membership once more
    for a in rs.roots:
        eu = rs.euclid[a]
        for i in range(n):
            comm = cartan[i] * evec[a] - evec[a] * cartan[i]
            assert comm == weight(eu, i) * evec[a], f"weight failure at {a}"

    c: dict[tuple[Root, Root], sp.Rational] = {}
    cartan_coords: dict[Root, tuple[sp.Rational, ...]] = {}
    rootset = set(rs.roots)
    for a in rs.roots:
        for b in rs.roots:
            comm = evec[a] * evec[b] - evec[b] * evec[a]
            s = _add(a, b)
            if s in rootset:
                c[(a, b)] = _ratio(comm, evec[s], a, b)
            elif all(x == 0 for x in s):
                cartan_coords[a] = _h_coords(comm, cartan, rs.family, m, n)
            else:
                assert comm == sp.zeros(m, m), f"[E_{a}, E_{b}] not in root space"

    alpha_h = {
        a: tuple(weight(rs.euclid[a], i) for i in range(n)) for a in rs.roots
    }
    gram = sp.Matrix(n, n, lambda i, j: (cartan[i] * cartan[j]).trace())
    names = {}
    for i in range(n):
        names[f"H{i+1}"] = cartan[i]
    for a in rs.roots:
        names[_root_name(a)] = evec[a]
    return StructureTable(rs, c, cartan_coords, alpha_h, gram, names)


def _ratio(comm: sp.Matrix, target: sp.Matrix, a, b) -> sp.Rational:
    for p in range(target.rows):
        for q in range(target.cols):
            if target[p, q] != 0:
                r = sp.Rational(comm[p, q], target[p, q])
                assert comm == r * target, f"[E_{a}, E_{b}] not proportional"
                return r
    raise RootSystemError("zero target root vector")


def _h_coords(diag: sp.Matrix, cartan, family: str, m: int, n: int):
    """Coordinates of a diagonal matrix in the cartan basis."""
    d = [diag[i, i] for i in range(m)]
    if family == "A":
        # d has zero sum; coordinates are partial sums
        coords = []
        s = sp.Integer(0)
        for i in range(n):
            s += d[i]
            coords.append(s)
    else:
        coords = d[:n]
    check = sp.zeros(m, m)
    for x, H in zip(coords, cartan):
        check += x * H
    assert check == diag, "cartan decomposition failure"
    return tuple(sp.Rational(x) for x in coords)


def _root_name(a: Root) -> str:
    return "E(" + ",".join(str(x) for x in a) + ")"


def root_name(a: Root) -> str:
    return _root_name(tuple(a))
