"""Verma modules for sl(2) over Q(lam) and the intertwiner oracle.

The universal twist is characterized by how compositions of intertwiners
M -> M (x) V act on highest-weight expectation values. This module builds
that composition from first principles (truncated Verma module, solved
highest-weight systems) and compares it with the closed-form twist series,
giving a check that shares no code path with the series construction.
"""

from __future__ import annotations

import math
from typing import Mapping, Optional

import sympy as sp

from .scalars import Context, FieldElement

Vec = dict[int, FieldElement]


class VermaError(ValueError):
    pass


def _addvec(ctx: Context, a: Vec, b: Vec) -> Vec:
    out = dict(a)
    z = ctx.zero()
    for k, v in b.items():
        out[k] = out.get(k, z) + v
    return {k: v for k, v in out.items() if v._expr != 0}


def _scalevec(s: FieldElement, a: Vec) -> Vec:
    return {k: s * v for k, v in a.items()}


class VermaData:
    """Truncated Verma module: basis m_0..m_K with m_k = y^k applied to the
    highest-weight vector, highest weight lam.

    h m_k = (lam - 2k) m_k, x m_k = k(lam - k + 1) m_{k-1}, y m_k = m_{k+1}.
    """

    def __init__(self, ctx: Context, K: int, lam_name: str = "lam"):
        if K < 0:
            raise VermaError("depth cutoff must be >= 0")
        self.ctx = ctx
        self.K = K
        self.lam = ctx.var(lam_name)

    def act(self, gen: str, v: Vec) -> Vec:
        ctx = self.ctx
        out: Vec = {}
        z = ctx.zero()
        for k, c in v.items():
            if gen == "h":
                out[k] = out.get(k, z) + c * (self.lam - 2 * k)
            elif gen == "x":
                if k > 0:
                    out[k - 1] = out.get(k - 1, z) + c * ctx(k) * (self.lam - k + 1)
            elif gen == "y":
                if k + 1 > self.K:
                    raise VermaError("depth cutoff exceeded; increase K")
                out[k + 1] = out.get(k + 1, z) + c
            else:
                raise VermaError(f"unknown generator {gen!r}")
        return {k: c for k, c in out.items() if c._expr != 0}

    def check_relations(self) -> bool:
        """[h,x] = 2x, [h,y] = -2y, [x,y] = h on every m_k with k <= K-1."""
        ctx = self.ctx
        for k in range(self.K):
            m: Vec = {k: ctx.one()}
            pairs = [("h", "x", _scalevec(ctx(2), self.act("x", m))),
                     ("h", "y", _scalevec(ctx(-2), self.act("y", m))),
                     ("x", "y", self.act("h", m))]
            for a, b, want in pairs:
                got = _addvec(ctx, self.act(a, self.act(b, m)),
                              _scalevec(ctx(-1), self.act(b, self.act(a, m))))
                res = _addvec(ctx, got, _scalevec(ctx(-1), want))
                if any(not c.is_zero() for c in res.values()):
                    return False
        return True

    def casimir_scalar(self) -> FieldElement:
        """The value by which c = xy + yx + h^2/2 acts, verified on every
        basis vector of the truncation."""
        ctx = self.ctx
        target = self.lam * (self.lam + 2) / 2
        for k in range(self.K):
            m: Vec = {k: ctx.one()}
            cv = _addvec(ctx, self.act("x", self.act("y", m)),
                         self.act("y", self.act("x", m)))
            cv = _addvec(ctx, cv,
                         _scalevec(ctx("1/2"), self.act("h", self.act("h", m))))
            res = _addvec(ctx, cv, _scalevec(-target, m))
            if any(not c.is_zero() for c in res.values()):
                raise VermaError(f"Casimir not scalar on m_{k}")
        return target


class FiniteModule:
    """The (m+1)-dimensional irreducible sl(2)-module with basis v_0..v_m.

    h v_j = (m - 2j) v_j, x v_j = j(m - j + 1) v_{j-1}, y v_j = v_{j+1}.
    """

    def __init__(self, ctx: Context, m: int):
        if m < 0:
            raise VermaError("highest weight must be >= 0")
        self.ctx = ctx
        self.m = m
        self.dim = m + 1

    def weight(self, j: int) -> int:
        return self.m - 2 * j

    def weight_space(self, mu: int) -> list[int]:
        return [j for j in range(self.dim) if self.weight(j) == mu]

    def act(self, gen: str, v: Vec) -> Vec:
        ctx = self.ctx
        out: Vec = {}
        z = ctx.zero()
        for j, c in v.items():
            if gen == "h":
                out[j] = out.get(j, z) + c * self.weight(j)
            elif gen == "x":
                if j > 0:
                    out[j - 1] = out.get(j - 1, z) + c * (j * (self.m - j + 1))
            elif gen == "y":
                if j + 1 <= self.m:
                    out[j + 1] = out.get(j + 1, z) + c
            else:
                raise VermaError(f"unknown generator {gen!r}")
        return {j: c for j, c in out.items() if c._expr != 0}

    def resolvent(self, v: Vec, lam: FieldElement, shift: int) -> Vec:
        """(lam - (h + shift))^(-1) applied spectrally, weight by weight."""
        out: Vec = {}
        for j, c in v.items():
            denom = lam - (self.weight(j) + shift)
            out[j] = c / denom
        return out


class Intertwiner:
    """A solved g-map M(lam) -> M(lam) (x) V recorded by its value on the
    highest-weight vector: sum_k m_k (x) component[k]."""

    def __init__(self, verma: VermaData, module: FiniteModule,
                 components: Mapping[int, Vec]):
        self.verma = verma
        self.module = module
        self.components: dict[int, Vec] = {
            k: {j: c for j, c in v.items() if c._expr != 0}
            for k, v in components.items()
        }
        self.components = {k: v for k, v in self.components.items() if v}

    @property
    def expectation(self) -> Vec:
        return dict(self.components.get(0, {}))

    def is_highest_weight(self) -> bool:
        """x annihilates the image of the highest-weight vector, and h acts
        on it by lam."""
        ctx = self.verma.ctx
        lam = self.verma.lam
        acc: dict[tuple[int, int], FieldElement] = {}
        z = ctx.zero()

        def add(k: int, v: Vec, sign: int = 1):
            for j, c in v.items():
                acc[(k, j)] = acc.get((k, j), z) + sign * c

        for k, v in self.components.items():
            mk: Vec = {k: ctx.one()}
            for kk, mc in self.verma.act("x", mk).items():
                add(kk, _scalevec(mc, v))
            add(k, self.module.act("x", v))
        if any(not c.is_zero() for c in acc.values()):
            return False
        acc.clear()
        for k, v in self.components.items():
            hv = _scalevec(lam - 2 * k, v)
            hv = _addvec(ctx, hv, self.module.act("h", v))
            add(k, hv)
            add(k, _scalevec(lam, v), sign=-1)
        return all(c.is_zero() for c in acc.values())


def build_verma(ctx: Context, K: int, lam_name: str = "lam") -> VermaData:
    v = VermaData(ctx, K, lam_name)
    if not v.check_relations():
        raise VermaError("action tables violate the sl(2) relations")
    return v


def solve_intertwiner(verma: VermaData, module: FiniteModule,
                      v0: Vec) -> Intertwiner:
    """The unique g-map with expectation v0 in the zero-weight space.

    The highest-weight condition x (sum m_k (x) w_k) = 0 is triangular in
    the depth: (k+1)(lam - k) w_{k+1} = -x w_k, and w_k lies in the weight
    space 2k, so the recursion stops inside the module.
    """
    ctx = verma.ctx
    v0 = {j: ctx(c) for j, c in v0.items()}
    for j in v0:
        if module.weight(j) != 0:
            raise VermaError("expectation must lie in the zero-weight space")
    comps: dict[int, Vec] = {0: v0}
    k = 0
    cur = v0
    while cur:
        denom = ctx(k + 1) * (verma.lam - k)
        if denom.is_zero():
            raise VermaError("singular recursion step (non-generic weight)")
        cur = _scalevec(ctx(-1) / denom, module.act("x", cur))
        k += 1
        if k > verma.K:
            raise VermaError("depth cutoff too small for this module")
        if cur:
            comps[k] = cur
    phi = Intertwiner(verma, module, comps)
    if not phi.is_highest_weight():
        raise VermaError("solved map fails the highest-weight check")
    return phi


def _pair_vec(ctx: Context, a: Vec, b: Vec) -> dict[tuple[int, int], FieldElement]:
    out = {}
    for i, c1 in a.items():
        for j, c2 in b.items():
            out[(i, j)] = c1 * c2
    return out


def twist_action_on_pair(ctx: Context, V: FiniteModule, W: FiniteModule,
                         u_phi: Vec, u_psi: Vec, lam_name: str = "lam",
                         term_scale: Optional[Mapping[int, object]] = None
                         ) -> dict[tuple[int, int], FieldElement]:
    """The closed-form twist evaluated in V (x) W at the deformation value 1:
    sum_n ((-1)^n/n!) (y^n u_phi) (x) (x^n R_{n-1} ... R_0 u_psi) with
    R_j = (lam - (h+j))^(-1) applied spectrally.

    ``term_scale`` multiplies individual terms (mutation controls).
    """
    lam = ctx.var(lam_name)
    out: dict[tuple[int, int], FieldElement] = {}
    z = ctx.zero()
    n = 0
    while True:
        left = dict(u_phi)
        for _ in range(n):
            left = V.act("y", left)
        # rightmost factor acts first: resolvents, then the raisings
        right = dict(u_psi)
        for j in range(n):
            right = W.resolvent(right, lam, j)
        for _ in range(n):
            right = W.act("x", right)
        if not left or not right:
            break
        pref = ctx((-1) ** n) / ctx(math.factorial(n))
        if term_scale and n in term_scale:
            pref = pref * ctx(term_scale[n])
        for key, c in _pair_vec(ctx, left, right).items():
            out[key] = out.get(key, z) + pref * c
        n += 1
    return {k: v for k, v in out.items() if not v.is_zero()}


def compose_and_extract(ctx: Context, V: FiniteModule, W: FiniteModule,
                        v0: Vec, w0: Vec, depth: Optional[int] = None,
                        lam_name: str = "lam",
                        term_scale: Optional[Mapping[int, object]] = None) -> dict:
    """Oracle run: the leading coefficient of the composed intertwiner
    against the twist applied to the pair of expectation values.

    Composition side: psi: M -> M (x) W, then phi (x) id lands in
    M (x) V (x) W; the coefficient of the highest-weight vector in the first
    slot is read off. Twist side: the closed-form series acts in V (x) W.
    Returns the exact difference in Q(lam).
    """
    if depth is None:
        depth = V.dim + W.dim
    verma = build_verma(ctx, depth, lam_name)
    phi = solve_intertwiner(verma, V, v0)
    psi = solve_intertwiner(verma, W, w0)

    z = ctx.zero()
    composed: dict[tuple[int, int], FieldElement] = {}
    for k, wk in psi.components.items():
        # phi(m_k) = Delta(y^k) phi(highest vector); the coefficient of the
        # highest vector needs all Verma lowering to cancel, which forces
        # the pure second-slot part of the coproduct on the depth-0 layer.
        for j, vj in phi.components.items():
            for i in range(k + 1):
                if j + i != 0:
                    continue
                coeff = ctx(math.comb(k, i))
                vpart = dict(vj)
                for _ in range(k - i):
                    vpart = V.act("y", vpart)
                for key, c in _pair_vec(ctx, vpart, wk).items():
                    composed[key] = composed.get(key, z) + coeff * c
    composed = {k: v for k, v in composed.items() if not v.is_zero()}

    twisted = twist_action_on_pair(ctx, V, W, phi.expectation,
                                   psi.expectation, lam_name, term_scale)
    diff = dict(composed)
    for k, v in twisted.items():
        diff[k] = diff.get(k, z) - v
    diff = {k: v for k, v in diff.items() if not v.is_zero()}
    return {
        "V": V.m, "W": W.m, "depth": depth,
        "composed": {str(k): v.to_string() for k, v in sorted(composed.items())},
        "twisted": {str(k): v.to_string() for k, v in sorted(twisted.items())},
        "difference_terms": {str(k): v.to_string() for k, v in sorted(diff.items())},
        "status": "match" if not diff else "mismatch",
    }


def pole_locations(phi: Intertwiner, lam_name: str = "lam") -> set[int]:
    """Integer roots of all component denominators; the closed-form series
    predicts poles only at nonnegative integer shifts of lam."""
    lam = phi.verma.ctx.symbol(lam_name)
    roots: set[int] = set()
    for v in phi.components.values():
        for c in v.values():
            den = sp.factor(c.denominator)
            poly = sp.Poly(den, lam)
            for r in sp.roots(poly, filter="Z"):
                roots.add(int(r))
    return roots
