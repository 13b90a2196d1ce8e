"""Poincare-Birkhoff-Witt normal forms for universal enveloping algebras.

Elements are stored as maps from exponent vectors (in a fixed generator
order) to field coefficients. Multiplication straightens words by recursive
adjacent swaps against the bracket table, with memoized word normal forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .lie import LieAlgebraData
from .scalars import Context, FieldElement

Exp = tuple[int, ...]


class EnvelopingError(ValueError):
    pass


class PBWAlgebra:
    """The enveloping algebra of a realized Lie algebra with a fixed
    generator order (a permutation of the algebra's basis)."""

    def __init__(self, lie: LieAlgebraData, order: Optional[Sequence[str]] = None,
                 degree_cap: int = 16):
        self.lie = lie
        self.ctx = lie.ctx
        self.order = tuple(order) if order is not None else lie.names
        if sorted(self.order) != sorted(lie.names):
            raise EnvelopingError("order must be a permutation of the basis")
        self.gens = self.order
        self.ngens = len(self.gens)
        # generator index (in PBW order) -> underlying Lie basis index
        self._lie_index = tuple(lie.index[n] for n in self.order)
        self.degree_cap = degree_cap
        self._word_memo: dict[tuple[int, ...], dict[Exp, FieldElement]] = {}
        # bracket in PBW-order indices
        back = {li: gi for gi, li in enumerate(self._lie_index)}
        self._bracket: dict[tuple[int, int], dict[int, FieldElement]] = {}
        for p in range(self.ngens):
            for q in range(self.ngens):
                row = lie.bracket(self._lie_index[p], self._lie_index[q])
                self._bracket[(p, q)] = {back[k]: c for k, c in row.items()}

    # -- element constructors ---------------------------------------------

    def zero(self) -> "UEAElement":
        return UEAElement(self, {})

    def one(self) -> "UEAElement":
        return UEAElement(self, {(0,) * self.ngens: self.ctx.one()})

    def gen(self, name: str) -> "UEAElement":
        i = self.order.index(name)
        e = [0] * self.ngens
        e[i] = 1
        return UEAElement(self, {tuple(e): self.ctx.one()})

    def monomial(self, exp: Exp, coeff=1) -> "UEAElement":
        return UEAElement(self, {tuple(exp): self.ctx(coeff)})

    def from_terms(self, terms: Mapping[Exp, object]) -> "UEAElement":
        return UEAElement(self, {tuple(k): self.ctx(v) for k, v in terms.items()})

    # -- straightening -----------------------------------------------------

    def _exp_to_word(self, exp: Exp) -> tuple[int, ...]:
        w: list[int] = []
        for i, e in enumerate(exp):
            w.extend([i] * e)
        return tuple(w)

    def word_normal_form(self, word: tuple[int, ...]) -> dict[Exp, FieldElement]:
        if len(word) > self.degree_cap:
            raise EnvelopingError(
                f"word length {len(word)} exceeds degree cap {self.degree_cap}")
        memo = self._word_memo
        if word in memo:
            return memo[word]
        for i in range(len(word) - 1):
            if word[i] > word[i + 1]:
                p, q = word[i], word[i + 1]
                out = dict(self.word_normal_form(word[:i] + (q, p) + word[i + 2:]))
                for k, c in self._bracket[(p, q)].items():
                    sub = word[:i] + (k,) + word[i + 2:]
                    for e, c2 in self.word_normal_form(sub).items():
                        out[e] = out.get(e, self.ctx.zero()) + c * c2
                memo[word] = out
                return out
        exp = tuple(word.count(g) for g in range(self.ngens))
        res = {exp: self.ctx.one()}
        memo[word] = res
        return res

    def multiply_monomials(self, e1: Exp, e2: Exp) -> dict[Exp, FieldElement]:
        return self.word_normal_form(self._exp_to_word(e1) + self._exp_to_word(e2))


class UEAElement:
    """An enveloping-algebra element in PBW normal form."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: PBWAlgebra, terms: Mapping[Exp, FieldElement]):
        self.algebra = algebra
        self.terms: dict[Exp, FieldElement] = {
            k: v for k, v in terms.items() if v._expr != 0
        }

    def _check(self, other: "UEAElement") -> None:
        if other.algebra is not self.algebra:
            raise EnvelopingError("elements from different algebras/orders")

    def __add__(self, other: "UEAElement") -> "UEAElement":
        self._check(other)
        out = dict(self.terms)
        z = self.algebra.ctx.zero()
        for k, v in other.terms.items():
            out[k] = out.get(k, z) + v
        return UEAElement(self.algebra, out)

    def __sub__(self, other: "UEAElement") -> "UEAElement":
        self._check(other)
        out = dict(self.terms)
        z = self.algebra.ctx.zero()
        for k, v in other.terms.items():
            out[k] = out.get(k, z) - v
        return UEAElement(self.algebra, out)

    def __neg__(self) -> "UEAElement":
        return UEAElement(self.algebra, {k: -v for k, v in self.terms.items()})

    def scale(self, s) -> "UEAElement":
        s = self.algebra.ctx(s)
        return UEAElement(self.algebra, {k: s * v for k, v in self.terms.items()})

    def __mul__(self, other) -> "UEAElement":
        if not isinstance(other, UEAElement):
            return self.scale(other)
        self._check(other)
        alg = self.algebra
        z = alg.ctx.zero()
        out: dict[Exp, FieldElement] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                c = c1 * c2
                for e, cf in alg.multiply_monomials(e1, e2).items():
                    out[e] = out.get(e, z) + c * cf
        return UEAElement(alg, out)

    def __rmul__(self, other) -> "UEAElement":
        if isinstance(other, UEAElement):
            return NotImplemented
        return self.scale(other)

    def __pow__(self, n: int) -> "UEAElement":
        if n < 0:
            raise EnvelopingError("negative powers are not defined")
        out = self.algebra.one()
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.terms.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UEAElement):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("UEAElement is unhashable")

    def counit(self) -> FieldElement:
        """Coefficient of the empty monomial."""
        return self.terms.get((0,) * self.algebra.ngens, self.algebra.ctx.zero())

    def coproduct(self) -> "TensorUEA":
        """Standard coproduct: generators primitive, extended
        multiplicatively. Exact on PBW monomials via binomial splits."""
        alg = self.algebra
        z = alg.ctx.zero()
        out: dict[tuple[Exp, Exp], FieldElement] = {}
        for exp, c in self.terms.items():
            splits = [((0,) * alg.ngens, (0,) * alg.ngens, 1)]
            for i, e in enumerate(exp):
                if e == 0:
                    continue
                new = []
                for (l, r, m) in splits:
                    for a in range(e + 1):
                        ll = list(l); rr = list(r)
                        ll[i] = a; rr[i] = e - a
                        new.append((tuple(ll), tuple(rr), m * math.comb(e, a)))
                splits = new
            for (l, r, m) in splits:
                key = (l, r)
                out[key] = out.get(key, z) + c * m
        return TensorUEA((alg, alg), out)

    def map_coefficients(self, f) -> "UEAElement":
        return UEAElement(self.algebra, {k: f(v) for k, v in self.terms.items()})

    def pruned(self) -> "UEAElement":
        return UEAElement(self.algebra,
                          {k: v for k, v in self.terms.items() if not v.is_zero()})

    def to_json(self) -> dict:
        return {
            "gens": list(self.algebra.order),
            "terms": [{"exp": list(k), "coeff": v.to_string()}
                      for k, v in sorted(self.terms.items())
                      if not v.is_zero()],
        }

    def __repr__(self) -> str:
        parts = []
        for k, v in sorted(self.terms.items()):
            if v.is_zero():
                continue
            mono = "*".join(
                f"{g}^{e}" if e > 1 else g
                for g, e in zip(self.algebra.order, k) if e > 0
            ) or "1"
            parts.append(f"({v.to_string()})*{mono}")
        return " + ".join(parts) or "0"


def change_generators(u: UEAElement, target: PBWAlgebra,
                      expansion: Mapping[str, Mapping[str, object]]) -> UEAElement:
    """Rewrite u in a new generator order/basis.

    ``expansion`` maps each old generator name to its linear expansion in the
    target generators. The change matrix must be invertible; the result is
    the image under the induced algebra isomorphism.
    """
    import sympy as sp
    old = u.algebra
    rows = []
    for name in old.order:
        row = expansion[name]
        rows.append([old.ctx(row.get(g, 0)).expr for g in target.order])
    if sp.Matrix(rows).det() == 0:
        raise EnvelopingError("singular change-of-basis matrix")
    images = {}
    for name in old.order:
        images[name] = target.from_terms({
            tuple(1 if i == j else 0 for i in range(target.ngens)):
                expansion[name].get(g, 0)
            for j, g in enumerate(target.order)
            if not target.ctx(expansion[name].get(g, 0)).is_zero()
        })
    out = target.zero()
    for exp, c in u.terms.items():
        acc = target.one()
        for i, e in enumerate(exp):
            for _ in range(e):
                acc = acc * images[old.order[i]]
        out = out + acc.scale(c)
    return out


def project_drop_right(u: UEAElement, ideal_gens: Sequence[str]) -> UEAElement:
    """Projection onto the span of monomials free of ``ideal_gens``, along
    the left ideal they generate. Requires those generators to occupy the
    rightmost positions of the PBW order."""
    alg = u.algebra
    k = len(ideal_gens)
    if tuple(alg.order[-k:]) != tuple(ideal_gens):
        raise EnvelopingError(
            f"ideal generators {ideal_gens} must be rightmost in {alg.order}")
    cut = alg.ngens - k
    return UEAElement(alg, {e: c for e, c in u.terms.items()
                            if all(x == 0 for x in e[cut:])})


def project_zero_part(u: UEAElement, lowering: Sequence[str],
                      raising: Sequence[str]) -> UEAElement:
    """The Cartan-middle projection: keep monomials with zero exponents on
    the lowering and raising generators. Requires order (lowering, cartan,
    raising)."""
    alg = u.algebra
    nl, nr = len(lowering), len(raising)
    if tuple(alg.order[:nl]) != tuple(lowering) or \
            tuple(alg.order[alg.ngens - nr:]) != tuple(raising):
        raise EnvelopingError(
            "order must place lowering generators first and raising last")
    drop = set(range(nl)) | set(range(alg.ngens - nr, alg.ngens))
    return UEAElement(alg, {e: c for e, c in u.terms.items()
                            if all(e[i] == 0 for i in drop)})


class TensorUEA:
    """A tensor power of enveloping algebras: maps from tuples of exponent
    vectors (one per slot) to field coefficients."""

    __slots__ = ("slots", "terms")

    def __init__(self, slots: Sequence[PBWAlgebra],
                 terms: Mapping[tuple, FieldElement]):
        self.slots = tuple(slots)
        self.terms: dict[tuple, FieldElement] = {
            k: v for k, v in terms.items() if v._expr != 0
        }

    @property
    def ctx(self) -> Context:
        return self.slots[0].ctx

    @classmethod
    def unit(cls, slots: Sequence[PBWAlgebra]) -> "TensorUEA":
        key = tuple((0,) * a.ngens for a in slots)
        return cls(slots, {key: slots[0].ctx.one()})

    def _check(self, other: "TensorUEA") -> None:
        if self.slots != other.slots:
            raise EnvelopingError("tensor slot mismatch")

    def __add__(self, other: "TensorUEA") -> "TensorUEA":
        self._check(other)
        z = self.ctx.zero()
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, z) + v
        return TensorUEA(self.slots, out)

    def __sub__(self, other: "TensorUEA") -> "TensorUEA":
        self._check(other)
        z = self.ctx.zero()
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, z) - v
        return TensorUEA(self.slots, out)

    def __neg__(self) -> "TensorUEA":
        return TensorUEA(self.slots, {k: -v for k, v in self.terms.items()})

    def scale(self, s) -> "TensorUEA":
        s = self.ctx(s)
        return TensorUEA(self.slots, {k: s * v for k, v in self.terms.items()})

    def __mul__(self, other) -> "TensorUEA":
        """Slot-wise product."""
        if not isinstance(other, TensorUEA):
            return self.scale(other)
        self._check(other)
        z = self.ctx.zero()
        out: dict[tuple, FieldElement] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                c = c1 * c2
                # expand the product slot by slot
                partial: list[tuple[tuple, FieldElement]] = [((), c)]
                for alg, e1, e2 in zip(self.slots, k1, k2):
                    nf = alg.multiply_monomials(e1, e2)
                    partial = [
                        (key + (e,), cc * cf)
                        for key, cc in partial
                        for e, cf in nf.items()
                    ]
                for key, cc in partial:
                    out[key] = out.get(key, z) + cc
        return TensorUEA(self.slots, out)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.terms.values())

    def pruned(self) -> "TensorUEA":
        return TensorUEA(self.slots,
                         {k: v for k, v in self.terms.items() if not v.is_zero()})

    def slot_counit(self, slot: int) -> "TensorUEA | FieldElement":
        """Apply the counit in one slot (drop it)."""
        z = self.ctx.zero()
        zero_exp = (0,) * self.slots[slot].ngens
        if len(self.slots) == 1:
            acc = z
            for k, v in self.terms.items():
                if k[0] == zero_exp:
                    acc = acc + v
            return acc
        out: dict[tuple, FieldElement] = {}
        new_slots = self.slots[:slot] + self.slots[slot + 1:]
        for k, v in self.terms.items():
            if k[slot] != zero_exp:
                continue
            nk = k[:slot] + k[slot + 1:]
            out[nk] = out.get(nk, z) + v
        return TensorUEA(new_slots, out)

    def slot_coproduct(self, slot: int) -> "TensorUEA":
        """Apply the coproduct in one slot (split it into two)."""
        alg = self.slots[slot]
        z = self.ctx.zero()
        out: dict[tuple, FieldElement] = {}
        new_slots = self.slots[:slot] + (alg, alg) + self.slots[slot + 1:]
        for k, v in self.terms.items():
            cop = UEAElement(alg, {k[slot]: self.ctx.one()}).coproduct()
            for (l, r), m in cop.terms.items():
                nk = k[:slot] + (l, r) + k[slot + 1:]
                out[nk] = out.get(nk, z) + v * m
        return TensorUEA(new_slots, out)

    def insert_unit(self, position: int, alg: Optional[PBWAlgebra] = None) -> "TensorUEA":
        """Insert a unit slot at the given position."""
        alg = alg or self.slots[0]
        zero_exp = (0,) * alg.ngens
        new_slots = self.slots[:position] + (alg,) + self.slots[position:]
        return TensorUEA(new_slots, {
            k[:position] + (zero_exp,) + k[position:]: v
            for k, v in self.terms.items()
        })

    def map_coefficients(self, f) -> "TensorUEA":
        return TensorUEA(self.slots, {k: f(v) for k, v in self.terms.items()})

    def map_slots(self, f) -> "TensorUEA":
        """Apply an element-wise map (UEAElement -> UEAElement, possibly into
        another algebra) independently in every slot."""
        out: Optional[TensorUEA] = None
        z = self.ctx.zero()
        acc: dict[tuple, FieldElement] = {}
        new_slots = None
        for k, v in self.terms.items():
            mapped = [f(UEAElement(alg, {e: self.ctx.one()}))
                      for alg, e in zip(self.slots, k)]
            if new_slots is None:
                new_slots = tuple(m.algebra for m in mapped)
            partial: list[tuple[tuple, FieldElement]] = [((), v)]
            for m in mapped:
                partial = [
                    (key + (e,), cc * cf)
                    for key, cc in partial
                    for e, cf in m.terms.items()
                ]
            for key, cc in partial:
                acc[key] = acc.get(key, z) + cc
        if new_slots is None:
            new_slots = self.slots
        return TensorUEA(new_slots, acc)

    def to_json(self) -> list[dict]:
        return [
            {"slots": [list(e) for e in k], "coeff": v.to_string()}
            for k, v in sorted(self.terms.items()) if not v.is_zero()
        ]

    def __repr__(self) -> str:
        parts = []
        for k, v in sorted(self.terms.items()):
            if v.is_zero():
                continue
            slot_strs = []
            for alg, e in zip(self.slots, k):
                mono = "*".join(
                    f"{g}^{x}" if x > 1 else g
                    for g, x in zip(alg.order, e) if x > 0
                ) or "1"
                slot_strs.append(mono)
            parts.append(f"({v.to_string()})*" + "(x)".join(slot_strs))
        return " + ".join(parts) or "0"
