"""Exact arithmetic in Q(p1, ..., pk): rational functions in named formal
parameters over the rationals.

All higher layers (tensors, enveloping algebras, twists) keep their
coefficients in a single shared :class:`Context`, so every identity in the
library reduces to a zero test in this field.
"""

from __future__ import annotations

import fractions
from typing import Iterable, Mapping, Sequence, Union

import sympy as sp

Scalarish = Union["FieldElement", int, fractions.Fraction, str, sp.Expr]


class ContextMismatchError(ValueError):
    """Raised when elements from different parameter contexts are mixed."""


class PoleError(ZeroDivisionError):
    """Raised when an operation hits a pole (vanishing denominator)."""


class Context:
    """A fixed, ordered list of formal parameters.

    Elements created through the same context are interoperable; mixing
    elements from distinct contexts raises :class:`ContextMismatchError`.
    """

    def __init__(self, names: Sequence[str]):
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate parameter names: {names}")
        self.names: tuple[str, ...] = tuple(names)
        self.symbols: tuple[sp.Symbol, ...] = tuple(
            sp.Symbol(n, commutative=True) for n in self.names
        )
        self._by_name = dict(zip(self.names, self.symbols))

    def symbol(self, name: str) -> sp.Symbol:
        if name not in self._by_name:
            raise KeyError(f"unknown parameter {name!r}; declared: {self.names}")
        return self._by_name[name]

    def var(self, name: str) -> "FieldElement":
        return FieldElement(self, self.symbol(name))

    def zero(self) -> "FieldElement":
        return FieldElement(self, sp.Integer(0))

    def one(self) -> "FieldElement":
        return FieldElement(self, sp.Integer(1))

    def __call__(self, value: Scalarish) -> "FieldElement":
        """Coerce ints, Fractions, strings (with `^` powers) or sympy
        expressions into a FieldElement of this context."""
        if isinstance(value, FieldElement):
            if value.context is not self:
                raise ContextMismatchError("element belongs to a different context")
            return value
        if isinstance(value, (int, sp.Integer)):
            return FieldElement(self, sp.Integer(int(value)))
        if isinstance(value, fractions.Fraction):
            return FieldElement(self, sp.Rational(value.numerator, value.denominator))
        if isinstance(value, sp.Expr):
            expr = value
        elif isinstance(value, str):
            expr = sp.sympify(value.replace("^", "**"), locals=dict(self._by_name))
        else:
            raise TypeError(f"cannot coerce {value!r} into a field element")
        bad = expr.free_symbols - set(self.symbols)
        if bad:
            raise KeyError(f"undeclared parameters {sorted(map(str, bad))}")
        return FieldElement(self, expr)

    def __repr__(self) -> str:
        return f"Context({list(self.names)})"


class FieldElement:
    """An exact rational function over Q in the context's parameters.

    Stored as a sympy expression; the canonical numerator/denominator pair
    is computed lazily (operations stay cheap, zero tests stay exact).
    """

    __slots__ = ("context", "_expr", "_canon")

    def __init__(self, context: Context, expr: sp.Expr):
        self.context = context
        self._expr = expr
        self._canon = None

    # -- canonical form ----------------------------------------------------

    def _canonical(self) -> sp.Expr:
        if self._canon is None:
            self._canon = sp.cancel(sp.together(self._expr))
        return self._canon

    @property
    def numerator(self) -> sp.Expr:
        return sp.fraction(self._canonical())[0]

    @property
    def denominator(self) -> sp.Expr:
        return sp.fraction(self._canonical())[1]

    @property
    def expr(self) -> sp.Expr:
        return self._canonical()

    def is_zero(self) -> bool:
        return self._canonical() == 0

    def is_one(self) -> bool:
        return self._canonical() == 1

    # -- arithmetic --------------------------------------------------------

    _COERCIBLE = (int, fractions.Fraction, str, sp.Expr)

    def _coerce(self, other: Scalarish) -> "FieldElement":
        return self.context(other)

    def __add__(self, other: Scalarish) -> "FieldElement":
        if not isinstance(other, (FieldElement, *self._COERCIBLE)):
            return NotImplemented
        return FieldElement(self.context, self._expr + self._coerce(other)._expr)

    __radd__ = __add__

    def __sub__(self, other: Scalarish) -> "FieldElement":
        if not isinstance(other, (FieldElement, *self._COERCIBLE)):
            return NotImplemented
        return FieldElement(self.context, self._expr - self._coerce(other)._expr)

    def __rsub__(self, other: Scalarish) -> "FieldElement":
        return FieldElement(self.context, self._coerce(other)._expr - self._expr)

    def __mul__(self, other: Scalarish) -> "FieldElement":
        if not isinstance(other, (FieldElement, *self._COERCIBLE)):
            return NotImplemented
        return FieldElement(self.context, self._expr * self._coerce(other)._expr)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalarish) -> "FieldElement":
        o = self._coerce(other)
        if o.is_zero():
            raise PoleError("division by zero field element")
        return FieldElement(self.context, self._expr / o._expr)

    def __rtruediv__(self, other: Scalarish) -> "FieldElement":
        if self.is_zero():
            raise PoleError("division by zero field element")
        return FieldElement(self.context, self._coerce(other)._expr / self._expr)

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.context, -self._expr)

    def __pow__(self, n: int) -> "FieldElement":
        if n < 0 and self.is_zero():
            raise PoleError("negative power of zero")
        return FieldElement(self.context, self._expr ** int(n))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (FieldElement, int, fractions.Fraction, sp.Expr, str)):
            return NotImplemented
        o = self._coerce(other)
        # cross-multiplication: n1*d2 - n2*d1 == 0
        n1, d1 = sp.fraction(self._canonical())
        n2, d2 = sp.fraction(o._canonical())
        return sp.expand(n1 * d2 - n2 * d1) == 0

    def __hash__(self) -> int:
        return hash(self._canonical())

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- calculus ----------------------------------------------------------

    def differentiate(self, var: str) -> "FieldElement":
        """Exact partial derivative with respect to a declared parameter."""
        s = self.context.symbol(var)
        return FieldElement(self.context, sp.diff(self._canonical(), s))

    def series_expand(self, var: str, order: int) -> "SeriesCoefficients":
        """Truncated power-series expansion around var = 0.

        Requires no pole at var = 0. Coefficients c_k are free of var and
        satisfy self = sum c_k var^k mod var^(order+1).
        """
        if order < 0:
            raise ValueError("order must be >= 0")
        s = self.context.symbol(var)
        f = self._canonical()
        if sp.fraction(f)[1].subs(s, 0) == 0:
            raise PoleError(f"pole at {var} = 0; cannot expand")
        coeffs = []
        g = f
        for _ in range(order + 1):
            c = sp.cancel(g.subs(s, 0))
            coeffs.append(FieldElement(self.context, c))
            g = sp.cancel((g - c) / s)
        return SeriesCoefficients(var, coeffs)

    def evaluate(self, bindings: Mapping[str, Scalarish]) -> "FieldElement":
        """Exact simultaneous substitution of parameters.

        Raises PoleError if the substitution makes a denominator vanish.
        """
        subs = {self.context.symbol(k): self.context(v)._canonical()
                for k, v in bindings.items()}
        den = sp.fraction(self._canonical())[1]
        if sp.cancel(den.subs(subs, simultaneous=True)) == 0:
            raise PoleError(f"denominator vanishes under {dict(bindings)!r}")
        return FieldElement(
            self.context, self._canonical().subs(subs, simultaneous=True)
        )

    # -- printing ----------------------------------------------------------

    def to_string(self) -> str:
        """Serialize in the report grammar: integer coefficients, `^` powers,
        explicit `*`, parenthesized numerator/denominator."""
        num, den = sp.fraction(sp.together(self._canonical()))
        # clear rational content so both parts have integer coefficients
        ncon, nprim = sp.expand(num).as_content_primitive()
        dcon, dprim = sp.expand(den).as_content_primitive()
        ratio = sp.Rational(ncon / dcon)
        num = nprim * ratio.p
        den = dprim * ratio.q
        if den == 1:
            return _poly_string(num, top=True)
        return f"({_poly_string(num, top=True)})/({_poly_string(den, top=True)})"

    def __repr__(self) -> str:
        return f"FieldElement({self.to_string()})"


def _poly_string(e: sp.Expr, top: bool = False) -> str:
    s = sp.sstr(sp.expand(e), order="grlex")
    return s.replace("**", "^").replace(" ", "")


class SeriesCoefficients:
    """Coefficients c_0..c_N of a truncated expansion in one parameter."""

    def __init__(self, var: str, coefficients: Sequence[FieldElement]):
        self.var = var
        self.coefficients: list[FieldElement] = list(coefficients)
        for c in self.coefficients:
            if c.context.symbol(var) in c.expr.free_symbols:
                raise ValueError("series coefficient not free of expansion variable")

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, k: int) -> FieldElement:
        return self.coefficients[k]

    def __iter__(self) -> Iterable[FieldElement]:
        return iter(self.coefficients)

    def resum(self) -> FieldElement:
        """Reconstruct sum c_k var^k (the truncation polynomial)."""
        ctx = self.coefficients[0].context
        x = ctx.var(self.var)
        acc = ctx.zero()
        for k, c in enumerate(self.coefficients):
            acc = acc + c * x ** k
        return acc

    def __repr__(self) -> str:
        return f"SeriesCoefficients({self.var}, {[c.to_string() for c in self]})"


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Dispatch form of the four field operations (used by reports/CLI)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")
