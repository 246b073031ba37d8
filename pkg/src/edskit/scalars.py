"""Exact coefficient field for a chart.

Every coefficient is an element of QQ(coords, aux), backed by sympy's sparse
``FracField`` (numerator/denominator pairs with the gcd cancelled).  The
monomial order is graded lexicographic over the coordinates followed by the
auxiliary symbols, in declaration order.

Auxiliary symbols stand for functions such as ``f(y)`` or ``exp(2z)``.  Each
one may carry a declared differential, a 1-form over the coordinate
differentials; ``exterior.ext_d`` differentiates through it with the chain
rule.  An auxiliary symbol without a declared differential is opaque: it can
appear in coefficients, but differentiating anything that depends on it
raises.
"""
from __future__ import annotations

import contextvars
import keyword
import re
from contextlib import contextmanager
from fractions import Fraction
from typing import Iterator, Sequence

import sympy
from sympy import QQ
from sympy.polys.fields import FracElement, FracField
from sympy.polys.orderings import grlex

from .errors import ChartError

Scalar = FracElement

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_RESERVED = {"d", "pow", "mod", "in", "expect", "fail"}


class Chart:
    """Coordinates plus auxiliary function symbols, and the field they generate."""

    def __init__(self, coords: Sequence[str], aux: Sequence[str] = ()):
        names = list(coords) + list(aux)
        if not coords:
            raise ChartError("a chart needs at least one coordinate")
        for name in names:
            if not _IDENT.match(name) or keyword.iskeyword(name) or name in _RESERVED:
                raise ChartError(f"invalid symbol name {name!r}")
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise ChartError(f"duplicate symbol names: {sorted(dup)}")
        self.coords: tuple[str, ...] = tuple(coords)
        self.aux: tuple[str, ...] = tuple(aux)
        self.field = FracField(names, QQ, grlex)
        self._index = {n: i for i, n in enumerate(names)}
        # aux name -> coefficient tuple over coordinate differentials, or None
        self._differentials: dict[str, tuple[Scalar, ...] | None] = {a: None for a in aux}

    # -- construction helpers -------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def names(self) -> tuple[str, ...]:
        return self.coords + self.aux

    def __repr__(self) -> str:
        aux = f", aux={list(self.aux)}" if self.aux else ""
        return f"Chart({list(self.coords)}{aux})"

    def gen(self, name: str) -> Scalar:
        try:
            return self.field.gens[self._index[name]]
        except KeyError:
            raise ChartError(f"{name!r} is not a symbol of {self!r}") from None

    __getitem__ = gen

    def gens(self) -> tuple[Scalar, ...]:
        return tuple(self.field.gens[: self.dim])

    def coord_index(self, name: str) -> int:
        i = self._index.get(name)
        if i is None or i >= self.dim:
            raise ChartError(f"{name!r} is not a coordinate of {self!r}")
        return i

    def is_coord(self, name: str) -> bool:
        i = self._index.get(name)
        return i is not None and i < self.dim

    def is_aux(self, name: str) -> bool:
        return name in self._differentials

    @property
    def zero(self) -> Scalar:
        return self.field.zero

    @property
    def one(self) -> Scalar:
        return self.field.one

    def scalar(self, value) -> Scalar:
        """Coerce an int, Fraction, sympy expression, string or field element."""
        if isinstance(value, FracElement):
            if value.field != self.field:
                raise ChartError("scalar belongs to a different chart")
            return value
        if isinstance(value, (int, Fraction)):
            return self.field(QQ(value.numerator, value.denominator))
        if isinstance(value, str):
            value = sympy.sympify(value, locals={n: sympy.Symbol(n) for n in self.names})
        if isinstance(value, sympy.Basic):
            stray = {str(s) for s in value.free_symbols} - set(self.names)
            if stray:
                raise ChartError(f"names not in chart: {sorted(stray)}")
            try:
                return self.field.from_expr(value)
            except (ValueError, sympy.polys.polyerrors.CoercionFailed) as exc:
                raise ChartError(f"not a rational function over QQ: {value}") from exc
        raise TypeError(f"cannot make a scalar from {type(value).__name__}")

    # -- auxiliary differentials ----------------------------------------------
    def declare(self, name: str, differential) -> None:
        """Fix the differential of auxiliary symbol ``name``.

        ``differential`` is a 1-form on this chart (anything with ``degree``
        and ``terms``).  Its coefficients may use coordinates and auxiliary
        symbols up to and including ``name`` itself (``dE = 2*E*dz``).
        """
        if name not in self._differentials:
            raise ChartError(f"{name!r} is not an auxiliary symbol")
        if self._differentials[name] is not None:
            raise ChartError(f"differential of {name!r} already declared")
        if differential.degree != 1 or differential.chart is not self:
            raise ChartError("declared differential must be a 1-form on this chart")
        limit = self._index[name]
        coeffs = [self.zero] * self.dim
        for (i,), c in differential.terms.items():
            late = [self.names[v] for v in variables(c) if v > limit]
            if late:
                raise ChartError(
                    f"d{name} may only use symbols declared up to {name!r}; got {late}"
                )
            coeffs[i] = c
        self._differentials[name] = tuple(coeffs)

    def differential_of(self, name: str) -> tuple[Scalar, ...] | None:
        return self._differentials[name]


# -- free functions on scalars -------------------------------------------------

def variables(a: Scalar) -> set[int]:
    """Generator indices that occur in numerator or denominator."""
    out: set[int] = set()
    for poly in (a.numer, a.denom):
        for monom in poly.monoms():
            out.update(i for i, e in enumerate(monom) if e)
    return out


def has_aux(chart: Chart, a: Scalar) -> bool:
    return any(i >= chart.dim for i in variables(a))


def is_constant(a: Scalar) -> bool:
    return a.numer.is_ground and a.denom.is_ground


def is_polynomial(a: Scalar) -> bool:
    return a.denom.is_ground


def normalize(a: Scalar) -> tuple:
    """Canonical (numerator, denominator) pair, denominator monic.

    sympy already cancels the gcd; what is left is the choice of a constant
    factor, fixed here by making the leading denominator coefficient 1.
    """
    lc = a.denom.LC
    return a.numer.quo_ground(lc), a.denom.quo_ground(lc)


def equal(a: Scalar, b: Scalar) -> bool:
    """Rational-function equality by cross multiplication."""
    return a.numer * b.denom == b.numer * a.denom


def partial(a: Scalar, index: int) -> Scalar:
    """Partial derivative with respect to generator ``index`` (aux symbols allowed)."""
    return a.diff(a.field.gens[index])


def partial_derivative(chart: Chart, a: Scalar, coord: str) -> Scalar:
    """Partial derivative with respect to a chart coordinate.

    Auxiliary symbols are refused: their derivatives are not partials in the
    coordinates, and ``exterior.ext_d`` is the right tool for them.
    """
    i = chart.coord_index(coord)
    if has_aux(chart, a):
        raise ChartError("scalar depends on auxiliary symbols; use exterior.ext_d")
    return partial(a, i)


def substitute(chart: Chart, a: Scalar, name: str, value) -> Scalar:
    """Replace coordinate ``name`` by ``value`` (any scalar on the chart)."""
    chart.coord_index(name)
    value = chart.scalar(value)
    sym = sympy.Symbol(name)
    return chart.field.from_expr(
        sympy.together(a.as_expr().subs(sym, value.as_expr()))
    )


def to_fraction(a: Scalar) -> Fraction:
    if not is_constant(a):
        raise ValueError(f"{render(a)} is not constant")
    n, d = normalize(a)
    if not n:
        return Fraction(0)
    q = QQ(n.LC) / QQ(d.LC)
    return Fraction(int(q.numerator), int(q.denominator))


# -- rendering -----------------------------------------------------------------

def _render_poly(poly, names: Sequence[str]) -> str:
    if not poly:
        return "0"
    parts = []
    for monom, coeff in poly.terms():
        coeff = QQ(coeff)
        factors = []
        for name, e in zip(names, monom):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}**{e}")
        sign = "-" if coeff < 0 else "+"
        mag = -coeff if coeff < 0 else coeff
        if factors:
            body = "*".join(factors)
            if mag != 1:
                body = f"{_render_q(mag)}*{body}"
        else:
            body = _render_q(mag)
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _render_q(q) -> str:
    q = QQ(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def render(a: Scalar) -> str:
    """Deterministic text form: grlex-ordered terms, monic denominator."""
    names = [str(g) for g in a.field.symbols]
    num, den = normalize(a)
    top = _render_poly(num, names)
    if den == den.ring.one:
        return top
    bottom = _render_poly(den, names)
    if len(num.terms()) > 1:
        top = f"({top})"
    if len(den.terms()) > 1 or "*" in bottom:
        bottom = f"({bottom})"
    return f"{top}/{bottom}"


def needs_parens(text: str) -> bool:
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "+-" and i > 0:
            return True
    return False


# -- side conditions -----------------------------------------------------------

_SIDE: contextvars.ContextVar[list | None] = contextvars.ContextVar("side_conditions", default=None)


def record_nonzero(a: Scalar) -> None:
    """Note that a computation divided by (or pivoted on) ``a``.

    The locus is recorded as the irreducible factors of numerator and
    denominator, each made monic, so ``2/p`` and ``p**2`` both give ``p``.
    """
    bucket = _SIDE.get()
    if bucket is None or is_constant(a):
        return
    names = [str(g) for g in a.field.symbols]
    for poly in (a.numer, a.denom):
        if poly.is_ground:
            continue
        _, factors = poly.factor_list()
        for f, _ in factors:
            if f.is_ground:
                continue
            text = _render_poly(f.quo_ground(f.LC), names)
            if text not in bucket:
                bucket.append(text)


def normalize_sign(a: Scalar) -> Scalar:
    num, _ = normalize(a)
    if num and QQ(num.LC) < 0:
        return -a
    return a


@contextmanager
def side_conditions() -> Iterator[list[str]]:
    """Collect every non-constant quantity assumed nonzero inside the block."""
    bucket: list[str] = []
    token = _SIDE.set(bucket)
    try:
        yield bucket
    finally:
        bucket.sort(key=lambda t: (len(t), t))
        _SIDE.reset(token)
