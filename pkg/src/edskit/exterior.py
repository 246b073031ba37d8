"""Differential forms and vector fields on a chart.

A p-form is a dict from strictly increasing p-tuples of coordinate indices to
nonzero scalars, so ``{(0, 3): 2*p}`` on the chart (x, y, z, p) is
``2*p dx^dp``.  Auxiliary symbols never index a differential: their declared
differentials are expanded by ``ext_d`` through the chain rule.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import ChartError, RankError, Refusal
from .scalars import Chart, Scalar, equal, has_aux, needs_parens, normalize_sign, partial, render

# -- index-tuple helpers ---------------------------------------------------------


def merge_indices(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
    """Sign and sorted concatenation of two increasing tuples, None on overlap."""
    if set(a) & set(b):
        return None
    seq = list(a + b)
    sign = 1
    # bubble sort, counting transpositions
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                sign = -sign
    return sign, tuple(seq)


def _add_term(terms: dict, key, value) -> None:
    if not value:
        return
    cur = terms.get(key)
    if cur is None:
        terms[key] = value
    else:
        s = cur + value
        if s:
            terms[key] = s
        else:
            del terms[key]


def _coerce(chart: Chart, c) -> Scalar:
    return chart.scalar(c)


# -- forms ---------------------------------------------------------------------------


class DifferentialForm:
    """Alternating p-form with scalar coefficients over coordinate differentials."""

    __slots__ = ("chart", "degree", "terms")

    def __init__(self, chart: Chart, degree: int, terms: Mapping[tuple[int, ...], object] | None = None):
        self.chart = chart
        self.degree = degree
        clean: dict[tuple[int, ...], Scalar] = {}
        for key, c in (terms or {}).items():
            key = tuple(key)
            if len(key) != degree or any(b <= a for a, b in zip(key, key[1:])):
                raise ValueError(f"index tuple {key} is not strictly increasing of length {degree}")
            if key and (key[0] < 0 or key[-1] >= chart.dim):
                raise ValueError(f"index tuple {key} out of range")
            c = _coerce(chart, c)
            if c:
                clean[key] = c
        self.terms = clean

    # construction
    @classmethod
    def scalar(cls, chart: Chart, value) -> "DifferentialForm":
        return cls(chart, 0, {(): value})

    @classmethod
    def zero(cls, chart: Chart, degree: int) -> "DifferentialForm":
        return cls(chart, degree)

    @classmethod
    def from_coefficients(cls, chart: Chart, coeffs: Sequence) -> "DifferentialForm":
        """1-form with the given coefficient per coordinate differential."""
        return cls(chart, 1, {(i,): c for i, c in enumerate(coeffs)})

    def coefficients(self) -> list[Scalar]:
        """Coefficient vector of a 1-form over (dx^0, ..., dx^{n-1})."""
        if self.degree != 1:
            raise ValueError("coefficients() needs a 1-form")
        z = self.chart.zero
        return [self.terms.get((i,), z) for i in range(self.chart.dim)]

    def as_scalar(self) -> Scalar:
        if self.degree != 0:
            raise ValueError("not a 0-form")
        return self.terms.get((), self.chart.zero)

    # arithmetic
    def _check(self, other: "DifferentialForm") -> None:
        if other.chart is not self.chart:
            raise ChartError("forms live on different charts")
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other):
        if not isinstance(other, DifferentialForm):
            if self.degree == 0:
                other = DifferentialForm.scalar(self.chart, other)
            else:
                return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            _add_term(terms, k, v)
        return DifferentialForm(self.chart, self.degree, terms)

    __radd__ = __add__

    def __neg__(self):
        return DifferentialForm(self.chart, self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, DifferentialForm):
            if self.degree == 0:
                other = DifferentialForm.scalar(self.chart, other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        if isinstance(c, DifferentialForm):
            if c.degree == 0:
                c = c.as_scalar()
            elif self.degree == 0:
                return c * self.as_scalar()
            else:
                return NotImplemented
        c = _coerce(self.chart, c)
        if not c:
            return DifferentialForm(self.chart, self.degree)
        return DifferentialForm(self.chart, self.degree, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = _coerce(self.chart, c)
        if not c:
            raise ZeroDivisionError("division of a form by zero")
        return self * (1 / c)

    def wedge(self, other: "DifferentialForm") -> "DifferentialForm":
        return wedge(self, other)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DifferentialForm):
            if self.degree == 0:
                try:
                    other = DifferentialForm.scalar(self.chart, other)
                except (TypeError, ChartError):
                    return NotImplemented
            else:
                return NotImplemented
        if other.chart is not self.chart or other.degree != self.degree:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(equal(v, other.terms[k]) for k, v in self.terms.items())

    __hash__ = None  # type: ignore[assignment]

    def render(self, basis: Sequence[str] | None = None) -> str:
        if basis is None:
            basis = [f"d{n}" for n in self.chart.coords]
        return render_terms(self.terms, basis)

    def __repr__(self) -> str:
        return f"<{self.degree}-form {self.render()}>"

    __str__ = render


def coordinate_differential(chart: Chart, name: str) -> DifferentialForm:
    return DifferentialForm(chart, 1, {(chart.coord_index(name),): 1})


def render_terms(terms: Mapping[tuple[int, ...], Scalar], basis: Sequence[str]) -> str:
    """Canonical text for a sum of coefficient * basis-wedge terms."""
    return render_combination(
        [(terms[key], "^".join(basis[i] for i in key)) for key in sorted(terms)]
    )


def render_combination(pairs: Sequence[tuple[Scalar, str]]) -> str:
    """Render sum c_i * name_i, pulling a leading minus sign out of each coefficient."""
    out = ""
    for n, (c, name) in enumerate(p for p in pairs if p[0]):
        c2 = normalize_sign(c)
        negative = c2 != c
        text = render(c2)
        if not name:
            body = text
        elif text == "1":
            body = name
        elif needs_parens(text):
            body = f"({text})*{name}"
        else:
            body = f"{text}*{name}"
        if n == 0:
            out = ("-" if negative else "") + body
        else:
            out += (" - " if negative else " + ") + body
    return out or "0"


# -- core operations -------------------------------------------------------------


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    if a.chart is not b.chart:
        raise ChartError("wedge of forms on different charts")
    terms: dict = {}
    for ka, va in a.terms.items():
        for kb, vb in b.terms.items():
            m = merge_indices(ka, kb)
            if m is None:
                continue
            sign, key = m
            _add_term(terms, key, va * vb if sign > 0 else -(va * vb))
    return DifferentialForm(a.chart, a.degree + b.degree, terms)


def wedge_all(forms: Iterable[DifferentialForm], chart: Chart | None = None) -> DifferentialForm:
    out = None
    for f in forms:
        out = f if out is None else wedge(out, f)
    if out is None:
        if chart is None:
            raise ValueError("empty wedge needs a chart")
        return DifferentialForm.scalar(chart, 1)
    return out


def scalar_differential(chart: Chart, c: Scalar) -> list[Scalar]:
    """Coefficients of dc over coordinate differentials (chain rule through aux)."""
    out = [partial(c, i) for i in range(chart.dim)]
    for j, name in enumerate(chart.aux):
        idx = chart.dim + j
        dc = partial(c, idx)
        if not dc:
            continue
        declared = chart.differential_of(name)
        if declared is None:
            raise ChartError(f"cannot differentiate through opaque symbol {name!r}")
        for i, v in enumerate(declared):
            if v:
                out[i] = out[i] + dc * v
    return out


def ext_d(a: DifferentialForm) -> DifferentialForm:
    chart = a.chart
    terms: dict = {}
    for key, c in a.terms.items():
        for i, v in enumerate(scalar_differential(chart, c)):
            if not v:
                continue
            m = merge_indices((i,), key)
            if m is None:
                continue
            sign, k = m
            _add_term(terms, k, v if sign > 0 else -v)
    return DifferentialForm(chart, a.degree + 1, terms)


class VectorField:
    """Vector field sum_i X^i d/dx^i on a chart."""

    __slots__ = ("chart", "components")

    def __init__(self, chart: Chart, components: Sequence):
        if len(components) != chart.dim:
            raise ValueError("one component per coordinate expected")
        self.chart = chart
        self.components = tuple(chart.scalar(c) for c in components)

    @classmethod
    def coordinate(cls, chart: Chart, name: str) -> "VectorField":
        i = chart.coord_index(name)
        return cls(chart, [1 if j == i else 0 for j in range(chart.dim)])

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.chart, [a + b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "VectorField":
        return VectorField(self.chart, [-a for a in self.components])

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def __mul__(self, c) -> "VectorField":
        c = self.chart.scalar(c)
        return VectorField(self.chart, [a * c for a in self.components])

    __rmul__ = __mul__

    def __call__(self, f: Scalar) -> Scalar:
        """Directional derivative X(f), aux symbols through their differentials."""
        grad = scalar_differential(self.chart, self.chart.scalar(f))
        total = self.chart.zero
        for a, g in zip(self.components, grad):
            if a and g:
                total = total + a * g
        return total

    def pair(self, form: DifferentialForm) -> Scalar:
        if form.degree != 1:
            raise ValueError("pairing needs a 1-form")
        total = self.chart.zero
        for (i,), c in form.terms.items():
            if self.components[i]:
                total = total + c * self.components[i]
        return total

    def is_zero(self) -> bool:
        return not any(self.components)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, VectorField)
            and other.chart is self.chart
            and all(equal(a, b) for a, b in zip(self.components, other.components))
        )

    __hash__ = None  # type: ignore[assignment]

    def render(self) -> str:
        terms = {(i,): c for i, c in enumerate(self.components) if c}
        return render_terms(terms, [f"D{n}" for n in self.chart.coords])

    def __repr__(self) -> str:
        return f"<VectorField {self.render()}>"


def interior(X: VectorField, a: DifferentialForm) -> DifferentialForm:
    """Contraction into the first slot."""
    if a.degree < 1:
        raise ValueError("interior product of a 0-form")
    if X.chart is not a.chart:
        raise ChartError("vector field and form on different charts")
    terms: dict = {}
    for key, c in a.terms.items():
        for pos, i in enumerate(key):
            xi = X.components[i]
            if not xi:
                continue
            rest = key[:pos] + key[pos + 1:]
            v = c * xi
            _add_term(terms, rest, v if pos % 2 == 0 else -v)
    return DifferentialForm(a.chart, a.degree - 1, terms)


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    chart = X.chart
    if Y.chart is not chart:
        raise ChartError("vector fields on different charts")
    if any(has_aux(chart, c) for c in X.components + Y.components):
        raise ChartError("lie_bracket does not handle auxiliary symbols")
    comps = []
    for i in range(chart.dim):
        comps.append(X(Y.components[i]) - Y(X.components[i]))
    return VectorField(chart, comps)


# -- frames --------------------------------------------------------------------------


class Frame:
    """An ordered basis of 1-forms and the dual change of basis.

    ``expand`` rewrites a coordinate-basis form in the wedge basis of the
    frame: the result maps increasing tuples of frame indices to scalars.
    """

    def __init__(self, chart: Chart, forms: Sequence[DifferentialForm]):
        if len(forms) != chart.dim:
            raise ValueError("a frame needs one form per coordinate")
        self.chart = chart
        self.forms = list(forms)
        self.matrix = [f.coefficients() for f in forms]
        try:
            self.inverse = linalg.inverse(self.matrix, chart.zero, chart.one)
        except ZeroDivisionError:
            raise RankError("forms do not make an invertible frame") from None

    def expand(self, a: DifferentialForm) -> dict[tuple[int, ...], Scalar]:
        chart = self.chart
        # dx^j = sum_i inverse[j][i] w^i
        rows = [
            {(i,): c for i, c in enumerate(self.inverse[j]) if c} for j in range(chart.dim)
        ]
        out: dict = {}
        for key, c in a.terms.items():
            acc: dict = {(): c}
            for j in key:
                nxt: dict = {}
                for k1, v1 in acc.items():
                    for k2, v2 in rows[j].items():
                        m = merge_indices(k1, k2)
                        if m is None:
                            continue
                        sign, k = m
                        _add_term(nxt, k, v1 * v2 if sign > 0 else -(v1 * v2))
                acc = nxt
            for k, v in acc.items():
                _add_term(out, k, v)
        return out

    def assemble(self, terms: Mapping[tuple[int, ...], object], degree: int) -> DifferentialForm:
        total = DifferentialForm(self.chart, degree)
        for key, c in terms.items():
            total = total + wedge_all([self.forms[i] for i in key], self.chart) * c
        return total


def completion_frame(forms: Sequence[DifferentialForm]) -> tuple[Frame, int]:
    """Complete independent 1-forms with coordinate differentials in chart order."""
    if not forms:
        raise ValueError("empty system")
    chart = forms[0].chart
    rows = [f.coefficients() for f in forms]
    n = len(rows)
    if linalg.rank(rows, chart.dim) < n:
        raise RankError(dependency_report(forms))
    basis = list(forms)
    for j in range(chart.dim):
        e = [chart.one if i == j else chart.zero for i in range(chart.dim)]
        trial = rows + [e]
        if linalg.rank(trial, chart.dim) == len(trial):
            rows = trial
            basis.append(DifferentialForm(chart, 1, {(j,): 1}))
        if len(rows) == chart.dim:
            break
    return Frame(chart, basis), n


def dependency_report(forms: Sequence[DifferentialForm]) -> str:
    chart = forms[0].chart
    rows = [f.coefficients() for f in forms]
    cols = [[rows[i][j] for i in range(len(rows))] for j in range(chart.dim)]
    relations = linalg.nullspace(cols, len(rows), chart.zero, chart.one)
    parts = []
    for rel in relations:
        terms = {(i,): c for i, c in enumerate(rel) if c}
        parts.append(render_terms(terms, [f"#{i + 1}" for i in range(len(rows))]) + " = 0")
    return "forms are dependent at the generic point: " + "; ".join(parts)


def _system_forms(S) -> list[DifferentialForm]:
    return list(getattr(S, "forms", S))


def _system_frame(S) -> tuple[Frame, int]:
    cached = getattr(S, "completion", None)
    if cached is not None:
        return cached()
    return completion_frame(_system_forms(S))


def reduce_mod(a: DifferentialForm, S) -> DifferentialForm:
    """Canonical representative of ``a`` modulo the ideal generated by ``S``."""
    frame, n = _system_frame(S)
    kept = {k: v for k, v in frame.expand(a).items() if not k or k[0] >= n}
    return frame.assemble(kept, a.degree)


def congruent_mod(a: DifferentialForm, b: DifferentialForm, S) -> bool:
    return reduce_mod(a - b, S).is_zero()


def annihilator(S) -> list[VectorField]:
    """Vector fields spanning the kernel of S at the generic point."""
    forms = _system_forms(S)
    if not forms:
        raise ValueError("empty system")
    chart = forms[0].chart
    rows = [f.coefficients() for f in forms]
    if any(has_aux(chart, c) for r in rows for c in r):
        raise Refusal("annihilator needs coefficients free of auxiliary symbols")
    if linalg.rank(rows, chart.dim) < len(rows):
        raise RankError(dependency_report(forms))
    basis = linalg.nullspace(rows, chart.dim, chart.zero, chart.one, prefer_constant=True)
    return [VectorField(chart, v) for v in basis]


def span_rank(forms: Sequence[DifferentialForm]) -> int:
    if not forms:
        return 0
    return linalg.rank([f.coefficients() for f in forms], forms[0].chart.dim)


def same_span(a: Sequence[DifferentialForm], b: Sequence[DifferentialForm]) -> bool:
    ra, rb = span_rank(a), span_rank(b)
    return ra == rb == span_rank(list(a) + list(b))


def contains_span(big: Sequence[DifferentialForm], small: Sequence[DifferentialForm]) -> bool:
    return span_rank(big) == span_rank(list(big) + list(small))


def vector_span_rank(fields: Sequence[VectorField]) -> int:
    if not fields:
        return 0
    return linalg.rank([list(X.components) for X in fields], fields[0].chart.dim)


def all_index_tuples(n: int, p: int) -> list[tuple[int, ...]]:
    return list(combinations(range(n), p))


__all__ = [
    "DifferentialForm",
    "VectorField",
    "Frame",
    "wedge",
    "wedge_all",
    "ext_d",
    "interior",
    "lie_bracket",
    "reduce_mod",
    "congruent_mod",
    "annihilator",
    "coordinate_differential",
    "completion_frame",
    "render_terms",
    "same_span",
    "contains_span",
    "span_rank",
]
