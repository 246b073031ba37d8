"""Pfaffian systems: integrability, Cauchy systems, solvable chains, integrals."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from sympy import QQ
from sympy.polys.fields import FracField
from sympy.polys.orderings import grlex

from . import linalg
from .errors import ChartError, EdskitError, NotClosedError, QuadratureUnsupported, RankError
from .exterior import (
    DifferentialForm,
    Frame,
    VectorField,
    annihilator,
    completion_frame,
    contains_span,
    ext_d,
    interior,
    lie_bracket,
    reduce_mod,
    same_span,
    span_rank,
    vector_span_rank,
    render_combination,
    wedge_all,
)
from .scalars import Chart, Scalar, has_aux, is_constant, is_polynomial, variables


class PfaffianSystem:
    """Ordered 1-forms, independent at the generic point."""

    def __init__(self, forms: Sequence[DifferentialForm], names: Sequence[str] | None = None):
        forms = list(forms)
        if not forms:
            raise ValueError("a Pfaffian system needs at least one form")
        self.chart: Chart = forms[0].chart
        for f in forms:
            if f.degree != 1:
                raise ValueError("Pfaffian systems are made of 1-forms")
            if f.chart is not self.chart:
                raise ChartError("forms live on different charts")
        self.forms = forms
        self.names = list(names) if names else [f"theta{i + 1}" for i in range(len(forms))]
        self._frame: tuple[Frame, int] | None = None
        self.completion()  # raises RankError when dependent

    @property
    def rank(self) -> int:
        return len(self.forms)

    def completion(self) -> tuple[Frame, int]:
        if self._frame is None:
            self._frame = completion_frame(self.forms)
        return self._frame

    def contains(self, a: DifferentialForm) -> bool:
        return reduce_mod(a, self).is_zero()

    def __len__(self) -> int:
        return len(self.forms)

    def __iter__(self):
        return iter(self.forms)

    def __repr__(self) -> str:
        return f"PfaffianSystem({', '.join(str(f) for f in self.forms)})"


@dataclass
class IntegrabilityReport:
    integrable: bool
    index: int | None = None
    residue: DifferentialForm | None = None

    def __bool__(self) -> bool:
        return self.integrable


def is_completely_integrable(S: PfaffianSystem) -> IntegrabilityReport:
    for i, theta in enumerate(S.forms):
        r = reduce_mod(ext_d(theta), S)
        if r:
            return IntegrabilityReport(False, i, r)
    return IntegrabilityReport(True)


def _normalized(form: DifferentialForm) -> DifferentialForm:
    """Scale so the first constant coefficient (else the first one) is 1."""
    keys = sorted(form.terms)
    const = [k for k in keys if is_constant(form.terms[k])]
    lead = const[0] if const else keys[0]
    return form / form.terms[lead]


def cauchy_system(S: PfaffianSystem) -> PfaffianSystem:
    """Cartan system: S together with every i_X d(theta), X in the annihilator of S."""
    fields = annihilator(S)
    forms = list(S.forms)
    for theta in S.forms:
        dtheta = ext_d(theta)
        if not dtheta:
            continue
        for X in fields:
            cand = interior(X, dtheta)
            if not cand:
                continue
            if span_rank(forms + [cand]) > len(forms):
                forms.append(_normalized(cand))
    names = list(S.names) + [f"omega{i + 1}" for i in range(len(forms) - len(S.forms))]
    result = PfaffianSystem(forms, names)
    _check_cartan(S, result)
    return result


def _check_cartan(S: PfaffianSystem, ch: PfaffianSystem) -> None:
    """d(theta) mod S must only involve the new Cartan forms."""
    frame, _ = ch.completion()
    n, m = len(S.forms), len(ch.forms)
    for theta in S.forms:
        for key in frame.expand(ext_d(theta)):
            if key[0] < n:
                continue
            if key[-1] >= m:
                raise EdskitError("Cartan system check failed: d(theta) leaves the Cartan span")


def characteristic_fields(S: PfaffianSystem) -> list[VectorField]:
    """Cauchy characteristics from brackets: X in D(S) with [X, D(S)] inside D(S)."""
    D = annihilator(S)
    chart = S.chart
    if not D:
        return []
    brackets = [[lie_bracket(Ya, Yb) for Yb in D] for Ya in D]
    # unknown f_a with X = sum f_a Y_a; conditions theta([X, Y_b]) = sum f_a theta([Y_a, Y_b]) = 0
    rows = []
    for theta in S.forms:
        for b in range(len(D)):
            rows.append([brackets[a][b].pair(theta) for a in range(len(D))])
    coeffs = linalg.nullspace(rows, len(D), chart.zero, chart.one)
    out = []
    for f in coeffs:
        X = VectorField(chart, [chart.zero] * chart.dim)
        for fa, Ya in zip(f, D):
            if fa:
                X = X + Ya * fa
        out.append(X)
    return out


def characteristics_agree(S: PfaffianSystem) -> bool:
    """Cross-check of the Cartan system against the vector-field definition."""
    from_forms = annihilator(cauchy_system(S))
    from_fields = characteristic_fields(S)
    r = vector_span_rank(from_forms)
    return r == vector_span_rank(from_fields) == vector_span_rank(from_forms + from_fields)


@dataclass
class SolvabilityReport:
    solvable: bool
    failures: list[str] = field(default_factory=list)
    residue: DifferentialForm | None = None

    def __bool__(self) -> bool:
        return self.solvable


def is_solvable_system(W: Sequence[DifferentialForm], S: PfaffianSystem,
                       names: Sequence[str] | None = None) -> SolvabilityReport:
    W = list(W)
    names = list(names) if names else [f"w[{i + 1}]" for i in range(len(W))]
    if span_rank(W) < len(W):
        return SolvabilityReport(False, ["forms are not independent"])
    failures: list[str] = []
    residue = None
    ch = cauchy_system(S)
    if not same_span(W, ch.forms):
        failures.append(
            f"span mismatch: forms do not generate the Cauchy system (rank {ch.rank})"
        )
    for p, w in enumerate(W):
        dw = ext_d(w)
        r = dw if p == 0 else reduce_mod(dw, W[:p])
        if r:
            mod = "" if p == 0 else f" mod {', '.join(names[:p])}"
            failures.append(f"d({names[p]}) != 0{mod}")
            if residue is None:
                residue = r
            break
    return SolvabilityReport(not failures, failures, residue)


def is_first_integral(f, S) -> bool:
    chart = S.chart if hasattr(S, "chart") else S[0].chart
    df = ext_d(DifferentialForm.scalar(chart, f))
    return reduce_mod(df, S).is_zero()


def potential(a: DifferentialForm) -> Scalar:
    """f with df = a and f(0) = 0, for closed polynomial 1-forms."""
    if a.degree != 1:
        raise ValueError("potential needs a 1-form")
    chart = a.chart
    for c in a.terms.values():
        if has_aux(chart, c) or not is_polynomial(c):
            raise QuadratureUnsupported("quadrature unsupported; use verify mode")
    if ext_d(a):
        raise NotClosedError("not closed")
    gens = chart.field.gens
    total = chart.zero
    for (i,), c in a.terms.items():
        scale = c.denom.LC
        for monom, coeff in c.numer.terms():
            deg = sum(monom)
            term = chart.field(QQ(coeff) / QQ(scale) / (deg + 1))
            for g, e in zip(gens, monom):
                if e:
                    term = term * g**e
            total = total + term * gens[i]
    return total


# -- expression in first integrals ----------------------------------------------


@dataclass
class IntegralExpression:
    """sum_k mixing[k] theta^k = sum_j coefficients[j] du^j for one target generator.

    ``in_integrals[j]`` is the same coefficient written as a polynomial in the
    integrals (an element of QQ(u1, ..., um)), or None when no low-degree
    polynomial was found.
    """

    target: int
    mixing: list[Scalar]
    coefficients: list[Scalar]
    in_integrals: list
    functional: bool

    def render(self, form_names: Sequence[str], integral_names: Sequence[str]) -> str:
        order = [self.target] + [k for k in range(len(self.mixing)) if k != self.target]
        lhs = render_combination([(self.mixing[k], form_names[k]) for k in order])
        pairs = []
        for j, (c, poly) in enumerate(zip(self.coefficients, self.in_integrals)):
            pairs.append((poly if poly is not None else c, f"d{integral_names[j]}"))
        return f"{lhs} = {render_combination(pairs)}"


def _monomials(chart: Chart, degree: int) -> list[Scalar]:
    gens = chart.gens()
    out = [chart.one]
    for d in range(1, degree + 1):
        for combo in combinations_with_replacement(range(len(gens)), d):
            m = chart.one
            for i in combo:
                m = m * gens[i]
            out.append(m)
    return out


def _linear_equations(exprs: Sequence[Sequence[Scalar]], nunk: int) -> list[list[Fraction]]:
    """Rows over QQ from scalars sum_u exprs[e][u] * lambda_u (+ constant in slot nunk).

    Each scalar combination must vanish identically; denominators are cleared
    and monomial coefficients read off.
    """
    rows: list[list[Fraction]] = []
    for comb in exprs:
        # common denominator of all entries
        nonzero = [c for c in comb if c]
        if not nonzero:
            continue
        den = None
        for c in nonzero:
            den = c.denom if den is None else den.lcm(c.denom)
        by_monom: dict = {}
        for u, c in enumerate(comb):
            if not c:
                continue
            num = c.numer * den.quo(c.denom)
            for monom, coeff in num.terms():
                row = by_monom.setdefault(monom, [Fraction(0)] * (nunk + 1))
                q = QQ(coeff)
                row[u] += Fraction(int(q.numerator), int(q.denominator))
        rows.extend(by_monom.values())
    return rows


def _integral_field(names: Sequence[str]) -> FracField:
    return FracField(list(names), QQ, grlex)


def _as_polynomial_in(chart: Chart, target: Scalar, integrals: Sequence[Scalar],
                      names: Sequence[str], max_degree: int = 3):
    """Write ``target`` as a polynomial in the integrals, if one of low degree exists."""
    m = len(integrals)
    combos = [()]
    for d in range(1, max_degree + 1):
        combos.extend(combinations_with_replacement(range(m), d))
    values = []
    for combo in combos:
        v = chart.one
        for i in combo:
            v = v * integrals[i]
        values.append(v)
    # target - sum kappa_b value_b = 0 ; unknowns kappa, constant column holds target
    comb = [-v for v in values] + [target]
    rows = _linear_equations([comb], len(values))
    if rows:
        sol = linalg.solve([r[:-1] for r in rows], [-r[-1] for r in rows], Fraction(0))
        if sol is None:
            return None
    else:
        sol = [Fraction(0)] * len(values)
    K = _integral_field(names)
    expr = K.zero
    for combo, k in zip(combos, sol):
        if not k:
            continue
        term = K(QQ(k.numerator, k.denominator))
        for i in combo:
            term = term * K.gens[i]
        expr = expr + term
    return expr


def express_in_integrals(S: PfaffianSystem, U: Sequence, names: Sequence[str] | None = None,
                         mix_degree: int = 2) -> tuple[list[IntegralExpression], bool]:
    """Rewrite each generator of S, mixed with the others, in the differentials of U."""
    chart = S.chart
    U = [chart.scalar(u) for u in U]
    names = list(names) if names else [f"u{i + 1}" for i in range(len(U))]
    du = [ext_d(DifferentialForm.scalar(chart, u)) for u in U]
    m = len(du)
    if span_rank(du) < m:
        raise RankError("differentials of the integrals are dependent")
    frame, _ = completion_frame(du)
    volume = wedge_all(du, chart)
    n = len(S.forms)
    coords = [S.forms[k] for k in range(n)]
    results: list[IntegralExpression] = []
    verdict = True
    for i in range(n):
        found = None
        for D in range(mix_degree + 1):
            found = _search_mixing(chart, coords, i, D, frame, m, volume)
            if found is not None:
                break
        if found is None:
            verdict = False
            results.append(IntegralExpression(i, [chart.one if k == i else chart.zero for k in range(n)],
                                              [], [], False))
            continue
        mixing, B = found
        rendered = [_as_polynomial_in(chart, b, U, names) if b else None for b in B]
        results.append(IntegralExpression(i, mixing, B, rendered, True))
    mixed = [sum((coords[k] * results[i].mixing[k] for k in range(n)), DifferentialForm(chart, 1))
             for i in range(n) if results[i].functional]
    if len(mixed) == n and span_rank(mixed) < n:
        verdict = False
    return results, verdict


def _search_mixing(chart: Chart, forms, target: int, D: int, frame: Frame, m: int, volume):
    n = len(forms)
    monos = _monomials(chart, D)
    others = [k for k in range(n) if k != target]
    nunk = len(others) * len(monos)
    # expansion of each generator in the du-completed frame
    exps = [frame.expand(f) for f in forms]

    def coeff_vec(k):
        return [exps[k].get((j,), chart.zero) for j in range(chart.dim)]

    vec_t = coeff_vec(target)
    vecs = {k: coeff_vec(k) for k in others}
    # membership in span{du}: frame coefficients beyond m vanish
    combos: list[list[Scalar]] = []
    for j in range(m, chart.dim):
        row = []
        for k in others:
            for mono in monos:
                row.append(vecs[k][j] * mono)
        row.append(vec_t[j])
        combos.append(row)
    # dB_j ^ du^1 ^ ... ^ du^m = 0 for each j < m, linear in the unknowns
    for j in range(m):
        pieces = []
        for k in others:
            for mono in monos:
                pieces.append(vecs[k][j] * mono)
        pieces.append(vec_t[j])
        wedges = [DifferentialForm.scalar(chart, 0) if not c else
                  _wedge_d(chart, c, volume) for c in pieces]
        keys = sorted({key for w in wedges for key in w.terms})
        for key in keys:
            combos.append([w.terms.get(key, chart.zero) for w in wedges])
    rows = _linear_equations(combos, nunk)
    if rows:
        sol = linalg.solve([r[:-1] for r in rows], [-r[-1] for r in rows], Fraction(0))
        if sol is None:
            return None
    else:
        sol = [Fraction(0)] * nunk
    mixing = []
    idx = 0
    for k in range(n):
        if k == target:
            mixing.append(chart.one)
            continue
        c = chart.zero
        for mono in monos:
            lam = sol[idx]
            idx += 1
            if lam:
                c = c + mono * chart.scalar(lam)
        mixing.append(c)
    combo = DifferentialForm(chart, 1)
    for k in range(n):
        if mixing[k]:
            combo = combo + forms[k] * mixing[k]
    exp = frame.expand(combo)
    B = [exp.get((j,), chart.zero) for j in range(m)]
    return mixing, B


def _wedge_d(chart: Chart, c: Scalar, volume: DifferentialForm) -> DifferentialForm:
    from .exterior import wedge

    return wedge(ext_d(DifferentialForm.scalar(chart, c)), volume)


def is_functionally_dependent(chart: Chart, f: Scalar, U: Sequence) -> bool:
    """df ^ du^1 ^ ... ^ du^m = 0."""
    du = [ext_d(DifferentialForm.scalar(chart, chart.scalar(u))) for u in U]
    return not _wedge_d(chart, chart.scalar(f), wedge_all(du, chart))


__all__ = [
    "PfaffianSystem",
    "IntegrabilityReport",
    "SolvabilityReport",
    "IntegralExpression",
    "is_completely_integrable",
    "cauchy_system",
    "characteristic_fields",
    "characteristics_agree",
    "is_solvable_system",
    "is_first_integral",
    "potential",
    "express_in_integrals",
    "contains_span",
    "variables",
]
