"""Differential Lie algebras: certification and the semisimple |1|-graded construction."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .. import linalg
from ..errors import Refusal
from .algebra import LieAlgebra, bilinear, grading_check, is_semisimple, is_subalgebra, killing_form
from .jets import JetSpec, build_Wk
from .linear import jk_allowed, jk_violation

Matrix = list[list[Fraction]]


@dataclass
class DLACertificate:
    ok: bool
    order: int
    fundamental: bool
    failures: list[str] = field(default_factory=list)
    isotropy: list[Matrix] = field(default_factory=list)
    S: list[Matrix] = field(default_factory=list)  # S(X) for X in M, in M coordinates

    def __bool__(self) -> bool:
        return self.ok


def _model_bracket(spec: JetSpec) -> LieAlgebra:
    return build_Wk(spec).algebra


def _m_component(J: LieAlgebra, vec: Sequence[Fraction], m_labels: Sequence[int]) -> list[Fraction]:
    return [vec[i] for i in m_labels]


def check_differential_lie_algebra(J: LieAlgebra, m_labels: Sequence[int], j0_labels: Sequence[int],
                                   spec: JetSpec) -> DLACertificate:
    """Decide whether (J, M, J0) is a differential Lie algebra modelled on W_k^0(spec).

    ``m_labels`` lists the J-indices forming M in the basis order of W_k^0
    (V_-1, V_0, ..., V_{k-1}, then V_k^0); ``j0_labels`` the rest.
    The M-component of a bracket is its projection along J0.
    """
    m_labels, j0_labels = list(m_labels), list(j0_labels)
    dims = spec.block_dims()
    failures: list[str] = []
    if sorted(m_labels + j0_labels) != list(range(J.dim)):
        raise Refusal("M and J0 labels must partition the basis")
    j0_basis = [J.basis_vector(i) for i in j0_labels]
    if not is_subalgebra(J, j0_basis):
        failures.append("J0 is not a subalgebra")
    if len(m_labels) != sum(dims):
        failures.append(f"M has dimension {len(m_labels)} but the jet model has {sum(dims)} (blocks {dims})")
        return DLACertificate(False, spec.k, not j0_labels, failures)
    n = len(m_labels)
    iso = []
    for x0 in j0_labels:
        rho = [[Fraction(0)] * n for _ in range(n)]
        for c, mc in enumerate(m_labels):
            comp = _m_component(J, J.c[x0][mc], m_labels)
            for r in range(n):
                rho[r][c] = comp[r]
        iso.append(rho)
        bad = jk_violation(rho, dims)
        if bad is not None:
            failures.append(
                f"isotropy of {J.names[x0]} leaves J_k: [{J.names[x0]}, {J.names[m_labels[bad[1]]]}] "
                f"has a {J.names[m_labels[bad[0]]]} component"
            )
    if failures:
        return DLACertificate(False, spec.k, not j0_labels, failures, iso)
    S = solve_S(J, m_labels, spec)
    return DLACertificate(True, spec.k, not j0_labels, [], iso, S)


def solve_S(J: LieAlgebra, m_labels: Sequence[int], spec: JetSpec) -> list[Matrix]:
    """Find S: M -> J_k(W_k^0) with (dS)(X, Y) = alpha(X, Y) - [X, Y]_0, or refuse."""
    dims = spec.block_dims()
    model = _model_bracket(spec)
    n = len(m_labels)
    ok = jk_allowed(dims)
    slots = [(x, r, c) for x in range(n) for r in range(n) for c in range(n) if ok(r, c)]
    where = {s: t for t, s in enumerate(slots)}
    rows, rhs, tags = [], [], []
    for a in range(n):
        for b in range(a + 1, n):
            alpha = _m_component(J, J.c[m_labels[a]][m_labels[b]], m_labels)
            target = [x - y for x, y in zip(alpha, model.c[a][b])]
            for r in range(n):
                row = [Fraction(0)] * len(slots)
                # S(X_a)(X_b) - S(X_b)(X_a), component r
                if (a, r, b) in where:
                    row[where[(a, r, b)]] += 1
                if (b, r, a) in where:
                    row[where[(b, r, a)]] -= 1
                rows.append(row)
                rhs.append(target[r])
                tags.append((a, b, r))
    sol = linalg.solve(rows, rhs, Fraction(0)) if slots else (
        [] if not any(rhs) else None
    )
    if sol is None:
        raise Refusal(_first_violation(J, m_labels, rows, rhs, tags))
    S = []
    for x in range(n):
        m = [[Fraction(0)] * n for _ in range(n)]
        for r in range(n):
            for c in range(n):
                if (x, r, c) in where:
                    m[r][c] = sol[where[(x, r, c)]]
        S.append(m)
    return S


def _first_violation(J, m_labels, rows, rhs, tags) -> str:
    """Smallest prefix of the system that is already inconsistent, named by its last equation."""
    names = [J.names[i] for i in m_labels]
    ncols = len(rows[0]) if rows else 0
    for t in range(len(rows)):
        sub = rows[: t + 1]
        if not ncols:
            if rhs[t]:
                break
            continue
        if linalg.solve(sub, rhs[: t + 1], Fraction(0)) is None:
            break
    a, b, r = tags[t]
    return (f"no S with dS = alpha - [,]_0: the {names[r]} component of "
            f"S({names[a]})({names[b]}) - S({names[b]})({names[a]}) must be {rhs[t]}, "
            f"which J_k does not allow")


def partial_S(S: Sequence[Matrix], x: Sequence[Fraction], y: Sequence[Fraction]) -> list[Fraction]:
    """(dS)(X, Y) = S(X)(Y) - S(Y)(X) for coordinate vectors X, Y."""
    n = len(x)

    def apply(vec, arg):
        m = [[sum((vec[t] * S[t][r][c] for t in range(n) if vec[t]), Fraction(0)) for c in range(n)]
             for r in range(n)]
        return [sum((m[r][c] * arg[c] for c in range(n) if arg[c]), Fraction(0)) for r in range(n)]

    return [p - q for p, q in zip(apply(x, y), apply(y, x))]


# -- semisimple |1|-graded algebras --------------------------------------------------


@dataclass
class SemisimpleWitness:
    S: dict[int, Matrix]  # J index -> S(X) as a matrix on J coordinates
    verified: bool
    h_injective: bool
    killing_zero_blocks: bool
    order: list[int]  # J indices ordered J_-1, J_0, J_1
    failures: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.verified and self.h_injective


def construct_S_semisimple(J: LieAlgebra, degrees: Sequence[int]) -> SemisimpleWitness:
    if not is_semisimple(J):
        raise Refusal("algebra is not semisimple (Killing form is degenerate)")
    if any(d not in (-1, 0, 1) for d in degrees):
        raise Refusal("degrees must lie in {-1, 0, 1}")
    g = grading_check(J, degrees)
    if not g.ok:
        raise Refusal(f"not a grading: bracket of {J.names[g.witness[0]]}, {J.names[g.witness[1]]}")
    low = [i for i, d in enumerate(degrees) if d == -1]
    mid = [i for i, d in enumerate(degrees) if d == 0]
    high = [i for i, d in enumerate(degrees) if d == 1]
    if not low or not high:
        raise Refusal("grading has no degree -1 or degree 1 part")
    n = J.dim
    # S vanishes on J_-1 and J_1; S(X_0) = ad X_0 on J_-1 + J_1 and (1/2) ad X_0 on J_0
    S: dict[int, Matrix] = {}
    for i in range(n):
        m = [[Fraction(0)] * n for _ in range(n)]
        if degrees[i] == 0:
            ad = J.ad(J.basis_vector(i))
            for r in range(n):
                for c in range(n):
                    m[r][c] = ad[r][c] / 2 if degrees[c] == 0 else ad[r][c]
        S[i] = m
    failures = []
    order = low + mid + high
    dims = [len(low), len(mid), len(high)]
    for i in mid:
        perm = [[S[i][order[r]][order[c]] for c in range(n)] for r in range(n)]
        bad = jk_violation(perm, dims)
        if bad is not None:
            failures.append(f"S({J.names[i]}) leaves J_1")
    Smat = [S[i] for i in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            # [X, Y]_0 is nonzero only on J_1 x J_-1, where h(X_1)(X_-1) = [X_1, X_-1]
            if {degrees[a], degrees[b]} == {-1, 1}:
                flat0 = list(J.c[a][b])
            else:
                flat0 = [Fraction(0)] * n
            rhs = partial_S(Smat, J.basis_vector(a), J.basis_vector(b))
            total = [x + y for x, y in zip(flat0, rhs)]
            if total != J.c[a][b]:
                failures.append(f"[{J.names[a]}, {J.names[b]}] != [,]_0 + dS")
    # h: J_1 -> Hom(J_-1, J_0) injective
    rows = []
    for x in high:
        rows.append([J.c[x][y][z] for y in low for z in mid])
    h_inj = linalg.rank(rows, len(low) * len(mid)) == len(high)
    B = killing_form(J)
    kz = all(bilinear(B, J.basis_vector(x), J.basis_vector(y)) == 0 for x in high for y in mid + high)
    kz = kz and all(bilinear(B, J.basis_vector(x), J.basis_vector(y)) == 0 for x in low for y in mid + low)
    return SemisimpleWitness(S, not failures, h_inj, kz, order, failures)
