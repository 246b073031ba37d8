"""Exact Gaussian elimination over any field whose elements support + - * /.

Used with ``fractions.Fraction`` for Lie-algebra work and with chart scalars
(rational functions) for frames and vector fields.  Matrices are lists of
rows.  Pivot choice is deterministic: columns left to right, first nonzero
row.  With ``prefer_constant`` the search takes the first *constant* nonzero
entry of the remaining block when there is one, which keeps generic-point
side conditions to what the problem actually forces.
"""
from __future__ import annotations

from typing import Callable, Sequence

from .scalars import is_constant, record_nonzero


def _is_const(a) -> bool:
    numer = getattr(a, "numer", None)
    if numer is None:
        return True
    return is_constant(a)


def _note(a) -> None:
    if hasattr(a, "numer"):
        record_nonzero(a)


def rref(
    rows: Sequence[Sequence],
    ncols: int | None = None,
    *,
    prefer_constant: bool = False,
    on_pivot: Callable | None = None,
) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns (input is not modified)."""
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    nrows = len(m)
    cols = list(range(ncols))
    while r < nrows and cols:
        choice = None
        if prefer_constant:
            for c in cols:
                for i in range(r, nrows):
                    a = m[i][c]
                    if a and _is_const(a):
                        choice = (i, c)
                        break
                if choice:
                    break
        if choice is None:
            for c in cols:
                for i in range(r, nrows):
                    if m[i][c]:
                        choice = (i, c)
                        break
                if choice:
                    break
        if choice is None:
            break
        i, c = choice
        cols.remove(c)
        m[r], m[i] = m[i], m[r]
        piv = m[r][c]
        _note(piv)
        if on_pivot is not None:
            on_pivot(piv)
        inv = 1 / piv
        m[r] = [a * inv if a else a for a in m[r]]
        for j in range(nrows):
            if j != r and m[j][c]:
                f = m[j][c]
                m[j] = [a - f * b if b else a for a, b in zip(m[j], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(
    rows: Sequence[Sequence], ncols: int, zero=0, one=1, *, prefer_constant: bool = False
) -> list[list]:
    """Basis of {v : rows . v = 0}, one vector per free column (free entry 1)."""
    if not rows:
        return [[one if j == c else zero for j in range(ncols)] for c in range(ncols)]
    m, pivots = rref(rows, ncols, prefer_constant=prefer_constant)
    pivot_row = {c: i for i, c in enumerate(pivots)}
    basis = []
    for free in range(ncols):
        if free in pivot_row:
            continue
        v = [zero] * ncols
        v[free] = one
        for c, i in pivot_row.items():
            a = m[i][free]
            if a:
                v[c] = -a
        basis.append(v)
    return basis


def solve(A: Sequence[Sequence], b: Sequence, zero=0) -> list | None:
    """One solution of A x = b (free variables zero), or None if inconsistent."""
    ncols = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    m, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [zero] * ncols
    for i, c in enumerate(pivots):
        x[c] = m[i][ncols]
    return x


def inverse(M: Sequence[Sequence], zero=0, one=1) -> list[list]:
    n = len(M)
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(M)]
    m, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in m]


def independent_rows(rows: Sequence[Sequence], ncols: int) -> list[int]:
    """Indices of a greedy maximal independent subfamily, in input order."""
    kept: list[int] = []
    basis: list[list] = []
    for i, row in enumerate(rows):
        trial = basis + [list(row)]
        if rank(trial, ncols) == len(trial):
            kept.append(i)
            basis = trial
    return kept


def matmul(A: Sequence[Sequence], B: Sequence[Sequence], zero=0) -> list[list]:
    cols = list(zip(*B))
    out = []
    for row in A:
        out.append([sum((a * b for a, b in zip(row, col) if a and b), zero) for col in cols])
    return out


def det(M: Sequence[Sequence], zero=0, one=1):
    """Determinant by Gaussian elimination over the rationals."""
    m = [list(r) for r in M]
    n = len(m)
    result = one
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        p = m[c][c]
        result = result * p
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / p
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return result
