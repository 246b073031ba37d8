"""Linear Lie algebras: spans of rational square matrices."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .. import linalg
from .algebra import matrix_commutator

Matrix = list[list[Fraction]]


def _flat(m) -> list[Fraction]:
    return [Fraction(a) for row in m for a in row]


class LinearLieAlgebra:
    """Subalgebra of gl(n) spanned by the given matrices (a basis is extracted)."""

    def __init__(self, size: int, generators: Sequence[Sequence[Sequence]], names: Sequence[str] | None = None):
        self.size = size
        mats = [[[Fraction(a) for a in row] for row in g] for g in generators]
        for g in mats:
            if len(g) != size or any(len(r) != size for r in g):
                raise ValueError(f"generators must be {size}x{size}")
        self.generators = mats
        self.names = list(names) if names else [f"A{i + 1}" for i in range(len(mats))]
        keep = linalg.independent_rows([_flat(g) for g in mats], size * size) if mats else []
        self.basis: list[Matrix] = [mats[i] for i in keep]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __repr__(self) -> str:
        return f"LinearLieAlgebra(size={self.size}, dim={self.dim})"

    def contains(self, m) -> bool:
        rows = [_flat(b) for b in self.basis]
        return linalg.rank(rows + [_flat(m)], self.size ** 2) == len(rows)

    def coordinates(self, m) -> list[Fraction] | None:
        cols = [list(c) for c in zip(*[_flat(b) for b in self.basis])]
        if not cols:
            return [] if not any(_flat(m)) else None
        return linalg.solve(cols, _flat(m), Fraction(0))

    def closure_witness(self) -> tuple[int, int] | None:
        for i, a in enumerate(self.basis):
            for j in range(i + 1, len(self.basis)):
                if not self.contains(matrix_commutator(a, self.basis[j])):
                    return (i, j)
        return None

    def is_closed(self) -> bool:
        return self.closure_witness() is None

    def dual(self) -> "LinearLieAlgebra":
        """Contragredient action: X acts by -X^T."""
        mats = [[[-g[j][i] for j in range(self.size)] for i in range(self.size)] for g in self.generators]
        return LinearLieAlgebra(self.size, mats, self.names)

    def degree_part(self, degrees: Sequence[int], degree: int = 0) -> "LinearLieAlgebra":
        """Projection of every element onto entries raising the grading by ``degree``.

        Entry (i, j) maps basis vector j to basis vector i, so it has degree
        degrees[i] - degrees[j].
        """
        mats = []
        for g in self.generators:
            mats.append([
                [g[i][j] if degrees[i] - degrees[j] == degree else Fraction(0) for j in range(self.size)]
                for i in range(self.size)
            ])
        return LinearLieAlgebra(self.size, mats, self.names)

    def permuted(self, order: Sequence[int]) -> "LinearLieAlgebra":
        """Same algebra written in the basis (e_order[0], e_order[1], ...)."""
        mats = [[[g[order[i]][order[j]] for j in range(self.size)] for i in range(self.size)]
                for g in self.generators]
        return LinearLieAlgebra(self.size, mats, self.names)


def gl(n: int) -> LinearLieAlgebra:
    mats = []
    for i in range(n):
        for j in range(n):
            m = [[Fraction(0)] * n for _ in range(n)]
            m[i][j] = Fraction(1)
            mats.append(m)
    return LinearLieAlgebra(n, mats)


def jk_blocks(dims: Sequence[int]) -> list[int]:
    """Block index of each basis vector for blocks V_-1, V_0, ..., V_{k-1}, V_k^0."""
    out = []
    for b, d in enumerate(dims):
        out += [b] * d
    return out


def jk_allowed(dims: Sequence[int]):
    """Predicate (row, col) -> whether the entry may be nonzero in J_k(W_k^0).

    Columns in V_-1 may reach V_-1 and V_k^0; columns in V_j (j >= 0) may only
    reach V_j, ..., V_k^0.  This is exactly: preserve V_-1 + V_k^0 and every
    D^p = V_p + ... + V_k^0.
    """
    blocks = jk_blocks(dims)
    last = len(dims) - 1

    def ok(r: int, c: int) -> bool:
        br, bc = blocks[r], blocks[c]
        if bc == 0:
            return br in (0, last)
        return br >= bc

    return ok


def jk_violation(m, dims: Sequence[int]) -> tuple[int, int] | None:
    n = sum(dims)
    if len(m) != n or any(len(r) != n for r in m):
        raise ValueError(f"matrix size {len(m)} does not match block dims {list(dims)} (total {n})")
    ok = jk_allowed(dims)
    for r in range(n):
        for c in range(n):
            if m[r][c] and not ok(r, c):
                return (r, c)
    return None


def jk_membership(m, dims: Sequence[int]) -> bool:
    return jk_violation(m, dims) is None
