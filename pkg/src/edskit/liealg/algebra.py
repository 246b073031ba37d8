"""Finite-dimensional Lie algebras over QQ given by structure constants."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .. import linalg

Vector = list[Fraction]


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


class LieAlgebra:
    """Basis X_1..X_N with [X_i, X_j] = sum_k c[i][j][k] X_k.

    ``brackets`` maps 0-based pairs (i, j) to a vector or a sparse dict
    {k: coefficient}.  The opposite pair is filled in by antisymmetry.
    """

    def __init__(self, names: Sequence[str], brackets: Mapping[tuple[int, int], object] | None = None):
        self.names = list(names)
        n = len(self.names)
        zero = [Fraction(0)] * n
        self.c: list[list[Vector]] = [[list(zero) for _ in range(n)] for _ in range(n)]
        seen: dict[tuple[int, int], Vector] = {}
        for (i, j), value in (brackets or {}).items():
            vec = self._vector(value)
            if i == j:
                if any(vec):
                    raise ValueError(f"[{self.names[i]}, {self.names[i]}] must vanish")
                continue
            if (j, i) in seen and seen[(j, i)] != [-a for a in vec]:
                raise ValueError(f"inconsistent brackets for ({i}, {j})")
            seen[(i, j)] = vec
            self.c[i][j] = vec
            self.c[j][i] = [-a for a in vec]

    def _vector(self, value) -> Vector:
        n = len(self.names)
        if isinstance(value, Mapping):
            vec = [Fraction(0)] * n
            for k, a in value.items():
                vec[k] += _frac(a)
            return vec
        vec = [_frac(a) for a in value]
        if len(vec) != n:
            raise ValueError("bracket vector has the wrong length")
        return vec

    @property
    def dim(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim})"

    def basis_vector(self, i: int) -> Vector:
        v = [Fraction(0)] * self.dim
        v[i] = Fraction(1)
        return v

    def bracket(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                for k, c in enumerate(self.c[i][j]):
                    if c:
                        out[k] += ab * c
        return out

    def ad(self, u: Sequence[Fraction]) -> list[list[Fraction]]:
        """Matrix of ad(u) (columns are images of basis vectors)."""
        cols = [self.bracket(u, self.basis_vector(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def nonzero_brackets(self) -> list[tuple[int, int, Vector]]:
        return [(i, j, self.c[i][j]) for i, j in combinations(range(self.dim), 2) if any(self.c[i][j])]

    def is_antisymmetric(self) -> bool:
        n = self.dim
        return all(
            self.c[i][j] == [-a for a in self.c[j][i]] for i in range(n) for j in range(n)
        )

    def relabeled(self, order: Sequence[int]) -> "LieAlgebra":
        """Same algebra with basis (X_order[0], X_order[1], ...)."""
        pos = {old: new for new, old in enumerate(order)}
        brackets = {}
        for i, j, vec in self.nonzero_brackets():
            brackets[(pos[i], pos[j])] = {pos[k]: a for k, a in enumerate(vec) if a}
        return LieAlgebra([self.names[o] for o in order], brackets)

    @classmethod
    def from_matrices(cls, names: Sequence[str], mats: Sequence[Sequence[Sequence]]) -> "LieAlgebra":
        """Structure constants of a matrix Lie algebra (commutator bracket)."""
        flat = [[_frac(a) for row in m for a in row] for m in mats]
        cols = [list(col) for col in zip(*flat)]  # size^2 x N
        brackets = {}
        for i, j in combinations(range(len(mats)), 2):
            comm = matrix_commutator(mats[i], mats[j])
            target = [a for row in comm for a in row]
            sol = linalg.solve(cols, target, Fraction(0))
            if sol is None:
                raise ValueError(f"matrices not closed under commutator at ({i}, {j})")
            brackets[(i, j)] = sol
        return cls(names, brackets)


def matrix_commutator(a, b) -> list[list[Fraction]]:
    ab = linalg.matmul(a, b, Fraction(0))
    ba = linalg.matmul(b, a, Fraction(0))
    return [[_frac(x) - _frac(y) for x, y in zip(r1, r2)] for r1, r2 in zip(ab, ba)]


# -- checks ------------------------------------------------------------------------


@dataclass
class JacobiReport:
    ok: bool
    triple: tuple[int, int, int] | None = None
    value: Vector | None = None

    def __bool__(self) -> bool:
        return self.ok


def jacobi_check(L: LieAlgebra) -> JacobiReport:
    n = L.dim
    e = [L.basis_vector(i) for i in range(n)]
    for i, j, k in combinations(range(n), 3):
        t1 = L.bracket(L.c[i][j], e[k])
        t2 = L.bracket(L.c[j][k], e[i])
        t3 = L.bracket(L.c[k][i], e[j])
        s = [a + b + c for a, b, c in zip(t1, t2, t3)]
        if any(s):
            return JacobiReport(False, (i, j, k), s)
    return JacobiReport(True)


def killing_form(L: LieAlgebra) -> list[list[Fraction]]:
    ads = [L.ad(L.basis_vector(i)) for i in range(L.dim)]
    n = L.dim
    B = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            prod = linalg.matmul(ads[i], ads[j], Fraction(0))
            t = sum((prod[k][k] for k in range(n)), Fraction(0))
            B[i][j] = B[j][i] = t
    return B


def bilinear(B, u, v) -> Fraction:
    return sum((u[i] * B[i][j] * v[j] for i in range(len(u)) for j in range(len(v)) if u[i] and v[j]),
               Fraction(0))


def is_semisimple(L: LieAlgebra) -> bool:
    return linalg.det(killing_form(L), Fraction(0), Fraction(1)) != 0


def derived_span(L: LieAlgebra, a: Sequence[Vector], b: Sequence[Vector]) -> list[Vector]:
    vecs = [L.bracket(u, v) for u in a for v in b]
    return _basis_of(vecs, L.dim)


def _basis_of(vecs: Sequence[Vector], n: int) -> list[Vector]:
    vecs = [v for v in vecs if any(v)]
    if not vecs:
        return []
    R, piv = linalg.rref(vecs, n)
    return [R[i] for i in range(len(piv))]


def lower_central_series(L: LieAlgebra, limit: int | None = None) -> list[int]:
    """Dimensions of L, [L, L], [L, [L, L]], ... until they stabilise."""
    full = [L.basis_vector(i) for i in range(L.dim)]
    cur = full
    dims = [len(cur)]
    for _ in range(limit or L.dim + 1):
        cur = derived_span(L, full, cur)
        dims.append(len(cur))
        if not cur or len(cur) == dims[-2]:
            break
    return dims


def is_nilpotent(L: LieAlgebra) -> bool:
    return lower_central_series(L)[-1] == 0


def is_subalgebra(L: LieAlgebra, basis: Sequence[Vector]) -> bool:
    if not basis:
        return True
    r = linalg.rank(basis, L.dim)
    for u in basis:
        for v in basis:
            if linalg.rank(list(basis) + [L.bracket(u, v)], L.dim) > r:
                return False
    return True


# -- gradings ----------------------------------------------------------------------


@dataclass
class GradingReport:
    ok: bool
    witness: tuple[int, int] | None = None
    fundamental: bool = False
    depth: int = 0
    negative_dims: dict[int, int] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def grading_check(L: LieAlgebra, degrees: Sequence[int]) -> GradingReport:
    """[g_i, g_j] inside g_{i+j}; also whether g_{-1} generates the negative part."""
    if len(degrees) != L.dim:
        raise ValueError("one degree per basis vector expected")
    for i, j, vec in L.nonzero_brackets():
        want = degrees[i] + degrees[j]
        if any(a and degrees[k] != want for k, a in enumerate(vec)):
            return GradingReport(False, (i, j))
    negs = sorted({d for d in degrees if d < 0}, reverse=True)
    depth = -min(negs) if negs else 0
    ndims = {d: degrees.count(d) for d in negs}
    fundamental = False
    if negs and -1 in ndims:
        gen = [L.basis_vector(i) for i, d in enumerate(degrees) if d == -1]
        span = list(gen)
        layer = gen
        for _ in range(depth):
            layer = derived_span(L, gen, layer)
            span = _basis_of(span + layer, L.dim)
        neg_dim = sum(ndims.values())
        fundamental = len(span) == neg_dim
    return GradingReport(True, None, fundamental, depth, ndims)


def random_vector(rng: random.Random, n: int, span: int = 5) -> Vector:
    while True:
        v = [Fraction(rng.randint(-span, span), rng.randint(1, 3)) for _ in range(n)]
        if any(v):
            return v
