"""The jet algebra W_k(V_-1, V_0) and its restrictions W_k^0.

V_p is modelled as V_0-valued homogeneous polynomials of degree p on V_-1,
written in the divided-power basis x^a / a!.  For a basis vector e_i of
V_-1 the bracket is [e_i, m] = -(d/dx_i) m, so (n, m) = (2, 1), k = 2 gives
the basis x, y | 1 | x, y | x^2/2, x*y, y^2/2 with [X1, X6] = -X4.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from math import comb
from typing import Sequence

from .. import linalg
from .algebra import LieAlgebra, Vector, _basis_of, is_subalgebra, random_vector


def monomials(n: int, p: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree p in n variables, graded-lex descending."""
    out = []
    for combo in combinations_with_replacement(range(n), p):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(set(out), reverse=True)


@dataclass
class JetSpec:
    n: int  # dim V_-1
    m: int  # dim V_0
    k: int
    vk0: list[Vector] | None = None  # basis of V_k^0 in the canonical basis of V_k

    def __post_init__(self):
        if self.n < 1 or self.m < 1 or self.k < 1:
            raise ValueError("dimensions and order must be positive")
        if self.vk0 is not None:
            self.vk0 = [[Fraction(a) for a in v] for v in self.vk0]
            full = self.dim_v(self.k)
            if any(len(v) != full for v in self.vk0):
                raise ValueError(f"V_k^0 vectors must have length {full}")
            if self.vk0 and linalg.rank(self.vk0, full) < len(self.vk0):
                raise ValueError("V_k^0 basis is dependent")

    def dim_v(self, p: int) -> int:
        if p == -1:
            return self.n
        return self.m * comb(self.n + p - 1, p)

    def block_dims(self) -> list[int]:
        """Dimensions of V_-1, V_0, ..., V_{k-1}, V_k^0 (or V_k)."""
        dims = [self.dim_v(p) for p in range(-1, self.k)]
        dims.append(len(self.vk0) if self.vk0 is not None else self.dim_v(self.k))
        return dims


@dataclass
class JetAlgebra:
    spec: JetSpec
    full: LieAlgebra  # W_k
    full_degrees: list[int]
    algebra: LieAlgebra  # W_k^0 (equal to full without V_k^0)
    degrees: list[int]
    embedding: list[Vector]  # W_k^0 basis in the W_k basis
    basis_labels: list[str] = field(default_factory=list)

    def blocks(self) -> list[list[int]]:
        """Index lists of V_-1, V_0, ..., V_k^0 inside ``algebra``."""
        out = []
        for p in range(-1, self.spec.k + 1):
            out.append([i for i, d in enumerate(self.degrees) if d == p])
        return out

    def full_blocks(self) -> list[list[int]]:
        return [[i for i, d in enumerate(self.full_degrees) if d == p] for p in range(-1, self.spec.k + 1)]


def _divided_power_label(e: tuple[int, ...], b: int, m: int) -> str:
    names = "xyzw" if len(e) <= 4 else None
    parts = []
    den = 1
    for i, a in enumerate(e):
        if a:
            v = names[i] if names else f"x{i + 1}"
            parts.append(v if a == 1 else f"{v}^{a}")
            for t in range(2, a + 1):
                den *= t
    mono = "*".join(parts) or "1"
    if den != 1:
        mono = f"{mono}/{den}"
    return mono if m == 1 else f"{mono}*f{b + 1}"


def build_Wk(spec: JetSpec) -> JetAlgebra:
    n, m, k = spec.n, spec.m, spec.k
    # basis of W_k: (degree, exponent, v0 index)
    basis: list[tuple[int, tuple[int, ...] | int, int]] = []
    for i in range(n):
        basis.append((-1, i, 0))
    for p in range(0, k + 1):
        for e in monomials(n, p):
            for b in range(m):
                basis.append((p, e, b))
    index = {(d, e, b): i for i, (d, e, b) in enumerate(basis)}
    brackets = {}
    for i in range(n):
        for j, (d, e, b) in enumerate(basis):
            if d < 1:
                continue
            if e[i] == 0:
                continue
            lower = list(e)
            lower[i] -= 1
            # d/dx_i of x^e/e! is x^(e - 1_i)/(e - 1_i)!
            brackets[(i, j)] = {index[(d - 1, tuple(lower), b)]: Fraction(-1)}
    names = [f"X{i + 1}" for i in range(len(basis))]
    full = LieAlgebra(names, brackets)
    full_degrees = [d for d, _, _ in basis]
    labels = []
    for d, e, b in basis:
        if d == -1:
            labels.append(f"e{e + 1}")
        else:
            labels.append(_divided_power_label(e, b, m))
    if spec.vk0 is None:
        emb = [full.basis_vector(i) for i in range(full.dim)]
        return JetAlgebra(spec, full, full_degrees, full, list(full_degrees), emb, labels)
    top = [i for i, d in enumerate(full_degrees) if d == k]
    emb = [full.basis_vector(i) for i, d in enumerate(full_degrees) if d < k]
    for v in spec.vk0:
        w = [Fraction(0)] * full.dim
        for t, a in zip(top, v):
            w[t] = a
        emb.append(w)
    restricted = _restrict(full, emb)
    degrees = [d for d in full_degrees if d < k] + [k] * len(spec.vk0)
    return JetAlgebra(spec, full, full_degrees, restricted, degrees, emb, labels)


def _restrict(L: LieAlgebra, emb: Sequence[Vector]) -> LieAlgebra:
    cols = [list(c) for c in zip(*emb)]
    brackets = {}
    for i in range(len(emb)):
        for j in range(i + 1, len(emb)):
            v = L.bracket(emb[i], emb[j])
            if not any(v):
                continue
            sol = linalg.solve(cols, v, Fraction(0))
            if sol is None:
                raise ValueError("subspace is not a subalgebra")
            brackets[(i, j)] = sol
    return LieAlgebra([f"X{i + 1}" for i in range(len(emb))], brackets)


# -- structural checks on W_k ----------------------------------------------------


@dataclass
class Prop41Report:
    surjective: bool
    kernel_trivial: bool
    closed: bool
    details: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.surjective and self.kernel_trivial and self.closed

    def __bool__(self) -> bool:
        return self.ok


def prop41_checks(W: JetAlgebra, seed: int = 0) -> Prop41Report:
    """(i) [X_-1, V_p] = V_{p-1}; (ii) X_p commuting with V_-1 vanishes; (iii) W_k^0 closed."""
    L = W.full
    blocks = W.full_blocks()  # V_-1, V_0, ..., V_k
    details: list[str] = []
    rng = random.Random(seed)
    probes = [L.basis_vector(i) for i in blocks[0]]
    r = random_vector(rng, len(blocks[0]))
    gen = [Fraction(0)] * L.dim
    for i, a in zip(blocks[0], r):
        gen[i] = a
    probes.append(gen)
    surjective = True
    for p in range(1, W.spec.k + 1):
        target = blocks[p]  # V_{p-1} sits at list position p
        for x in probes:
            imgs = [L.bracket(x, L.basis_vector(j)) for j in blocks[p + 1]]
            rank = linalg.rank(imgs, L.dim) if imgs else 0
            inside = all(all(not a or i in target for i, a in enumerate(v)) for v in imgs)
            if rank != len(target) or not inside:
                surjective = False
                details.append(f"(i) fails for p={p}")
                break
    kernel_trivial = True
    for p in range(1, W.spec.k + 1):
        # rows: coordinates of [e_i, X] stacked over i, columns: X in V_p
        cols = []
        for j in blocks[p + 1]:
            col = []
            for i in blocks[0]:
                col.extend(L.bracket(L.basis_vector(i), L.basis_vector(j)))
            cols.append(col)
        rows = [list(r) for r in zip(*cols)]
        if linalg.rank(rows, len(cols)) < len(cols):
            kernel_trivial = False
            details.append(f"(ii) fails for p={p}")
    closed = is_subalgebra(L, W.embedding)
    if not closed:
        details.append("(iii) W_k^0 not closed")
    return Prop41Report(surjective, kernel_trivial, closed, details)


# -- involutivity ------------------------------------------------------------------


def _symbol_action(spec: JetSpec) -> tuple[list[list[Vector]], int]:
    """act[b][u] = X_b(e_u) in V_{k-1} coordinates, X_b ranging over V_k^0."""
    W = build_Wk(JetSpec(spec.n, spec.m, spec.k))
    L = W.full
    blocks = W.full_blocks()
    top, below = blocks[spec.k + 1], blocks[spec.k]
    vk0 = spec.vk0 if spec.vk0 is not None else [
        [Fraction(int(i == j)) for j in range(len(top))] for i in range(len(top))
    ]
    act = []
    for v in vk0:
        x = [Fraction(0)] * L.dim
        for t, a in zip(top, v):
            x[t] = a
        row = []
        for u in blocks[0]:
            # X_k(u) = [X_k, u] = -[u, X_k]
            img = L.bracket(L.basis_vector(u), x)
            row.append([-img[i] for i in below])
        act.append(row)
    return act, len(below)


@dataclass
class InvolutivityReport:
    involutive: bool
    prolongation_dim: int
    flag: list[Vector] | None
    step_dims: list[int]
    tried: int

    def __bool__(self) -> bool:
        return self.involutive


def prolongation_dim(spec: JetSpec) -> int:
    act, nb = _symbol_action(spec)
    r, n = len(act), spec.n
    # unknown xi[u][b]: X(e_u) = sum_b xi[u][b] v_b ; X(e_u)(e_w) = X(e_w)(e_u)
    rows = []
    for u in range(n):
        for w in range(u + 1, n):
            for c in range(nb):
                row = [Fraction(0)] * (n * r)
                for b in range(r):
                    row[u * r + b] += act[b][w][c]
                    row[w * r + b] -= act[b][u][c]
                rows.append(row)
    if not rows or r == 0:
        return n * r
    return n * r - linalg.rank(rows, n * r)


def annihilated_dim(spec: JetSpec, U: Sequence[Vector]) -> int:
    """dim V_k^0(U) = dim {X in V_k^0 : X(u) = 0 for u in U}."""
    act, nb = _symbol_action(spec)
    r = len(act)
    if r == 0:
        return 0
    if not U:
        return r
    rows = []
    for u in U:
        for c in range(nb):
            rows.append([sum((u[i] * act[b][i][c] for i in range(spec.n)), Fraction(0)) for b in range(r)])
    return r - linalg.rank(rows, r)


def vk0_involutive(spec: JetSpec, seed: int = 0) -> InvolutivityReport:
    target = prolongation_dim(spec)
    n = spec.n
    flags: list[list[Vector]] = []
    for perm in permutations(range(n)):
        flags.append([[Fraction(int(i == j)) for i in range(n)] for j in perm])
    rng = random.Random(seed)
    while True:
        rows = [random_vector(rng, n) for _ in range(n)]
        if linalg.rank(rows, n) == n:
            break
    flags.append(rows)
    best = None
    for count, flag in enumerate(flags, 1):
        dims = [annihilated_dim(spec, flag[:i]) for i in range(n + 1)]
        if best is None:
            best = (flag, dims)
        if sum(dims) == target:
            return InvolutivityReport(True, target, flag, dims, count)
    return InvolutivityReport(False, target, None, best[1] if best else [], len(flags))


def symmetric_closed_form(spec: JetSpec) -> tuple[int, int]:
    """(dim V_{k+1}, sum_i dim V_k(U_i)) for the full symbol."""
    n, m, k = spec.n, spec.m, spec.k
    return m * comb(n + k, k + 1), sum(m * comb(n - i + k - 1, k) for i in range(n + 1))


__all__ = [
    "JetSpec",
    "JetAlgebra",
    "build_Wk",
    "prop41_checks",
    "Prop41Report",
    "vk0_involutive",
    "InvolutivityReport",
    "prolongation_dim",
    "annihilated_dim",
    "monomials",
    "symmetric_closed_form",
    "_basis_of",
]
