"""Spencer prolongations of linear Lie algebras and Tanaka prolongations of graded ones."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from .. import linalg
from ..errors import Refusal
from .algebra import GradingReport, LieAlgebra, grading_check, jacobi_check
from .linear import LinearLieAlgebra

# -- Spencer -------------------------------------------------------------------------


def spencer_dim(A: LinearLieAlgebra, p: int) -> int:
    """dim g^(p): maps K from S^p(V) to g with K(u_1..u_p) v symmetric in all slots."""
    n, basis = A.size, A.basis
    r = len(basis)
    if r == 0:
        return 0
    multisets = list(combinations_with_replacement(range(n), p))
    where = {mu: i for i, mu in enumerate(multisets)}
    nunk = len(multisets) * r
    rows = []
    seen = set()
    for mu in multisets:
        for v in range(n):
            for pos in set(mu):
                # K(mu) e_v == K(mu - pos + v) e_pos
                nu = list(mu)
                nu.remove(pos)
                nu = tuple(sorted(nu + [v]))
                key = (min((mu, v), (nu, pos)), max((mu, v), (nu, pos)))
                if key in seen or (mu, v) == (nu, pos):
                    continue
                seen.add(key)
                for comp in range(n):
                    row = [Fraction(0)] * nunk
                    for a, g in enumerate(basis):
                        if g[comp][v]:
                            row[where[mu] * r + a] += g[comp][v]
                        if g[comp][pos]:
                            row[where[nu] * r + a] -= g[comp][pos]
                    if any(row):
                        rows.append(row)
    if not rows:
        return nunk
    return nunk - linalg.rank(rows, nunk)


def spencer_prolong(A: LinearLieAlgebra, iterations: int) -> list[int]:
    if not A.is_closed():
        raise Refusal("matrices are not closed under commutator")
    return [spencer_dim(A, p) for p in range(1, iterations + 1)]


# -- Tanaka ----------------------------------------------------------------------------


@dataclass
class TanakaResult:
    dims: list[int]  # dim g_p for p = 1, 2, ... (trailing zero layer dropped)
    total: int
    negative_dims: dict[int, int]
    g0_dim: int
    terminated: bool  # a zero layer was reached within max_degree
    layers: dict[int, list] = field(default_factory=dict, repr=False)


class _Graded:
    """Bookkeeping for m = g_- and the layers g_0, g_1, ... built so far."""

    def __init__(self, M: LieAlgebra, degrees: Sequence[int]):
        self.M = M
        self.deg = list(degrees)
        self.neg = {}
        for i, d in enumerate(self.deg):
            self.neg.setdefault(d, []).append(i)
        # layer q >= 0: list of elements; element = {b: coordinate vector in layer q + deg b}
        self.layers: dict[int, list[dict[int, list[Fraction]]]] = {}

    def layer_dim(self, q: int) -> int:
        if q < 0:
            return len(self.neg.get(q, []))
        return len(self.layers.get(q, []))

    def m_coords(self, vec: Sequence[Fraction], q: int) -> list[Fraction]:
        return [vec[i] for i in self.neg.get(q, [])]

    def bracket_basis_with_m(self, q: int, k: int, b: int) -> list[Fraction]:
        """[eps_k, X_b] for eps_k the k-th basis element of layer q, in layer q + deg b."""
        if q < 0:
            i = self.neg[q][k]
            return self.m_coords(self.M.c[i][b], q + self.deg[b])
        return self.layers[q][k][b]


def degree_zero_derivations(M: LieAlgebra, degrees: Sequence[int]) -> list[list[list[Fraction]]]:
    """Basis of all grading-preserving derivations of M (as matrices)."""
    n = M.dim
    slots = [(i, j) for i in range(n) for j in range(n) if degrees[i] == degrees[j]]
    where = {s: t for t, s in enumerate(slots)}
    rows = []
    for a in range(n):
        for b in range(a + 1, n):
            for k in range(n):
                row = [Fraction(0)] * len(slots)
                # D[X_a, X_b] - [D X_a, X_b] - [X_a, D X_b], component k
                for c, coef in enumerate(M.c[a][b]):
                    if coef and (k, c) in where:
                        row[where[(k, c)]] += coef
                for i in range(n):
                    if (i, a) in where and M.c[i][b][k]:
                        row[where[(i, a)]] -= M.c[i][b][k]
                    if (i, b) in where and M.c[a][i][k]:
                        row[where[(i, b)]] -= M.c[a][i][k]
                if any(row):
                    rows.append(row)
    sols = linalg.nullspace(rows, len(slots), Fraction(0), Fraction(1)) if rows else [
        [Fraction(int(t == s)) for t in range(len(slots))] for s in range(len(slots))
    ]
    mats = []
    for sol in sols:
        m = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), v in zip(slots, sol):
            m[i][j] = v
        mats.append(m)
    return mats


def degree_witness(degrees: Sequence[int], D) -> tuple[int, int] | None:
    """An entry (row, column) of D that changes the degree, if any."""
    n = len(degrees)
    for i in range(n):
        for j in range(n):
            if D[i][j] and degrees[i] != degrees[j]:
                return (i, j)
    return None


def derivation_witness(M: LieAlgebra, D) -> tuple[int, int] | None:
    """A basis pair (a, b) with D[X_a, X_b] != [D X_a, X_b] + [X_a, D X_b], if any."""
    n = M.dim

    def apply(vec):
        return [sum((D[r][c] * vec[c] for c in range(n) if vec[c]), Fraction(0)) for r in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            lhs = apply(M.c[a][b])
            ea, eb = M.basis_vector(a), M.basis_vector(b)
            rhs = [x + y for x, y in zip(M.bracket(apply(ea), eb), M.bracket(ea, apply(eb)))]
            if lhs != rhs:
                return (a, b)
    return None


def tanaka_prolong(M: LieAlgebra, degrees: Sequence[int], g0: LinearLieAlgebra | Sequence,
                   max_degree: int) -> TanakaResult:
    if len(degrees) != M.dim:
        raise Refusal(f"{len(degrees)} degrees for a {M.dim}-dimensional algebra")
    jac = jacobi_check(M)
    if not jac.ok:
        names = ", ".join(M.names[i] for i in jac.triple)
        raise Refusal(f"Jacobi identity fails on ({names})")
    report: GradingReport = grading_check(M, degrees)
    if not report.ok:
        raise Refusal(f"not a grading: bracket {report.witness} leaves its degree")
    if any(d >= 0 for d in degrees):
        raise Refusal("the algebra to prolong must be negatively graded")
    if not report.fundamental:
        raise Refusal("negative part is not generated by degree -1")
    if isinstance(g0, LinearLieAlgebra):
        given = g0.basis
    else:
        given = [[[Fraction(a) for a in row] for row in m] for m in g0]
    for t, D in enumerate(given):
        if len(D) != M.dim or any(len(row) != M.dim for row in D):
            raise Refusal(f"g0 element {t + 1} is not {M.dim}x{M.dim}")
        w = degree_witness(degrees, D)
        if w is not None:
            raise Refusal(f"g0 element {t + 1} does not preserve degrees (entry {w[0] + 1},{w[1] + 1})")
        w = derivation_witness(M, D)
        if w is not None:
            raise Refusal(f"g0 element {t + 1} is not a derivation on the pair "
                          f"({M.names[w[0]]}, {M.names[w[1]]})")
    # dependent or zero generators would inflate every layer
    mats = LinearLieAlgebra(M.dim, given).basis if given else []
    G = _Graded(M, degrees)
    n = M.dim
    G.layers[0] = [
        {b: [D[i][b] for i in G.neg[degrees[b]]] for b in range(n)} for D in mats
    ]
    dims = []
    terminated = False
    for p in range(1, max_degree + 1):
        layer = _next_layer(G, p)
        if not layer:
            terminated = True
            break
        G.layers[p] = layer
        dims.append(len(layer))
    total = n + len(mats) + sum(dims)
    return TanakaResult(dims, total, report.negative_dims, len(mats), terminated, G.layers)


def _next_layer(G: _Graded, p: int) -> list[dict[int, list[Fraction]]]:
    M, deg = G.M, G.deg
    n = M.dim
    # unknowns: coordinates of u(X_b) in layer p + deg b
    offset = {}
    total = 0
    for b in range(n):
        offset[b] = total
        total += G.layer_dim(p + deg[b])
    if total == 0:
        return []
    rows = []
    for a in range(n):
        for b in range(a + 1, n):
            q = p + deg[a] + deg[b]
            width = G.layer_dim(q)
            if width == 0:
                continue
            eqs = [[Fraction(0)] * total for _ in range(width)]
            # u([X_a, X_b]) = sum_c c^c_ab u(X_c)
            for c, coef in enumerate(M.c[a][b]):
                if not coef:
                    continue
                for t in range(width):
                    eqs[t][offset[c] + t] += coef
            # - [u(X_a), X_b]
            qa = p + deg[a]
            for k in range(G.layer_dim(qa)):
                img = G.bracket_basis_with_m(qa, k, b)
                for t, v in enumerate(img):
                    if v:
                        eqs[t][offset[a] + k] -= v
            # - [X_a, u(X_b)] = + [u(X_b), X_a]
            qb = p + deg[b]
            for k in range(G.layer_dim(qb)):
                img = G.bracket_basis_with_m(qb, k, a)
                for t, v in enumerate(img):
                    if v:
                        eqs[t][offset[b] + k] += v
            rows.extend(r for r in eqs if any(r))
    sols = linalg.nullspace(rows, total, Fraction(0), Fraction(1)) if rows else [
        [Fraction(int(i == j)) for i in range(total)] for j in range(total)
    ]
    layer = []
    for s in sols:
        elem = {}
        for b in range(n):
            w = G.layer_dim(p + deg[b])
            elem[b] = s[offset[b]: offset[b] + w]
        layer.append(elem)
    return layer
