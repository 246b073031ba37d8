"""Independent reference computations on plain sympy expressions.

Nothing here imports edskit; the tests compare edskit results against these.
"""
from __future__ import annotations

import itertools
import random
from math import comb

import sympy as sp


def perm_sign(seq) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def canon(form: dict) -> dict:
    out = {}
    for key, c in form.items():
        if len(set(key)) < len(key):
            continue
        k = tuple(sorted(key))
        out[k] = out.get(k, 0) + perm_sign(key) * c
    out = {k: sp.cancel(sp.expand(v)) for k, v in out.items()}
    return {k: v for k, v in out.items() if v != 0}


def wedge(a: dict, b: dict) -> dict:
    out = {}
    for (ka, ca), (kb, cb) in itertools.product(a.items(), b.items()):
        out[ka + kb] = out.get(ka + kb, 0) + ca * cb
    return canon(out)


def d(form: dict, coords) -> dict:
    out = {}
    for key, c in form.items():
        for i, x in enumerate(coords):
            dc = sp.diff(c, x)
            if dc != 0:
                out[(i,) + key] = out.get((i,) + key, 0) + dc
    return canon(out)


def one_form(coeffs) -> dict:
    return canon({(i,): c for i, c in enumerate(coeffs) if c != 0})


def equal(a: dict, b: dict) -> bool:
    keys = set(a) | set(b)
    return all(sp.cancel(a.get(k, 0) - b.get(k, 0)) == 0 for k in keys)


def characteristic_matrix(forms, coords) -> tuple[sp.Matrix, tuple]:
    """Linear conditions on X: X in ann(S) and X _| dS in S (wedged against all of S)."""
    n = len(coords)
    xs = sp.symbols(f"v0:{n}")
    eqs = []
    for f in forms:
        eqs.append(sum(f.get((i,), 0) * v for i, v in enumerate(xs)))
    for f in forms:
        contr = {}
        for (i, j), c in d(f, coords).items():
            contr[(j,)] = contr.get((j,), 0) + c * xs[i]
            contr[(i,)] = contr.get((i,), 0) - c * xs[j]
        w = canon(contr)
        for g in forms:
            w = wedge(w, g)
        eqs.extend(w.values())
    return sp.Matrix([[sp.diff(e, v) for v in xs] for e in eqs]), xs


def is_first_integral(u, forms, coords, points: int = 4, seed: int = 7) -> bool:
    """du annihilates every characteristic field, checked exactly at random rational points."""
    rng = random.Random(seed)
    M, _ = characteristic_matrix(forms, coords)
    grad = sp.Matrix([sp.diff(u, x) for x in coords])
    for _ in range(points):
        pt = {x: sp.Rational(rng.randint(-9, 9), rng.randint(1, 5)) for x in coords}
        Mp = M.subs(pt)
        gp = grad.subs(pt)
        for v in Mp.nullspace():
            if (gp.T * v)[0] != 0:
                return False
    return True


def lie_bracket_jacobi_ok(c) -> bool:
    """c[i][j] = list of coefficients; checks the Jacobi identity."""
    n = len(c)

    def br(u, v):
        out = [0] * n
        for i in range(n):
            for j in range(n):
                if u[i] and v[j]:
                    for k in range(n):
                        out[k] += u[i] * v[j] * c[i][j][k]
        return out

    e = [[int(i == j) for j in range(n)] for i in range(n)]
    for i, j, k in itertools.combinations(range(n), 3):
        s = [a + b + cc for a, b, cc in zip(br(br(e[i], e[j]), e[k]), br(br(e[j], e[k]), e[i]),
                                            br(br(e[k], e[i]), e[j]))]
        if any(s):
            return False
    return True


def spencer_dim(gens: list[sp.Matrix], p: int) -> int:
    """dim of the p-th prolongation: symmetric p-linear maps V^p -> span(gens)."""
    n = gens[0].shape[0]
    r = len(gens)
    slots = list(itertools.combinations_with_replacement(range(n), p))
    c = {(s, k): sp.Symbol(f"c_{'_'.join(map(str, s))}__{k}") for s in slots for k in range(r)}

    def T(vs):
        s = tuple(sorted(vs))
        return sum((c[(s, k)] * gens[k] for k in range(r)), sp.zeros(n))

    eqs = []
    # T(v_1..v_p) is in g; its action on w must be symmetric in (v_1, w)
    for vs in itertools.product(range(n), repeat=p):
        for w in range(n):
            lhs = T(vs)[:, w]
            rhs = T((w,) + vs[1:])[:, vs[0]]
            eqs.extend(list(lhs - rhs))
    syms = list(c.values())
    rows = [[sp.diff(e, s) for s in syms] for e in eqs if e != 0]
    rank = sp.Matrix(rows).rank() if rows else 0
    return len(syms) - rank


def jet_dims(n: int, m: int, k: int) -> list[int]:
    return [n] + [m * comb(n + p - 1, p) for p in range(0, k + 1)]


def weighted_monomials(weights, degree) -> int:
    """Number of monomials of the given weighted degree."""
    count = 0
    top = [degree // w for w in weights]
    for exps in itertools.product(*(range(t + 1) for t in top)):
        if sum(e * w for e, w in zip(exps, weights)) == degree:
            count += 1
    return count
