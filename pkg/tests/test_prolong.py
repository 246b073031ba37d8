from __future__ import annotations

from fractions import Fraction as F

import pytest
import sympy as sp

import oracle
from edskit.errors import Refusal
from edskit.liealg import LieAlgebra, LinearLieAlgebra, degree_zero_derivations, jk_membership, spencer_prolong, tanaka_prolong
from edskit.liealg.linear import gl, jk_violation


def j7_generators():
    a = sp.symbols("a1:8")
    a1, a2, a3, a4, a5, a6, a7 = a
    R = sp.Rational
    J = sp.Matrix([[a1 - a2, -a3, a4, 0, 0, 0], [0, a1, a5, 0, R(4, 3) * a3, 0], [0, 0, 2 * a1 + a2, 0, 0, 0],
                   [0, 0, a6, a1 + 2 * a2, 0, 0], [0, 0, a7, a3, a1 + a2, 0],
                   [0, -a6, 0, -a5, R(4, 3) * a7, a2]])
    return [J.diff(s) for s in a]


def as_lists(m):
    return [[F(str(m[i, j])) for j in range(m.shape[1])] for i in range(m.shape[0])]


CARTAN_M = {(0, 3): {2: -1}, (0, 5): {1: 1}, (1, 4): {2: -1}, (1, 5): {4: -1}, (4, 5): {3: -1}}
CARTAN_DEGREES = [-1, -2, -5, -4, -3, -1]


def test_j7_is_a_closed_seven_dimensional_algebra():
    A = LinearLieAlgebra(6, [as_lists(g) for g in j7_generators()])
    assert A.dim == 7 and A.is_closed()


def test_spencer_prolongation_matches_oracle():
    gens = j7_generators()
    A = LinearLieAlgebra(6, [as_lists(g) for g in gens])
    direct = spencer_prolong(A, 2)
    dual = spencer_prolong(A.dual(), 2)
    assert direct == [oracle.spencer_dim(gens, 1), oracle.spencer_dim(gens, 2)] == [2, 1]
    dual_gens = [-g.T for g in gens]
    assert dual == [oracle.spencer_dim(dual_gens, 1), oracle.spencer_dim(dual_gens, 2)] == [1, 1]


def test_spencer_small_cases():
    # gl(n) is of infinite type; so(2) of finite type with zero first prolongation
    assert spencer_prolong(gl(2), 2) == [6, 8]
    so2 = LinearLieAlgebra(2, [[[0, -1], [1, 0]]])
    assert spencer_prolong(so2, 2) == [0, 0]
    with pytest.raises(Refusal):
        spencer_prolong(LinearLieAlgebra(2, [[[0, 1], [0, 0]], [[0, 0], [1, 0]]]), 1)


def test_j7_outside_every_block_pattern():
    A = LinearLieAlgebra(6, [as_lists(g) for g in j7_generators()])
    assert jk_violation(A.generators[3], [2, 1, 2, 1]) == (0, 2)
    assert not all(jk_membership(g, [2, 1, 2, 1]) for g in A.generators)


def test_tanaka_heisenberg_matches_contact_counts():
    H = LieAlgebra(["x", "y", "z"], {(0, 1): {2: 1}})
    D = degree_zero_derivations(H, [-1, -1, -2])
    assert len(D) == 4
    r = tanaka_prolong(H, [-1, -1, -2], D, 3)
    # contact vector fields: generating functions of weighted degree p + 2 in (x, y, z) with weights (1, 1, 2)
    assert r.dims == [oracle.weighted_monomials([1, 1, 2], p + 2) for p in (1, 2, 3)] == [6, 9, 12]
    assert not r.terminated


def test_tanaka_cartan_example_is_g2():
    M = LieAlgebra([f"X{i}" for i in range(1, 7)], CARTAN_M)
    A = LinearLieAlgebra(6, [as_lists(g) for g in j7_generators()])
    g0 = A.dual().degree_part(CARTAN_DEGREES, 0)
    assert g0.dim == 2
    r = tanaka_prolong(M, CARTAN_DEGREES, g0, 8)
    assert r.dims == [2, 1, 1, 1, 1] and r.total == 14 and r.terminated
    # graded dims of g2 are symmetric about degree 0
    assert sorted(r.negative_dims.values(), reverse=True) == sorted(r.dims, reverse=True)


def test_tanaka_refusals():
    printed = dict(CARTAN_M)
    printed[(0, 5)] = {1: -1}
    M = LieAlgebra([f"X{i}" for i in range(1, 7)], printed)
    with pytest.raises(Refusal, match="Jacobi"):
        tanaka_prolong(M, CARTAN_DEGREES, [], 3)
    good = LieAlgebra([f"X{i}" for i in range(1, 7)], CARTAN_M)
    scale_x1 = [[F(int(i == j == 0)) for j in range(6)] for i in range(6)]
    with pytest.raises(Refusal, match="derivation"):
        tanaka_prolong(good, CARTAN_DEGREES, [scale_x1], 3)
    H = LieAlgebra(["x", "y", "z"], {(0, 1): {2: 1}})
    with pytest.raises(Refusal, match="generated"):
        tanaka_prolong(H, [-1, -2, -3], [], 2)
    with pytest.raises(Refusal):
        tanaka_prolong(H, [-1, -1, 0], [], 2)
