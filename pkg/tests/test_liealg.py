from __future__ import annotations


import pytest

import oracle
from edskit.liealg import (JetSpec, LieAlgebra, build_Wk, grading_check, is_nilpotent, is_semisimple,
                           jacobi_check, killing_form, lower_central_series, prop41_checks, vk0_involutive)
from edskit.liealg.algebra import bilinear


def sl2():
    return LieAlgebra.from_matrices(["e", "h", "f"], [[[0, 1], [0, 0]], [[1, 0], [0, -1]], [[0, 0], [1, 0]]])


def test_brackets_fill_antisymmetry_and_reject_conflicts():
    L = LieAlgebra(["a", "b"], {(0, 1): {1: 1}})
    assert L.c[1][0] == [0, -1]
    with pytest.raises(ValueError):
        LieAlgebra(["a", "b"], {(0, 1): {1: 1}, (1, 0): {1: 1}})


def test_jacobi_witness():
    # the printed Cartan-example algebra with [X1, X6] = -X2
    printed = LieAlgebra([f"X{i}" for i in range(1, 7)],
                         {(0, 3): {2: -1}, (0, 5): {1: -1}, (1, 4): {2: -1}, (1, 5): {4: -1}, (4, 5): {3: -1}})
    r = jacobi_check(printed)
    assert not r and r.triple == (0, 4, 5) and r.value == [0, 0, -2, 0, 0, 0]
    fixed = LieAlgebra(printed.names,
                       {(0, 3): {2: -1}, (0, 5): {1: 1}, (1, 4): {2: -1}, (1, 5): {4: -1}, (4, 5): {3: -1}})
    assert jacobi_check(fixed)
    assert oracle.lie_bracket_jacobi_ok(fixed.c) and not oracle.lie_bracket_jacobi_ok(printed.c)


def test_killing_form_of_sl2():
    B = killing_form(sl2())
    assert B == [[0, 0, 4], [0, 8, 0], [4, 0, 0]]
    assert is_semisimple(sl2())
    assert not is_semisimple(LieAlgebra(["a", "b"], {(0, 1): {1: 1}}))


def test_gradings():
    r = grading_check(sl2(), [-1, 0, 1])
    assert r and r.fundamental and r.depth == 1
    assert not grading_check(sl2(), [0, 0, 1])
    H = LieAlgebra(["x", "y", "z"], {(0, 1): {2: 1}})
    r = grading_check(H, [-1, -1, -2])
    assert r.fundamental and r.negative_dims == {-1: 2, -2: 1}
    assert not grading_check(H, [-1, -2, -3]).fundamental
    assert lower_central_series(H) == [3, 1, 0] and is_nilpotent(H)


@pytest.mark.parametrize("n,m,k", [(1, 1, 1), (1, 1, 4), (2, 1, 2), (2, 2, 2), (3, 1, 3), (3, 2, 2)])
def test_wk_dimensions(n, m, k):
    W = build_Wk(JetSpec(n, m, k))
    assert JetSpec(n, m, k).block_dims() == oracle.jet_dims(n, m, k)
    assert W.algebra.dim == sum(oracle.jet_dims(n, m, k))
    assert jacobi_check(W.algebra) and is_nilpotent(W.algebra)
    assert prop41_checks(W).ok


def test_small_jet_algebra_bracket_tables():
    def table(L):
        return {(i + 1, j + 1): {k + 1: v for k, v in enumerate(vec) if v} for i, j, vec in L.nonzero_brackets()}

    assert table(build_Wk(JetSpec(1, 1, 3)).algebra) == {(1, 3): {2: -1}, (1, 4): {3: -1}, (1, 5): {4: -1}}
    assert table(build_Wk(JetSpec(2, 1, 1)).algebra) == {(1, 4): {3: -1}, (2, 5): {3: -1}}
    assert table(build_Wk(JetSpec(2, 1, 2)).algebra) == {
        (1, 4): {3: -1}, (2, 5): {3: -1}, (1, 6): {4: -1}, (1, 7): {5: -1}, (2, 7): {4: -1}, (2, 8): {5: -1}}


def test_restricted_wk0_tables():
    def table(spec):
        L = build_Wk(spec).algebra
        return {(i + 1, j + 1): {k + 1: v for k, v in enumerate(vec) if v} for i, j, vec in L.nonzero_brackets()}

    assert table(JetSpec(2, 1, 2, [[1, 0, -1], [0, 1, 0]])) == {
        (1, 4): {3: -1}, (2, 5): {3: -1}, (1, 6): {4: -1}, (1, 7): {5: -1}, (2, 7): {4: -1}, (2, 6): {5: 1}}
    assert table(JetSpec(2, 1, 2, [[0, 0, 1]])) == {(1, 4): {3: -1}, (2, 5): {3: -1}, (2, 6): {5: -1}}


def test_jetspec_validation():
    with pytest.raises(ValueError):
        JetSpec(2, 1, 2, [[1, 0]])
    with pytest.raises(ValueError):
        JetSpec(2, 1, 2, [[1, 0, 0], [2, 0, 0]])
    with pytest.raises(ValueError):
        JetSpec(0, 1, 1)


def test_involutivity():
    r = vk0_involutive(JetSpec(2, 1, 2, [[0, 0, 1]]))
    assert r.involutive and r.prolongation_dim == 1
    assert vk0_involutive(JetSpec(2, 1, 1)).involutive


def test_killing_invariance_on_sl2_samples():
    L = sl2()
    B = killing_form(L)
    e = [L.basis_vector(i) for i in range(3)]
    for x in e:
        for y in e:
            for z in e:
                assert bilinear(B, L.bracket(x, y), z) == -bilinear(B, y, L.bracket(x, z))
