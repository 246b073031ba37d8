from __future__ import annotations

import pytest

from edskit.errors import Refusal
from edskit.liealg import (JetSpec, LieAlgebra, check_differential_lie_algebra, construct_S_semisimple,
                           is_semisimple, jacobi_check)

EXAMPLE_J = {(0, 3): {1: -1}, (0, 4): {0: -1}, (1, 3): {2: -1}, (1, 4): {1: -1}, (1, 5): {1: -1},
             (2, 4): {2: -1}, (2, 5): {2: -2}, (3, 5): {3: -1}}


def example_algebra():
    return LieAlgebra([f"X{i}" for i in range(1, 7)], EXAMPLE_J)


def sl(n):
    names, mats = [], []
    for i in range(n):
        for j in range(n):
            if i != j:
                m = [[0] * n for _ in range(n)]
                m[i][j] = 1
                names.append(f"E{i + 1}{j + 1}")
                mats.append(m)
    for i in range(n - 1):
        m = [[0] * n for _ in range(n)]
        m[i][i], m[i + 1][i + 1] = 1, -1
        names.append(f"H{i + 1}")
        mats.append(m)
    return LieAlgebra.from_matrices(names, mats)


def test_six_dimensional_algebra_is_differential_of_order_one():
    J = example_algebra()
    assert jacobi_check(J)
    cert = check_differential_lie_algebra(J, [0, 3, 2, 1], [4, 5], JetSpec(2, 1, 1, [[0, -1]]))
    assert cert and cert.order == 1 and not cert.fundamental
    assert len(cert.isotropy) == 2 and len(cert.S) == 4


def test_six_dimensional_algebra_fails_with_wrong_split():
    # with X2 and X3 swapped between V_0 and V_1^0 no S exists
    with pytest.raises(Refusal, match="no S"):
        check_differential_lie_algebra(example_algebra(), [0, 3, 1, 2], [4, 5], JetSpec(2, 1, 1, [[0, -1]]))


def test_sl2_has_order_one():
    L = LieAlgebra.from_matrices(["X1", "X2", "X3"], [[[0, 1], [0, 0]], [[0, 0], [1, 0]], [[-1, 0], [0, 1]]])
    cert = check_differential_lie_algebra(L, [0, 1], [2], JetSpec(1, 1, 1, []))
    assert cert and cert.order == 1


def test_dimension_mismatch_is_a_failure_not_a_crash():
    cert = check_differential_lie_algebra(example_algebra(), [0, 3, 2], [1, 4, 5], JetSpec(2, 1, 1, [[0, -1]]))
    assert not cert and "dimension" in cert.failures[0]


def test_refusals():
    with pytest.raises(Refusal):
        check_differential_lie_algebra(example_algebra(), [0, 1], [2], JetSpec(1, 1, 1))
    abelian = LieAlgebra(["a", "b", "c"], {})
    with pytest.raises(Refusal):
        check_differential_lie_algebra(abelian, [0, 1, 2], [], JetSpec(1, 1, 1))


@pytest.mark.parametrize("n", [2, 3])
def test_semisimple_S_on_one_gradings(n):
    L = sl(n)
    assert is_semisimple(L)
    # grade by the first row/column: E1j in degree 1, Ei1 in degree -1
    degrees = []
    for name in L.names:
        if name.startswith("E1"):
            degrees.append(1)
        elif name.startswith("E") and name[2] == "1":
            degrees.append(-1)
        else:
            degrees.append(0)
    w = construct_S_semisimple(L, degrees)
    assert w and w.verified and w.h_injective and w.killing_zero_blocks
    assert sorted(w.order) == list(range(L.dim))


def test_semisimple_refusals():
    L = sl(2)
    with pytest.raises(Refusal):
        construct_S_semisimple(L, [0, 0, 0])
    with pytest.raises(Refusal):
        construct_S_semisimple(L, [1, 1, 1])
    with pytest.raises(Refusal):
        construct_S_semisimple(LieAlgebra(["a", "b"], {(0, 1): {1: 1}}), [-1, 1])
