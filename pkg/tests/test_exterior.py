from __future__ import annotations

import pytest

import oracle
from edskit.errors import ChartError, RankError
from edskit.exterior import (DifferentialForm, Frame, VectorField, coordinate_differential, ext_d,
                             interior, lie_bracket, reduce_mod, wedge)
from edskit.scalars import Chart


def to_oracle(form: DifferentialForm) -> dict:
    return {k: c.as_expr() for k, c in form.terms.items()}


@pytest.fixture
def xyzp():
    C = Chart(["x", "y", "z", "p"])
    return C, C.gens(), [coordinate_differential(C, n) for n in C.coords]


def test_d_of_contact_form_matches_oracle(xyzp):
    C, (x, y, z, p), (dx, dy, dz, dp) = xyzp
    theta = dz + dx * p + dy * (p * p)
    mine = to_oracle(ext_d(theta))
    ref = oracle.d(to_oracle(theta), [s.as_expr() for s in C.gens()])
    assert oracle.equal(mine, ref)
    # dtheta = dp ^ (dx + 2p dy)
    assert ext_d(theta) == wedge(dp, dx + dy * (2 * p))


def test_wedge_signs(xyzp):
    C, _, (dx, dy, dz, dp) = xyzp
    assert wedge(dx, dy) == -wedge(dy, dx)
    assert wedge(dx, dx).is_zero()
    assert wedge(wedge(dx, dy), dz) == wedge(dx, wedge(dy, dz))


def test_interior_and_bracket(xyzp):
    C, (x, y, z, p), (dx, dy, dz, dp) = xyzp
    X = VectorField(C, [C.one, C.zero, -p, C.zero])
    assert interior(X, dz + dx * p).is_zero()
    assert interior(X, wedge(dx, dy)) == dy
    Y = VectorField(C, [C.zero, x, C.zero, C.zero])
    assert lie_bracket(X, Y).components[1] == C.one


def test_frame_expand_roundtrip(xyzp):
    C, (x, y, z, p), (dx, dy, dz, dp) = xyzp
    F = Frame(C, [dx, dy + dx * x, dz - dx * p, dp])
    a = wedge(dx, dp) * y + wedge(dy, dz)
    assert F.assemble(F.expand(a), 2) == a
    with pytest.raises(RankError):
        Frame(C, [dx, dx, dz, dp])


def test_reduce_mod(xyzp):
    C, (x, y, z, p), (dx, dy, dz, dp) = xyzp
    theta = dz + dx * p
    assert reduce_mod(wedge(theta, dy) * x, [theta]).is_zero()
    assert not reduce_mod(wedge(dx, dy), [theta]).is_zero()


def test_degree_and_chart_checks(xyzp):
    C, _, (dx, dy, dz, dp) = xyzp
    with pytest.raises(ValueError):
        dx + wedge(dx, dy)
    other = Chart(["u"])
    with pytest.raises(ChartError):
        dx + coordinate_differential(other, "u")
    with pytest.raises(ValueError):
        DifferentialForm(C, 2, {(1, 0): 1})


def test_aux_chain_rule():
    C = Chart(["x", "y", "z"], ["E"])
    dz = coordinate_differential(C, "z")
    C.declare("E", dz * (2 * C.gen("E")))
    dx = coordinate_differential(C, "x")
    w = dx * C.gen("E")
    assert ext_d(w) == wedge(dz, dx) * (2 * C.gen("E"))
    assert ext_d(ext_d(DifferentialForm.scalar(C, C.gen("E") * C.gens()[0]))).is_zero()
