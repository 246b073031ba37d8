from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp

from edskit.errors import ChartError
from edskit.exterior import coordinate_differential
from edskit.scalars import (Chart, equal, is_constant, partial_derivative, record_nonzero, render,
                            side_conditions, substitute, to_fraction)


def test_chart_rejects_bad_names():
    with pytest.raises(ChartError):
        Chart(["x", "x"])
    with pytest.raises(ChartError):
        Chart(["lambda"])
    with pytest.raises(ChartError):
        Chart([])


def test_scalar_coercions_agree():
    C = Chart(["x", "y"])
    x, y = C.gens()
    assert C.scalar("x**2 + y/3") == x * x + y / 3
    assert C.scalar(sp.Symbol("x") * 2) == 2 * x
    assert C.scalar(Fraction(3, 4)) == C.scalar("3/4")
    with pytest.raises(ChartError):
        C.scalar("z")


def test_render_is_canonical():
    C = Chart(["x", "y"])
    x, y = C.gens()
    a = (x * x - y) / (2 * y)
    b = (2 * x * x - 2 * y) / (4 * y)
    assert render(a) == render(b) == "(1/2*x**2 - 1/2*y)/y"
    assert render(C.zero) == "0"
    assert render(-x) == "-x"


def test_partial_and_substitute():
    C = Chart(["x", "y"])
    x, y = C.gens()
    f = x * x * y + 1 / x
    assert equal(partial_derivative(C, f, "x"), 2 * x * y - 1 / (x * x))
    assert equal(substitute(C, f, "y", 0), 1 / x)
    assert to_fraction(C.scalar("5/7")) == Fraction(5, 7)
    assert is_constant(C.scalar(3)) and not is_constant(x)


def test_aux_differential_must_use_earlier_symbols():
    C = Chart(["x"], ["a", "a1"])
    dx = coordinate_differential(C, "x")
    with pytest.raises(ChartError):
        C.declare("a", dx * C.gen("a1"))
    C2 = Chart(["x"], ["a1", "a"])
    C2.declare("a", coordinate_differential(C2, "x") * C2.gen("a1"))
    with pytest.raises(ChartError):
        C2.declare("a", coordinate_differential(C2, "x"))


def test_self_referencing_aux_differential():
    C = Chart(["z"], ["E"])
    C.declare("E", coordinate_differential(C, "z") * (2 * C.gen("E")))
    assert C.differential_of("E")[0] == 2 * C.gen("E")


def test_side_conditions_are_irreducible_factors():
    C = Chart(["p", "q"])
    p, q = C.gens()
    with side_conditions() as side:
        record_nonzero(2 / p)
        record_nonzero(p * p)
        record_nonzero((p - q) * (p + q))
        record_nonzero(C.scalar(5))
    assert side == ["p", "p + q", "p - q"]
