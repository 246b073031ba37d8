from __future__ import annotations

from fractions import Fraction as F

import pytest
import sympy as sp

import oracle
from edskit.errors import RankError
from edskit.exterior import coordinate_differential, same_span
from edskit.pfaff import (PfaffianSystem, cauchy_system, characteristics_agree, express_in_integrals,
                          is_completely_integrable, is_first_integral, is_solvable_system, potential)
from edskit.scalars import Chart


def chart(names):
    C = Chart(names.split())
    return C, C.gens(), [coordinate_differential(C, n) for n in C.coords]


def oracle_forms(forms):
    return [{k: c.as_expr() for k, c in f.terms.items()} for f in forms]


def test_contact_cone():
    C, (x, y, z, p), (dx, dy, dz, dp) = chart("x y z p")
    theta = dz + dx * p + dy * (p * p)
    S = PfaffianSystem([theta], ["theta"])
    ch = cauchy_system(S)
    assert ch.rank == 3
    assert same_span(ch.forms, [theta, dp, dx + dy * (2 * p)])
    assert characteristics_agree(S)
    U = [z + x * p + y * p * p, x + 2 * y * p, p]
    coords = sp.symbols("x y z p")
    for u in U:
        assert is_first_integral(u, ch)
        assert oracle.is_first_integral(u.as_expr(), oracle_forms([theta]), coords)
    assert not is_first_integral(x, ch)
    assert not oracle.is_first_integral(coords[0], oracle_forms([theta]), coords)
    results, ok = express_in_integrals(S, U, ["u1", "u2", "u3"])
    assert ok
    assert results[0].render(["theta"], ["u1", "u2", "u3"]) == "theta = du1 - u2*du3"
    assert is_solvable_system([dp, dx + dy * (2 * p), theta], S)


def test_first_order_equation_solvable_order():
    C, (x, y, z, q), (dx, dy, dz, dq) = chart("x y z q")
    w1, w2, w3, w4 = dx, dy - dx * q, dz + dx * (q * q / 2) - dy * q, dq
    S = PfaffianSystem([w3])
    r = is_solvable_system([w1, w2, w3], S, ["w1", "w2", "w3"])
    assert not r and "span mismatch" in r.failures[0]
    assert is_solvable_system([w4, w2, w3], S)
    U = [q, z + x * q * q / 2 - y * q, y - x * q]
    coords = sp.symbols("x y z q")
    for u in U:
        assert oracle.is_first_integral(u.as_expr(), oracle_forms([w3]), coords)
        assert is_first_integral(u, cauchy_system(S))


def test_second_order_family_integrals_and_expressions():
    C, (x, y, z, p, q, t), d = chart("x y z p q t")
    dx, dy, dz, dp, dq, dt = d
    u2 = z - x * p
    w = [dx, dy, dz - dx * p - dy * q, dp - dy * u2, dq - dx * u2 - dy * t, dt - dx * (q - x * u2)]
    S = PfaffianSystem(w[2:5], ["w3", "w4", "w5"])
    assert cauchy_system(S).rank == 5
    K = t - x * q + x * x * u2
    U = [y, u2, p, q - x * u2, K]
    coords = sp.symbols("x y z p q t")
    ref = oracle_forms(w[2:5])
    for u in U:
        assert is_first_integral(u, cauchy_system(S))
        assert oracle.is_first_integral(u.as_expr(), ref, coords)
    r = is_solvable_system(w[1:], S, ["w2", "w3", "w4", "w5", "w6"])
    assert not r and r.failures == ["d(w3) != 0 mod w2"]
    assert is_solvable_system([w[1], w[3], w[2], w[4], w[5]], S)
    results, ok = express_in_integrals(S, U, [f"u{i}" for i in range(1, 6)])
    assert ok
    assert [r.render(["w3", "w4", "w5"], [f"u{i}" for i in range(1, 6)]) for r in results] == [
        "w3 - x*w4 = -u4*du1 + du2",
        "w4 = -u2*du1 + du3",
        "w5 - x*w3 + x**2*w4 = -u5*du1 + du4",
    ]


def test_g2_equation_integrals():
    C, (x, y, z, p, q, t), d = chart("x y z p q t")
    dx, dy, dz, dp, dq, dt = d
    w = [dx, dy + dx * t, dz - dx * p - dy * q, dp - dq * t + dx * (t ** 3 / 6) + dy * (t * t / 2),
         dq - dx * (t * t / 2) - dy * t, dt]
    S = PfaffianSystem(w[2:5])
    ch = cauchy_system(S)
    assert is_solvable_system([w[5], w[1], w[4], w[3], w[2]], S)
    U = [z - x * p + x * q * t + F(1, 6) * x * x * t ** 3, p - q * t + F(1, 6) * x * t ** 3 + F(1, 2) * y * t * t,
         q - F(1, 2) * x * t * t - y * t, y + x * t, t]
    coords = sp.symbols("x y z p q t")
    ref = oracle_forms(w[2:5])
    for u in U:
        assert is_first_integral(u, ch)
        assert oracle.is_first_integral(u.as_expr(), ref, coords)
    printed_u3 = q - F(1, 2) * y * t * t
    assert not is_first_integral(printed_u3, ch)
    assert not oracle.is_first_integral(printed_u3.as_expr(), ref, coords)


def test_integrability_and_potential():
    C, (x, y, z), (dx, dy, dz) = chart("x y z")
    assert is_completely_integrable(PfaffianSystem([dz - dx * y - dy * x]))
    r = is_completely_integrable(PfaffianSystem([dz - dx * y]))
    assert not r and r.residue is not None
    f = potential(dx * (2 * x + y) + dy * x)
    assert f == x * x + x * y


def test_dependent_integrals_refused():
    C, (x, y, z, p), (dx, dy, dz, dp) = chart("x y z p")
    S = PfaffianSystem([dz + dx * p])
    with pytest.raises(RankError):
        express_in_integrals(S, [p, 2 * p])
