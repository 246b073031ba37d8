from __future__ import annotations

import pytest
import sympy as sp

import oracle
from edskit.coframe import (Coframe, CongruenceClaim, algebra_from_coframe, canonical_coframe, check_claim,
                            check_type, maurer_cartan_verify, structural_equivalence, structure_report)
from edskit.errors import Refusal
from edskit.exterior import coordinate_differential
from edskit.liealg import JetSpec, build_Wk, jacobi_check
from edskit.scalars import Chart


def example_5_1():
    C = Chart(["x", "y", "z", "p", "q", "t"])
    x, y, z, p, q, t = C.gens()
    dx, dy, dz, dp, dq, dt = (coordinate_differential(C, n) for n in C.coords)
    forms = [dx, dy, dz - dx * p - dy * q, dp - dy * z, dq - dx * z - dy * t, dt]
    return Coframe(C, forms, blocks=[[0, 1], [2], [3, 4], [5]])


def as_oracle(f):
    return {k: c.as_expr() for k, c in f.terms.items()}


def test_structure_equations_reassemble_to_d():
    W = example_5_1()
    coords = sp.symbols("x y z p q t")
    forms = [as_oracle(f) for f in W.forms]
    report = structure_report(W)
    for i, f in enumerate(forms):
        total = {}
        for (j, k), c in report.coefficients[i].items():
            for key, v in oracle.wedge(forms[j], forms[k]).items():
                total[key] = total.get(key, 0) + c.as_expr() * v
        assert oracle.equal(oracle.canon(total), oracle.d(f, coords))
    assert report.line(2) == "dw3 = w1^w4 + w2^w5"


def test_congruence_claims_report_residues():
    W = example_5_1()
    good = check_claim(W, CongruenceClaim(3, {(1, 2): W.chart.one, (0, 1): -W.chart.gens()[3]}))
    assert good
    printed = check_claim(W, CongruenceClaim(3, {(1, 2): W.chart.one, (0, 1): W.chart.gens()[3]}))
    assert not printed and printed.text == "-2*p*w1^w2"
    modded = check_claim(W, CongruenceClaim(3, {}, modulus=(1,)))
    assert modded
    assert not check_claim(W, CongruenceClaim(4, {}, modulus=(1,)))
    dropped = check_claim(W, CongruenceClaim(4, {(0, 2): W.chart.one}, modulus=(1,), drop_vm1_pairs=True))
    assert dropped


def test_type_check_reports_the_obstructions():
    W = example_5_1()
    r = check_type(W, JetSpec(2, 1, 2, [[0, 0, 1]]))
    assert not r and r.symbol_matches and r.C1
    assert r.residues == ["-p*w1^w2", "q*w1^w2"]


@pytest.mark.parametrize("spec", [JetSpec(1, 1, 3), JetSpec(2, 1, 1), JetSpec(2, 1, 2, [[0, 0, 1]]),
                                  JetSpec(2, 1, 2, [[1, 0, -1], [0, 1, 0]])])
def test_canonical_coframe_is_flat_model(spec):
    C, jet = canonical_coframe(spec)
    assert maurer_cartan_verify(jet.algebra, C)
    L = algebra_from_coframe(C)
    assert jacobi_check(L)
    assert {(i, j): v for i, j, v in L.nonzero_brackets()} == {(i, j): v for i, j, v in jet.algebra.nonzero_brackets()}
    assert check_type(C, spec)


def test_maurer_cartan_dimension_mismatch_refuses():
    C, jet = canonical_coframe(JetSpec(1, 1, 2))
    other = build_Wk(JetSpec(1, 1, 1)).algebra
    with pytest.raises(Refusal):
        maurer_cartan_verify(other, C)
    assert maurer_cartan_verify(jet.algebra, C)


def test_non_constant_structure_refuses_algebra():
    with pytest.raises(Refusal, match="non-constant"):
        algebra_from_coframe(example_5_1())


def test_structural_equivalence():
    W = example_5_1()
    p = W.chart.gens()[3]
    scaled = Coframe(W.chart, [W.forms[0] * p, W.forms[1], W.forms[2], W.forms[3] + W.forms[2], W.forms[4], W.forms[5] + W.forms[0]],
                     blocks=W.blocks)
    r = structural_equivalence(W, scaled)
    assert r.invertible and r.ok
    # mixing w4 into w1 leaves the block pattern
    bad = Coframe(W.chart, [W.forms[0] + W.forms[3], *W.forms[1:]], blocks=W.blocks)
    r = structural_equivalence(W, bad)
    assert r.invertible and not r.ok and (0, 3) in r.violations


def test_coframe_validation():
    W = example_5_1()
    with pytest.raises(ValueError):
        Coframe(W.chart, W.forms[:5])
    with pytest.raises(ValueError):
        Coframe(W.chart, W.forms, blocks=[[0, 1], [2], [3, 4]])
    with pytest.raises(Refusal):
        check_type(Coframe(W.chart, W.forms), JetSpec(2, 1, 2, [[0, 0, 1]]))
