"""Evaluate a parsed document: build objects in order, run claims and checks."""
from __future__ import annotations

import time
import traceback
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .. import __version__
from ..coframe import (Coframe, check_type, maurer_cartan_verify, structural_equivalence,
                       structure_report)
from ..errors import EdskitError, Refusal
from ..exterior import DifferentialForm, coordinate_differential, ext_d, reduce_mod, wedge
from ..liealg.algebra import LieAlgebra, grading_check, is_nilpotent, is_semisimple, jacobi_check
from ..liealg.dla import check_differential_lie_algebra, construct_S_semisimple
from ..liealg.jets import JetSpec, build_Wk, prop41_checks, vk0_involutive
from ..liealg.linear import LinearLieAlgebra, jk_violation
from ..liealg.prolong import spencer_prolong, tanaka_prolong
from ..pfaff import (PfaffianSystem, cauchy_system, characteristics_agree, express_in_integrals,
                     is_completely_integrable, is_first_integral, is_solvable_system)
from ..scalars import Chart, Scalar, is_constant, partial, render, side_conditions, to_fraction
from . import ast as A
from .printer import arg_text, check_title
from .signatures import bind


class EvalError(EdskitError):
    """A document that parses but cannot be evaluated (type errors and the like)."""


@dataclass
class Options:
    seed: int = 0
    mix_degree: int = 2


@dataclass
class CheckResult:
    name: str
    kind: str
    verdict: str  # pass | fail | refused | error
    witness: str | list | None = None
    residue: str | list | None = None
    side_conditions: list[str] = field(default_factory=list)
    expected: str = "pass"
    outcome: str = ""  # raw verdict before the expectation was applied
    values: dict = field(default_factory=dict)
    seconds: float = 0.0
    line: int = 0

    def as_json(self) -> dict:
        out: dict = {"name": self.name, "kind": self.kind, "verdict": self.verdict}
        if self.expected != "pass":
            out["expected"] = self.expected
            out["outcome"] = self.outcome
        if self.witness is not None:
            out["witness"] = self.witness
        if self.residue is not None:
            out["residue"] = self.residue
        out["side_conditions"] = list(self.side_conditions)
        return out


@dataclass
class Report:
    file: str
    checks: list[CheckResult]
    error: str | None = None  # document-level failure (evaluation error)

    def as_json(self) -> dict:
        out: dict = {"version": __version__, "file": self.file,
                     "checks": [c.as_json() for c in self.checks]}
        if self.error is not None:
            out["error"] = self.error
        return out

    @property
    def exit_code(self) -> int:
        verdicts = {c.verdict for c in self.checks}
        if "error" in verdicts:
            return 3
        if self.error is not None or "refused" in verdicts:
            return 2
        if "fail" in verdicts:
            return 1
        return 0


@dataclass
class Outcome:
    verdict: str
    witness: str | list | None = None
    residue: str | list | None = None
    values: dict = field(default_factory=dict)


def _ok(flag: bool) -> str:
    return "pass" if flag else "fail"


class Environment:
    def __init__(self, doc: A.Document, options: Options):
        self.doc = doc
        self.options = options
        self.chart: Chart | None = None
        self.scalars: dict[str, Scalar] = {}
        self.forms: dict[str, DifferentialForm] = {}
        self.systems: dict[str, tuple[PfaffianSystem, tuple[str, ...]]] = {}
        self.coframes: dict[str, Coframe] = {}
        self.lies: dict[str, LieAlgebra] = {}
        self.gradings: dict[str, tuple[str, tuple[int, ...]]] = {}
        self.jets: dict[str, JetSpec] = {}
        self.matalgs: dict[str, LinearLieAlgebra] = {}
        self._cauchy: dict[str, PfaffianSystem] = {}

    # -- expression evaluation ---------------------------------------------------------
    def scalar_named(self, name: str):
        return self.scalars[name] if name in self.scalars else self.chart.gen(name)

    def value(self, e: A.Expr):
        ch = self.chart
        if isinstance(e, A.Num):
            return ch.scalar(e.value)
        if isinstance(e, A.Name):
            n = e.id
            if n in self.forms:
                return self.forms[n]
            if n in self.scalars:
                return self.scalars[n]
            if n in ch.names:
                return ch.gen(n)
            if n.startswith("d") and n[1:] in ch.coords:
                return coordinate_differential(ch, n[1:])
            raise EvalError(f"{n!r} is not a scalar or a form")
        if isinstance(e, A.Neg):
            return -self.value(e.operand)
        if isinstance(e, A.Call):
            if e.func == "d":
                v = self.value(e.args[0])
                return ext_d(self._as_form(v))
            base = self.value(e.args[0])
            if isinstance(base, DifferentialForm):
                raise EvalError("pow needs a scalar base")
            k = e.args[1].value if isinstance(e.args[1], A.Num) else -e.args[1].operand.value
            return base ** k
        if isinstance(e, A.BinOp):
            a, b = self.value(e.left), self.value(e.right)
            fa, fb = isinstance(a, DifferentialForm), isinstance(b, DifferentialForm)
            if e.op in "+-":
                if fa or fb:
                    a, b = self._as_form(a), self._as_form(b)
                    if a.degree != b.degree:
                        raise EvalError(f"cannot add a {a.degree}-form and a {b.degree}-form")
                return a + b if e.op == "+" else a - b
            if e.op == "*":
                if fa and fb:
                    if a.degree and b.degree:
                        raise EvalError("product of two forms; use ^ for the wedge product")
                    return wedge(a, b)
                if fa:
                    return a * b
                if fb:
                    return b * a
                return a * b
            if e.op == "/":
                if fb:
                    if b.degree:
                        raise EvalError("division by a form")
                    b = b.as_scalar()
                if not b:
                    raise EvalError("division by zero")
                return a / b
            if e.op == "^":
                return wedge(self._as_form(a), self._as_form(b))
        raise EvalError(f"cannot evaluate {e!r}")

    def _as_form(self, v) -> DifferentialForm:
        if isinstance(v, DifferentialForm):
            return v
        return DifferentialForm.scalar(self.chart, v)

    def scalar_value(self, e: A.Expr) -> Scalar:
        v = self.value(e)
        if isinstance(v, DifferentialForm):
            if v.degree:
                raise EvalError("expected a scalar, got a form")
            return v.as_scalar()
        return v

    def form_value(self, e: A.Expr, degree: int | None = None) -> DifferentialForm:
        v = self._as_form(self.value(e))
        if degree is not None and v.degree != degree:
            raise EvalError(f"expected a {degree}-form, got a {v.degree}-form")
        return v

    # -- declarations ------------------------------------------------------------------
    def declare(self, s: A.Statement) -> None:
        if isinstance(s, A.ChartDecl):
            aux = [a.name for a in self.doc.statements if isinstance(a, A.AuxDecl)]
            self.chart = Chart(s.coords, aux)
        elif isinstance(s, A.AuxDecl):
            if s.differential is not None:
                self.chart.declare(s.name, self.form_value(s.differential, 1))
        elif isinstance(s, A.ScalarDecl):
            self.scalars[s.name] = self.scalar_value(s.expr)
        elif isinstance(s, A.FormDecl):
            self.forms[s.name] = self.form_value(s.expr, 1)
        elif isinstance(s, A.SystemDecl):
            self.systems[s.name] = (PfaffianSystem([self.forms[m] for m in s.members], s.members), s.members)
        elif isinstance(s, A.CoframeDecl):
            self.coframes[s.name] = self._coframe(s)
        elif isinstance(s, A.LieAlgDecl):
            self.lies[s.name] = self._liealg(s)
        elif isinstance(s, A.MatrixAlgDecl):
            names = [n for n, _ in s.matrices]
            mats = [[[_rational(x) for x in row] for row in rows] for _, rows in s.matrices]
            for m in mats:
                if len(m) != s.size or any(len(r) != s.size for r in m):
                    raise EvalError(f"matrices of {s.name} must be {s.size}x{s.size}")
            self.lies[s.name] = LieAlgebra.from_matrices(names, mats)
        elif isinstance(s, A.GradingDecl):
            if len(s.degrees) != self.lies[s.algebra].dim:
                raise EvalError(f"grading {s.name} needs {self.lies[s.algebra].dim} degrees")
            self.gradings[s.name] = (s.algebra, s.degrees)
        elif isinstance(s, A.JetDecl):
            vk0 = None if s.vk0 is None else [[_rational(x) for x in v] for v in s.vk0]
            try:
                self.jets[s.name] = JetSpec(s.n, s.m, s.k, vk0)
            except ValueError as exc:
                raise EvalError(f"jetspec {s.name}: {exc}") from None
        elif isinstance(s, A.MatAlgDecl):
            self.matalgs[s.name] = self._matalg(s)
        elif isinstance(s, A.MatAlgDerived):
            src = self.matalgs[s.source]
            if s.op == "dual":
                self.matalgs[s.name] = src.dual()
            else:
                alg, degrees = self.gradings[s.grading]
                if len(degrees) != src.size:
                    raise EvalError(f"grading {s.grading} has {len(degrees)} degrees, matrices are {src.size}x{src.size}")
                self.matalgs[s.name] = src.degree_part(degrees, 0)

    def _coframe(self, s: A.CoframeDecl) -> Coframe:
        blocks = None
        if s.labels is not None:
            keys = [k for k, _ in s.labels]
            want = ["Vm1"] + [f"V{p}" for p in range(len(keys) - 2)] + ["Vk0"]
            if keys != want:
                raise EvalError(f"coframe {s.name}: label blocks must be {', '.join(want)}")
            blocks = [[i - 1 for i in idx] for _, idx in s.labels]
        try:
            return Coframe(self.chart, [self.forms[m] for m in s.members], list(s.members), blocks)
        except ValueError as exc:
            raise EvalError(f"coframe {s.name}: {exc}") from None

    def _liealg(self, s: A.LieAlgDecl) -> LieAlgebra:
        basis = list(s.basis) if s.basis else [f"X{i + 1}" for i in range(s.dim)]
        if len(basis) != s.dim:
            raise EvalError(f"liealg {s.name}: {len(basis)} basis names for dimension {s.dim}")
        brackets = {}
        for i, j, e in s.brackets:
            vec = _linear_combination(e, basis)
            if (i - 1, j - 1) in brackets:
                raise EvalError(f"liealg {s.name}: bracket [{i},{j}] given twice")
            brackets[(i - 1, j - 1)] = vec
        try:
            return LieAlgebra(basis, brackets)
        except ValueError as exc:
            raise EvalError(f"liealg {s.name}: {exc}") from None

    def _matalg(self, s: A.MatAlgDecl) -> LinearLieAlgebra:
        if len(s.rows) != s.size or any(len(r) != s.size for r in s.rows):
            raise EvalError(f"matalg {s.name} must be {s.size}x{s.size}")
        pc = Chart(list(s.params))
        gens = [[[Fraction(0)] * s.size for _ in range(s.size)] for _ in s.params]
        for r, row in enumerate(s.rows):
            for c, e in enumerate(row):
                entry = _param_value(pc, e)
                rest = entry
                for t, name in enumerate(s.params):
                    coef = partial(entry, t)
                    if not is_constant(coef):
                        raise EvalError(f"matalg {s.name}: entry ({r + 1},{c + 1}) is not linear")
                    gens[t][r][c] = to_fraction(coef)
                    rest = rest - coef * pc.gens()[t]
                if rest:
                    raise EvalError(f"matalg {s.name}: entry ({r + 1},{c + 1}) has a constant term")
        return LinearLieAlgebra(s.size, gens, list(s.params))

    # -- claims ------------------------------------------------------------------------
    def claim(self, s: A.Claim) -> Outcome:
        lhs, rhs = self.form_value(s.lhs), self.form_value(s.rhs)
        # a literal 0 stands for the zero form of the other side's degree
        if rhs.degree == 0 and rhs.is_zero():
            rhs = DifferentialForm.zero(self.chart, lhs.degree)
        elif lhs.degree == 0 and lhs.is_zero():
            lhs = DifferentialForm.zero(self.chart, rhs.degree)
        if lhs.degree != rhs.degree:
            raise EvalError(f"claim compares a {lhs.degree}-form with a {rhs.degree}-form")
        diff = lhs - rhs
        if s.coframe is not None:
            C = self.coframes[s.coframe]
            terms = C.expand(diff)
            drop = set()
            vm1 = False
            for m in s.modulus or ():
                if m == "Vm1^Vm1":
                    if C.blocks is None:
                        raise Refusal(f"coframe {s.coframe} has no labels")
                    vm1 = True
                elif m in C.names:
                    drop.add(C.names.index(m))
                else:
                    raise Refusal(f"{m} is not a form of coframe {s.coframe}")
            vm1_set = set(C.blocks[0]) if vm1 else set()
            res = {k: v for k, v in terms.items()
                   if not drop.intersection(k) and not (vm1_set and all(i in vm1_set for i in k))}
            text = C.render(res)
            return Outcome(_ok(not res), residue=None if not res else text)
        if s.modulus:
            res = reduce_mod(diff, [self.forms[m] for m in s.modulus])
        else:
            res = diff
        return Outcome(_ok(res.is_zero()), residue=None if res.is_zero() else res.render())

    # -- checks ------------------------------------------------------------------------
    def cauchy(self, name: str) -> PfaffianSystem:
        if name not in self._cauchy:
            self._cauchy[name] = cauchy_system(self.systems[name][0])
        return self._cauchy[name]

    def check(self, s: A.Check) -> Outcome:
        b = bind(s.kind, s.args)
        return getattr(self, f"c_{s.kind}")(b)

    def c_cauchy(self, b) -> Outcome:
        ch = self.cauchy(b["S"])
        integrable = is_completely_integrable(ch)
        agree = characteristics_agree(self.systems[b["S"]][0])
        witness = [f.render() for f in ch.forms]
        ok = integrable.integrable and agree
        res = None if integrable.integrable else integrable.residue.render()
        if not agree:
            witness.append("characteristic vector fields disagree with the form computation")
        return Outcome(_ok(ok), witness, res, {"rank": ch.rank})

    def c_integrable(self, b) -> Outcome:
        r = is_completely_integrable(self.systems[b["S"]][0])
        return Outcome(_ok(r.integrable), None, None if r.integrable else r.residue.render(), {})

    def c_solvable(self, b) -> Outcome:
        S, _ = self.systems[b["S"]]
        W = [self.forms[n] for n in b["W"]]
        r = is_solvable_system(W, S, list(b["W"]))
        return Outcome(_ok(r.solvable), r.failures or None,
                       r.residue.render() if r.residue is not None else None)

    def c_first_integral(self, b) -> Outcome:
        ch = self.cauchy(b["S"])
        bad = [u for u in b["U"] if not is_first_integral(self.scalar_named(u), ch)]
        return Outcome(_ok(not bad), [f"{u} is not a first integral" for u in bad] or None)

    def c_express(self, b) -> Outcome:
        S, members = self.systems[b["S"]]
        U = [self.scalar_named(u) for u in b["U"]]
        D = b.get("D", self.options.mix_degree)
        results, ok = express_in_integrals(S, U, list(b["U"]), D)
        lines = [r.render(list(members), list(b["U"])) if r.functional else f"{members[r.target]}: not found"
                 for r in results]
        return Outcome(_ok(ok), lines, None, {"forms": tuple(A.Str(x) for x in lines)})

    def c_structure(self, b) -> Outcome:
        rep = structure_report(self.coframes[b["C"]])
        return Outcome("pass", rep.lines())

    def c_type(self, b) -> Outcome:
        C = self.coframes[b["C"]]
        r = check_type(C, self.jets[b["J"]])
        witness = []
        if not r.symbol_matches:
            witness += r.symbol_mismatch
        if not r.C1:
            witness.append("symbol tensor fails (C1)")
        residues = [f"{cl.claim.label}: {cl.text}" for cl in r.claims if not cl.ok]
        return Outcome(_ok(r.ok), witness or None, residues or None,
                       {"residues": tuple(A.Str(cl.text) for cl in r.claims if not cl.ok)})

    def c_equivalent(self, b) -> Outcome:
        C, D = self.coframes[b["C"]], self.coframes[b["D"]]
        r = structural_equivalence(C, D)
        witness = [" ".join(render(x) for x in row) for row in r.A]
        if not r.invertible:
            witness.append("A is singular")
        for i, j in r.violations:
            witness.append(f"A[{C.names[i]}][{C.names[j]}] = {render(r.A[i][j])} breaks the block pattern")
        return Outcome(_ok(r.ok), witness)

    def c_maurer_cartan(self, b) -> Outcome:
        C = self.coframes[b["C"]]
        r = maurer_cartan_verify(self.lies[b["L"]], C)
        res = [f"d{C.names[i]}: {t}" for i, t in sorted(r.residues.items())]
        return Outcome(_ok(r.ok), None, res or None)

    def c_jacobi(self, b) -> Outcome:
        L = self.lies[b["L"]]
        r = jacobi_check(L)
        if r.ok:
            return Outcome("pass")
        i, j, k = r.triple
        return Outcome("fail", f"Jacobi fails on ({L.names[i]}, {L.names[j]}, {L.names[k]})",
                       _vector_text(r.value, L.names))

    def c_semisimple(self, b) -> Outcome:
        return Outcome(_ok(is_semisimple(self.lies[b["L"]])))

    def c_grading(self, b) -> Outcome:
        alg, degrees = self.gradings[b["G"]]
        L = self.lies[alg]
        r = grading_check(L, degrees)
        if not r.ok:
            i, j = r.witness
            return Outcome("fail", f"[{L.names[i]}, {L.names[j]}] leaves degree {degrees[i] + degrees[j]}")
        dims = tuple(r.negative_dims[d] for d in sorted(r.negative_dims, reverse=True))
        return Outcome("pass", f"fundamental={r.fundamental} depth={r.depth}", None,
                       {"fundamental": int(r.fundamental), "depth": r.depth, "dims": dims})

    def c_wk(self, b) -> Outcome:
        spec = self.jets[b["J"]]
        W = build_Wk(spec)
        L = W.algebra
        problems = []
        if not jacobi_check(L).ok:
            problems.append("Jacobi identity fails")
        if not is_nilpotent(L):
            problems.append("not nilpotent")
        p41 = prop41_checks(W, self.options.seed)
        problems += p41.details
        if "L" in b:
            other = self.lies[b["L"]]
            if other.dim != L.dim:
                problems.append(f"dimension {L.dim} != {other.dim}")
            else:
                for i in range(L.dim):
                    for j in range(i + 1, L.dim):
                        if L.c[i][j] != other.c[i][j]:
                            problems.append(
                                f"[{other.names[i]}, {other.names[j]}]: model gives "
                                f"{_vector_text(L.c[i][j], other.names)}, declared "
                                f"{_vector_text(other.c[i][j], other.names)}"
                            )
        witness = [f"basis: {', '.join(W.basis_labels)}"] + problems
        return Outcome(_ok(not problems), witness, None,
                       {"dim": L.dim, "blocks": tuple(spec.block_dims())})

    def c_involutive(self, b) -> Outcome:
        spec = self.jets[b["J"]]
        r = vk0_involutive(spec, self.options.seed)
        witness = [f"prolongation dim {r.prolongation_dim}",
                   f"annihilated dims along the flag {arg_text(tuple(r.step_dims))}",
                   f"flags tried {r.tried}"]
        if r.flag is not None:
            witness.insert(0, "flag " + ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in r.flag))
        return Outcome(_ok(r.involutive), witness, None,
                       {"prolongation": r.prolongation_dim, "steps": tuple(r.step_dims)})

    def c_dla(self, b) -> Outcome:
        L = self.lies[b["L"]]
        _check_labels(b["M"] + b["J0"], L.dim)
        cert = check_differential_lie_algebra(L, [i - 1 for i in b["M"]], [i - 1 for i in b["J0"]],
                                              self.jets[b["J"]])
        if not cert.ok:
            return Outcome("fail", cert.failures)
        mnames = [L.names[i - 1] for i in b["M"]]
        lines = []
        for x, S in zip(mnames, cert.S):
            for r, row in enumerate(S):
                for c, v in enumerate(row):
                    if v:
                        lines.append(f"S({x})({mnames[c]}) has {v} {mnames[r]}")
        return Outcome("pass", lines or ["S = 0"], None,
                       {"order": cert.order, "fundamental": int(cert.fundamental)})

    def c_construct_S(self, b) -> Outcome:
        alg, degrees = self.gradings[b["G"]]
        w = construct_S_semisimple(self.lies[alg], degrees)
        witness = list(w.failures)
        if not w.h_injective:
            witness.append("h is not injective")
        if not w.killing_zero_blocks:
            witness.append("Killing form does not vanish on the expected blocks")
        return Outcome(_ok(bool(w) and w.killing_zero_blocks), witness or None)

    def c_closed(self, b) -> Outcome:
        A_ = self.matalgs[b["A"]]
        w = A_.closure_witness()
        return Outcome(_ok(w is None), None if w is None else f"commutator of basis elements {w[0] + 1}, {w[1] + 1}",
                       None, {"dim": A_.dim})

    def c_jk(self, b) -> Outcome:
        A_ = self.matalgs[b["A"]]
        dims = list(b["B"])
        n = A_.size
        if "P" in b:
            _check_labels(b["P"], n)
        perm = [i - 1 for i in b["P"]] if "P" in b else list(range(n))
        if sorted(perm) != list(range(n)):
            raise Refusal("order must be a permutation of the basis")
        bad = []
        for name, g in zip(A_.names, A_.generators):
            m = [[g[perm[r]][perm[c]] for c in range(n)] for r in range(n)]
            try:
                v = jk_violation(m, dims)
            except ValueError as exc:
                raise Refusal(str(exc)) from None
            if v is not None:
                bad.append(f"{name}: entry ({perm[v[0]] + 1},{perm[v[1]] + 1}) outside the pattern")
        return Outcome(_ok(not bad), bad or None)

    def c_spencer(self, b) -> Outcome:
        dims = spencer_prolong(self.matalgs[b["A"]], b["N"])
        return Outcome("pass", f"dims {arg_text(tuple(dims))}", None, {"dims": tuple(dims)})

    def c_tanaka(self, b) -> Outcome:
        alg, degrees = self.gradings[b["G"]]
        r = tanaka_prolong(self.lies[alg], degrees, self.matalgs[b["A"]], b["N"])
        witness = f"g0 {r.g0_dim}, positive dims {arg_text(tuple(r.dims))}, total {r.total}"
        if not r.terminated:
            witness += f" (no zero layer up to degree {b['N']})"
        return Outcome("pass", witness, None, {"dims": tuple(r.dims), "total": r.total, "g0": r.g0_dim})


def _check_labels(labels, dim: int) -> None:
    bad = [i for i in labels if not 1 <= i <= dim]
    if bad:
        raise Refusal(f"basis labels {bad} outside 1..{dim}")


def _vector_text(vec, names) -> str:
    parts = []
    for a, n in zip(vec, names):
        if not a:
            continue
        coef = "" if abs(a) == 1 else f"{abs(a)}*"
        sign = "-" if a < 0 else "+"
        parts.append((sign, f"{coef}{n}"))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def _rational(e: A.Expr) -> Fraction:
    if isinstance(e, A.Num):
        return Fraction(e.value)
    if isinstance(e, A.Neg):
        return -_rational(e.operand)
    if isinstance(e, A.BinOp) and e.op in "+-*/":
        a, b = _rational(e.left), _rational(e.right)
        if e.op == "/":
            if not b:
                raise EvalError("division by zero")
            return a / b
        return {"+": a + b, "-": a - b, "*": a * b}[e.op]
    raise EvalError("expected a rational number")


def _param_value(chart: Chart, e: A.Expr) -> Scalar:
    if isinstance(e, A.Num):
        return chart.scalar(e.value)
    if isinstance(e, A.Name):
        if e.id not in chart.names:
            raise EvalError(f"{e.id!r} is not a parameter")
        return chart.gen(e.id)
    if isinstance(e, A.Neg):
        return -_param_value(chart, e.operand)
    if isinstance(e, A.BinOp) and e.op in "+-*/":
        a, b = _param_value(chart, e.left), _param_value(chart, e.right)
        if e.op == "/":
            if not b:
                raise EvalError("division by zero")
            return a / b
        return {"+": a + b, "-": a - b, "*": a * b}[e.op]
    raise EvalError("matrix entries are rational combinations of the parameters")


def _linear_combination(e: A.Expr, basis: list[str]) -> dict[int, Fraction]:
    """Evaluate a bracket right-hand side such as ``-X3`` or ``2*X1 - X5``."""
    if isinstance(e, A.Num):
        if e.value != 0:
            raise EvalError("a bracket value must be a combination of basis elements")
        return {}
    if isinstance(e, A.Name):
        if e.id not in basis:
            raise EvalError(f"{e.id!r} is not a basis element")
        return {basis.index(e.id): Fraction(1)}
    if isinstance(e, A.Neg):
        return {k: -v for k, v in _linear_combination(e.operand, basis).items()}
    if isinstance(e, A.BinOp):
        if e.op in "+-":
            out = dict(_linear_combination(e.left, basis))
            for k, v in _linear_combination(e.right, basis).items():
                out[k] = out.get(k, Fraction(0)) + (v if e.op == "+" else -v)
            return out
        if e.op == "*":
            c = _rational(e.left)
            return {k: c * v for k, v in _linear_combination(e.right, basis).items()}
        if e.op == "/":
            c = _rational(e.right)
            return {k: v / c for k, v in _linear_combination(e.left, basis).items()}
    raise EvalError("a bracket value must be a combination of basis elements")


def _compare_values(values: dict, expected: tuple) -> list[str]:
    problems = []
    for key, want in expected:
        if key not in values:
            problems.append(f"no value {key!r} to compare")
            continue
        got = values[key]
        if got != want:
            problems.append(f"{key} {arg_text(got)} != expected {arg_text(want)}")
    return problems


def run(doc: A.Document, options: Options | None = None,
        on_result: Callable[[CheckResult], None] | None = None) -> Report:
    options = options or Options()
    env = Environment(doc, options)
    results: list[CheckResult] = []
    for s in doc.statements:
        if not isinstance(s, (A.Claim, A.Check)):
            try:
                env.declare(s)
            except (EdskitError, ZeroDivisionError) as exc:
                return Report(doc.source, results, f"line {s.line}: {exc}")
            continue
        kind = "claim" if isinstance(s, A.Claim) else s.kind
        start = time.perf_counter()
        with side_conditions() as side:
            try:
                out = env.claim(s) if isinstance(s, A.Claim) else env.check(s)
            except Refusal as exc:
                out = Outcome("refused", str(exc))
            except EdskitError as exc:
                out = Outcome("refused", str(exc))
            except Exception as exc:  # internal invariant breach
                tb = traceback.extract_tb(exc.__traceback__)[-1]
                out = Outcome("error", f"{type(exc).__name__}: {exc} ({tb.filename.rsplit('/', 1)[-1]}:{tb.lineno})")
        raw = out.verdict
        verdict = raw
        witness = out.witness
        if s.expect.verdict != "pass" and raw != "error":
            verdict = "pass" if raw == s.expect.verdict else "fail"
        if raw in ("pass", "fail") and s.expect.values:
            problems = _compare_values(out.values, s.expect.values)
            if problems:
                verdict = "fail"
                witness = problems + ([witness] if isinstance(witness, str) else list(witness or []))
        result = CheckResult(check_title(s), kind, verdict, witness, out.residue, list(side),
                             s.expect.verdict, raw, out.values, time.perf_counter() - start, s.line)
        results.append(result)
        if on_result is not None:
            on_result(result)
    return Report(doc.source, results)
