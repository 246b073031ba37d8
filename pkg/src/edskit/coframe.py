"""Coframes (absolute parallelisms), their structure equations and congruence checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import linalg
from .errors import Refusal
from .exterior import DifferentialForm, Frame, coordinate_differential, ext_d, render_terms
from .liealg.algebra import LieAlgebra
from .liealg.jets import JetAlgebra, JetSpec, build_Wk
from .liealg.linear import jk_violation
from .scalars import Chart, Scalar, render

Terms = dict[tuple[int, ...], Scalar]


class Coframe:
    """N independent 1-forms on an N-dimensional chart, optionally split into jet blocks.

    ``blocks`` lists 0-based form indices for V_-1, V_0, ..., V_{k-1}, V_k^0.
    """

    def __init__(self, chart: Chart, forms: Sequence[DifferentialForm], names: Sequence[str] | None = None,
                 blocks: Sequence[Sequence[int]] | None = None):
        if len(forms) != chart.dim:
            raise ValueError(f"a coframe on a {chart.dim}-dimensional chart needs {chart.dim} forms, got {len(forms)}")
        self.chart = chart
        self.forms = list(forms)
        self.names = list(names) if names else [f"w{i + 1}" for i in range(len(forms))]
        self.frame = Frame(chart, self.forms)
        self.blocks: list[list[int]] | None = None
        if blocks is not None:
            flat = [i for b in blocks for i in b]
            if sorted(flat) != list(range(len(forms))):
                raise ValueError("labels must partition the coframe indices")
            if len(blocks) < 3:
                raise ValueError("labels need V_-1, V_0 and at least one more block")
            self.blocks = [list(b) for b in blocks]
        self._d: dict[int, Terms] = {}

    def __len__(self) -> int:
        return len(self.forms)

    @property
    def order(self) -> int:
        if self.blocks is None:
            raise Refusal("coframe has no jet labels")
        return len(self.blocks) - 2

    @property
    def label_order(self) -> list[int]:
        """Form indices in model-basis order (V_-1 first, V_k^0 last)."""
        if self.blocks is None:
            raise Refusal("coframe has no jet labels")
        return [i for b in self.blocks for i in b]

    def expand(self, a: DifferentialForm) -> Terms:
        return self.frame.expand(a)

    def d_terms(self, i: int) -> Terms:
        if i not in self._d:
            self._d[i] = self.frame.expand(ext_d(self.forms[i]))
        return self._d[i]

    def render(self, terms: Mapping[tuple[int, ...], Scalar]) -> str:
        return render_terms(terms, self.names)


# -- structure equations -----------------------------------------------------------------


@dataclass
class StructureReport:
    names: list[str]
    coefficients: list[Terms]  # i -> {(j, k): c^i_jk} with dw^i = sum_{j<k} c^i_jk w^j^w^k

    def line(self, i: int) -> str:
        return f"d{self.names[i]} = {render_terms(self.coefficients[i], self.names)}"

    def lines(self) -> list[str]:
        return [self.line(i) for i in range(len(self.names))]

    def __str__(self) -> str:
        return "\n".join(self.lines())


def structure_report(C: Coframe) -> StructureReport:
    return StructureReport(C.names, [C.d_terms(i) for i in range(len(C))])


def reassemble(C: Coframe, i: int) -> DifferentialForm:
    return C.frame.assemble(C.d_terms(i), 2)


# -- congruences -----------------------------------------------------------------------


@dataclass
class CongruenceClaim:
    """dw^target == rhs, modulo the forms in ``modulus`` (and all V_-1 pairs if asked)."""

    target: int
    rhs: Terms
    modulus: tuple[int, ...] = ()
    drop_vm1_pairs: bool = False
    label: str = ""


@dataclass
class ClaimResult:
    claim: CongruenceClaim
    ok: bool
    residue: Terms
    text: str

    def __bool__(self) -> bool:
        return self.ok


def _reduce(C: Coframe, terms: Mapping[tuple[int, ...], Scalar], modulus: Sequence[int],
            drop_vm1_pairs: bool) -> Terms:
    mod = set(modulus)
    vm1 = set(C.blocks[0]) if (drop_vm1_pairs and C.blocks) else set()
    if drop_vm1_pairs and not C.blocks:
        raise Refusal("dropping V_-1 pairs needs jet labels")
    out = {}
    for key, c in terms.items():
        if mod.intersection(key):
            continue
        if vm1 and all(i in vm1 for i in key):
            continue
        if c:
            out[key] = c
    return out


def check_claim(C: Coframe, claim: CongruenceClaim) -> ClaimResult:
    n = len(C)
    if not 0 <= claim.target < n or any(not 0 <= i < n for i in claim.modulus):
        raise ValueError("claim references a form outside the coframe")
    diff: Terms = dict(C.d_terms(claim.target))
    for key, c in claim.rhs.items():
        key = tuple(key)
        if len(key) != 2 or key[0] >= key[1]:
            raise ValueError(f"right-hand side index {key} must be an increasing pair")
        diff[key] = diff.get(key, C.chart.zero) - C.chart.scalar(c)
    residue = _reduce(C, diff, claim.modulus, claim.drop_vm1_pairs)
    residue = {k: v for k, v in residue.items() if v}
    return ClaimResult(claim, not residue, residue, C.render(residue))


def check_congruences(C: Coframe, claims: Sequence[CongruenceClaim]) -> list[ClaimResult]:
    return [check_claim(C, cl) for cl in claims]


def bracket_terms(C: Coframe, model: LieAlgebra, target_model: int, left_block: int,
                  right_block: int) -> Terms:
    """Coefficients of [w^{left}^w^{right}]_0 along model basis element ``target_model``.

    Returns {(i, j): c} in coframe indices (ordered, sign absorbed).
    """
    order = C.label_order
    pos = {f: t for t, f in enumerate(order)}
    out: Terms = {}
    for a in C.blocks[left_block]:
        for b in C.blocks[right_block]:
            c = model.c[pos[a]][pos[b]][target_model]
            if not c:
                continue
            key, sign = ((a, b), 1) if a < b else ((b, a), -1)
            out[key] = out.get(key, C.chart.zero) + C.chart.scalar(c * sign)
    return {k: v for k, v in out.items() if v}


def c2prime_template(C: Coframe, jet: JetAlgebra) -> list[CongruenceClaim]:
    """Type-W_k^0 congruences on a labelled coframe.

    dw^a == 0 mod V_-1 for a in V_-1, and for p = 0..k-1, i in V_p:
    dw^i + [w^{-1} ^ w^{p+1}]^i == 0 mod V_0 .. V_p.
    """
    _check_dims(C, jet.spec)
    blocks = C.blocks
    order = C.label_order
    pos = {f: t for t, f in enumerate(order)}
    claims = []
    for a in blocks[0]:
        claims.append(CongruenceClaim(a, {}, tuple(blocks[0]), label=f"d{C.names[a]} == 0 mod V_-1"))
    k = C.order
    for p in range(k):
        mod = tuple(i for b in blocks[1:p + 2] for i in b)
        for i in blocks[p + 1]:
            br = bracket_terms(C, jet.algebra, pos[i], 0, p + 2)
            rhs = {key: -v for key, v in br.items()}
            mod_text = ", ".join(C.names[j] for j in mod)
            label = f"d{C.names[i]} == {C.render(rhs)} mod ({mod_text})"
            claims.append(CongruenceClaim(i, rhs, mod, label=label))
    return claims


def _check_dims(C: Coframe, spec: JetSpec) -> None:
    if C.blocks is None:
        raise Refusal("coframe has no jet labels")
    want = spec.block_dims()
    got = [len(b) for b in C.blocks]
    if want != got:
        raise Refusal(f"label block sizes {got} do not match the jet model {want}")


# -- symbol tensor -----------------------------------------------------------------------


@dataclass
class SymbolTensor:
    """T(X_a, X_b) in V_{k-1} for a in V_-1, b in V_k^0: values[a][b][i]."""

    values: list[list[list[Scalar]]]
    n_vm1: int
    n_vk0: int
    n_target: int


def symbol_tensor(C: Coframe) -> SymbolTensor:
    """Read T off dw^{k-1} + T(w^{-1} ^ w^k) == 0 (mod w^{-1}^w^{-1}, w^0..w^{k-1})."""
    if C.blocks is None:
        raise Refusal("coframe has no jet labels")
    vm1, vk0, tgt = C.blocks[0], C.blocks[-1], C.blocks[-2]
    z = C.chart.zero
    vals = [[[z for _ in tgt] for _ in vk0] for _ in vm1]
    for t, i in enumerate(tgt):
        d = C.d_terms(i)
        for x, a in enumerate(vm1):
            for y, b in enumerate(vk0):
                key, sign = ((a, b), 1) if a < b else ((b, a), -1)
                c = d.get(key, z)
                vals[x][y][t] = -c if sign > 0 else c
    return SymbolTensor(vals, len(vm1), len(vk0), len(tgt))


def model_symbol_tensor(C: Coframe, jet: JetAlgebra) -> SymbolTensor:
    """T = [.,.]_0 restricted to V_-1 x V_k^0 in the coframe labelling."""
    _check_dims(C, jet.spec)
    order = C.label_order
    pos = {f: t for t, f in enumerate(order)}
    vm1, vk0, tgt = C.blocks[0], C.blocks[-1], C.blocks[-2]
    vals = [[[C.chart.scalar(jet.algebra.c[pos[a]][pos[b]][pos[i]]) for i in tgt] for b in vk0] for a in vm1]
    return SymbolTensor(vals, len(vm1), len(vk0), len(tgt))


def check_C1(T: SymbolTensor) -> bool:
    """X_k -> T(., X_k) has trivial kernel (rank over the fraction field)."""
    if T.n_vk0 == 0:
        return True
    rows = [[T.values[a][b][i] for b in range(T.n_vk0)] for a in range(T.n_vm1) for i in range(T.n_target)]
    if not rows:
        return False
    return linalg.rank(rows, T.n_vk0) == T.n_vk0


# -- type check ------------------------------------------------------------------------


@dataclass
class TypeReport:
    ok: bool
    symbol_matches: bool
    C1: bool
    claims: list[ClaimResult]
    symbol_mismatch: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def residues(self) -> list[str]:
        return [r.text for r in self.claims if not r.ok]


def check_type(C: Coframe, spec: JetSpec) -> TypeReport:
    if C.blocks is None:
        raise Refusal("check_type needs a labelled coframe")
    jet = build_Wk(spec)
    _check_dims(C, spec)
    T = symbol_tensor(C)
    T0 = model_symbol_tensor(C, jet)
    mismatch = []
    for a in range(T.n_vm1):
        for b in range(T.n_vk0):
            for i in range(T.n_target):
                if T.values[a][b][i] != T0.values[a][b][i]:
                    names = C.names
                    mismatch.append(
                        f"T({names[C.blocks[0][a]]}, {names[C.blocks[-1][b]]}) along {names[C.blocks[-2][i]]}: "
                        f"{render(T.values[a][b][i])} != {render(T0.values[a][b][i])}"
                    )
    claims = check_congruences(C, c2prime_template(C, jet))
    c1 = check_C1(T)
    ok = not mismatch and all(claims) and c1
    return TypeReport(ok, not mismatch, c1, claims, mismatch)


# -- structural equivalence ----------------------------------------------------------------


@dataclass
class EquivalenceReport:
    ok: bool
    A: list[list[Scalar]]
    violations: list[tuple[int, int]]
    invertible: bool

    def __bool__(self) -> bool:
        return self.ok


def structural_equivalence(C: Coframe, D: Coframe, dims: Sequence[int] | None = None) -> EquivalenceReport:
    """Find A with D = A C; check det A != 0 and the G(W_k^0) block pattern.

    ``dims`` are the block sizes in label order; by default taken from C's labels.
    The pattern is checked in label order.
    """
    if C.chart is not D.chart:
        raise Refusal("coframes live on different charts")
    n = len(C)
    # D.matrix = A * C.matrix  =>  A = D.matrix * C.inverse
    A = linalg.matmul(D.frame.matrix, C.frame.inverse, C.chart.zero)
    try:
        det = linalg.det(A, C.chart.zero, C.chart.one)
    except ZeroDivisionError:
        det = C.chart.zero
    violations: list[tuple[int, int]] = []
    if dims is None and C.blocks is not None:
        dims = [len(b) for b in C.blocks]
    if dims is not None:
        order = C.label_order if C.blocks is not None else list(range(n))
        P = [[A[order[r]][order[c]] for c in range(n)] for r in range(n)]
        bad = jk_violations_all(P, dims)
        violations = [(order[r], order[c]) for r, c in bad]
    return EquivalenceReport(bool(det) and not violations, A, violations, bool(det))


def jk_violations_all(m, dims: Sequence[int]) -> list[tuple[int, int]]:
    out = []
    work = [list(r) for r in m]
    while True:
        bad = jk_violation(work, dims)
        if bad is None:
            return out
        out.append(bad)
        work[bad[0]][bad[1]] = 0


# -- Maurer-Cartan ---------------------------------------------------------------------


@dataclass
class MaurerCartanReport:
    ok: bool
    residues: dict[int, str]

    def __bool__(self) -> bool:
        return self.ok


def maurer_cartan_verify(L: LieAlgebra, C: Coframe) -> MaurerCartanReport:
    """dw^i + sum_{j<k} c^i_jk w^j^w^k == 0 for every i."""
    if L.dim != len(C):
        raise Refusal(f"algebra has dimension {L.dim}, coframe has {len(C)} forms")
    residues = {}
    for i in range(len(C)):
        terms: Terms = dict(C.d_terms(i))
        for j in range(L.dim):
            for k in range(j + 1, L.dim):
                c = L.c[j][k][i]
                if c:
                    terms[(j, k)] = terms.get((j, k), C.chart.zero) + C.chart.scalar(c)
        terms = {key: v for key, v in terms.items() if v}
        if terms:
            residues[i] = C.render(terms)
    return MaurerCartanReport(not residues, residues)


def algebra_from_coframe(C: Coframe, names: Sequence[str] | None = None) -> LieAlgebra:
    """Lie algebra whose Maurer-Cartan equations are C's structure equations (constant coefficients)."""
    from .scalars import is_constant, to_fraction

    n = len(C)
    brackets: dict = {}
    for i in range(n):
        for (j, k), c in C.d_terms(i).items():
            if not is_constant(c):
                raise Refusal(f"d{C.names[i]} has a non-constant coefficient {render(c)}")
            brackets.setdefault((j, k), {})[i] = -to_fraction(c)
    return LieAlgebra(list(names) if names else [f"X{i + 1}" for i in range(n)], brackets)


# -- canonical jet coframe -------------------------------------------------------------


def canonical_coframe(spec: JetSpec, names: Sequence[str] | None = None) -> tuple[Coframe, JetAlgebra]:
    """Flat model coframe on W_k^0 with dtheta^p + [theta^{-1} ^ theta^{p+1}] = 0.

    One coordinate per basis element; theta^i = dx_i - sum c^i_{ba} x_b dx_a for i
    of degree p < k (a in V_-1, b of degree p + 1), theta = dx otherwise.
    """
    jet = build_Wk(spec)
    L = jet.algebra
    N = L.dim
    coords = list(names) if names else [f"u{i + 1}" for i in range(N)]
    if len(coords) != N:
        raise ValueError(f"need {N} coordinate names")
    chart = Chart(coords)
    deg = jet.degrees
    vm1 = [i for i in range(N) if deg[i] == -1]
    forms = []
    x = chart.gens()
    for i in range(N):
        th = coordinate_differential(chart, coords[i])
        if deg[i] >= 0 and deg[i] < spec.k:
            for a in vm1:
                for b in range(N):
                    if deg[b] == deg[i] + 1 and L.c[b][a][i]:
                        th = th - coordinate_differential(chart, coords[a]) * (chart.scalar(L.c[b][a][i]) * x[b])
        forms.append(th)
    blocks: list[list[int]] = [[] for _ in range(spec.k + 2)]
    for i in range(N):
        blocks[deg[i] + 1].append(i)
    labels = [f"theta{i + 1}" for i in range(N)]
    return Coframe(chart, forms, labels, blocks), jet
