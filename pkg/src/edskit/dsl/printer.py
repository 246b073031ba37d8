"""Canonical text for syntax trees; ``parse(to_text(doc)) == doc``."""
from __future__ import annotations

from . import ast as A

# binding strength: + - < ^ < unary minus < * /
_PREC = {"+": 1, "-": 1, "^": 2, "*": 4, "/": 4}
_NEG = 3


def expr_text(e: A.Expr) -> str:
    return _expr(e, 0)


def _expr(e: A.Expr, outer: int) -> str:
    if isinstance(e, A.Num):
        return str(e.value)
    if isinstance(e, A.Name):
        return e.id
    if isinstance(e, A.Call):
        return f"{e.func}({', '.join(_expr(a, 0) for a in e.args)})"
    if isinstance(e, A.Neg):
        text = "-" + _expr(e.operand, _NEG)
        return f"({text})" if outer > _NEG else text
    if isinstance(e, A.BinOp):
        p = _PREC[e.op]
        left = _expr(e.left, p)
        # left-associative: an equal-precedence right child needs parentheses
        right = _expr(e.right, p + 1)
        if e.op in "*/":
            # product operands are atoms in the grammar
            left = _expr(e.left, p) if not isinstance(e.left, A.Neg) else f"({_expr(e.left, 0)})"
            if isinstance(e.right, (A.BinOp, A.Neg)):
                right = f"({_expr(e.right, 0)})"
        sep = "^" if e.op == "^" else f" {e.op} " if p == 1 else e.op
        text = f"{left}{sep}{right}"
        return f"({text})" if p < outer else text
    raise TypeError(f"not an expression: {e!r}")


def arg_text(a: A.Arg) -> str:
    if isinstance(a, A.Ident):
        return a.id
    if isinstance(a, bool):
        raise TypeError("booleans are not arguments")
    if isinstance(a, int):
        return str(a)
    if isinstance(a, A.Str):
        return f'"{a.value}"'
    if isinstance(a, tuple):
        return "(" + ", ".join(arg_text(x) for x in a) + ")"
    raise TypeError(f"not an argument: {a!r}")


def expect_text(x: A.Expect) -> str:
    if x == A.Expect():
        return ""
    parts = []
    if x.verdict != "pass" or not x.values:
        parts.append(x.verdict)
    for key, value in x.values:
        parts.append(f"{key} {arg_text(value)}")
    return " expect " + " ".join(parts)


def _row(items) -> str:
    return "[" + ", ".join(expr_text(e) for e in items) + "]"


def statement_text(s: A.Statement) -> str:
    if isinstance(s, A.ChartDecl):
        return "chart " + " ".join(s.coords) + ";"
    if isinstance(s, A.AuxDecl):
        if s.differential is None:
            return f"aux {s.name};"
        return f"aux {s.name} d{s.name} = {expr_text(s.differential)};"
    if isinstance(s, A.ScalarDecl):
        return f"scalar {s.name} = {expr_text(s.expr)};"
    if isinstance(s, A.FormDecl):
        return f"form {s.name} = {expr_text(s.expr)};"
    if isinstance(s, A.SystemDecl):
        return f"system {s.name} = [{', '.join(s.members)}];"
    if isinstance(s, A.CoframeDecl):
        text = f"coframe {s.name} = [{', '.join(s.members)}]"
        if s.labels is not None:
            groups = "; ".join(f"{k}: {' '.join(str(i) for i in idx)}".rstrip() for k, idx in s.labels)
            text += f" labels ({groups})"
        return text + ";"
    if isinstance(s, A.LieAlgDecl):
        head = f"liealg {s.name} dim {s.dim}"
        if s.basis is not None:
            head += f" basis ({', '.join(s.basis)})"
        body = "".join(f"\n  [{i},{j}] = {expr_text(e)};" for i, j, e in s.brackets)
        return head + " {" + body + ("\n" if body else "") + "};"
    if isinstance(s, A.MatrixAlgDecl):
        body = "".join(
            f"\n  {name} = [{', '.join(_row(r) for r in rows)}];" for name, rows in s.matrices
        )
        return f"liealg {s.name} matrices size {s.size} {{" + body + ("\n" if body else "") + "};"
    if isinstance(s, A.GradingDecl):
        return f"grading {s.name} of {s.algebra} = ({', '.join(str(d) for d in s.degrees)});"
    if isinstance(s, A.JetDecl):
        text = f"jetspec {s.name} dims {s.n} {s.m} order {s.k}"
        if s.vk0 is not None:
            vecs = ", ".join("(" + ", ".join(expr_text(e) for e in v) + ")" for v in s.vk0)
            text += f" vk0 {{{vecs}}}"
        return text + ";"
    if isinstance(s, A.MatAlgDecl):
        body = "".join(f"\n  {_row(r)};" for r in s.rows)
        return (f"matalg {s.name} size {s.size} params {' '.join(s.params)} {{" + body
                + ("\n" if body else "") + "};")
    if isinstance(s, A.MatAlgDerived):
        text = f"matalg {s.name} = {s.op} {s.source}"
        if s.grading is not None:
            text += f" by {s.grading}"
        return text + ";"
    if isinstance(s, A.Claim):
        text = f"claim {expr_text(s.lhs)} == {expr_text(s.rhs)}"
        if s.modulus is not None:
            text += f" mod ({', '.join(s.modulus)})"
        if s.coframe is not None:
            text += f" in {s.coframe}"
        return text + expect_text(s.expect) + ";"
    if isinstance(s, A.Check):
        args = "".join(" " + arg_text(a) for a in s.args)
        return f"check {s.kind}{args}" + expect_text(s.expect) + ";"
    raise TypeError(f"not a statement: {s!r}")


def to_text(doc: A.Document) -> str:
    return "".join(statement_text(s) + "\n" for s in doc.statements)


def check_title(s: A.Claim | A.Check) -> str:
    """Short display name of a claim or check (its canonical text without expectation)."""
    if isinstance(s, A.Claim):
        return statement_text(A.Claim(s.lhs, s.rhs, s.modulus, s.coframe)).rstrip(";")
    return statement_text(A.Check(s.kind, s.args)).rstrip(";")
