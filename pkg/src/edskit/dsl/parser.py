"""Tokenizer and recursive-descent parser for .eds files."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from . import ast as A
from .signatures import SignatureError, bind

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<str>"[^"\n]*")
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>==|\.\.|[;,()\[\]{}=+\-*/^:])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident num str op eof
    text: str
    line: int
    col: int


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int, expected: Sequence[str] = (), source: str = "<string>"):
        self.message = message
        self.line = line
        self.col = col
        self.expected = sorted(set(expected))
        self.source = source
        super().__init__(str(self))

    def __str__(self) -> str:
        text = f"{self.source}:{self.line}:{self.col}: {self.message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        return text


def tokenize(text: str, source: str = "<string>") -> list[Token]:
    out: list[Token] = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1, source=source)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


DECL_KEYWORDS = ("chart", "aux", "scalar", "form", "system", "coframe", "liealg", "grading",
                 "jetspec", "matalg", "claim", "check")


class Parser:
    def __init__(self, text: str, source: str = "<string>"):
        self.source = source
        self.tokens = tokenize(text, source)
        self.i = 0
        self.names: dict[str, str] = {}  # declared name -> category
        self.chart_seen = False
        self.coords: set[str] = set()
        self.pending_aux: set[str] = set()

    # -- token helpers ---------------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, expected: Sequence[str] = (), tok: Token | None = None) -> ParseError:
        t = tok or self.tok
        return ParseError(message, t.line, t.col, expected, self.source)

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "ident") and t.text == text

    def take(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of file"
            raise self.error(f"unexpected {found!r}", [repr(text)])
        t = self.tok
        self.i += 1
        return t

    def maybe(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def ident(self, what: str = "a name") -> str:
        t = self.tok
        if t.kind != "ident":
            raise self.error(f"unexpected {t.text or 'end of file'!r}", [what])
        self.i += 1
        return t.text

    def integer(self) -> int:
        neg = self.maybe("-")
        t = self.tok
        if t.kind != "num":
            raise self.error(f"unexpected {t.text or 'end of file'!r}", ["an integer"])
        self.i += 1
        return -int(t.text) if neg else int(t.text)

    # -- declarations ------------------------------------------------------------------
    def declare(self, name: str, category: str, tok: Token) -> None:
        if name in self.names or name in self.coords:
            raise ParseError(f"duplicate name {name!r}", tok.line, tok.col, source=self.source)
        self.names[name] = category

    def _category(self, name: str) -> str | None:
        # chart coordinates are scalars wherever a scalar is expected
        return "scalar" if name in self.coords else self.names.get(name)

    def require(self, name: str, categories: Sequence[str], tok: Token) -> None:
        cat = self.names.get(name)
        if cat is None:
            raise ParseError(f"unresolved name {name!r}", tok.line, tok.col, source=self.source)
        if cat not in categories:
            raise ParseError(f"{name!r} is a {cat}, expected {' or '.join(categories)}",
                             tok.line, tok.col, source=self.source)

    def parse(self) -> A.Document:
        stmts = []
        while self.tok.kind != "eof":
            stmts.append(self.statement())
        return A.Document(tuple(stmts), self.source)

    def statement(self) -> A.Statement:
        t = self.tok
        if t.kind != "ident" or t.text not in DECL_KEYWORDS:
            raise self.error(f"unexpected {t.text!r}", DECL_KEYWORDS)
        self.i += 1
        stmt = getattr(self, f"p_{t.text}")(t)
        self.take(";")
        return stmt

    def p_chart(self, t: Token) -> A.ChartDecl:
        if self.chart_seen:
            raise self.error("only one chart per file", tok=t)
        self.chart_seen = True
        coords = []
        while self.tok.kind == "ident":
            ct = self.tok
            name = self.ident()
            if name in coords:
                raise ParseError(f"duplicate coordinate {name!r}", ct.line, ct.col, source=self.source)
            coords.append(name)
        if not coords:
            raise self.error("chart needs at least one coordinate", ["a coordinate name"])
        self.coords = set(coords)
        return A.ChartDecl(tuple(coords), t.line)

    def _need_chart(self, t: Token) -> None:
        if not self.chart_seen:
            raise self.error(f"{t.text} before chart", tok=t)

    def p_aux(self, t: Token) -> A.AuxDecl:
        self._need_chart(t)
        nt = self.tok
        name = self.ident()
        self.declare(name, "aux", nt)
        diff = None
        if self.tok.kind == "ident":
            dt = self.tok
            if self.ident() != "d" + name:
                raise self.error(f"expected d{name}", [f"d{name}", "';'"], tok=dt)
            self.take("=")
            diff = self.expr()
            self._check_names(diff)
        return A.AuxDecl(name, diff, t.line)

    def p_scalar(self, t: Token) -> A.ScalarDecl:
        self._need_chart(t)
        nt = self.tok
        name = self.ident()
        self.take("=")
        e = self.expr()
        self._check_names(e)
        self.declare(name, "scalar", nt)
        return A.ScalarDecl(name, e, t.line)

    def p_form(self, t: Token) -> A.FormDecl:
        self._need_chart(t)
        nt = self.tok
        name = self.ident()
        self.take("=")
        e = self.expr()
        self._check_names(e)
        self.declare(name, "form", nt)
        return A.FormDecl(name, e, t.line)

    def name_list(self, close: str, category: str) -> tuple[str, ...]:
        out: list[str] = []
        while True:
            nt = self.tok
            first = self.ident()
            if self.maybe(".."):
                et = self.tok
                last = self.ident()
                names = _expand_range(first, last)
                if names is None:
                    raise ParseError(f"cannot expand range {first}..{last}", et.line, et.col, source=self.source)
            else:
                names = [first]
            for n in names:
                self.require(n, [category], nt)
            out.extend(names)
            if not self.maybe(","):
                break
        self.take(close)
        return tuple(out)

    def p_system(self, t: Token) -> A.SystemDecl:
        nt = self.tok
        name = self.ident()
        self.take("=")
        self.take("[")
        members = self.name_list("]", "form")
        self.declare(name, "system", nt)
        return A.SystemDecl(name, members, t.line)

    def p_coframe(self, t: Token) -> A.CoframeDecl:
        nt = self.tok
        name = self.ident()
        self.take("=")
        self.take("[")
        members = self.name_list("]", "form")
        labels = None
        if self.maybe("labels"):
            self.take("(")
            groups = []
            while not self.at(")"):
                key = self.ident("a block name such as Vm1, V0, V1 or Vk0")
                self.take(":")
                idx = []
                while self.tok.kind == "num":
                    it = self.tok
                    v = self.integer()
                    if not 1 <= v <= len(members):
                        raise ParseError(f"label index {v} out of range 1..{len(members)}",
                                         it.line, it.col, source=self.source)
                    idx.append(v)
                groups.append((key, tuple(idx)))
                if not self.maybe(";"):
                    break
            self.take(")")
            labels = tuple(groups)
        self.declare(name, "coframe", nt)
        return A.CoframeDecl(name, members, labels, t.line)

    def p_liealg(self, t: Token) -> A.LieAlgDecl | A.MatrixAlgDecl:
        nt = self.tok
        name = self.ident()
        if self.maybe("matrices"):
            self.take("size")
            size = self.integer()
            self.take("{")
            mats = []
            while not self.at("}"):
                mname = self.ident("a basis name")
                self.take("=")
                self.take("[")
                rows = [self.row()]
                while self.maybe(","):
                    rows.append(self.row())
                self.take("]")
                self.take(";")
                mats.append((mname, tuple(rows)))
            self.take("}")
            self.declare(name, "lie", nt)
            return A.MatrixAlgDecl(name, size, tuple(mats), t.line)
        self.take("dim")
        dim = self.integer()
        basis = None
        if self.maybe("basis"):
            self.take("(")
            names = [self.ident()]
            while self.maybe(","):
                names.append(self.ident())
            self.take(")")
            basis = tuple(names)
        self.take("{")
        brackets = []
        while not self.at("}"):
            bt = self.take("[")
            i = self.integer()
            self.take(",")
            j = self.integer()
            self.take("]")
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise ParseError(f"bracket index out of range 1..{dim}", bt.line, bt.col, source=self.source)
            self.take("=")
            brackets.append((i, j, self.expr()))
            self.take(";")
        self.take("}")
        self.declare(name, "lie", nt)
        return A.LieAlgDecl(name, dim, basis, tuple(brackets), t.line)

    def row(self) -> tuple[A.Expr, ...]:
        self.take("[")
        items = [self.expr()]
        while self.maybe(","):
            items.append(self.expr())
        self.take("]")
        return tuple(items)

    def p_grading(self, t: Token) -> A.GradingDecl:
        nt = self.tok
        name = self.ident()
        self.take("of")
        at = self.tok
        alg = self.ident()
        self.require(alg, ["lie"], at)
        self.take("=")
        self.take("(")
        degs = [self.integer()]
        while self.maybe(","):
            degs.append(self.integer())
        self.take(")")
        self.declare(name, "grading", nt)
        return A.GradingDecl(name, alg, tuple(degs), t.line)

    def p_jetspec(self, t: Token) -> A.JetDecl:
        nt = self.tok
        name = self.ident()
        self.take("dims")
        n = self.integer()
        m = self.integer()
        self.take("order")
        k = self.integer()
        vk0 = None
        if self.maybe("vk0"):
            self.take("{")
            vecs = []
            while self.at("("):
                self.take("(")
                items = [self.expr()]
                while self.maybe(","):
                    items.append(self.expr())
                self.take(")")
                vecs.append(tuple(items))
                if not self.maybe(","):
                    break
            self.take("}")
            vk0 = tuple(vecs)
        self.declare(name, "jet", nt)
        return A.JetDecl(name, n, m, k, vk0, t.line)

    def p_matalg(self, t: Token) -> A.MatAlgDecl | A.MatAlgDerived:
        nt = self.tok
        name = self.ident()
        if self.maybe("="):
            ot = self.tok
            op = self.ident("dual or degree0")
            if op not in ("dual", "degree0"):
                raise self.error(f"unknown matrix algebra operation {op!r}", ["dual", "degree0"], tok=ot)
            st = self.tok
            src = self.ident()
            self.require(src, ["matalg"], st)
            grading = None
            if op == "degree0":
                self.take("by")
                gt = self.tok
                grading = self.ident()
                self.require(grading, ["grading"], gt)
            self.declare(name, "matalg", nt)
            return A.MatAlgDerived(name, op, src, grading, t.line)
        self.take("size")
        size = self.integer()
        self.take("params")
        params = []
        while self.tok.kind == "ident":
            params.append(self.ident())
        self.take("{")
        rows = []
        while not self.at("}"):
            rows.append(self.row())
            self.take(";")
        self.take("}")
        self.declare(name, "matalg", nt)
        return A.MatAlgDecl(name, size, tuple(params), tuple(rows), t.line)

    def p_claim(self, t: Token) -> A.Claim:
        self._need_chart(t)
        lhs = self.expr()
        self.take("==")
        rhs = self.expr()
        self._check_names(lhs)
        self._check_names(rhs)
        modulus = None
        coframe = None
        if self.maybe("mod"):
            self.take("(")
            items = []
            if not self.at(")"):
                items.append(self.mod_item())
                while self.maybe(","):
                    items.append(self.mod_item())
            self.take(")")
            modulus = tuple(items)
        if self.maybe("in"):
            ct = self.tok
            coframe = self.ident()
            self.require(coframe, ["coframe"], ct)
        expect = self.expect()
        if modulus and "Vm1^Vm1" in modulus and coframe is None:
            raise self.error("Vm1^Vm1 needs 'in <coframe>'", ["'in'"])
        return A.Claim(lhs, rhs, modulus, coframe, expect, t.line)

    def mod_item(self) -> str:
        t = self.tok
        name = self.ident()
        if self.maybe("^"):
            other = self.ident()
            if name != "Vm1" or other != "Vm1":
                raise ParseError("only Vm1^Vm1 may appear as a wedge in a modulus", t.line, t.col,
                                 source=self.source)
            return "Vm1^Vm1"
        self.require(name, ["form"], t)
        return name

    def p_check(self, t: Token) -> A.Check:
        kt = self.tok
        kind = self.ident("a check kind")
        start = self.i
        args = []
        while not self.at(";") and not self.at("expect") and self.tok.kind != "eof":
            args.append(self.arg())
        try:
            bind(kind, tuple(args), self._category)
        except SignatureError as exc:
            bad = kt if exc.position < 0 else self.tokens[min(start + self._arg_offset(start, exc.position),
                                                              len(self.tokens) - 1)]
            raise ParseError(str(exc), bad.line, bad.col, source=self.source) from None
        expect = self.expect()
        return A.Check(kind, tuple(args), expect, t.line)

    def _arg_offset(self, start: int, position: int) -> int:
        """Token offset of the ``position``-th argument counted from ``start``."""
        depth, count, j = 0, 0, start
        while j < len(self.tokens):
            tok = self.tokens[j]
            if depth == 0 and count == position:
                return j - start
            if tok.text == "(":
                depth += 1
            elif tok.text == ")":
                depth -= 1
            if depth == 0 and not (tok.text == "-" and tok.kind == "op"):
                count += 1
            j += 1
        return j - start - 1

    def arg(self) -> A.Arg:
        t = self.tok
        if t.kind == "ident":
            self.i += 1
            return A.Ident(t.text)
        if t.kind == "num" or self.at("-"):
            return self.integer()
        if t.kind == "str":
            self.i += 1
            return A.Str(t.text[1:-1])
        if self.maybe("("):
            items = []
            if not self.at(")"):
                items.append(self.arg())
                while self.maybe(","):
                    items.append(self.arg())
            self.take(")")
            return tuple(items)
        raise self.error(f"unexpected {t.text or 'end of file'!r}", ["a name", "an integer", "a string", "'('"])

    def expect(self) -> A.Expect:
        if not self.maybe("expect"):
            return A.Expect()
        verdict = "pass"
        if self.tok.kind == "ident" and self.tok.text in ("pass", "fail", "refused"):
            verdict = self.ident()
        values = []
        while self.tok.kind == "ident":
            key = self.ident()
            values.append((key, self.arg()))
        if verdict == "pass" and not values:
            raise self.error("empty expectation", ["pass", "fail", "refused", "a value name"])
        return A.Expect(verdict, tuple(values))

    # -- expressions ---------------------------------------------------------------------
    def expr(self) -> A.Expr:
        left = self.wedge()
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.i += 1
            left = A.BinOp(op, left, self.wedge())
        return left

    def wedge(self) -> A.Expr:
        left = self.unary()
        while self.at("^"):
            ct = self.tok
            self.i += 1
            if self.tok.kind == "num":
                raise ParseError("'^' is the wedge product; write a power as p*p or pow(p, 2)",
                                 ct.line, ct.col, source=self.source)
            left = A.BinOp("^", left, self.unary())
        return left

    def unary(self) -> A.Expr:
        if self.maybe("-"):
            return A.Neg(self.unary())
        return self.product()

    def product(self) -> A.Expr:
        left = self.atom()
        while self.at("*") or self.at("/"):
            op = self.tok.text
            self.i += 1
            left = A.BinOp(op, left, self.atom())
        return left

    def atom(self) -> A.Expr:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return A.Num(int(t.text))
        if t.kind == "ident":
            self.i += 1
            if self.at("(") and t.text in ("d", "pow"):
                self.take("(")
                args = [self.expr()]
                while self.maybe(","):
                    args.append(self.expr())
                self.take(")")
                if t.text == "d" and len(args) != 1:
                    raise ParseError("d takes one argument", t.line, t.col, source=self.source)
                if t.text == "pow":
                    if len(args) != 2 or not _is_int_literal(args[1]):
                        raise ParseError("pow takes an expression and an integer literal", t.line, t.col,
                                         source=self.source)
                return A.Call(t.text, tuple(args))
            if self.at("("):
                raise self.error(f"unknown function {t.text!r}", ["d", "pow"], tok=t)
            return A.Name(t.text)
        if self.maybe("("):
            e = self.expr()
            self.take(")")
            return e
        raise self.error(f"unexpected {t.text or 'end of file'!r}", ["a number", "a name", "'('", "'-'"])

    def _check_names(self, e: A.Expr) -> None:
        """Names in expressions must be coordinates, their differentials, or declared objects."""
        for name in _names_in(e):
            if name in self.coords or name in self.names:
                continue
            if name.startswith("d") and name[1:] in self.coords:
                continue
            t = self.tokens[self.i - 1]
            raise ParseError(f"unresolved name {name!r}", t.line, t.col, source=self.source)


def _is_int_literal(e: A.Expr) -> bool:
    return isinstance(e, A.Num) or (isinstance(e, A.Neg) and isinstance(e.operand, A.Num))


def _names_in(e: A.Expr):
    if isinstance(e, A.Name):
        yield e.id
    elif isinstance(e, A.Call):
        for a in e.args:
            yield from _names_in(a)
    elif isinstance(e, A.BinOp):
        yield from _names_in(e.left)
        yield from _names_in(e.right)
    elif isinstance(e, A.Neg):
        yield from _names_in(e.operand)


def _expand_range(first: str, last: str) -> list[str] | None:
    m1 = re.fullmatch(r"(.*?)(\d+)", first)
    m2 = re.fullmatch(r"(.*?)(\d+)", last)
    if not m1 or not m2 or m1.group(1) != m2.group(1):
        return None
    a, b = int(m1.group(2)), int(m2.group(2))
    if b < a:
        return None
    return [f"{m1.group(1)}{i}" for i in range(a, b + 1)]


def parse(text: str, source: str = "<string>") -> A.Document:
    return Parser(text, source).parse()


def parse_file(path: str) -> A.Document:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), path)
