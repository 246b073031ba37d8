"""Syntax tree for .eds description files.

Nodes compare by value and ignore source positions, so ``parse(print(doc)) == doc``
is a meaningful round-trip test.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

# -- expressions -----------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    id: str


@dataclass(frozen=True)
class Call:
    func: str  # "d" or "pow"
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


Expr = Union[Num, Name, Call, BinOp, Neg]

# -- check arguments ---------------------------------------------------------------------


@dataclass(frozen=True)
class Str:
    value: str


@dataclass(frozen=True)
class Ident:
    id: str


# an argument is an Ident, an int, a Str or a tuple of arguments
Arg = Union[Ident, int, Str, tuple]


@dataclass(frozen=True)
class Expect:
    verdict: str = "pass"  # pass | fail | refused
    values: tuple[tuple[str, Arg], ...] = ()


# -- statements --------------------------------------------------------------------------


@dataclass(frozen=True)
class ChartDecl:
    coords: tuple[str, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AuxDecl:
    name: str
    differential: Expr | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ScalarDecl:
    name: str
    expr: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class FormDecl:
    name: str
    expr: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SystemDecl:
    name: str
    members: tuple[str, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CoframeDecl:
    name: str
    members: tuple[str, ...]
    labels: tuple[tuple[str, tuple[int, ...]], ...] | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LieAlgDecl:
    """Structure constants: brackets are (i, j, rhs) with 1-based i, j and rhs in basis names."""

    name: str
    dim: int
    basis: tuple[str, ...] | None
    brackets: tuple[tuple[int, int, Expr], ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class MatrixAlgDecl:
    """A Lie algebra spanned by named matrices; the bracket is the commutator."""

    name: str
    size: int
    matrices: tuple[tuple[str, tuple[tuple[Expr, ...], ...]], ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class GradingDecl:
    name: str
    algebra: str
    degrees: tuple[int, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class JetDecl:
    name: str
    n: int
    m: int
    k: int
    vk0: tuple[tuple[Expr, ...], ...] | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class MatAlgDecl:
    """A linear Lie algebra: a matrix whose entries are linear in the parameters."""

    name: str
    size: int
    params: tuple[str, ...]
    rows: tuple[tuple[Expr, ...], ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class MatAlgDerived:
    """``matalg B = dual A;`` or ``matalg B = degree0 A by G;``"""

    name: str
    op: str
    source: str
    grading: str | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Claim:
    lhs: Expr
    rhs: Expr
    modulus: tuple[str, ...] | None = None  # names; "Vm1^Vm1" for all V_-1 pairs
    coframe: str | None = None
    expect: Expect = Expect()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Check:
    kind: str
    args: tuple[Arg, ...]
    expect: Expect = Expect()
    line: int = field(default=0, compare=False)


Statement = Union[ChartDecl, AuxDecl, ScalarDecl, FormDecl, SystemDecl, CoframeDecl, LieAlgDecl,
                  MatrixAlgDecl, GradingDecl, JetDecl, MatAlgDecl, MatAlgDerived, Claim, Check]


@dataclass(frozen=True)
class Document:
    statements: tuple[Statement, ...]
    source: str = field(default="<string>", compare=False)
