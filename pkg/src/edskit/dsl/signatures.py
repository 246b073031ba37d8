"""Argument shapes of ``check`` directives, shared by the parser and the runner.

A signature is a space-separated pattern.  ``S=system`` binds one declared name
of a category, ``W=(form)`` a parenthesised list, ``U=scalar|(scalar)`` either,
``N=int`` an integer, a bare word is a literal keyword, and a trailing
``[kw N=int]`` group is optional.
"""
from __future__ import annotations

from .ast import Arg, Ident

SIGNATURES: dict[str, str] = {
    "cauchy": "S=system",
    "integrable": "S=system",
    "solvable": "W=(form) for S=system",
    "first_integral": "U=scalar|(scalar) for S=system",
    "express": "S=system using U=(scalar) [mix D=int]",
    "structure": "C=coframe",
    "type": "C=coframe with J=jet",
    "equivalent": "C=coframe D=coframe",
    "maurer_cartan": "L=lie on C=coframe",
    "jacobi": "L=lie",
    "semisimple": "L=lie",
    "grading": "G=grading",
    "wk": "J=jet [matches L=lie]",
    "involutive": "J=jet",
    "dla": "L=lie m M=(int) j0 J0=(int) model J=jet",
    "construct_S": "G=grading",
    "closed": "A=matalg",
    "jk": "A=matalg blocks B=(int) [order P=(int)]",
    "spencer": "A=matalg iterations N=int",
    "tanaka": "G=grading g0 A=matalg max N=int",
}

CATEGORIES = {"system", "form", "scalar", "coframe", "lie", "grading", "jet", "matalg"}


class SignatureError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(message)
        self.position = position  # index into the argument tuple


def _split(sig: str) -> tuple[list[str], list[str]]:
    if "[" in sig:
        head, opt = sig.split("[", 1)
        return head.split(), opt.rstrip("]").split()
    return sig.split(), []


def _bind(slot: str, arg: Arg, pos: int, lookup) -> object:
    name, cat = slot.split("=", 1)
    for alt in cat.split("|"):
        many = alt.startswith("(")
        base = alt.strip("()")
        if many and isinstance(arg, tuple):
            items = []
            for a in arg:
                items.append(_one(base, a, pos, lookup))
            return tuple(items)
        if not many and not isinstance(arg, tuple):
            try:
                value = _one(base, arg, pos, lookup)
            except SignatureError:
                if alt != cat.split("|")[-1]:
                    continue
                raise
            return (value,) if "|" in cat else value
    raise SignatureError(f"expected {cat} for {name}", pos)


def _one(base: str, arg: Arg, pos: int, lookup) -> object:
    if base == "int":
        if isinstance(arg, int):
            return arg
        raise SignatureError("expected an integer", pos)
    if not isinstance(arg, Ident):
        raise SignatureError(f"expected the name of a {base}", pos)
    if lookup is not None:
        found = lookup(arg.id)
        if found is None:
            raise SignatureError(f"unknown name {arg.id!r}", pos)
        if found != base:
            raise SignatureError(f"{arg.id!r} is a {found}, expected a {base}", pos)
    return arg.id


def bind(kind: str, args: tuple[Arg, ...], lookup=None) -> dict[str, object]:
    """Match ``args`` against the signature of ``kind``; ``lookup(name)`` gives a category."""
    if kind not in SIGNATURES:
        raise SignatureError(f"unknown check {kind!r} (known: {', '.join(sorted(SIGNATURES))})", -1)
    head, opt = _split(SIGNATURES[kind])
    out: dict[str, object] = {}
    i = 0
    for part in head:
        if i >= len(args):
            raise SignatureError(f"missing {part}", i)
        if "=" in part:
            name = part.split("=", 1)[0]
            out[name] = _bind(part, args[i], i, lookup)
        elif args[i] != Ident(part):
            raise SignatureError(f"expected keyword {part!r}", i)
        i += 1
    if opt and i < len(args):
        kw, slot = opt
        if args[i] != Ident(kw):
            raise SignatureError(f"expected keyword {kw!r}", i)
        if i + 1 >= len(args):
            raise SignatureError(f"missing value after {kw!r}", i + 1)
        out[slot.split("=", 1)[0]] = _bind(slot, args[i + 1], i + 1, lookup)
        i += 2
    if i < len(args):
        raise SignatureError("unexpected extra argument", i)
    return out
