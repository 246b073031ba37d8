"""Text format for charts, systems, coframes and algebras, plus the check runner."""
from __future__ import annotations

from .ast import Document
from .parser import ParseError, parse, parse_file
from .printer import to_text
from .runner import CheckResult, EvalError, Options, Report, run

__all__ = ["Document", "ParseError", "parse", "parse_file", "to_text", "CheckResult", "EvalError",
           "Options", "Report", "run"]
