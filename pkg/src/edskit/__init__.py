"""Exact exterior differential systems and graded Lie algebras."""
from __future__ import annotations

__version__ = "0.1.0"
