"""Exact Lie-algebra engine: structure constants, jet algebras, prolongations."""
from __future__ import annotations

from .algebra import (
    GradingReport,
    JacobiReport,
    LieAlgebra,
    grading_check,
    is_nilpotent,
    is_semisimple,
    jacobi_check,
    killing_form,
    lower_central_series,
)
from .dla import DLACertificate, SemisimpleWitness, check_differential_lie_algebra, construct_S_semisimple
from .jets import JetAlgebra, JetSpec, build_Wk, prop41_checks, vk0_involutive
from .linear import LinearLieAlgebra, jk_membership
from .prolong import TanakaResult, degree_zero_derivations, spencer_prolong, tanaka_prolong

__all__ = [
    "DLACertificate",
    "GradingReport",
    "JacobiReport",
    "JetAlgebra",
    "JetSpec",
    "LieAlgebra",
    "LinearLieAlgebra",
    "SemisimpleWitness",
    "TanakaResult",
    "build_Wk",
    "check_differential_lie_algebra",
    "construct_S_semisimple",
    "degree_zero_derivations",
    "grading_check",
    "is_nilpotent",
    "is_semisimple",
    "jacobi_check",
    "jk_membership",
    "killing_form",
    "lower_central_series",
    "prop41_checks",
    "spencer_prolong",
    "tanaka_prolong",
    "vk0_involutive",
]
