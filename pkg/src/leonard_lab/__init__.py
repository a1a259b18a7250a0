"""Exact verification of determinant and null-space formulas for the
commutator AA* − A*A of a Leonard pair (A, A*)."""

from .leonard import (
    LeonardPairMatrices,
    ParameterArray,
    TridiagonalData,
    build_split_form,
    commutator,
    dual_eigenbasis_form,
    extract_parameter_array,
    krawtchouk_pair,
    primal_eigenbasis_form,
    search_parameter_arrays,
    verify_leonard_pair,
)
from .linalg import ExactMatrix, ExactVector, determinant_bareiss, determinant_cofactor, kernel_basis
from .qbracket import BetaContext, beta_of, q_bracket_odd
from .report import VerificationReport
from .scalar import QQ, FieldElement, FieldSpec
from .theorems import verify_all

__all__ = [
    "QQ",
    "BetaContext",
    "ExactMatrix",
    "ExactVector",
    "FieldElement",
    "FieldSpec",
    "LeonardPairMatrices",
    "ParameterArray",
    "TridiagonalData",
    "VerificationReport",
    "beta_of",
    "build_split_form",
    "commutator",
    "determinant_bareiss",
    "determinant_cofactor",
    "dual_eigenbasis_form",
    "extract_parameter_array",
    "kernel_basis",
    "krawtchouk_pair",
    "primal_eigenbasis_form",
    "q_bracket_odd",
    "search_parameter_arrays",
    "verify_all",
    "verify_leonard_pair",
]
