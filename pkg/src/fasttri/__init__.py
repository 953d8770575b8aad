"""Regular chains, subresultants and two-equation solving over Z/pZ."""

from .errors import (
    FastTriError,
    NotInvertibleError,
    ParseError,
    PreconditionError,
    UnsupportedError,
)
from .modarith import DEFAULT_PRIME, PrimeField, field
from .mpoly import MultiPoly, PolyRing, iter_res, mvar_init, prem_chain, prem_var
from .parse import parse_poly
from .regchain import RegularChain, SplitResult, is_null_mod_sat, is_regular_resultant_test, normal_form, normalize
from .regops import Context, regular_gcd, regularize_dim0, regularize_initial_dim0
from .scube import GridConfig, SCube, build_scube, scube_resultant, scube_subres_full, scube_subres_lc
from .solver import Decomposition, solve_two_eqs, triangularize_bivariate
from .subres import SubresChain, dpol_subres_oracle, specialize_check, subres_chain_classical

__all__ = [
    "DEFAULT_PRIME", "Context", "Decomposition", "FastTriError", "GridConfig", "MultiPoly",
    "NotInvertibleError", "ParseError", "PolyRing", "PreconditionError", "PrimeField",
    "RegularChain", "SCube", "SplitResult", "SubresChain", "UnsupportedError",
    "build_scube", "dpol_subres_oracle", "field", "is_null_mod_sat", "is_regular_resultant_test",
    "iter_res", "mvar_init", "normal_form", "normalize", "parse_poly", "prem_chain", "prem_var",
    "regular_gcd", "regularize_dim0", "regularize_initial_dim0", "scube_resultant",
    "scube_subres_full", "scube_subres_lc", "solve_two_eqs", "specialize_check",
    "subres_chain_classical", "triangularize_bivariate",
]
