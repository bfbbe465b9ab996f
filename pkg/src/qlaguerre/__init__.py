"""Exact q-Laguerre polynomials, their moments and linearization coefficients,
with a sign-reversing involution on marked perfect matchings."""
from ._kernels import BACKEND
from .involution import Case, PhiTrace, phi, verify_all, verify_lemmas
from .laguerre import (
    apply_functional,
    laguerre_combinatorial,
    laguerre_recurrence,
    linearize_functional,
    moment_matching,
    moment_motzkin,
    moment_permutation,
)
from .marked import Composition, MarkedPM, derangement_gf, signed_sum, stats
from .matchings import Matching, PermutationPM
from .polyring import Poly3, parse, q_integer

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Case",
    "Composition",
    "MarkedPM",
    "Matching",
    "PermutationPM",
    "PhiTrace",
    "Poly3",
    "apply_functional",
    "derangement_gf",
    "laguerre_combinatorial",
    "laguerre_recurrence",
    "linearize_functional",
    "moment_matching",
    "moment_motzkin",
    "moment_permutation",
    "parse",
    "phi",
    "q_integer",
    "signed_sum",
    "stats",
    "verify_all",
    "verify_lemmas",
]
