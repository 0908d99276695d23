"""Low-rank completion, hieroglyph realizability, choose-matrices and forms over Z2."""

from .gf2_core import AffineSpace, BitMatrix, count_rank, det, rank, rank_le, solve_linear_system
from .diag_completion import BudgetExceeded, brute_force_R, min_rank, min_rank_approx, min_rank_exact
from .hieroglyph import Hieroglyph, min_genus, mobius_realizable, overlap_matrix
from .bilinear import FormDecomposition, classify

__all__ = [
    "AffineSpace",
    "BitMatrix",
    "BudgetExceeded",
    "FormDecomposition",
    "Hieroglyph",
    "brute_force_R",
    "classify",
    "count_rank",
    "det",
    "min_genus",
    "min_rank",
    "min_rank_approx",
    "min_rank_exact",
    "mobius_realizable",
    "overlap_matrix",
    "rank",
    "rank_le",
    "solve_linear_system",
]
