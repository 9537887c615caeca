from coblab.arithmetic.contfrac import ContinuedFraction, continued_fraction
from coblab.arithmetic.frac import (
    GOLDEN,
    HALF,
    ONE,
    SQRT2_MINUS_1,
    ZERO,
    Frac128,
    batch_phases,
    dist_to_int,
    frac_mul,
    parse_angle,
)
from coblab.arithmetic.subsequence import (
    Subsequence,
    SubsequenceEntry,
    band,
    first_admissible_index,
    recommended_eps,
    select_subsequence,
)

__all__ = [
    "ContinuedFraction",
    "Frac128",
    "GOLDEN",
    "HALF",
    "ONE",
    "SQRT2_MINUS_1",
    "Subsequence",
    "SubsequenceEntry",
    "ZERO",
    "band",
    "batch_phases",
    "continued_fraction",
    "dist_to_int",
    "first_admissible_index",
    "frac_mul",
    "parse_angle",
    "recommended_eps",
    "select_subsequence",
]
