from coblab.fourier.chain import (
    CoboundaryChain,
    build_chain,
    cesaro_at_zero,
    chains_from_json,
    chains_to_json,
    l2_tail_bounds,
    orbit_growth_probe,
    sup_growth_probe,
    uniform_tail_bound,
    within_l2_bounds,
)
from coblab.fourier.series import (
    ZERO_SERIES,
    SparseSeries,
    abs_coeff_sum,
    fejer_mean,
    halton_points,
    l2_norm,
    unit,
)

__all__ = [
    "CoboundaryChain",
    "SparseSeries",
    "ZERO_SERIES",
    "abs_coeff_sum",
    "build_chain",
    "cesaro_at_zero",
    "chains_from_json",
    "chains_to_json",
    "fejer_mean",
    "halton_points",
    "l2_norm",
    "l2_tail_bounds",
    "orbit_growth_probe",
    "sup_growth_probe",
    "uniform_tail_bound",
    "unit",
    "within_l2_bounds",
]
