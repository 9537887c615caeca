from coblab.systems.builders import (
    build_combined,
    build_lemma31_T,
    build_R,
    build_S,
    build_Sprime,
    build_two_coboundary,
    build_zd_family,
    interleave,
    split_product,
)
from coblab.systems.conjugacy import (
    PiMap,
    PiShift,
    apply_pi,
    apply_pi_many,
    pi_for_combined,
    pi_for_lemma31,
    pi_for_R,
    pi_for_two_coboundary,
    transfer_coboundary,
)
from coblab.systems.spec import (
    CountObserver,
    CsvObserver,
    Observer,
    SkewSpec,
    TorusPoint,
    Update,
    orbit,
    orbit_fold,
    step,
    step_inverse,
    step_many,
    write_orbit_csv,
)
from coblab.systems.sturmian import factor_complexity, letter_frequency, sturmian_code

__all__ = [
    "CountObserver",
    "CsvObserver",
    "Observer",
    "PiMap",
    "PiShift",
    "SkewSpec",
    "TorusPoint",
    "Update",
    "apply_pi",
    "apply_pi_many",
    "build_R",
    "build_S",
    "build_Sprime",
    "build_combined",
    "build_lemma31_T",
    "build_two_coboundary",
    "build_zd_family",
    "factor_complexity",
    "interleave",
    "letter_frequency",
    "orbit",
    "orbit_fold",
    "pi_for_R",
    "pi_for_combined",
    "pi_for_lemma31",
    "pi_for_two_coboundary",
    "split_product",
    "step",
    "step_inverse",
    "step_many",
    "sturmian_code",
    "transfer_coboundary",
    "write_orbit_csv",
]
