from coblab.verify.birkhoff import (
    CSV_HEADER,
    BirkhoffObserver,
    BirkhoffRecord,
    Character,
    CharacterSummary,
    ErgodicityReport,
    birkhoff_average,
    decay_slope,
    unique_ergodicity_probe,
)
from coblab.verify.residuals import (
    IDENTITY_THRESHOLD,
    coboundary_residual,
    commutation_residual,
    conjugacy_residual,
    eigenfunction_residual,
    sample_points,
    torus_distance,
    transfer_residual,
)

__all__ = [
    "BirkhoffObserver",
    "BirkhoffRecord",
    "CSV_HEADER",
    "Character",
    "CharacterSummary",
    "ErgodicityReport",
    "IDENTITY_THRESHOLD",
    "birkhoff_average",
    "coboundary_residual",
    "commutation_residual",
    "conjugacy_residual",
    "decay_slope",
    "eigenfunction_residual",
    "sample_points",
    "torus_distance",
    "transfer_residual",
    "unique_ergodicity_probe",
]
