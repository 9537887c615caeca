from coblab.rpk.finite import FiniteSystem, rp_bruteforce_finite
from coblab.rpk.torus import (
    NoWitnessFound,
    RPCertificate,
    results_to_json,
    rp_certify_torus,
    rp_product_project,
    validate_certificate,
)

__all__ = [
    "FiniteSystem",
    "NoWitnessFound",
    "RPCertificate",
    "results_to_json",
    "rp_bruteforce_finite",
    "rp_certify_torus",
    "rp_product_project",
    "validate_certificate",
]
