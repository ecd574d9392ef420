"""Random cascade metrics on [0,1] and the Euclidean/quantum dimension relation."""

from ._core import (
    CascadeRealization,
    DigitRestrictionSet,
    WeightModel,
    __version__,
    central_charge,
    enumerate_oracle,
    euclid_dimension,
    gaussian_zeta,
    gaussian_zeta0,
    kpz_phi,
    parse_digit_set,
    parse_weight_model,
    partition_function,
    predict_zeta0,
    quantum_dimension,
    sigma2_from_central_charge,
    solve_zeta,
    twopoint_zeta0,
)

__all__ = [
    "CascadeRealization",
    "DigitRestrictionSet",
    "WeightModel",
    "__version__",
    "central_charge",
    "enumerate_oracle",
    "euclid_dimension",
    "gaussian_zeta",
    "gaussian_zeta0",
    "kpz_phi",
    "parse_digit_set",
    "parse_weight_model",
    "partition_function",
    "predict_zeta0",
    "quantum_dimension",
    "sigma2_from_central_charge",
    "solve_zeta",
    "twopoint_zeta0",
]
