"""Value types shared across bloch_verifier."""

from .core import (
    CorrelationTensor,
    DensityVerdict,
    JointState,
    ProductState,
    QubitState,
    SeparabilityVerdict,
    Setting,
    bloch_vector,
    setting_to_unit_vector,
    validate_density_matrix,
)

__all__ = [
    "CorrelationTensor",
    "DensityVerdict",
    "JointState",
    "ProductState",
    "QubitState",
    "SeparabilityVerdict",
    "Setting",
    "bloch_vector",
    "setting_to_unit_vector",
    "validate_density_matrix",
]
