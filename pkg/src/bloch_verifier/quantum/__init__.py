"""Quantum states, correlation functions and the correlation tensor."""

from .correlations import (
    bloch_norm_product,
    correlation_tensor,
    dense_correlation_tensor,
    e_sep,
    e_sep_from_tensor,
    ghz_critical_visibility,
    ghz_tensor_norm,
    implied_tensor_norm,
    product_correlation_tensor,
    scalar_product_exact,
    scalar_product_on_grid,
    separability_check,
    separable_maximum,
    sum_of_squares,
)
from .states import (
    bell_state,
    default_rng,
    depolarize,
    ghz_state,
    joint_from_matrix,
    maximally_mixed_qubit,
    mixed_qubit,
    noisy_ghz_state,
    product_state,
    pure_qubit,
    qubit_from_ket,
    random_bloch_vector,
    random_mixed_qubit,
    random_product_state,
    random_pure_qubit,
)

__all__ = [
    # Correlations
    "bloch_norm_product",
    "correlation_tensor",
    "dense_correlation_tensor",
    "e_sep",
    "e_sep_from_tensor",
    "ghz_critical_visibility",
    "ghz_tensor_norm",
    "implied_tensor_norm",
    "product_correlation_tensor",
    "scalar_product_exact",
    "scalar_product_on_grid",
    "separability_check",
    "separable_maximum",
    "sum_of_squares",
    # States
    "bell_state",
    "default_rng",
    "depolarize",
    "ghz_state",
    "joint_from_matrix",
    "maximally_mixed_qubit",
    "mixed_qubit",
    "noisy_ghz_state",
    "product_state",
    "pure_qubit",
    "qubit_from_ket",
    "random_bloch_vector",
    "random_mixed_qubit",
    "random_product_state",
    "random_pure_qubit",
]
