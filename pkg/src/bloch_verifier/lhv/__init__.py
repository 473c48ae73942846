"""Local hidden-variable models and their correlation functions."""

from .models import (
    LhvModel,
    deterministic_model,
    e_lr,
    hemispheric_disagreement_model,
    hemispheric_disagreement_value,
    lhv_upper_bound,
    mix_models,
    party_sign_matrix,
    perfect_mixing_model,
    random_ensemble_model,
    saturating_model,
    scalar_product_lhv,
    simulator_fidelity,
    single_qubit_simulator_model,
)
from .responses import (
    ConstantResponse,
    MemberwiseResponse,
    PinnedResponse,
    ResponseFunction,
    SignOfCosTheta,
    SignOfDotProduct,
    SignTable,
    ThresholdResponse,
    random_sign_table,
    sign_table,
)
from .spec import ModelSpec, build_model, reference_scalar_product

__all__ = [
    # Models
    "LhvModel",
    "deterministic_model",
    "e_lr",
    "hemispheric_disagreement_model",
    "hemispheric_disagreement_value",
    "lhv_upper_bound",
    "mix_models",
    "party_sign_matrix",
    "perfect_mixing_model",
    "random_ensemble_model",
    "saturating_model",
    "scalar_product_lhv",
    "simulator_fidelity",
    "single_qubit_simulator_model",
    # Responses
    "ConstantResponse",
    "MemberwiseResponse",
    "PinnedResponse",
    "ResponseFunction",
    "SignOfCosTheta",
    "SignOfDotProduct",
    "SignTable",
    "ThresholdResponse",
    "random_sign_table",
    "sign_table",
    # Specs
    "ModelSpec",
    "build_model",
    "reference_scalar_product",
]
