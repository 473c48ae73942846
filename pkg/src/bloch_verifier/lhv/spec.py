"""
Model specification vocabulary.

Scenario files declare hidden-variable models with a ``type`` and, for
explicit ensembles, per-party responses drawn from the response vocabulary
(constant, sign-of-cos-theta, sign-of-dot-product, threshold-simulator,
sign-table).
"""

from typing import Annotated, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import DomainError
from ..quadrature.sphere import FOUR_PI, SphereGrid
from .models import (
    LhvModel,
    hemispheric_disagreement_model,
    hemispheric_disagreement_value,
    lhv_upper_bound,
    perfect_mixing_model,
    random_ensemble_model,
    saturating_model,
    single_qubit_simulator_model,
)
from .responses import ResponseFunction


class _Spec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class SaturatingSpec(_Spec):
    type: Literal["saturating"] = "saturating"
    response: Optional[ResponseFunction] = None


class MemberSpec(_Spec):
    weight: float = Field(..., gt=0.0, le=1.0)
    responses: List[ResponseFunction] = Field(..., min_length=1)


class EnsembleSpec(_Spec):
    type: Literal["ensemble"] = "ensemble"
    members: List[MemberSpec] = Field(..., min_length=1)


class SimulatorSpec(_Spec):
    type: Literal["threshold-simulator"] = "threshold-simulator"
    bloch: Tuple[float, float, float]
    resolution: Optional[int] = Field(default=None, ge=1)


class HemisphericSpec(_Spec):
    type: Literal["hemispheric-disagreement"] = "hemispheric-disagreement"


class PerfectMixingSpec(_Spec):
    type: Literal["perfect-mixing"] = "perfect-mixing"


class RandomEnsembleSpec(_Spec):
    type: Literal["random-ensemble"] = "random-ensemble"
    members: int = Field(default=4, ge=1)


ModelSpec = Annotated[
    Union[
        SaturatingSpec,
        EnsembleSpec,
        SimulatorSpec,
        HemisphericSpec,
        PerfectMixingSpec,
        RandomEnsembleSpec,
    ],
    Field(discriminator="type"),
]


def build_model(spec: ModelSpec, n_parties: int, rng: Optional[np.random.Generator] = None) -> LhvModel:
    """
    Instantiate the model a spec describes for N parties.

    Raises:
        DomainError: If the spec cannot describe an N-party model
    """
    if isinstance(spec, SaturatingSpec):
        return saturating_model(n_parties, spec.response)
    if isinstance(spec, EnsembleSpec):
        for member in spec.members:
            if len(member.responses) != n_parties:
                raise DomainError(
                    f"Ensemble member declares {len(member.responses)} responses for N={n_parties}"
                )
        return LhvModel.from_members([(m.weight, m.responses) for m in spec.members])
    if isinstance(spec, SimulatorSpec):
        if n_parties != 1:
            raise DomainError(f"threshold-simulator describes a single qubit, got N={n_parties}")
        return single_qubit_simulator_model(spec.bloch, spec.resolution)
    if isinstance(spec, HemisphericSpec):
        return hemispheric_disagreement_model(n_parties)
    if isinstance(spec, PerfectMixingSpec):
        return perfect_mixing_model(n_parties)
    if isinstance(spec, RandomEnsembleSpec):
        if rng is None:
            raise DomainError("random-ensemble needs a random generator")
        return random_ensemble_model(n_parties, spec.members, rng)
    raise DomainError(f"Unknown model spec {spec!r}")


def reference_scalar_product(
    spec: ModelSpec, n_parties: int, grids: Optional[Sequence[SphereGrid]] = None
) -> Optional[Tuple[float, str]]:
    """
    Closed-form (E_LR, E_LR) and its formula, where one exists.

    ``grids`` matters only for the hemispheric model, whose value depends on
    whether the grid has nodes on the equator.
    """
    if isinstance(spec, SaturatingSpec) or (isinstance(spec, EnsembleSpec) and len(spec.members) == 1):
        return lhv_upper_bound(n_parties), "(E_LR,E_LR)_max = (4pi)^N"
    if isinstance(spec, SimulatorSpec):
        norm_squared = float(np.dot(spec.bloch, spec.bloch))
        return (FOUR_PI / 3.0) * norm_squared, "(E,E) = (4pi/3)|b|^2"
    if isinstance(spec, HemisphericSpec):
        return (
            hemispheric_disagreement_value(n_parties, grids),
            "(E_LR,E_LR) = (prod(U_j+L_j) + prod(U_j-L_j)) / 2, hemisphere weights U, L",
        )
    if isinstance(spec, PerfectMixingSpec):
        return 0.0, "E_LR = 0"
    return None
