"""
Local hidden-variable models.

A model is a finite distribution over hidden values lambda_k with weights
rho(lambda_k) and one response function I^(j)(n, lambda) per party. The
correlation function is the lambda-average of the product of the parties'
+-1 outcomes, and its scalar product over all settings is bounded by (4pi)^N.
"""

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from ..config import settings
from ..errors import DomainError
from ..models.core import Setting, setting_to_unit_vector
from ..quadrature.sphere import FOUR_PI, SphereGrid, check_budget, iter_prefix_nodes
from .responses import (
    ConstantResponse,
    MemberwiseResponse,
    PinnedResponse,
    ResponseFunction,
    SignOfCosTheta,
    SignOfDotProduct,
    ThresholdResponse,
    random_sign_table,
)

Member = Tuple[float, Sequence[ResponseFunction]]


class LhvModel(BaseModel):
    """Finite hidden-variable ensemble with per-party response functions."""

    model_config = ConfigDict(frozen=True)

    n_parties: int = Field(..., ge=1)
    weights: Tuple[float, ...] = Field(..., min_length=1, description="rho(lambda_k)")
    hidden_values: Tuple[float, ...] = Field(..., min_length=1, description="lambda_k")
    responses: Tuple[ResponseFunction, ...] = Field(..., description="I^(j) for j = 1..N")

    _weights: np.ndarray = PrivateAttr()
    _lambdas: np.ndarray = PrivateAttr()

    @model_validator(mode="after")
    def _check_ensemble(self) -> "LhvModel":
        if len(self.weights) != len(self.hidden_values):
            raise ValueError(
                f"{len(self.weights)} weights for {len(self.hidden_values)} hidden values"
            )
        if any(not 0.0 < w <= 1.0 for w in self.weights):
            raise ValueError("Every weight must lie in (0, 1]")
        total = math.fsum(self.weights)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"Weights must sum to 1, got {total!r}")
        if len(self.responses) != self.n_parties:
            raise ValueError(f"Expected {self.n_parties} response functions, got {len(self.responses)}")
        return self

    def model_post_init(self, __context) -> None:
        self._weights = np.array(self.weights, dtype=float)
        self._lambdas = np.array(self.hidden_values, dtype=float)

    @property
    def n_members(self) -> int:
        return len(self.weights)

    @property
    def weight_array(self) -> np.ndarray:
        return self._weights

    def party_signs(self, party: int, setting: Setting) -> np.ndarray:
        """Outcomes of one party for every hidden value."""
        return self.responses[party].respond(setting, self._lambdas)

    def members(self) -> List[Tuple[float, List[PinnedResponse]]]:
        """The ensemble as (weight, per-party responses pinned to lambda_k)."""
        return [
            (w, [PinnedResponse(base=r, hidden_value=lam) for r in self.responses])
            for w, lam in zip(self.weights, self.hidden_values)
        ]

    @classmethod
    def from_members(cls, members: Sequence[Member]) -> "LhvModel":
        """Build a model from explicit (weight, responses) members."""
        if not members:
            raise DomainError("An ensemble needs at least one member")
        n_parties = len(members[0][1])
        if any(len(responses) != n_parties for _, responses in members):
            raise DomainError("Every member must supply the same number of responses")
        responses = tuple(
            MemberwiseResponse(per_member=tuple(m[1][j] for m in members)) for j in range(n_parties)
        )
        return cls(
            n_parties=n_parties,
            weights=tuple(float(w) for w, _ in members),
            hidden_values=tuple(float(k) for k in range(len(members))),
            responses=responses,
        )


def e_lr(model: LhvModel, settings_list: Sequence[Setting]) -> float:
    """
    LHV correlation function: sum_k rho_k prod_j I^(j)(n_j, lambda_k).

    Raises:
        DomainError: If the number of settings differs from the party count
    """
    if len(settings_list) != model.n_parties:
        raise DomainError(f"Expected {model.n_parties} settings, got {len(settings_list)}")
    product = np.ones(model.n_members)
    for party, setting in enumerate(settings_list):
        product *= model.party_signs(party, setting)
    return float(np.dot(model.weight_array, product))


def party_sign_matrix(model: LhvModel, party: int, grid: SphereGrid) -> np.ndarray:
    """(n_members, n_nodes) outcomes of one party at every grid node."""
    return np.stack([model.party_signs(party, s) for s in grid.settings], axis=1).astype(float)


def scalar_product_lhv(
    model: LhvModel, grids: Sequence[SphereGrid], node_budget: Optional[int] = None
) -> float:
    """
    (E_LR, E_LR) = integral of E_LR^2 over all setting spheres.

    Raises:
        DomainError: If the number of grids differs from the party count
        ResourceBudgetError: If the product grid exceeds the node budget
    """
    if len(grids) != model.n_parties:
        raise DomainError(f"Expected {model.n_parties} grids, got {len(grids)}")
    check_budget(grids, node_budget)

    signs = [party_sign_matrix(model, j, g) for j, g in enumerate(grids)]
    last_signs = signs[-1]
    last_weights = np.array(grids[-1].weights)

    def terms():
        for indices, prefix_weight in iter_prefix_nodes(grids):
            prefix = model.weight_array.copy()
            for s, i in zip(signs[:-1], indices):
                prefix *= s[:, i]
            row = prefix @ last_signs
            yield from (prefix_weight * last_weights * row * row).tolist()

    result = math.fsum(terms())
    logger.debug(f"LHV scalar product N={model.n_parties}, members={model.n_members}: {result:.17g}")
    return result


def lhv_upper_bound(n_parties: int) -> float:
    """(E_LR, E_LR)_max = (4pi)^N."""
    if n_parties < 1:
        raise DomainError(f"N must be >= 1, got {n_parties}")
    return FOUR_PI ** n_parties


def deterministic_model(responses: Sequence[ResponseFunction]) -> LhvModel:
    """Single-lambda model with the given per-party responses."""
    return LhvModel(
        n_parties=len(responses),
        weights=(1.0,),
        hidden_values=(0.0,),
        responses=tuple(responses),
    )


def saturating_model(n_parties: int, response: Optional[ResponseFunction] = None) -> LhvModel:
    """
    Deterministic model attaining (4pi)^N.

    Equal level sets for lambda and lambda' at every setting amount to a
    lambda-independent outcome assignment, so a single hidden value suffices.
    Defaults to I^(j) = sign(cos theta_j).
    """
    if n_parties < 1:
        raise DomainError(f"N must be >= 1, got {n_parties}")
    return deterministic_model([response or SignOfCosTheta()] * n_parties)


def single_qubit_simulator_model(
    bloch: Sequence[float], resolution: Optional[int] = None
) -> LhvModel:
    """
    Realistic model reproducing a qubit's statistics n . b.

    lambda_k = (k + 1/2) / resolution with equal weights, and
    I(n, lambda) = +1 iff lambda < (1 + n . b) / 2. The correlation function
    differs from n . b by at most 1/resolution at every setting.

    Raises:
        DomainError: If |b| > 1 or resolution < 1
    """
    if resolution is None:
        resolution = settings.simulator_resolution
    b = np.asarray(bloch, dtype=float)
    if b.shape != (3,):
        raise DomainError(f"Bloch vector must have 3 components, got shape {b.shape}")
    if float(np.dot(b, b)) > 1.0 + 1e-12:
        raise DomainError(f"Bloch vector {b.tolist()} lies outside the Bloch ball")
    if resolution < 1:
        raise DomainError(f"Resolution must be positive, got {resolution}")

    logger.info(f"Building single-qubit simulator model, resolution={resolution}")
    return LhvModel(
        n_parties=1,
        weights=(1.0 / resolution,) * resolution,
        hidden_values=tuple((k + 0.5) / resolution for k in range(resolution)),
        responses=(ThresholdResponse(bloch=tuple(float(x) for x in b)),),
    )


def simulator_fidelity(model: LhvModel, bloch: Sequence[float], grid: SphereGrid) -> float:
    """Max over grid nodes of |E_LR(n) - n . b| for a single-party model."""
    b = np.asarray(bloch, dtype=float)
    return max(
        abs(e_lr(model, [s]) - float(np.dot(setting_to_unit_vector(s), b))) for s in grid.settings
    )


def hemispheric_disagreement_model(n_parties: int = 1) -> LhvModel:
    """
    Two equally weighted hidden values: all +1, and sign(cos theta) per party.

    E_LR = (1 + prod_j sign(cos theta_j)) / 2 vanishes on half of the settings,
    giving (E_LR, E_LR) = (4pi)^N / 2.
    """
    if n_parties < 1:
        raise DomainError(f"N must be >= 1, got {n_parties}")
    return LhvModel.from_members(
        [
            (0.5, [ConstantResponse(value=1)] * n_parties),
            (0.5, [SignOfCosTheta()] * n_parties),
        ]
    )


def hemispheric_disagreement_value(n_parties: int, grids: Optional[Sequence[SphereGrid]] = None) -> float:
    """
    (E_LR, E_LR) of the hemispheric model: the weight of settings where
    prod_j sign(cos theta_j) = +1.

    Over the continuous spheres this is (4pi)^N / 2. On a grid with an
    equator node (odd n_theta) that node counts as upper, so the value is
    (prod_j (U_j + L_j) + prod_j (U_j - L_j)) / 2 with U_j, L_j the upper
    and lower hemisphere weights of grid j.

    Raises:
        DomainError: If the number of grids differs from N
    """
    if grids is None:
        return lhv_upper_bound(n_parties) / 2.0
    if len(grids) != n_parties:
        raise DomainError(f"Expected {n_parties} grids, got {len(grids)}")
    upper = SignOfCosTheta()
    totals, differences = [], []
    for grid in grids:
        signs = [upper(s) for s in grid.settings]
        up = math.fsum(w for sign, w in zip(signs, grid.weights) if sign == 1)
        down = math.fsum(w for sign, w in zip(signs, grid.weights) if sign == -1)
        totals.append(up + down)
        differences.append(up - down)
    return (math.prod(totals) + math.prod(differences)) / 2.0


def perfect_mixing_model(n_parties: int = 1) -> LhvModel:
    """Equal mixture of the all +1 and all -1 outcome assignments (odd parity)."""
    return LhvModel.from_members(
        [
            (0.5, [ConstantResponse(value=1)] * n_parties),
            (0.5, [ConstantResponse(value=-1)] + [ConstantResponse(value=1)] * (n_parties - 1)),
        ]
    )


def random_ensemble_model(
    n_parties: int,
    n_members: int,
    rng: np.random.Generator,
    grid: Optional[SphereGrid] = None,
) -> LhvModel:
    """
    Random finite ensemble with Dirichlet weights.

    Each member/party draws a constant, a sign-of-dot-product with a random
    vector, or (when ``grid`` is given) a random sign table on that grid.
    """
    if n_parties < 1 or n_members < 1:
        raise DomainError(f"Need N >= 1 and at least one member, got N={n_parties}, members={n_members}")

    kinds = 3 if grid is not None else 2
    members = []
    raw = rng.dirichlet(np.ones(n_members))
    raw = np.maximum(raw, 1e-12)
    weights = raw / math.fsum(raw)
    for w in weights:
        responses = []
        for _ in range(n_parties):
            choice = rng.integers(kinds)
            if choice == 0:
                responses.append(ConstantResponse(value=int(rng.choice([1, -1]))))
            elif choice == 1:
                responses.append(SignOfDotProduct(vector=tuple(float(v) for v in rng.standard_normal(3))))
            else:
                responses.append(random_sign_table(grid.settings, rng))
        members.append((float(w), responses))
    return LhvModel.from_members(members)


def mix_models(models: Sequence[LhvModel], probabilities: Sequence[float]) -> LhvModel:
    """
    Convex mixture of models over the same number of parties.

    Raises:
        DomainError: On mismatched parties or probabilities not summing to 1
    """
    if not models or len(models) != len(probabilities):
        raise DomainError("Need one probability per model")
    n_parties = models[0].n_parties
    if any(m.n_parties != n_parties for m in models):
        raise DomainError("All mixed models must have the same number of parties")
    if any(p < 0.0 for p in probabilities) or abs(math.fsum(probabilities) - 1.0) > 1e-12:
        raise DomainError("Mixture probabilities must be non-negative and sum to 1")

    members = [
        (p * w, responses)
        for model, p in zip(models, probabilities)
        if p > 0.0
        for w, responses in model.members()
    ]
    return LhvModel.from_members(members)
