"""
Core value types for Bloch Verifier.

Measurement settings, single-qubit and joint density matrices, and the
correlation tensor. All types are immutable after construction.
"""

import math
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config import settings
from ..errors import DomainError, StateValidationError
from .linalg import PAULI, ComplexMatrix, RealVector, as_complex_matrix, kron_all, multi_index_label

TWO_PI = 2.0 * math.pi

StateKind = Literal["product-of-pure", "product-of-mixed", "general"]


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array)
    array.setflags(write=False)
    return array


class DensityVerdict(BaseModel):
    """Outcome of a density-matrix validation."""

    model_config = ConfigDict(frozen=True)

    valid: bool = Field(..., description="True when no property is violated")
    violations: List[str] = Field(default_factory=list, description="Violated properties")
    hermiticity_error: float = Field(..., description="max |m - m^H|")
    trace_error: float = Field(..., description="|tr m - 1|")
    min_eigenvalue: float = Field(..., description="Smallest eigenvalue of the Hermitian part")


def validate_density_matrix(matrix: np.ndarray, tol: Optional[float] = None) -> DensityVerdict:
    """
    Check Hermiticity, unit trace and positive semidefiniteness.

    Args:
        matrix: Square complex matrix
        tol: Tolerance for every check. Uses settings default if None.

    Returns:
        DensityVerdict listing each failed property
    """
    if tol is None:
        tol = settings.density_tolerance

    m = as_complex_matrix(matrix)
    hermiticity_error = float(np.max(np.abs(m - m.conj().T)))
    trace_error = float(abs(np.trace(m) - 1.0))
    min_eigenvalue = float(np.linalg.eigvalsh((m + m.conj().T) / 2.0)[0])

    violations = []
    if hermiticity_error > tol:
        violations.append("not Hermitian")
    if trace_error > tol:
        violations.append("trace not unit")
    if min_eigenvalue < -tol:
        violations.append("not positive semidefinite")

    return DensityVerdict(
        valid=not violations,
        violations=violations,
        hermiticity_error=hermiticity_error,
        trace_error=trace_error,
        min_eigenvalue=min_eigenvalue,
    )


def _require_density(matrix: np.ndarray, what: str) -> None:
    verdict = validate_density_matrix(matrix)
    if not verdict.valid:
        raise StateValidationError(
            f"{what} is not a valid density matrix: {', '.join(verdict.violations)}",
            verdict=verdict,
        )


class Setting(BaseModel):
    """A measurement direction in spherical coordinates."""

    model_config = ConfigDict(frozen=True)

    theta: float = Field(..., ge=0.0, le=math.pi, description="Polar angle in radians")
    phi: float = Field(default=0.0, ge=0.0, lt=TWO_PI, description="Azimuthal angle in radians")

    @property
    def unit_vector(self) -> RealVector:
        return setting_to_unit_vector(self)


def setting_to_unit_vector(s: Setting) -> RealVector:
    """
    Map a setting to (sin t cos p, sin t sin p, cos t).

    The result doubles as the direction-cosine vector used to contract the
    correlation tensor.

    Raises:
        DomainError: If the angles lie outside theta in [0, pi], phi in [0, 2pi)
    """
    if not (0.0 <= s.theta <= math.pi) or not (0.0 <= s.phi < TWO_PI):
        raise DomainError(f"Setting out of range: theta={s.theta}, phi={s.phi}")
    sin_theta = math.sin(s.theta)
    return np.array(
        [sin_theta * math.cos(s.phi), sin_theta * math.sin(s.phi), math.cos(s.theta)]
    )


class QubitState(BaseModel):
    """A single qubit as a 2x2 density matrix."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rho: np.ndarray = Field(..., description="2x2 density matrix")

    @field_validator("rho", mode="before")
    @classmethod
    def _as_matrix(cls, value):
        return _readonly(as_complex_matrix(value, dim=2))

    @model_validator(mode="after")
    def _check_density(self) -> "QubitState":
        _require_density(self.rho, "Qubit state")
        return self

    @property
    def bloch(self) -> RealVector:
        return bloch_vector(self)

    @property
    def bloch_norm_squared(self) -> float:
        return float(np.dot(self.bloch, self.bloch))

    @property
    def is_pure(self) -> bool:
        return abs(self.bloch_norm_squared - 1.0) <= settings.density_tolerance


def bloch_vector(q: "QubitState | np.ndarray") -> RealVector:
    """
    Bloch vector (tr rho sx, tr rho sy, tr rho sz).

    Accepts a QubitState or a raw 2x2 matrix; raw matrices are validated first.

    Raises:
        StateValidationError: If a raw matrix is not a valid density matrix
    """
    if isinstance(q, QubitState):
        rho = q.rho
    else:
        rho = as_complex_matrix(q, dim=2)
        _require_density(rho, "Qubit state")
    return np.array([float(np.real(np.trace(rho @ sigma))) for sigma in PAULI])


class ProductState(BaseModel):
    """An ordered list of N single-qubit states, rho_1 x ... x rho_N."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    parties: Tuple[QubitState, ...] = Field(..., min_length=1)

    @property
    def n_parties(self) -> int:
        return len(self.parties)

    @property
    def is_pure(self) -> bool:
        return all(q.is_pure for q in self.parties)

    def joint(self) -> "JointState":
        """The induced joint state, tagged with its product kind."""
        return JointState(
            n_parties=self.n_parties,
            rho=kron_all(q.rho for q in self.parties),
            kind="product-of-pure" if self.is_pure else "product-of-mixed",
            factors=self.parties,
        )


class JointState(BaseModel):
    """An N-qubit density matrix, optionally with its product factors."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n_parties: int = Field(..., ge=1)
    rho: np.ndarray = Field(..., description="2^N x 2^N density matrix")
    kind: StateKind = Field(default="general")
    factors: Optional[Tuple[QubitState, ...]] = Field(default=None)

    @field_validator("rho", mode="before")
    @classmethod
    def _as_matrix(cls, value):
        return _readonly(as_complex_matrix(value))

    @model_validator(mode="after")
    def _check_state(self) -> "JointState":
        if self.n_parties > settings.max_dense_parties:
            raise ValueError(
                f"Dense joint states are limited to {settings.max_dense_parties} parties, "
                f"got {self.n_parties}"
            )
        dim = 2 ** self.n_parties
        if self.rho.shape != (dim, dim):
            raise ValueError(f"Expected a {dim}x{dim} matrix for N={self.n_parties}, got {self.rho.shape}")
        _require_density(self.rho, "Joint state")

        if self.kind == "general":
            return self
        if self.factors is None or len(self.factors) != self.n_parties:
            raise ValueError(f"A {self.kind} state needs exactly {self.n_parties} factors")
        expected = kron_all(q.rho for q in self.factors)
        if np.max(np.abs(expected - self.rho)) > settings.tensor_tolerance:
            raise ValueError("Joint matrix does not equal the tensor product of its factors")
        if self.kind == "product-of-pure" and not all(q.is_pure for q in self.factors):
            raise ValueError("product-of-pure state has a mixed factor")
        return self

    @property
    def is_product(self) -> bool:
        return self.kind != "general"


class CorrelationTensor(BaseModel):
    """The 3^N array of joint Pauli expectation values."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n_parties: int = Field(..., ge=1)
    values: np.ndarray = Field(..., description="Real array of shape (3,)*N")

    @field_validator("values", mode="before")
    @classmethod
    def _as_array(cls, value):
        return _readonly(np.array(value, dtype=float))

    @model_validator(mode="after")
    def _check_tensor(self) -> "CorrelationTensor":
        if self.values.shape != (3,) * self.n_parties:
            raise ValueError(f"Expected shape {(3,) * self.n_parties}, got {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Correlation tensor has non-finite entries")
        if np.max(np.abs(self.values)) > 1.0 + settings.tensor_tolerance:
            raise ValueError("Correlation tensor entries must lie in [-1, 1]")
        return self

    def nonzero_entries(self, tol: float = 1e-12) -> Dict[str, float]:
        """Entries with |T| > tol keyed by axis label, e.g. {'zz': 1.0}."""
        return {
            multi_index_label(index): float(value)
            for index, value in np.ndenumerate(self.values)
            if abs(value) > tol
        }


class SeparabilityVerdict(BaseModel):
    """Result of the Sigma T^2 <= 1 separability condition."""

    model_config = ConfigDict(frozen=True)

    satisfied: bool
    value: float = Field(..., description="Sigma over all multi-indices of T^2")
    bound: float = Field(default=1.0)
    tolerance: float

    @property
    def verdict(self) -> str:
        return "satisfied" if self.satisfied else "violated"
