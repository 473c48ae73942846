"""
Scenario configuration and report models.

A scenario declares the party counts, the state and/or hidden-variable model
under test, the quadrature grid, tolerances and the list of computations to
run. A report records every computed quantity next to its closed-form
reference and every pass/fail check.
"""

from datetime import datetime
from typing import Annotated, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..config import settings
from ..lhv.spec import ModelSpec, SimulatorSpec

Vector3 = Tuple[float, float, float]

Computation = Literal[
    "tensor",
    "separability",
    "bloch-norm",
    "exact-scalar-product",
    "numeric-scalar-product",
    "projected-tensor",
    "lhv-scalar-product",
    "lhv-bound",
    "simulator-fidelity",
    "ratio",
    "orthogonality",
]

STATE_COMPUTATIONS = {
    "tensor",
    "separability",
    "bloch-norm",
    "exact-scalar-product",
    "numeric-scalar-product",
    "projected-tensor",
}
MODEL_COMPUTATIONS = {"lhv-scalar-product", "lhv-bound", "simulator-fidelity"}


class _Spec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class PureProductSpec(_Spec):
    """Pure product state from per-party (theta, phi); a single pair is reused for every party."""

    type: Literal["pure-product"] = "pure-product"
    angles: List[Tuple[float, float]] = Field(..., min_length=1)


class MixedProductSpec(_Spec):
    """Product state from per-party Bloch vectors; a single vector is reused for every party."""

    type: Literal["mixed-product"] = "mixed-product"
    blochs: List[Vector3] = Field(..., min_length=1)


class RandomProductSpec(_Spec):
    type: Literal["random-product"] = "random-product"
    pure: bool = True


class GhzSpec(_Spec):
    type: Literal["ghz"] = "ghz"
    visibility: float = Field(default=1.0, ge=0.0, le=1.0)


class BellSpec(_Spec):
    type: Literal["bell"] = "bell"


class MatrixSpec(_Spec):
    """Explicit density matrix, row-major real and imaginary parts."""

    type: Literal["matrix"] = "matrix"
    real: List[float] = Field(..., min_length=4)
    imag: Optional[List[float]] = None

    @model_validator(mode="after")
    def _same_length(self) -> "MatrixSpec":
        if self.imag is not None and len(self.imag) != len(self.real):
            raise ValueError("real and imag parts must have the same number of entries")
        return self


StateSpec = Annotated[
    Union[PureProductSpec, MixedProductSpec, RandomProductSpec, GhzSpec, BellSpec, MatrixSpec],
    Field(discriminator="type"),
]

PRODUCT_STATE_TYPES = (PureProductSpec, MixedProductSpec, RandomProductSpec)


class GridSpec(_Spec):
    n_theta: int = Field(default_factory=lambda: settings.n_theta, ge=1)
    n_phi: int = Field(default_factory=lambda: settings.n_phi, ge=1)


class Tolerances(_Spec):
    """Acceptance tolerances; relative unless stated otherwise."""

    exact_relative: float = Field(default=1e-10, ge=0.0)
    numeric_relative: float = Field(default=1e-9, ge=0.0)
    lhv_relative: float = Field(default=1e-9, ge=0.0)
    ratio_relative: float = Field(default=1e-12, ge=0.0)
    simulator_relative: float = Field(default=1e-3, ge=0.0)
    tensor_absolute: float = Field(default=1e-12, ge=0.0)
    quadrature_absolute: float = Field(default=1e-12, ge=0.0)
    projection_absolute: float = Field(default=1e-10, ge=0.0)
    separability: float = Field(default_factory=lambda: settings.separability_tolerance, ge=0.0)


class ScenarioConfig(_Spec):
    """A declarative verification scenario."""

    name: str = Field(..., min_length=1)
    description: str = ""
    parties: List[int] = Field(..., min_length=1)
    state: Optional[StateSpec] = None
    model: Optional[ModelSpec] = None
    grid: GridSpec = Field(default_factory=GridSpec)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    computations: List[Computation] = Field(..., min_length=1)
    samples: int = Field(default=1, ge=1, description="Random states per N")
    seed: Optional[int] = None
    expect_separable: Optional[bool] = Field(
        default=None,
        description="Expected verdict; derived for product and GHZ states when omitted",
    )

    @model_validator(mode="after")
    def _check_consistency(self) -> "ScenarioConfig":
        requested = set(self.computations)
        if any(n < 1 for n in self.parties):
            raise ValueError("party counts must be >= 1")

        dense = bool(requested & STATE_COMPUTATIONS)
        cap = settings.max_dense_parties if dense else settings.max_closed_form_parties
        if max(self.parties) > cap:
            raise ValueError(f"party counts are capped at {cap} for this scenario, got {max(self.parties)}")

        if dense and self.state is None:
            raise ValueError(f"computations {sorted(requested & STATE_COMPUTATIONS)} need a state")
        if requested & MODEL_COMPUTATIONS and self.model is None:
            raise ValueError(f"computations {sorted(requested & MODEL_COMPUTATIONS)} need a model")
        if "bloch-norm" in requested and not isinstance(self.state, PRODUCT_STATE_TYPES):
            raise ValueError("bloch-norm needs a product state")
        if "separability" in requested and self.expect_separable is None and isinstance(self.state, MatrixSpec):
            raise ValueError("separability on an explicit matrix needs expect_separable")
        if "simulator-fidelity" in requested and not isinstance(self.model, SimulatorSpec):
            raise ValueError("simulator-fidelity needs a threshold-simulator model")
        if isinstance(self.state, BellSpec) and set(self.parties) != {2}:
            raise ValueError("the Bell state has exactly 2 parties")
        if isinstance(self.state, (PureProductSpec, MixedProductSpec)):
            given = len(self.state.angles if isinstance(self.state, PureProductSpec) else self.state.blochs)
            if given != 1 and any(n != given for n in self.parties):
                raise ValueError(f"state lists {given} parties but scenario runs N={self.parties}")
        if isinstance(self.state, MatrixSpec) and any(4 ** n != len(self.state.real) for n in self.parties):
            raise ValueError(f"a matrix with {len(self.state.real)} entries does not describe N={self.parties}")
        return self


class Quantity(BaseModel):
    """A computed value beside its closed-form reference."""

    name: str
    n_parties: Optional[int] = None
    value: float
    reference: Optional[float] = None
    reference_formula: Optional[str] = None
    abs_error: Optional[float] = None
    rel_error: Optional[float] = None

    @model_validator(mode="after")
    def _reference_needs_formula(self) -> "Quantity":
        if self.reference is not None and not self.reference_formula:
            raise ValueError(f"{self.name}: a closed-form reference must state its formula")
        return self

    @classmethod
    def compare(
        cls,
        name: str,
        value: float,
        reference: Optional[float] = None,
        formula: Optional[str] = None,
        n_parties: Optional[int] = None,
    ) -> "Quantity":
        abs_error = rel_error = None
        if reference is not None:
            abs_error = abs(value - reference)
            rel_error = abs_error / abs(reference) if reference != 0.0 else abs_error
        return cls(
            name=name,
            n_parties=n_parties,
            value=value,
            reference=reference,
            reference_formula=formula,
            abs_error=abs_error,
            rel_error=rel_error,
        )


class Check(BaseModel):
    """A pass/fail acceptance check."""

    name: str
    passed: bool
    detail: str = ""


class Provenance(BaseModel):
    grid: Dict[str, int]
    tolerances: Dict[str, float]
    versions: Dict[str, str]
    seed: Optional[int] = None


class Report(BaseModel):
    """Everything one scenario computed and checked."""

    scenario: str
    quantities: List[Quantity] = Field(default_factory=list)
    checks: List[Check] = Field(default_factory=list)
    provenance: Provenance
    duration_s: float = 0.0
    created_at: datetime = Field(default_factory=datetime.utcnow)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]


class AggregateReport(BaseModel):
    """All scenario and property-suite reports from one verification run."""

    reports: List[Report] = Field(default_factory=list)
    duration_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    @property
    def n_checks(self) -> int:
        return sum(len(r.checks) for r in self.reports)

    @property
    def n_failed(self) -> int:
        return sum(len(r.failures) for r in self.reports)
