"""
Scenario runner.

Executes the computations a ScenarioConfig declares, compares every result
with its closed-form reference and collects the pass/fail checks into a
Report. verify_all runs the built-in library and the property suites and
aggregates everything without stopping at the first failure.
"""

import math
import time
from typing import Dict, Iterable, List, NamedTuple, Optional, Union

import numpy as np
from loguru import logger
from pydantic import VERSION as PYDANTIC_VERSION
from pydantic import ValidationError

from .. import __version__
from ..config import settings
from ..errors import ConfigError, DomainError, VerifierError
from ..lhv.models import (
    LhvModel,
    lhv_upper_bound,
    scalar_product_lhv,
    simulator_fidelity,
)
from ..lhv.spec import RandomEnsembleSpec, SimulatorSpec, build_model, reference_scalar_product
from ..models.core import CorrelationTensor, JointState, ProductState
from ..models.linalg import as_complex_matrix
from ..models.scenario import (
    AggregateReport,
    BellSpec,
    Check,
    GhzSpec,
    GridSpec,
    MatrixSpec,
    MixedProductSpec,
    Provenance,
    PureProductSpec,
    Quantity,
    RandomProductSpec,
    Report,
    ScenarioConfig,
    Tolerances,
)
from ..quadrature.sphere import (
    FOUR_PI,
    SphereGrid,
    build_grid,
    grids_for,
    iter_product_nodes,
    orthogonality_residual,
    project_correlation_tensor,
)
from ..quantum.correlations import (
    bloch_norm_product,
    correlation_tensor,
    dense_correlation_tensor,
    e_sep,
    e_sep_from_tensor,
    ghz_tensor_norm,
    implied_tensor_norm,
    scalar_product_exact,
    scalar_product_on_grid,
    separability_check,
    separable_maximum,
    sum_of_squares,
)
from ..quantum.states import (
    bell_state,
    default_rng,
    ghz_state,
    joint_from_matrix,
    mixed_qubit,
    noisy_ghz_state,
    product_state,
    pure_qubit,
    random_product_state,
)
from .scenarios import BUILTIN_SCENARIOS

# Product nodes compared between the dense trace and the tensor contraction
ORACLE_NODES = 16

SATURATION_TOLERANCE = 1e-12
MIXED_PARTY_NORM = 1.0 - 1e-3
MIXED_PRODUCT_CEILING = 1.0 - 1e-6


def violation_ratio(n_parties: int) -> float:
    """
    (E_LR, E_LR)_max / (E_Sep, E_Sep)_max, which equals 3^N.

    Raises:
        DomainError: If N < 1
    """
    if n_parties < 1:
        raise DomainError(f"N must be >= 1, got {n_parties}")
    return lhv_upper_bound(n_parties) / separable_maximum(n_parties)


class Subject(NamedTuple):
    """A state under test with its closed-form Sigma T^2, where one exists."""

    label: str
    state: Union[JointState, ProductState]
    reference_norm: Optional[float]
    norm_formula: Optional[str]
    expect_separable: Optional[bool]


def build_subjects(config: ScenarioConfig, n_parties: int, rng: np.random.Generator) -> List[Subject]:
    """Instantiate the state spec of a scenario for N parties."""
    spec = config.state
    expect = config.expect_separable

    if isinstance(spec, PureProductSpec):
        angles = spec.angles * n_parties if len(spec.angles) == 1 else spec.angles
        state = product_state([pure_qubit(theta, phi) for theta, phi in angles])
        return [Subject("", state, 1.0, "Sigma T^2 = prod |b_j|^2 = 1", True if expect is None else expect)]

    if isinstance(spec, MixedProductSpec):
        blochs = spec.blochs * n_parties if len(spec.blochs) == 1 else spec.blochs
        state = product_state([mixed_qubit(b) for b in blochs])
        reference = math.prod(math.fsum(x * x for x in b) for b in blochs)
        return [Subject("", state, reference, "Sigma T^2 = prod |b_j|^2", True if expect is None else expect)]

    if isinstance(spec, RandomProductSpec):
        subjects = []
        for k in range(config.samples):
            state = random_product_state(n_parties, rng, pure=spec.pure)
            if spec.pure:
                reference, formula = 1.0, "Sigma T^2 = prod |b_j|^2 = 1"
            else:
                reference = math.prod(math.fsum(float(x) ** 2 for x in q.bloch) for q in state.parties)
                formula = "Sigma T^2 = prod |b_j|^2"
            label = f"#{k}" if config.samples > 1 else ""
            subjects.append(Subject(label, state, reference, formula, True if expect is None else expect))
        return subjects

    if isinstance(spec, GhzSpec):
        v = spec.visibility
        state = ghz_state(n_parties) if v == 1.0 else noisy_ghz_state(n_parties, v)
        reference = v * v * ghz_tensor_norm(n_parties)
        formula = "Sigma T^2 = v^2 (2^(N-1) + [N even])"
        return [Subject("", state, reference, formula, reference <= 1.0 if expect is None else expect)]

    if isinstance(spec, BellSpec):
        return [Subject("", bell_state(), 3.0, "Sigma T^2 = 3", False if expect is None else expect)]

    if isinstance(spec, MatrixSpec):
        rho = as_complex_matrix(spec.real)
        if spec.imag is not None:
            rho = rho + 1j * as_complex_matrix(spec.imag)
        return [Subject("", joint_from_matrix(rho), None, None, expect)]

    raise DomainError(f"Unknown state spec {spec!r}")


class _ScenarioRun:
    """Accumulates quantities and checks for one scenario."""

    def __init__(self, config: ScenarioConfig, node_budget: Optional[int]):
        self.config = config
        self.tol: Tolerances = config.tolerances
        self.node_budget = node_budget
        self.quantities: List[Quantity] = []
        self.checks: List[Check] = []
        self._grids: Dict[int, List[SphereGrid]] = {}

    def grids(self, n_parties: int) -> List[SphereGrid]:
        if n_parties not in self._grids:
            self._grids[n_parties] = grids_for(n_parties, self.config.grid.n_theta, self.config.grid.n_phi)
        return self._grids[n_parties]

    def compare(
        self,
        name: str,
        value: float,
        reference: float,
        formula: str,
        n_parties: int,
        tolerance: float,
        relative: bool = True,
        label: str = "",
    ) -> Quantity:
        quantity = Quantity.compare(name, value, reference, formula, n_parties)
        self.quantities.append(quantity)
        error = quantity.rel_error if relative else quantity.abs_error
        kind = "rel" if relative else "abs"
        self.check(
            f"{name}[N={n_parties}]{label}",
            error <= tolerance,
            f"{value:.17g} vs {reference:.17g} ({formula}); {kind} error {error:.3g}, tolerance {tolerance:.3g}",
        )
        return quantity

    def check(self, name: str, passed: bool, detail: str) -> None:
        if not passed:
            logger.warning(f"{self.config.name}: check {name} failed: {detail}")
        self.checks.append(Check(name=name, passed=passed, detail=detail))

    def run_state(self, n: int, subject: Subject, first: bool) -> None:
        requested = set(self.config.computations)
        tol = self.tol
        label = subject.label
        state = subject.state
        joint = state.joint() if isinstance(state, ProductState) else state

        tensor = correlation_tensor(state)
        dense: Optional[CorrelationTensor] = None
        reference_norm = subject.reference_norm
        norm_formula = subject.norm_formula
        if reference_norm is None:
            dense = dense_correlation_tensor(joint)
            reference_norm, norm_formula = sum_of_squares(dense), "Sigma T^2 by dense Pauli trace"

        if "tensor" in requested:
            self.compare(
                "sum_T2", sum_of_squares(tensor), reference_norm, norm_formula, n,
                tol.tensor_absolute, relative=False, label=label,
            )
            if first:
                dense = dense if dense is not None else dense_correlation_tensor(joint)
                self._check_oracle(n, joint, tensor, dense, label)

        if "separability" in requested:
            verdict = separability_check(tensor, tol.separability)
            expected = subject.expect_separable
            self.check(
                f"separability[N={n}]{label}",
                verdict.satisfied == expected,
                f"Sigma T^2 = {verdict.value:.17g}, {verdict.verdict}; expected "
                f"{'satisfied' if expected else 'violated'}",
            )

        if "bloch-norm" in requested:
            self._check_bloch_norm(n, state, reference_norm, label)

        if "exact-scalar-product" in requested:
            value = scalar_product_exact(tensor)
            if isinstance(state, ProductState) and state.is_pure:
                formula = "(E_Sep,E_Sep)_max = (4pi/3)^N"
            else:
                formula = "(E_Sep,E_Sep) = (4pi/3)^N Sigma T^2"
            self.compare(
                "exact_scalar_product", value, separable_maximum(n) * reference_norm, formula, n,
                tol.exact_relative, label=label,
            )
            if isinstance(state, ProductState):
                bound = separable_maximum(n)
                self.check(
                    f"separable-bound[N={n}]{label}",
                    value <= bound * (1.0 + tol.exact_relative),
                    f"{value:.17g} <= (4pi/3)^N = {bound:.17g}",
                )

        if "numeric-scalar-product" in requested:
            value = scalar_product_on_grid(tensor, self.grids(n), self.node_budget)
            self.compare(
                "numeric_scalar_product", value, scalar_product_exact(tensor),
                "(E_Sep,E_Sep) = (4pi/3)^N Sigma T^2", n, tol.numeric_relative, label=label,
            )

        if "projected-tensor" in requested:
            projected = project_correlation_tensor(
                lambda chosen: e_sep(joint, chosen), self.grids(n), self.node_budget
            )
            deviation = float(np.max(np.abs(projected - tensor.values)))
            self.compare(
                "projected_tensor_deviation", deviation, 0.0,
                "T = (3/4pi)^N integral E_Sep c_1 ... c_N dOmega", n,
                tol.projection_absolute, relative=False, label=label,
            )

    def _check_oracle(
        self, n: int, joint: JointState, tensor: CorrelationTensor, dense: CorrelationTensor, label: str
    ) -> None:
        deviation = float(np.max(np.abs(tensor.values - dense.values)))
        for k, (_, chosen, _) in enumerate(iter_product_nodes(self.grids(n))):
            if k >= ORACLE_NODES:
                break
            deviation = max(deviation, abs(e_sep(joint, chosen) - e_sep_from_tensor(tensor, chosen)))
        self.compare(
            "tensor_oracle_deviation", deviation, 0.0, "T = tr[rho sigma_i1 x ... x sigma_iN]", n,
            self.tol.tensor_absolute, relative=False, label=label,
        )

    def _check_bloch_norm(self, n: int, state: ProductState, reference: float, label: str) -> None:
        value = bloch_norm_product(state)
        self.compare(
            "bloch_norm_product", value, reference, "prod |b_j|^2", n,
            self.tol.tensor_absolute, relative=False, label=label,
        )
        saturated = abs(value - 1.0) <= SATURATION_TOLERANCE
        passed = saturated == state.is_pure
        if any(math.sqrt(q.bloch_norm_squared) <= MIXED_PARTY_NORM for q in state.parties):
            passed = passed and value < MIXED_PRODUCT_CEILING
        self.check(
            f"saturation-iff-pure[N={n}]{label}",
            passed,
            f"prod |b_j|^2 = {value:.17g}, {'pure' if state.is_pure else 'mixed'} product",
        )

    def run_model(self, n: int, model: LhvModel, label: str) -> None:
        requested = set(self.config.computations)
        spec = self.config.model
        tol = self.tol
        grids = self.grids(n)

        value = scalar_product_lhv(model, grids, self.node_budget)
        reference = reference_scalar_product(spec, n, grids)
        if "lhv-scalar-product" in requested:
            if reference is not None:
                tolerance = tol.simulator_relative if isinstance(spec, SimulatorSpec) else tol.lhv_relative
                self.compare("lhv_scalar_product", value, reference[0], reference[1], n, tolerance, label=label)
                self.quantities.append(
                    Quantity.compare(
                        "implied_sum_T2",
                        implied_tensor_norm(value, n),
                        implied_tensor_norm(reference[0], n),
                        "(E_LR,E_LR) / (4pi/3)^N",
                        n,
                    )
                )
            else:
                self.quantities.append(Quantity.compare("lhv_scalar_product", value, n_parties=n))

        if "lhv-bound" in requested:
            bound = lhv_upper_bound(n)
            self.compare(
                "lhv_upper_bound", bound, separable_maximum(n) * 3.0 ** n,
                "(E_LR,E_LR)_max = (4pi)^N", n, tol.ratio_relative, label=label,
            )
            self.check(
                f"lhv-bound[N={n}]{label}",
                value <= bound * (1.0 + tol.lhv_relative),
                f"(E_LR,E_LR) = {value:.17g} <= (4pi)^N = {bound:.17g}",
            )

        if "simulator-fidelity" in requested:
            resolution = spec.resolution or settings.simulator_resolution
            deviation = simulator_fidelity(model, spec.bloch, grids[0])
            self.compare(
                "simulator_max_deviation", deviation, 0.0, "E_LR(n) = n . b", n,
                1.0 / resolution + 1e-12, relative=False, label=label,
            )

    def run_closed_form(self, n: int) -> None:
        requested = set(self.config.computations)
        tol = self.tol

        if "ratio" in requested:
            ratio = violation_ratio(n)
            self.compare(
                "violation_ratio", ratio, 3.0 ** n, "(E_LR,E_LR)_max / (E_Sep,E_Sep)_max = 3^N", n,
                tol.ratio_relative,
            )
            if n > 1:
                previous = violation_ratio(n - 1)
                self.check(
                    f"ratio-recurrence[N={n}]",
                    abs(ratio - 3.0 * previous) <= tol.ratio_relative * ratio,
                    f"{ratio:.17g} vs 3 x {previous:.17g}",
                )

        if "orthogonality" in requested:
            grid = build_grid(self.config.grid.n_theta, self.config.grid.n_phi)
            self.compare(
                "orthogonality_residual", orthogonality_residual(grid), 0.0,
                "integral c^a c^b dOmega = (4pi/3) delta_ab", n, tol.quadrature_absolute, relative=False,
            )
            self.compare(
                "grid_total_weight", grid.total_weight, FOUR_PI, "integral dOmega = 4pi", n,
                tol.quadrature_absolute, relative=False,
            )


def provenance(tolerances: Tolerances, grid: GridSpec, seed: Optional[int] = None) -> Provenance:
    """Grid sizes, tolerances, library versions and the effective seed."""
    return Provenance(
        grid={"n_theta": grid.n_theta, "n_phi": grid.n_phi},
        tolerances=tolerances.model_dump(),
        versions={"bloch_verifier": __version__, "numpy": np.__version__, "pydantic": PYDANTIC_VERSION},
        seed=seed if seed is not None else settings.seed,
    )


def run_scenario(config: ScenarioConfig, node_budget: Optional[int] = None) -> Report:
    """
    Execute every computation a scenario declares.

    Args:
        config: Validated scenario
        node_budget: Product-grid evaluation budget (settings.node_budget by default)

    Returns:
        Report with quantities, checks and provenance

    Raises:
        DomainError: If a spec cannot be instantiated for some N
        ResourceBudgetError: If a quadrature exceeds the node budget
        NumericError: If an integrand is not finite
    """
    start = time.perf_counter()
    logger.info(f"Running scenario '{config.name}' for N={config.parties}")

    run = _ScenarioRun(config, node_budget)
    rng = default_rng(config.seed)
    for n in config.parties:
        logger.debug(f"{config.name}: N={n}")
        if config.state is not None:
            for k, subject in enumerate(build_subjects(config, n, rng)):
                run.run_state(n, subject, first=k == 0)
        if config.model is not None:
            count = config.samples if isinstance(config.model, RandomEnsembleSpec) else 1
            for k in range(count):
                model = build_model(config.model, n, rng)
                run.run_model(n, model, f"#{k}" if count > 1 else "")
        run.run_closed_form(n)

    report = Report(
        scenario=config.name,
        quantities=run.quantities,
        checks=run.checks,
        provenance=provenance(config.tolerances, config.grid, config.seed),
        duration_s=time.perf_counter() - start,
    )
    logger.info(
        f"Scenario '{config.name}': {len(report.checks) - len(report.failures)}/{len(report.checks)} "
        f"checks passed in {report.duration_s:.2f}s"
    )
    return report


def with_overrides(
    config: ScenarioConfig,
    tolerances: Optional[Dict[str, float]] = None,
    max_parties: Optional[int] = None,
    seed: Optional[int] = None,
    grid: Optional[GridSpec] = None,
) -> Optional[ScenarioConfig]:
    """
    Copy of a scenario with tolerance, party-cap, seed or grid overrides.

    Returns None when the party cap leaves no N to run.

    Raises:
        ConfigError: If an override names an unknown tolerance or is invalid
    """
    data = config.model_dump()
    if tolerances:
        data["tolerances"] = {**data["tolerances"], **tolerances}
    if max_parties is not None:
        data["parties"] = [n for n in config.parties if n <= max_parties]
        if not data["parties"]:
            return None
    if seed is not None:
        data["seed"] = seed
    if grid is not None:
        data["grid"] = grid.model_dump()
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        field = ".".join(str(part) for part in error["loc"])
        raise ConfigError(f"Invalid override for '{config.name}' at {field}: {error['msg']}", field=field) from e


def _error_report(config: ScenarioConfig, error: Exception, start: float) -> Report:
    logger.error(f"Scenario '{config.name}' aborted: {error}")
    return Report(
        scenario=config.name,
        checks=[Check(name="scenario-error", passed=False, detail=f"{type(error).__name__}: {error}")],
        provenance=provenance(config.tolerances, config.grid, config.seed),
        duration_s=time.perf_counter() - start,
    )


def verify_all(
    tolerance_overrides: Optional[Dict[str, float]] = None,
    max_parties: Optional[int] = None,
    seed: Optional[int] = None,
    grid: Optional[GridSpec] = None,
    scenarios: Optional[Iterable[str]] = None,
    include_properties: bool = True,
    node_budget: Optional[int] = None,
) -> AggregateReport:
    """
    Run the built-in scenarios and the property suites.

    Failures and errors are recorded per scenario; the run never stops early.

    Raises:
        ConfigError: If the overrides themselves are invalid
    """
    from .properties import run_property_suites

    start = time.perf_counter()
    names = list(scenarios) if scenarios is not None else list(BUILTIN_SCENARIOS)
    unknown = [name for name in names if name not in BUILTIN_SCENARIOS]
    if unknown:
        raise ConfigError(f"Unknown built-in scenarios: {', '.join(unknown)}", field="scenarios")

    configs = []
    for name in names:
        config = with_overrides(BUILTIN_SCENARIOS[name], tolerance_overrides, max_parties, seed, grid)
        if config is None:
            logger.info(f"Skipping '{name}': no party count within the cap of {max_parties}")
            continue
        configs.append(config)

    reports = []
    for config in configs:
        scenario_start = time.perf_counter()
        try:
            reports.append(run_scenario(config, node_budget))
        except VerifierError as e:
            reports.append(_error_report(config, e, scenario_start))

    if include_properties:
        try:
            tolerances = Tolerances.model_validate(tolerance_overrides or {})
        except ValidationError as e:
            raise ConfigError(f"Invalid tolerance overrides: {e.errors()[0]['msg']}", field="tolerances") from e
        reports.extend(run_property_suites(tolerances, max_parties=max_parties, seed=seed))

    aggregate = AggregateReport(reports=reports, duration_s=time.perf_counter() - start)
    level = "INFO" if aggregate.passed else "ERROR"
    logger.log(
        level,
        f"Verification finished: {aggregate.n_checks - aggregate.n_failed}/{aggregate.n_checks} checks "
        f"passed across {len(reports)} reports in {aggregate.duration_s:.2f}s",
    )
    return aggregate
