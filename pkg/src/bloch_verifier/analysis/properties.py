"""
Randomized property suites.

One suite per library module, each returning a Report of pass/fail checks.
Every random draw comes from a Generator seeded by the caller, so repeated
runs produce identical numbers.
"""

import math
import time
from typing import Callable, List, Optional

import numpy as np
from loguru import logger

from ..errors import VerifierError
from ..lhv.models import (
    deterministic_model,
    e_lr,
    lhv_upper_bound,
    mix_models,
    random_ensemble_model,
    saturating_model,
    scalar_product_lhv,
    simulator_fidelity,
    single_qubit_simulator_model,
)
from ..lhv.responses import ConstantResponse, SignOfCosTheta, SignOfDotProduct, random_sign_table
from ..models.core import JointState, Setting, bloch_vector, setting_to_unit_vector
from ..models.scenario import Check, GridSpec, Quantity, Report, Tolerances
from ..quadrature.sphere import (
    FOUR_PI,
    build_grid,
    default_grid,
    grids_for,
    integrate_sphere,
    orthogonality_residual,
)
from ..quantum.correlations import (
    bloch_norm_product,
    correlation_tensor,
    dense_correlation_tensor,
    e_sep,
    e_sep_from_tensor,
    ghz_tensor_norm,
    separability_check,
    sum_of_squares,
)
from ..quantum.states import (
    default_rng,
    ghz_state,
    mixed_qubit,
    product_state,
    random_bloch_vector,
    random_product_state,
    random_pure_qubit,
)
from .runner import provenance, violation_ratio

BLOCH_SAMPLES = 1000
DETERMINISTIC_MODELS = 10
RANDOM_ENSEMBLES = 200
SIMULATOR_VECTORS = 20
CONVEXITY_SAMPLES = 30
LINEARITY_SAMPLES = 25
SATURATION_CHECK = 1e-12
SIMULATOR_MIN_NORM = 0.5


class _Suite:
    def __init__(self, name: str, tolerances: Tolerances, seed: Optional[int]):
        self.name = name
        self.tol = tolerances
        self.rng = default_rng(seed)
        self.seed = seed
        self.quantities: List[Quantity] = []
        self.checks: List[Check] = []

    def check(self, name: str, passed: bool, detail: str) -> None:
        if not passed:
            logger.warning(f"{self.name}: property {name} failed: {detail}")
        self.checks.append(Check(name=name, passed=bool(passed), detail=detail))

    def worst(self, name: str, value: float, reference: float, formula: str, tolerance: float,
              n_parties: Optional[int] = None) -> None:
        """Record the worst deviation seen across samples and check it."""
        quantity = Quantity.compare(name, value, reference, formula, n_parties)
        self.quantities.append(quantity)
        suffix = f"[N={n_parties}]" if n_parties is not None else ""
        self.check(
            f"{name}{suffix}",
            quantity.abs_error <= tolerance,
            f"worst {value:.17g} vs {reference:.17g} ({formula}); tolerance {tolerance:.3g}",
        )

    def report(self, start: float) -> Report:
        return Report(
            scenario=self.name,
            quantities=self.quantities,
            checks=self.checks,
            provenance=provenance(self.tol, GridSpec(), self.seed),
            duration_s=time.perf_counter() - start,
        )


def _random_density_matrix(rng: np.random.Generator) -> np.ndarray:
    """A A^H / tr(A A^H) for a complex Gaussian A."""
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def _random_setting(rng: np.random.Generator) -> Setting:
    return Setting(theta=float(np.arccos(rng.uniform(-1.0, 1.0))), phi=float(rng.uniform(0.0, 2.0 * math.pi)))


def core_types_suite(tol: Tolerances, max_parties: int = 6, seed: Optional[int] = None) -> Report:
    """Bloch-ball constraint for random mixed and pure qubits; unit direction cosines."""
    start = time.perf_counter()
    suite = _Suite("property:core-types", tol, seed)
    rng = suite.rng

    worst_mixed = max(
        float(np.dot(b, b)) for b in (bloch_vector(_random_density_matrix(rng)) for _ in range(BLOCH_SAMPLES))
    )
    suite.check(
        "bloch-ball",
        worst_mixed <= 1.0 + 1e-12,
        f"max |b|^2 over {BLOCH_SAMPLES} random density matrices = {worst_mixed:.17g}",
    )

    worst_pure = max(abs(random_pure_qubit(rng).bloch_norm_squared - 1.0) for _ in range(BLOCH_SAMPLES))
    suite.worst("pure_bloch_norm_deviation", worst_pure, 0.0, "|b|^2 = 1 for pure states", 1e-12)

    worst_unit = max(
        abs(float(np.linalg.norm(setting_to_unit_vector(_random_setting(rng)))) - 1.0)
        for _ in range(BLOCH_SAMPLES)
    )
    suite.worst("unit_vector_deviation", worst_unit, 0.0, "|c(theta, phi)| = 1", 1e-14)
    return suite.report(start)


def quantum_suite(tol: Tolerances, max_parties: int = 6, seed: Optional[int] = None) -> Report:
    """Linearity of E_Sep, dense-oracle agreement, GHZ closed form, saturation only for pure products."""
    start = time.perf_counter()
    suite = _Suite("property:quantum-correlations", tol, seed)
    rng = suite.rng

    for n in range(1, min(max_parties, 4) + 1):
        worst = 0.0
        for _ in range(LINEARITY_SAMPLES):
            a = random_product_state(n, rng, pure=False).joint()
            b = random_product_state(n, rng, pure=True).joint()
            p = float(rng.uniform())
            mixture = JointState(n_parties=n, rho=p * a.rho + (1.0 - p) * b.rho)
            chosen = [_random_setting(rng) for _ in range(n)]
            expected = p * e_sep(a, chosen) + (1.0 - p) * e_sep(b, chosen)
            worst = max(worst, abs(e_sep(mixture, chosen) - expected))
            worst = max(worst, abs(e_sep(a, chosen) - e_sep_from_tensor(dense_correlation_tensor(a), chosen)))
        suite.worst("e_sep_linearity_deviation", worst, 0.0, "E is linear in rho and equals T . c", 1e-12, n)

    for n in range(2, min(max_parties, 6) + 1):
        dense = sum_of_squares(dense_correlation_tensor(ghz_state(n)))
        suite.worst(
            "ghz_sum_T2", dense, ghz_tensor_norm(n), "Sigma T^2 = 2^(N-1) + [N even]", tol.tensor_absolute, n
        )
        verdict = separability_check(correlation_tensor(ghz_state(n)), tol.separability)
        suite.check(f"ghz-violates[N={n}]", not verdict.satisfied, f"Sigma T^2 = {verdict.value:.17g}")

    for n in range(1, min(max_parties, 6) + 1):
        pure = random_product_state(n, rng, pure=True)
        suite.worst(
            "pure_product_norm", bloch_norm_product(pure), 1.0, "prod |b_j|^2 = 1", SATURATION_CHECK, n
        )
        parties = list(random_product_state(n, rng, pure=True).parties)
        parties[int(rng.integers(n))] = mixed_qubit(random_bloch_vector(rng, max_norm=1.0 - 1e-3))
        value = bloch_norm_product(product_state(parties))
        suite.check(
            f"mixed-party-unsaturated[N={n}]",
            value < 1.0 - 1e-6,
            f"prod |b_j|^2 = {value:.17g} with one party of norm <= 1 - 1e-3",
        )
    return suite.report(start)


def quadrature_suite(tol: Tolerances, max_parties: int = 6, seed: Optional[int] = None) -> Report:
    """Orthogonality relation, total weight and exactness on low-degree integrands."""
    start = time.perf_counter()
    suite = _Suite("property:spherical-quadrature", tol, seed)
    grid = default_grid()

    suite.worst(
        "orthogonality_residual", orthogonality_residual(grid), 0.0,
        "integral c^a c^b dOmega = (4pi/3) delta_ab", tol.quadrature_absolute,
    )
    suite.worst("grid_total_weight", grid.total_weight, FOUR_PI, "integral dOmega = 4pi", tol.quadrature_absolute)
    quartic = integrate_sphere(lambda s: math.cos(s.theta) ** 4, grid)
    suite.worst("cos4_integral", quartic, FOUR_PI / 5.0, "integral cos^4 dOmega = 4pi/5", tol.quadrature_absolute)

    for n_theta, n_phi in [(2, 3), (3, 4), (6, 12)]:
        coarse = build_grid(n_theta, n_phi)
        suite.worst(
            f"orthogonality_residual_{n_theta}x{n_phi}", orthogonality_residual(coarse), 0.0,
            "integral c^a c^b dOmega = (4pi/3) delta_ab", tol.quadrature_absolute,
        )
    return suite.report(start)


def _random_deterministic_model(n: int, rng: np.random.Generator, grid):
    responses = []
    for _ in range(n):
        choice = int(rng.integers(4))
        if choice == 0:
            responses.append(ConstantResponse(value=int(rng.choice([1, -1]))))
        elif choice == 1:
            responses.append(SignOfCosTheta())
        elif choice == 2:
            responses.append(SignOfDotProduct(vector=tuple(float(v) for v in rng.standard_normal(3))))
        else:
            responses.append(random_sign_table(grid.settings, rng))
    return deterministic_model(responses)


def lhv_suite(tol: Tolerances, max_parties: int = 6, seed: Optional[int] = None) -> Report:
    """Deterministic models saturate (4pi)^N, ensembles respect it and mix affinely, the simulator tracks n . b."""
    start = time.perf_counter()
    suite = _Suite("property:lhv-models", tol, seed)
    rng = suite.rng
    grid = default_grid()
    top = min(max_parties, 3)

    for n in range(1, top + 1):
        grids = grids_for(n)
        bound = lhv_upper_bound(n)
        models = [saturating_model(n)] + [
            _random_deterministic_model(n, rng, grid) for _ in range(DETERMINISTIC_MODELS - 1)
        ]
        worst = max(abs(scalar_product_lhv(m, grids) - bound) / bound for m in models)
        suite.worst(
            "deterministic_saturation_rel", worst, 0.0, "(E_LR,E_LR)_max = (4pi)^N", tol.lhv_relative, n
        )

    excess = -math.inf
    for k in range(RANDOM_ENSEMBLES):
        n = 1 + k % top
        model = random_ensemble_model(n, int(rng.integers(1, 6)), rng, grid)
        bound = lhv_upper_bound(n)
        excess = max(excess, (scalar_product_lhv(model, grids_for(n)) - bound) / bound)
    suite.check(
        "random-ensembles-bounded",
        excess <= tol.lhv_relative,
        f"max relative excess over (4pi)^N across {RANDOM_ENSEMBLES} ensembles = {excess:.3g}",
    )

    worst_mixture = 0.0
    for k in range(CONVEXITY_SAMPLES):
        n = 1 + k % top
        first = random_ensemble_model(n, int(rng.integers(1, 4)), rng, grid)
        second = random_ensemble_model(n, int(rng.integers(1, 4)), rng, grid)
        p = float(rng.uniform(0.05, 0.95))
        mixture = mix_models([first, second], [p, 1.0 - p])
        for chosen in ([grid.settings[int(i)] for i in rng.integers(grid.n_nodes, size=n)] for _ in range(5)):
            expected = p * e_lr(first, chosen) + (1.0 - p) * e_lr(second, chosen)
            worst_mixture = max(worst_mixture, abs(e_lr(mixture, chosen) - expected))
    suite.worst("mixture_convexity_deviation", worst_mixture, 0.0, "E_LR is affine in the mixture", 1e-12)

    worst_fidelity = 0.0
    worst_scalar = 0.0
    for _ in range(SIMULATOR_VECTORS):
        b = random_bloch_vector(rng, min_norm=SIMULATOR_MIN_NORM)
        model = single_qubit_simulator_model(b)
        worst_fidelity = max(worst_fidelity, simulator_fidelity(model, b, grid))
        reference = (FOUR_PI / 3.0) * float(np.dot(b, b))
        worst_scalar = max(worst_scalar, abs(scalar_product_lhv(model, [grid]) - reference) / reference)
    suite.worst("simulator_max_deviation", worst_fidelity, 0.0, "E_LR(n) = n . b", 1e-4 + 1e-12)
    suite.worst(
        "simulator_scalar_product_rel", worst_scalar, 0.0, "(E,E) = (4pi/3)|b|^2", tol.simulator_relative
    )
    return suite.report(start)


def analysis_suite(tol: Tolerances, max_parties: int = 8, seed: Optional[int] = None) -> Report:
    """Violation ratio 3^N for N up to 8 and its recurrence."""
    start = time.perf_counter()
    suite = _Suite("property:analysis", tol, seed)
    top = min(max_parties, 8)
    for n in range(1, top + 1):
        ratio = violation_ratio(n)
        suite.worst("violation_ratio_rel", abs(ratio - 3.0 ** n) / 3.0 ** n, 0.0, "3^N", tol.ratio_relative, n)
        if n > 1:
            suite.check(
                f"ratio-recurrence[N={n}]",
                abs(ratio - 3.0 * violation_ratio(n - 1)) <= tol.ratio_relative * ratio,
                f"{ratio:.17g} = 3 x {violation_ratio(n - 1):.17g}",
            )
    return suite.report(start)


PROPERTY_SUITES: List[Callable[..., Report]] = [
    core_types_suite,
    quantum_suite,
    quadrature_suite,
    lhv_suite,
    analysis_suite,
]


def run_property_suites(
    tolerances: Optional[Tolerances] = None,
    max_parties: Optional[int] = None,
    seed: Optional[int] = None,
) -> List[Report]:
    """Run every property suite; a suite that raises is reported as failed."""
    tolerances = tolerances or Tolerances()
    reports = []
    for suite in PROPERTY_SUITES:
        start = time.perf_counter()
        kwargs = {"seed": seed}
        if max_parties is not None:
            kwargs["max_parties"] = max_parties
        try:
            reports.append(suite(tolerances, **kwargs))
        except VerifierError as e:
            logger.error(f"Property suite {suite.__name__} aborted: {e}")
            failed = _Suite(f"property:{suite.__name__}", tolerances, seed)
            failed.check("suite-error", False, f"{type(e).__name__}: {e}")
            reports.append(failed.report(start))
    return reports
