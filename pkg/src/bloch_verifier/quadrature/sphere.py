"""
Product quadrature on the unit sphere.

Gauss-Legendre nodes in cos(theta) crossed with a uniform trapezoid in phi.
Since dOmega = d(cos theta) dphi, the Gauss weights already carry the
sin(theta) factor. Small grids integrate the low-degree trigonometric
polynomials met here exactly, so every closed-form scalar product has an
independent machine-precision check.
"""

import itertools
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from ..config import settings
from ..errors import DomainError, NumericError, ResourceBudgetError
from ..models.core import TWO_PI, Setting, setting_to_unit_vector

FOUR_PI = 4.0 * math.pi

Node = Tuple[float, float]


class SphereGrid(BaseModel):
    """Quadrature nodes for one observer's sphere of settings."""

    model_config = ConfigDict(frozen=True)

    theta_nodes: Tuple[Node, ...] = Field(..., min_length=1, description="(angle, weight) in cos(theta)")
    phi_nodes: Tuple[Node, ...] = Field(..., min_length=1, description="(angle, weight) in phi")

    _settings: List[Setting] = PrivateAttr(default_factory=list)
    _weights: List[float] = PrivateAttr(default_factory=list)
    _vectors: Optional[np.ndarray] = PrivateAttr(default=None)

    @model_validator(mode="after")
    def _check_weights(self) -> "SphereGrid":
        total = math.fsum(wt for _, wt in self.theta_nodes) * math.fsum(wp for _, wp in self.phi_nodes)
        if abs(total - FOUR_PI) > 1e-12:
            raise ValueError(f"Grid weights must sum to 4pi, got {total!r}")
        return self

    def model_post_init(self, __context) -> None:
        for theta, w_theta in self.theta_nodes:
            for phi, w_phi in self.phi_nodes:
                self._settings.append(Setting(theta=theta, phi=phi))
                self._weights.append(w_theta * w_phi)
        vectors = np.array([setting_to_unit_vector(s) for s in self._settings])
        vectors.setflags(write=False)
        self._vectors = vectors

    @property
    def n_theta(self) -> int:
        return len(self.theta_nodes)

    @property
    def n_phi(self) -> int:
        return len(self.phi_nodes)

    @property
    def n_nodes(self) -> int:
        return len(self._settings)

    @property
    def settings(self) -> List[Setting]:
        """Node settings, theta-major then phi."""
        return self._settings

    @property
    def weights(self) -> List[float]:
        return self._weights

    @property
    def unit_vectors(self) -> np.ndarray:
        """(n_nodes, 3) array of direction cosines in node order."""
        return self._vectors

    @property
    def total_weight(self) -> float:
        return math.fsum(self._weights)

    def nodes(self) -> List[Tuple[Setting, float]]:
        return list(zip(self._settings, self._weights))


def build_grid(n_theta: int, n_phi: int) -> SphereGrid:
    """
    Gauss-Legendre x trapezoid grid.

    Exact for polynomials of degree <= 2*n_theta - 1 in cos(theta) times
    trigonometric polynomials of degree < n_phi in phi.

    Raises:
        DomainError: If either count is below 1
    """
    if n_theta < 1 or n_phi < 1:
        raise DomainError(f"Grid sizes must be positive, got n_theta={n_theta}, n_phi={n_phi}")

    x, w = np.polynomial.legendre.leggauss(n_theta)
    # ascending theta
    theta_nodes = tuple(
        (float(np.arccos(xi)), float(wi)) for xi, wi in zip(x[::-1], w[::-1])
    )
    phi_weight = TWO_PI / n_phi
    phi_nodes = tuple((TWO_PI * k / n_phi, phi_weight) for k in range(n_phi))

    logger.debug(f"Built sphere grid {n_theta}x{n_phi}")
    return SphereGrid(theta_nodes=theta_nodes, phi_nodes=phi_nodes)


def default_grid() -> SphereGrid:
    return build_grid(settings.n_theta, settings.n_phi)


def grids_for(n_parties: int, n_theta: Optional[int] = None, n_phi: Optional[int] = None) -> List[SphereGrid]:
    """The same grid for each of N observers."""
    grid = build_grid(n_theta or settings.n_theta, n_phi or settings.n_phi)
    return [grid] * n_parties


def _finite(value: float, location) -> float:
    if not math.isfinite(value):
        raise NumericError(f"Integrand is not finite ({value!r}) at {location}", location=location)
    return value


def integrate_sphere(f: Callable[[Setting], float], grid: SphereGrid) -> float:
    """
    Weighted sum of f over the grid nodes in node order.

    Raises:
        NumericError: If f is not finite at some node
    """
    return math.fsum(
        weight * _finite(float(f(s)), (s.theta, s.phi)) for s, weight in grid.nodes()
    )


def check_budget(grids: Sequence[SphereGrid], node_budget: Optional[int] = None) -> int:
    """
    Number of product-grid evaluations, checked against the budget.

    Raises:
        ResourceBudgetError: If the product grid exceeds the budget
    """
    if node_budget is None:
        node_budget = settings.node_budget
    evaluations = math.prod(g.n_nodes for g in grids)
    if evaluations > node_budget:
        raise ResourceBudgetError(
            f"Product grid needs {evaluations} evaluations, budget is {node_budget}; "
            "use smaller grids or fewer parties"
        )
    return evaluations


def iter_product_nodes(grids: Sequence[SphereGrid]):
    """Lazily yield (node indices, settings, weight) in lexicographic order."""
    index_ranges = [range(g.n_nodes) for g in grids]
    for indices in itertools.product(*index_ranges):
        chosen = [g.settings[i] for g, i in zip(grids, indices)]
        weight = math.prod(g.weights[i] for g, i in zip(grids, indices))
        yield indices, chosen, weight


def iter_prefix_nodes(grids: Sequence[SphereGrid]):
    """
    Lazily yield (node indices, weight) over every grid but the last.

    Callers evaluate the last sphere as one vector per prefix, which keeps the
    lexicographic order of iter_product_nodes.
    """
    prefix = grids[:-1]
    for indices in itertools.product(*(range(g.n_nodes) for g in prefix)):
        yield indices, math.prod(g.weights[i] for g, i in zip(prefix, indices))


def integrate_spheres(
    f: Callable[[List[Setting]], float],
    grids: Sequence[SphereGrid],
    node_budget: Optional[int] = None,
) -> float:
    """
    Integral of f over the product of N setting spheres.

    Raises:
        DomainError: If no grid is given
        ResourceBudgetError: If the product grid exceeds the budget
        NumericError: If f is not finite at some node
    """
    if not grids:
        raise DomainError("At least one sphere grid is required")
    check_budget(grids, node_budget)
    return math.fsum(
        weight * _finite(float(f(chosen)), [(s.theta, s.phi) for s in chosen])
        for _, chosen, weight in iter_product_nodes(grids)
    )


def scalar_product_numeric(
    E: Callable[[List[Setting]], float],
    grids: Sequence[SphereGrid],
    node_budget: Optional[int] = None,
) -> float:
    """(E, E) = integral of E^2 over all setting spheres on the product grid."""
    return integrate_spheres(lambda chosen: float(E(chosen)) ** 2, grids, node_budget)


def orthogonality_matrix(grid: SphereGrid) -> np.ndarray:
    """The 3x3 matrix of quadrature values of integral c^a c^b dOmega."""
    c = grid.unit_vectors
    w = grid.weights
    return np.array(
        [[math.fsum(wk * c[k, a] * c[k, b] for k, wk in enumerate(w)) for b in range(3)] for a in range(3)]
    )


def orthogonality_residual(grid: SphereGrid) -> float:
    """Max deviation of integral c^a c^b dOmega from (4pi/3) delta_ab on the grid."""
    target = (FOUR_PI / 3.0) * np.eye(3)
    return float(np.max(np.abs(orthogonality_matrix(grid) - target)))


def project_correlation_tensor(
    E: Callable[[List[Setting]], float],
    grids: Sequence[SphereGrid],
    node_budget: Optional[int] = None,
) -> np.ndarray:
    """
    Recover (3/4pi)^N integral E c_1^{i1} ... c_N^{iN} dOmega.

    For a correlation function of quantum form this is exactly its correlation
    tensor; for other functions it is the tensor of their linear part, which
    need not fit inside the Bloch ball.
    """
    if not grids:
        raise DomainError("At least one sphere grid is required")
    check_budget(grids, node_budget)
    n = len(grids)
    accumulated = np.zeros((3,) * n)
    for indices, chosen, weight in iter_product_nodes(grids):
        value = _finite(float(E(chosen)), [(s.theta, s.phi) for s in chosen])
        outer = np.array(weight * value)
        for g, i in zip(grids, indices):
            outer = np.multiply.outer(outer, g.unit_vectors[i])
        accumulated += outer
    return (3.0 / FOUR_PI) ** n * accumulated
