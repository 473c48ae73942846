"""
Quantum correlation functions and the correlation tensor.

E_Sep is the expectation of (n_1.sigma) x ... x (n_N.sigma); the correlation
tensor T collects the 3^N Pauli expectation values, and the scalar product of
E_Sep over all setting spheres reduces to (4pi/3)^N Sigma T^2 through the
orthogonality relation of the direction cosines.
"""

import itertools
import math
from typing import Optional, Sequence

import numpy as np
from loguru import logger

from ..config import settings
from ..errors import DomainError
from ..models.core import (
    CorrelationTensor,
    JointState,
    ProductState,
    SeparabilityVerdict,
    Setting,
    setting_to_unit_vector,
)
from ..models.linalg import kron_all, pauli_string, spin_observable
from ..quadrature.sphere import SphereGrid, check_budget, iter_prefix_nodes

SINGLE_SPHERE_SEPARABLE = 4.0 * math.pi / 3.0


def _check_party_count(n_parties: int, settings_list: Sequence[Setting]) -> None:
    if len(settings_list) != n_parties:
        raise DomainError(f"Expected {n_parties} settings, got {len(settings_list)}")


def e_sep(state: JointState, settings_list: Sequence[Setting]) -> float:
    """
    Quantum correlation function tr[rho (n_1.sigma) x ... x (n_N.sigma)].

    Args:
        state: Joint N-qubit state
        settings_list: One setting per party

    Returns:
        Real correlation value in [-1, 1]

    Raises:
        DomainError: If the number of settings differs from N
    """
    _check_party_count(state.n_parties, settings_list)
    observable = kron_all(spin_observable(setting_to_unit_vector(s)) for s in settings_list)
    return float(np.real(np.einsum("ij,ji->", state.rho, observable)))


def dense_correlation_tensor(state: JointState) -> CorrelationTensor:
    """T by direct trace against every Pauli string, for any joint state."""
    n = state.n_parties
    values = np.empty((3,) * n)
    for index in itertools.product(range(3), repeat=n):
        values[index] = np.real(np.einsum("ij,ji->", state.rho, pauli_string(index)))
    return CorrelationTensor(n_parties=n, values=values)


def product_correlation_tensor(state: ProductState) -> CorrelationTensor:
    """T as the outer product of the parties' Bloch vectors."""
    values = np.array(1.0)
    for q in state.parties:
        values = np.multiply.outer(values, q.bloch)
    return CorrelationTensor(n_parties=state.n_parties, values=values)


def correlation_tensor(
    state: "JointState | ProductState", fast_path: bool = True
) -> CorrelationTensor:
    """
    Correlation tensor T_{i1...iN} = tr[rho sigma_{i1} x ... x sigma_{iN}].

    Product states take the Bloch-vector outer-product path unless
    ``fast_path`` is False; everything else is traced densely.
    """
    if isinstance(state, ProductState):
        if fast_path:
            return product_correlation_tensor(state)
        state = state.joint()
    if fast_path and state.is_product and state.factors is not None:
        return product_correlation_tensor(ProductState(parties=state.factors))
    return dense_correlation_tensor(state)


def e_sep_from_tensor(tensor: CorrelationTensor, settings_list: Sequence[Setting]) -> float:
    """
    Contract T against the direction-cosine vectors of the settings.

    Raises:
        DomainError: If the number of settings differs from T.n_parties
    """
    _check_party_count(tensor.n_parties, settings_list)
    value = tensor.values
    for s in settings_list:
        value = np.tensordot(value, setting_to_unit_vector(s), axes=([0], [0]))
    return float(value)


def scalar_product_on_grid(
    tensor: CorrelationTensor,
    grids: Sequence[SphereGrid],
    node_budget: Optional[int] = None,
) -> float:
    """
    Quadrature value of (E_Sep, E_Sep) with E_Sep evaluated from T at every node.

    E_Sep is contracted and squared at each node before weighting; the
    orthogonality relation is not used.

    Raises:
        DomainError: If the number of grids differs from T.n_parties
        ResourceBudgetError: If the product grid exceeds the node budget
    """
    if len(grids) != tensor.n_parties:
        raise DomainError(f"Expected {tensor.n_parties} grids, got {len(grids)}")
    check_budget(grids, node_budget)
    last_vectors = grids[-1].unit_vectors
    last_weights = np.array(grids[-1].weights)

    def terms():
        for indices, prefix_weight in iter_prefix_nodes(grids):
            partial = tensor.values
            for g, i in zip(grids[:-1], indices):
                partial = np.tensordot(g.unit_vectors[i], partial, axes=([0], [0]))
            row = last_vectors @ partial
            yield from (prefix_weight * last_weights * row * row).tolist()

    return math.fsum(terms())


def sum_of_squares(tensor: CorrelationTensor) -> float:
    """Sigma T^2 in C order, exactly rounded."""
    return math.fsum(float(v) * float(v) for v in tensor.values.ravel())


def separable_maximum(n_parties: int) -> float:
    """(E_Sep, E_Sep)_max = (4pi/3)^N."""
    if n_parties < 1:
        raise DomainError(f"N must be >= 1, got {n_parties}")
    return SINGLE_SPHERE_SEPARABLE ** n_parties


def scalar_product_exact(tensor: CorrelationTensor) -> float:
    """Closed-form (E_Sep, E_Sep) = (4pi/3)^N Sigma T^2."""
    return separable_maximum(tensor.n_parties) * sum_of_squares(tensor)


def implied_tensor_norm(scalar_product: float, n_parties: int) -> float:
    """
    Sigma T^2 a correlation function would need to reach ``scalar_product``.

    Values above 1 lie outside the product of Bloch balls.
    """
    return scalar_product / separable_maximum(n_parties)


def bloch_norm_product(state: ProductState) -> float:
    """Product over parties of |b_j|^2; equals 1 iff every party is pure."""
    return math.prod(q.bloch_norm_squared for q in state.parties)


def separability_check(
    tensor: CorrelationTensor, tol: Optional[float] = None
) -> SeparabilityVerdict:
    """
    Evaluate Sigma T^2 <= 1.

    A violated verdict certifies the state is not a pure product state.
    Values are reported without classifying states beyond that.
    """
    if tol is None:
        tol = settings.separability_tolerance
    value = sum_of_squares(tensor)
    satisfied = value <= 1.0 + tol
    logger.debug(f"Separability check N={tensor.n_parties}: sum T^2={value:.17g} ({'ok' if satisfied else 'violated'})")
    return SeparabilityVerdict(satisfied=satisfied, value=value, tolerance=tol)


def ghz_tensor_norm(n_parties: int) -> float:
    """
    Closed-form Sigma T^2 for the N-qubit GHZ state.

    The 2^(N-1) X/Y strings with an even number of Y each contribute 1; the
    all-Z string contributes 1 only for even N since <Z...Z> vanishes for odd N.
    """
    if n_parties < 1:
        raise DomainError(f"N must be >= 1, got {n_parties}")
    return 2.0 ** (n_parties - 1) + (1.0 if n_parties % 2 == 0 else 0.0)


def ghz_critical_visibility(n_parties: int) -> float:
    """Visibility above which the noisy GHZ state violates Sigma T^2 <= 1."""
    return 1.0 / math.sqrt(ghz_tensor_norm(n_parties))
