"""
State constructors.

Pure and mixed qubits, product states, and the entangled GHZ/Bell states
used as witness scenarios. Random constructors take a numpy Generator so
every randomized suite is reproducible from a seed.
"""

import math
from typing import Optional, Sequence

import numpy as np
from loguru import logger

from ..config import settings
from ..errors import DomainError
from ..models.core import JointState, ProductState, QubitState
from ..models.linalg import IDENTITY, PAULI, ket_to_density


def pure_qubit(theta: float, phi: float = 0.0) -> QubitState:
    """Pure qubit cos(t/2)|0> + e^{ip} sin(t/2)|1>, Bloch vector n(t, p)."""
    ket = [math.cos(theta / 2.0), complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2.0)]
    return QubitState(rho=ket_to_density(ket))


def qubit_from_ket(ket: Sequence[complex]) -> QubitState:
    return QubitState(rho=ket_to_density(ket))


def mixed_qubit(bloch: Sequence[float]) -> QubitState:
    """
    Qubit (I + b . sigma) / 2 for a Bloch vector inside the unit ball.

    Raises:
        DomainError: If |b| > 1
    """
    b = np.asarray(bloch, dtype=float)
    if b.shape != (3,):
        raise DomainError(f"Bloch vector must have 3 components, got shape {b.shape}")
    if np.dot(b, b) > 1.0 + 1e-12:
        raise DomainError(f"Bloch vector {b.tolist()} lies outside the unit ball")
    rho = (IDENTITY + sum(component * sigma for component, sigma in zip(b, PAULI))) / 2.0
    return QubitState(rho=rho)


def maximally_mixed_qubit() -> QubitState:
    return QubitState(rho=IDENTITY / 2.0)


def depolarize(q: QubitState, p: float) -> QubitState:
    """(1 - p) rho + p I/2; shrinks the Bloch vector by (1 - p)."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"Depolarizing probability must lie in [0, 1], got {p}")
    return QubitState(rho=(1.0 - p) * q.rho + p * IDENTITY / 2.0)


def product_state(parties: Sequence[QubitState]) -> ProductState:
    return ProductState(parties=tuple(parties))


def ghz_state(n_parties: int) -> JointState:
    """(|0...0> + |1...1>) / sqrt(2) on N qubits."""
    if n_parties < 1:
        raise DomainError(f"GHZ state needs N >= 1, got {n_parties}")
    ket = np.zeros(2 ** n_parties, dtype=complex)
    ket[0] = ket[-1] = 1.0
    return JointState(n_parties=n_parties, rho=ket_to_density(ket))


def noisy_ghz_state(n_parties: int, visibility: float) -> JointState:
    """v |GHZ><GHZ| + (1 - v) I / 2^N."""
    if not 0.0 <= visibility <= 1.0:
        raise DomainError(f"Visibility must lie in [0, 1], got {visibility}")
    dim = 2 ** n_parties
    rho = visibility * ghz_state(n_parties).rho + (1.0 - visibility) * np.eye(dim) / dim
    return JointState(n_parties=n_parties, rho=rho)


def bell_state() -> JointState:
    """(|00> + |11>) / sqrt(2)."""
    return ghz_state(2)


def joint_from_matrix(matrix: np.ndarray) -> JointState:
    """Wrap an explicit 2^N x 2^N density matrix as a general joint state."""
    dim = np.asarray(matrix).shape[0]
    n_parties = int(round(math.log2(dim))) if dim > 0 else 0
    if n_parties < 1 or 2 ** n_parties != dim:
        raise DomainError(f"Matrix dimension {dim} is not a power of two")
    return JointState(n_parties=n_parties, rho=matrix)


def random_pure_qubit(rng: np.random.Generator) -> QubitState:
    """Haar-random pure qubit."""
    ket = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    return qubit_from_ket(ket)


def random_bloch_vector(
    rng: np.random.Generator, min_norm: float = 0.0, max_norm: float = 1.0
) -> np.ndarray:
    """Uniform direction with radius drawn uniformly by volume in [min_norm, max_norm]."""
    direction = rng.standard_normal(3)
    direction /= np.linalg.norm(direction)
    radius = rng.uniform(min_norm ** 3, max_norm ** 3) ** (1.0 / 3.0)
    return radius * direction


def random_mixed_qubit(rng: np.random.Generator, max_norm: float = 1.0) -> QubitState:
    return mixed_qubit(random_bloch_vector(rng, max_norm=max_norm))


def random_product_state(
    n_parties: int, rng: np.random.Generator, pure: bool = True
) -> ProductState:
    """Random product state; pure factors are Haar-random, mixed ones uniform in the ball."""
    if n_parties < 1:
        raise DomainError(f"Product state needs N >= 1, got {n_parties}")
    factory = random_pure_qubit if pure else random_mixed_qubit
    return product_state([factory(rng) for _ in range(n_parties)])


def default_rng(seed: Optional[int] = None) -> np.random.Generator:
    seed = settings.seed if seed is None else seed
    logger.debug(f"Seeding random generator with {seed}")
    return np.random.default_rng(seed)
