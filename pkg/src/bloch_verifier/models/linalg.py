"""
Dense linear-algebra helpers for qubit systems.

Pauli matrices, tensor products and the outer-product constructor for pure
states. Everything here works on plain numpy arrays.
"""

from functools import reduce
from typing import Iterable, Optional, Sequence

import numpy as np
import numpy.typing as npt

from ..errors import DomainError

ComplexMatrix = npt.NDArray[np.complex128]
RealVector = npt.NDArray[np.float64]

IDENTITY = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# x, y, z order matches the direction-cosine components
PAULI = (PAULI_X, PAULI_Y, PAULI_Z)
AXIS_LABELS = ("x", "y", "z")


def as_complex_matrix(entries: Sequence, dim: Optional[int] = None) -> ComplexMatrix:
    """
    Build a square complex matrix from nested rows or flat row-major entries.

    Args:
        entries: Nested ``dim x dim`` rows, or a flat sequence of ``dim**2`` values
        dim: Required when ``entries`` is flat

    Returns:
        A new ``(dim, dim)`` complex array

    Raises:
        DomainError: If the entries do not describe a square matrix
    """
    array = np.array(entries, dtype=complex)
    if array.ndim == 1:
        if dim is None:
            dim = int(round(np.sqrt(array.size)))
        if dim < 1 or array.size != dim * dim:
            raise DomainError(f"Expected {dim}x{dim}={dim * dim} entries, got {array.size}")
        return array.reshape(dim, dim)
    if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] < 1:
        raise DomainError(f"Matrix must be square, got shape {array.shape}")
    if dim is not None and array.shape[0] != dim:
        raise DomainError(f"Expected dimension {dim}, got {array.shape[0]}")
    return array


def ket_to_density(ket: Sequence[complex]) -> ComplexMatrix:
    """Return |psi><psi| for the normalized version of ``ket``."""
    psi = np.array(ket, dtype=complex).reshape(-1)
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise DomainError("Cannot build a density matrix from the zero vector")
    psi = psi / norm
    return np.outer(psi, psi.conj())


def kron_all(matrices: Iterable[np.ndarray]) -> np.ndarray:
    """Tensor product of the matrices in order."""
    return reduce(np.kron, matrices)


def spin_observable(direction: Sequence[float]) -> ComplexMatrix:
    """The observable n . sigma along a unit direction n."""
    nx, ny, nz = direction
    return nx * PAULI_X + ny * PAULI_Y + nz * PAULI_Z


def pauli_string(indices: Sequence[int]) -> ComplexMatrix:
    """sigma_{i1} x sigma_{i2} x ... for axis indices in {0, 1, 2}."""
    return kron_all(PAULI[i] for i in indices)


def multi_index_label(indices: Sequence[int]) -> str:
    """Human-readable label such as ``'xz'`` for a tensor multi-index."""
    return "".join(AXIS_LABELS[i] for i in indices)
