"""Small dense complex linear algebra used by every other module.

All operators are plain ``numpy.ndarray`` objects of complex dtype. Helpers
here validate the structural guarantees (Hermiticity, unit norm, matching
dimensions) instead of wrapping arrays in dedicated classes, so results
interoperate directly with numpy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput

MAX_DIM = 16

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def as_operator(matrix: np.ndarray) -> np.ndarray:
    """Validate a square, finite complex matrix and return it as complex ndarray."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInput(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise InvalidInput("matrix has non-finite entries")
    return m


def require_hermitian(matrix: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    """Validate Hermiticity relative to the largest entry magnitude."""
    m = as_operator(matrix)
    scale = max(np.abs(m).max(), 1.0)
    dev = np.abs(m - m.conj().T).max()
    if dev > rtol * scale:
        raise InvalidInput(f"matrix is not Hermitian (deviation {dev:.3e})")
    return m


def as_state(vector: np.ndarray, dim: int | None = None) -> np.ndarray:
    """Validate a finite complex state vector, optionally of fixed dimension."""
    v = np.asarray(vector, dtype=complex)
    if v.ndim != 1:
        raise InvalidInput(f"expected a vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise InvalidInput(f"expected dimension {dim}, got {v.shape[0]}")
    if not np.all(np.isfinite(v.view(float))):
        raise InvalidInput("state vector has non-finite entries")
    return v


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (real, ascending) and matching orthonormal column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eigh(matrix: np.ndarray) -> EigenDecomposition:
    """Hermitian eigendecomposition for small dense matrices (dim <= 16).

    Eigenvalues are sorted ascending. For degenerate subspaces the basis choice
    is unspecified; downstream code must use projectors, never individual
    degenerate eigenvectors.
    """
    m = require_hermitian(matrix)
    if m.shape[0] > MAX_DIM:
        raise InvalidInput(f"dimension {m.shape[0]} exceeds supported maximum {MAX_DIM}")
    w, v = np.linalg.eigh(m)
    return EigenDecomposition(eigenvalues=w, eigenvectors=v)


def propagator(matrix: np.ndarray, dt_us: float) -> np.ndarray:
    """Exact unitary exp(-i * H * dt) of a Hermitian H, computed by eigendecomposition.

    ``dt_us`` is in microseconds and may be negative (inverse evolution);
    Hamiltonian entries are angular frequencies in rad/us.
    """
    if not np.isfinite(dt_us):
        raise InvalidInput("dt must be finite")
    dec = eigh(matrix)
    phases = np.exp(-1j * dec.eigenvalues * dt_us)
    v = dec.eigenvectors
    return (v * phases) @ v.conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product of two matrices; dimensions multiply."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def expectation(state: np.ndarray, operator: np.ndarray) -> float:
    """Real expectation value <psi|M|psi> of a Hermitian operator.

    The imaginary residue must be negligible (<= 1e-12 relative to the
    operator scale); a larger residue indicates a non-Hermitian operator.
    """
    psi = as_state(state)
    m = as_operator(operator)
    if m.shape[0] != psi.shape[0]:
        raise InvalidInput(f"dimension mismatch: state {psi.shape[0]}, operator {m.shape[0]}")
    val = complex(psi.conj() @ (m @ psi))
    scale = max(np.abs(m).max(), 1.0)
    if abs(val.imag) > 1e-12 * scale:
        raise InvalidInput(f"expectation has imaginary residue {val.imag:.3e}")
    return val.real
