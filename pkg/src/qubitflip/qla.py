"""Dense complex linear algebra used throughout the package.

Everything here works on plain ``numpy`` arrays of dtype ``complex128``.
Dimensions are small (at most 2**7), so no sparse storage is used.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-10

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

_PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


class NonHermitianError(ValueError):
    """Raised when a generator handed to :func:`expm_hermitian` is not Hermitian."""


def pauli(axis: str) -> np.ndarray:
    """Return a fresh copy of the Pauli matrix for ``axis`` ('x', 'y' or 'z')."""
    try:
        return _PAULI[axis].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}") from None


def kron(*mats: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    if not mats:
        raise ValueError("kron needs at least one matrix")
    return reduce(np.kron, mats)


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose; acts on the last two axes of a stack."""
    return np.swapaxes(a, -1, -2).conj()


def max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def is_hermitian(h: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    h = np.asarray(h)
    return h.ndim >= 2 and h.shape[-1] == h.shape[-2] and max_abs(h - dagger(h)) < tol


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return max_abs(dagger(u) @ u - np.eye(u.shape[0])) < tol


def num_qubits(dim: int) -> int:
    """Number of qubits for a power-of-two dimension; raises otherwise."""
    if dim < 2 or dim & (dim - 1):
        raise ValueError(f"dimension {dim} is not a power of two >= 2")
    return dim.bit_length() - 1


def basis_state(dim: int, index: int = 0) -> np.ndarray:
    psi = np.zeros(dim, dtype=complex)
    psi[index] = 1.0
    return psi


def eigh_hermitian(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition ``h = V diag(w) V^dagger`` with a Hermiticity check.

    A stack of matrices (shape ``(..., d, d)``) is decomposed in one call.
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h):
        raise NonHermitianError("Hamiltonian is not Hermitian within tolerance")
    return np.linalg.eigh(h)


def expm_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    """Return ``exp(-i t h)`` for Hermitian ``h`` via its eigen-decomposition."""
    w, v = eigh_hermitian(h)
    return (v * np.exp(-1j * t * w)[..., None, :]) @ dagger(v)


def expm_hermitian_frechet(
    h: np.ndarray, t: float, direction: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Return ``U = exp(-i t h)`` and its derivative along ``direction``.

    The derivative is ``d/ds exp(-i t (h + s E))`` at ``s = 0``. In the
    eigenbasis of ``h`` it is the Hadamard product of ``-i t E`` with the
    divided differences of the exponential::

        L[j, k] = (e_j - e_k) / (a_j - a_k),   a = -i t w,   e = exp(a)

    with ``L[j, j] = e_j`` on (near-)degenerate pairs. ``h`` and
    ``direction`` may be stacks of matrices with matching leading shape.
    """
    w, v = eigh_hermitian(h)
    a = -1j * t * w
    e = np.exp(a)
    da = a[..., :, None] - a[..., None, :]
    de = e[..., :, None] - e[..., None, :]
    degenerate = np.abs(da) < 1e-12
    # first-order expansion on the degenerate set keeps L smooth
    mean_e = 0.5 * (e[..., :, None] + e[..., None, :])
    divided = np.where(degenerate, mean_e, de / np.where(degenerate, 1.0, da))
    vh = dagger(v)
    u = (v * e[..., None, :]) @ vh
    du = v @ (((vh @ direction @ v) * (-1j * t)) * divided) @ vh
    return u, du


def partial_trace_keep_first(rho: np.ndarray) -> np.ndarray:
    """Reduced 2x2 density matrix of the first qubit of a 2**n system."""
    rho = np.asarray(rho)
    dim = rho.shape[0]
    if rho.ndim != 2 or rho.shape[1] != dim:
        raise ValueError("density matrix must be square")
    num_qubits(dim)
    rest = dim // 2
    return np.einsum("ikjk->ij", rho.reshape(2, rest, 2, rest))


def first_qubit_probability(psi: np.ndarray, outcome: int) -> float:
    """Probability of measuring the first qubit of a pure state in ``outcome``."""
    psi = np.asarray(psi)
    half = psi.shape[-1] // 2
    block = psi[..., outcome * half : (outcome + 1) * half]
    return np.sum(np.abs(block) ** 2, axis=-1)
