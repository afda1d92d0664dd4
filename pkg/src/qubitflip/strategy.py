"""Mixed strategies, the SU(2) Euler form and unitary 1-design checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .chain import ControlSequence
from .qla import IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z, is_unitary, max_abs

WEIGHT_TOL = 1e-15
ELEMENT_UNITARY_TOL = 1e-12

# Published z-y-z control angles (xi_1, xi_2, xi_3) for 1, i sx, i sy, i sz.
# The second row actually composes to i sy: sy anticommutes with sz, so the
# two outer z rotations cancel. The published fair coupling was computed with
# these rows, so they stay the default.
PAULI_CONTROL_PARAMS = (
    (0.0, 0.0, 0.0),
    (np.pi / 4, -np.pi / 2, np.pi / 4),
    (0.0, -np.pi / 2, 0.0),
    (-np.pi / 4, 0.0, -np.pi / 4),
)
# Same table with xi_3 of the second row negated; realises i sx exactly.
PAULI_CONTROL_PARAMS_CORRECTED = (
    PAULI_CONTROL_PARAMS[0],
    (np.pi / 4, -np.pi / 2, -np.pi / 4),
    PAULI_CONTROL_PARAMS[2],
    PAULI_CONTROL_PARAMS[3],
)
PAULI_LABELS = ("1", "i*sx", "i*sy", "i*sz")


class UnsupportedDesignOrder(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MixedStrategy:
    """A finite set of moves (unitaries or control sequences) with weights."""

    elements: tuple
    weights: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        elements = tuple(self.elements)
        weights = np.asarray(self.weights, dtype=float).copy()
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "weights", weights)
        if not elements:
            raise ValueError("a mixed strategy needs at least one element")
        if weights.shape != (len(elements),):
            raise ValueError("one weight per element is required")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > WEIGHT_TOL * len(elements):
            raise ValueError("weights must be a probability vector")
        for el in elements:
            if isinstance(el, ControlSequence):
                continue
            if not is_unitary(np.asarray(el), ELEMENT_UNITARY_TOL):
                raise ValueError("strategy element is not unitary")
        if self.labels is not None and len(self.labels) != len(elements):
            raise ValueError("one label per element is required")

    @classmethod
    def uniform(cls, elements: Sequence, labels=None) -> "MixedStrategy":
        k = len(elements)
        return cls(tuple(elements), np.full(k, 1.0 / k), labels)

    def __len__(self) -> int:
        return len(self.elements)


def pauli_strategy() -> MixedStrategy:
    """Uniform choice among 1, i sx, i sy, i sz."""
    return MixedStrategy.uniform(
        [IDENTITY.copy(), 1j * SIGMA_X, 1j * SIGMA_Y, 1j * SIGMA_Z], PAULI_LABELS
    )


def pauli_control_params(index: int, corrected: bool = False) -> tuple[float, float, float]:
    if not 0 <= index < 4:
        raise ValueError("Pauli strategy index must be in 0..3")
    table = PAULI_CONTROL_PARAMS_CORRECTED if corrected else PAULI_CONTROL_PARAMS
    return table[index]


def params_to_sequence(xi: Sequence[float], T: float = 1.0) -> ControlSequence:
    """z, y, z pulses of height ``3 xi_k / T``, each lasting ``T / 3``."""
    if len(xi) != 3:
        raise ValueError("exactly three control angles are required")
    return ControlSequence.alternating([3.0 * x / T for x in xi], start="z")


def pauli_control_strategy(T: float = 1.0, corrected: bool = False) -> MixedStrategy:
    """The Pauli strategy played through control pulses of total length ``T``.

    With the published angles (default) the four moves are 1, i sy, i sy and
    i sz when there is no drift; ``corrected=True`` gives 1, i sx, i sy, i sz.
    """
    return MixedStrategy.uniform(
        [params_to_sequence(pauli_control_params(i, corrected), T) for i in range(4)],
        PAULI_LABELS,
    )


class EulerAngles(NamedTuple):
    phi: float
    psi: float
    theta: float

    def to_control_params(self) -> tuple[float, float, float]:
        return (
            -(self.phi - self.psi) / 2,
            -self.theta,
            -(self.phi + self.psi) / 2,
        )


def euler_reconstruct(angles: EulerAngles) -> np.ndarray:
    phi, psi, theta = angles
    return np.array(
        [
            [np.exp(1j * phi) * np.cos(theta), np.exp(1j * psi) * np.sin(theta)],
            [-np.exp(-1j * psi) * np.sin(theta), np.exp(-1j * phi) * np.cos(theta)],
        ]
    )


def euler_decompose(u: np.ndarray, tol: float = 1e-10) -> EulerAngles:
    """Angles with ``euler_reconstruct(angles) == u``; theta in [0, pi/2].

    When one of the two amplitudes vanishes only one phase is defined. The
    other is set to zero (``psi`` when theta = 0, ``phi`` when theta = pi/2).
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or not is_unitary(u, tol) or abs(np.linalg.det(u) - 1) > tol:
        raise ValueError("matrix is not special unitary")
    a, b = u[0, 0], u[0, 1]
    theta = float(np.arctan2(abs(b), abs(a)))
    phi = float(np.angle(a)) % (2 * np.pi) if abs(a) > 1e-15 else 0.0
    psi = float(np.angle(b)) % (2 * np.pi) if abs(b) > 1e-15 else 0.0
    return EulerAngles(phi, psi, theta)


def haar_su2(rng: np.random.Generator) -> np.ndarray:
    """One Haar-random SU(2) matrix from uniform phases and theta = arcsin(sqrt(p))."""
    phi, psi = rng.uniform(0.0, 2 * np.pi, size=2)
    p = rng.uniform(0.0, 1.0)
    return euler_reconstruct(EulerAngles(phi, psi, np.arcsin(np.sqrt(p))))


def haar_su2_batch(rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` Haar SU(2) draws as a ``(size, 2, 2)`` array.

    Consumes the generator in the same order as ``size`` calls of
    :func:`haar_su2` would, so both give identical samples for a seed.
    """
    draws = rng.uniform(0.0, 1.0, size=(size, 3))
    phi = 2 * np.pi * draws[:, 0]
    psi = 2 * np.pi * draws[:, 1]
    theta = np.arcsin(np.sqrt(draws[:, 2]))
    c, s = np.cos(theta), np.sin(theta)
    out = np.empty((size, 2, 2), dtype=complex)
    out[:, 0, 0] = np.exp(1j * phi) * c
    out[:, 0, 1] = np.exp(1j * psi) * s
    out[:, 1, 0] = -np.exp(-1j * psi) * s
    out[:, 1, 1] = np.exp(-1j * phi) * c
    return out


def haar_first_moment(d: int = 2) -> np.ndarray:
    """Haar average of ``U (x) conj(U)`` over U(d): entries delta_ik delta_jl / d."""
    vec = np.eye(d, dtype=complex).reshape(d * d)
    return np.outer(vec, vec) / d


def first_moment(unitaries, weights=None) -> np.ndarray:
    """Weighted average of ``U (x) conj(U)`` over a stack of unitaries."""
    us = np.asarray(unitaries, dtype=complex)
    if weights is None:
        weights = np.full(len(us), 1.0 / len(us))
    d = us.shape[-1]
    tensor = np.einsum("s,sij,skl->ikjl", weights, us, us.conj())
    return tensor.reshape(d * d, d * d)


def is_unitary_design(strategy: MixedStrategy, t: int = 1, tol: float = 1e-12) -> tuple[bool, float]:
    """Check the first-moment condition; returns ``(passes, max deviation)``."""
    if t != 1:
        raise UnsupportedDesignOrder(f"only t = 1 is supported, got t = {t}")
    us = np.array(strategy.elements, dtype=complex)
    if us.ndim != 3 or us.shape[1:] != (2, 2):
        raise ValueError("design check needs 2x2 unitary elements")
    deviation = max_abs(first_moment(us, strategy.weights) - haar_first_moment(2))
    return deviation < tol, deviation
