"""Heisenberg spin chain with piecewise-constant controls on the first spin."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .qla import (
    IDENTITY,
    expm_hermitian,
    expm_hermitian_frechet,
    kron,
    pauli,
)

MAX_CHAIN = 7
AXES = ("y", "z")


@dataclass(frozen=True)
class ChainConfig:
    """Chain length ``n``, coupling ``J`` and move duration ``T`` (hbar = 1)."""

    n: int = 2
    J: float = 0.0
    T: float = 1.0

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or not 1 <= self.n <= MAX_CHAIN:
            raise ValueError(f"chain length must be an integer in [1, {MAX_CHAIN}], got {self.n!r}")
        if not np.isfinite(self.J):
            raise ValueError("coupling J must be finite")
        if not (np.isfinite(self.T) and self.T > 0):
            raise ValueError(f"move duration T must be positive, got {self.T!r}")

    @property
    def dim(self) -> int:
        return 2**self.n

    def with_coupling(self, J: float) -> "ChainConfig":
        return ChainConfig(self.n, float(J), self.T)


@dataclass(frozen=True)
class ControlPulse:
    axis: str
    amplitude: float

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"control axis must be 'y' or 'z', got {self.axis!r}")
        if not np.isfinite(self.amplitude):
            raise ValueError("pulse amplitude must be finite")


@dataclass(frozen=True)
class ControlSequence:
    """Pulses of one move, each held for ``T / len(pulses)``.

    Sequences built by :meth:`alternating` switch axis every slice. Repeated
    axes are accepted so that a slice can be split into shorter pieces.
    """

    pulses: tuple[ControlPulse, ...]

    def __post_init__(self):
        object.__setattr__(self, "pulses", tuple(self.pulses))
        if not self.pulses:
            raise ValueError("a control sequence needs at least one pulse")
        for p in self.pulses:
            if not isinstance(p, ControlPulse):
                raise TypeError("pulses must be ControlPulse instances")

    @classmethod
    def alternating(cls, amplitudes: Iterable[float], start: str = "z") -> "ControlSequence":
        if start not in AXES:
            raise ValueError(f"start axis must be 'y' or 'z', got {start!r}")
        other = "y" if start == "z" else "z"
        return cls(
            tuple(
                ControlPulse(start if k % 2 == 0 else other, float(a))
                for k, a in enumerate(amplitudes)
            )
        )

    def __len__(self) -> int:
        return len(self.pulses)

    @property
    def axes(self) -> tuple[str, ...]:
        return tuple(p.axis for p in self.pulses)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([p.amplitude for p in self.pulses], dtype=float)

    @property
    def is_alternating(self) -> bool:
        return all(a != b for a, b in zip(self.axes, self.axes[1:]))

    def subdivide(self, factor: int) -> "ControlSequence":
        """Split each slice into ``factor`` equal slices with the same control."""
        if factor < 1:
            raise ValueError("subdivision factor must be >= 1")
        return ControlSequence(tuple(p for p in self.pulses for _ in range(factor)))


@lru_cache(maxsize=None)
def _site_operator(axis: str, site: int, n: int) -> np.ndarray:
    mats = [IDENTITY] * n
    mats[site] = pauli(axis)
    out = kron(*mats)
    out.setflags(write=False)
    return out


def site_operator(axis: str, site: int, n: int) -> np.ndarray:
    """Pauli ``axis`` acting on ``site`` (0-based) of an ``n``-spin chain."""
    if not 0 <= site < n:
        raise ValueError("site index out of range")
    return _site_operator(axis, site, n)


@lru_cache(maxsize=64)
def _heisenberg_bonds(n: int) -> np.ndarray:
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    for k in range(n - 1):
        for axis in "xyz":
            h += site_operator(axis, k, n) @ site_operator(axis, k + 1, n)
    h.setflags(write=False)
    return h


def drift_hamiltonian(config: ChainConfig) -> np.ndarray:
    """Open-boundary isotropic Heisenberg exchange ``J sum_k s_k . s_{k+1}``."""
    return config.J * _heisenberg_bonds(config.n)


def first_spin_projector(outcome: int, n: int) -> np.ndarray:
    """Projector on ``|outcome>`` of the first spin, identity elsewhere."""
    proj = np.zeros((2, 2), dtype=complex)
    proj[outcome, outcome] = 1.0
    return kron(proj, np.eye(2 ** (n - 1), dtype=complex))


def control_operator(config: ChainConfig, axis: str) -> np.ndarray:
    return site_operator(axis, 0, config.n)


def control_hamiltonian(config: ChainConfig, pulse: ControlPulse) -> np.ndarray:
    return pulse.amplitude * control_operator(config, pulse.axis)


def _check_move(config: ChainConfig, seq: ControlSequence):
    if not isinstance(seq, ControlSequence):
        raise TypeError(f"expected a ControlSequence, got {type(seq).__name__}")


def _slice_hamiltonians(config: ChainConfig, seq: ControlSequence) -> tuple[np.ndarray, np.ndarray]:
    _check_move(config, seq)
    ops = np.array([control_operator(config, axis) for axis in seq.axes])
    hs = drift_hamiltonian(config) + seq.amplitudes[:, None, None] * ops
    return hs, ops


def slice_propagators(config: ChainConfig, seq: ControlSequence) -> np.ndarray:
    """One unitary per time slice, stacked in application order."""
    hs, _ = _slice_hamiltonians(config, seq)
    return expm_hermitian(hs, config.T / len(seq))


def slice_propagators_with_derivatives(
    config: ChainConfig, seq: ControlSequence
) -> tuple[np.ndarray, np.ndarray]:
    """Stacks of ``U_k`` and ``dU_k / d amplitude_k``, in application order."""
    hs, ops = _slice_hamiltonians(config, seq)
    return expm_hermitian_frechet(hs, config.T / len(seq), ops)


def compose(unitaries: Sequence[np.ndarray]) -> np.ndarray:
    """Product ``U_{N-1} ... U_1 U_0`` of unitaries listed in application order."""
    total = np.eye(unitaries[0].shape[0], dtype=complex)
    for u in unitaries:
        total = u @ total
    return total


def evolve_move(config: ChainConfig, seq: ControlSequence) -> np.ndarray:
    """Unitary of one move; pulse 0 acts first."""
    return compose(slice_propagators(config, seq))
