"""Fairness calibration of the coupling J under the Pauli control strategy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainConfig, evolve_move
from .qla import basis_state, dagger, partial_trace_keep_first
from .strategy import pauli_control_strategy

INDEPENDENT = "independent"
CORRELATED = "correlated"
CONVENTIONS = (INDEPENDENT, CORRELATED)

COARSE_START = 0.1
COARSE_STEP = 0.05
SEARCH_LIMIT = 50.0


class NoFairCouplingError(ValueError):
    """No sign change of Bob's payoff minus 1/2 was found."""


@dataclass(frozen=True)
class PayoffCurve:
    J: np.ndarray
    p_bob: np.ndarray

    def __post_init__(self):
        if len(self.J) != len(self.p_bob):
            raise ValueError("curve arrays differ in length")
        if np.any(np.diff(self.J) <= 0):
            raise ValueError("couplings must be strictly increasing")

    def __len__(self) -> int:
        return len(self.J)

    def sign_changes(self) -> np.ndarray:
        """Indices i such that p_bob - 1/2 changes sign between i and i + 1."""
        s = np.sign(self.p_bob - 0.5)
        return np.nonzero(s[:-1] * s[1:] < 0)[0]


def _pauli_move_unitaries(config: ChainConfig, corrected: bool) -> list[np.ndarray]:
    strat = pauli_control_strategy(config.T, corrected)
    return [evolve_move(config, seq) for seq in strat.elements]


def bob_payoff_at(
    J: float,
    n: int = 2,
    T: float = 1.0,
    convention: str = INDEPENDENT,
    corrected: bool = False,
) -> float:
    """Bob's mean payoff when all three moves are Pauli control sequences.

    ``independent`` averages the 64 joint choices; ``correlated`` makes
    Alice repeat her first choice (16 joint choices). ``corrected`` selects
    the control table whose second row really realises i sx.
    """
    if J < 0:
        raise ValueError("coupling must be non-negative")
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown averaging convention {convention!r}")
    config = ChainConfig(n, float(J), T)
    us = _pauli_move_unitaries(config, corrected)
    psi0 = basis_state(config.dim)
    rho0 = np.outer(psi0, psi0.conj())

    def average(rho):
        return sum(u @ rho @ dagger(u) for u in us) / len(us)

    if convention == INDEPENDENT:
        rho = average(average(average(rho0)))
    else:
        rho = sum(ua @ average(ua @ rho0 @ dagger(ua)) @ dagger(ua) for ua in us) / len(us)
    return float(np.real(partial_trace_keep_first(rho)[0, 0]))


def scan(
    J_min: float,
    J_max: float,
    steps: int,
    n: int = 2,
    T: float = 1.0,
    scale: str = "linear",
    convention: str = INDEPENDENT,
    corrected: bool = False,
) -> PayoffCurve:
    if not J_min < J_max:
        raise ValueError("scan range must satisfy J_min < J_max")
    if steps < 2:
        raise ValueError("scan needs at least two grid points")
    if scale == "linear":
        grid = np.linspace(J_min, J_max, steps)
    elif scale == "log":
        if J_min <= 0:
            raise ValueError("logarithmic scan needs J_min > 0")
        grid = np.geomspace(J_min, J_max, steps)
    else:
        raise ValueError(f"unknown grid scale {scale!r}")
    values = np.array([bob_payoff_at(J, n, T, convention, corrected) for J in grid])
    return PayoffCurve(grid, values)


def bisect_root(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Shrink a sign-change bracket of ``f`` to width below ``tol``."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0:
        return lo, lo
    if f_hi == 0:
        return hi, hi
    if f_lo * f_hi > 0:
        raise NoFairCouplingError(f"no sign change on [{lo}, {hi}]")
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0:
            return mid, mid
        if f_lo * f_mid < 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return lo, hi


def fair_coupling_bracket(
    n: int = 2,
    T: float = 1.0,
    tol: float = 1e-6,
    J_lower: float | None = None,
    J_upper: float | None = None,
    convention: str = INDEPENDENT,
    search_limit: float | None = None,
    corrected: bool = False,
) -> tuple[float, float]:
    """Bracket of width < ``tol`` around the smallest positive fair coupling.

    Without an explicit bracket, steps of 0.05 from J = 0.1 upwards locate
    the first sign change, up to ``search_limit`` (default 50 / T).
    """

    def excess(J):
        return bob_payoff_at(J, n, T, convention, corrected) - 0.5

    if J_lower is not None and J_upper is not None:
        return bisect_root(excess, J_lower, J_upper, tol)

    limit = SEARCH_LIMIT / T if search_limit is None else search_limit
    lo = COARSE_START
    f_lo = excess(lo)
    k = 1
    while True:
        hi = COARSE_START + k * COARSE_STEP
        if hi > limit:
            raise NoFairCouplingError(
                f"Bob's mean payoff never crosses 1/2 for J in [{COARSE_START}, {limit:g}] (n={n}, T={T})"
            )
        f_hi = excess(hi)
        if f_lo == 0:
            return lo, lo
        if f_lo * f_hi <= 0:
            return bisect_root(excess, lo, hi, tol)
        lo, f_lo = hi, f_hi
        k += 1


def find_fair_coupling(n: int = 2, T: float = 1.0, tol: float = 1e-6, **kwargs) -> float:
    lo, hi = fair_coupling_bracket(n, T, tol, **kwargs)
    return 0.5 * (lo + hi)
