"""Multi-start conjugate-gradient search for payoff-maximising control pulses."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .calib import find_fair_coupling
from .cg import minimize_cg
from .chain import (
    ChainConfig,
    ControlSequence,
    compose,
    first_spin_projector,
    slice_propagators,
    slice_propagators_with_derivatives,
)
from .game import GameSpec
from .qla import dagger
from .strategy import MixedStrategy, pauli_control_strategy

ALICE, BOB = "alice", "bob"
PLAYERS = (ALICE, BOB)
GTOL = 1e-8
MAXITER = 1000


@dataclass(frozen=True, eq=False)
class OptimizationProblem:
    """One player's pulses against a fixed mixed strategy of the opponent.

    Alice optimises both her moves (``2 N`` amplitudes) against Bob's
    strategy; Bob optimises his single move (``N`` amplitudes) against
    Alice, who draws each of her two moves independently from it.
    """

    spec: GameSpec
    player: str
    pulses_per_move: int
    opponent: MixedStrategy | None = None

    def __post_init__(self):
        if self.player not in PLAYERS:
            raise ValueError(f"player must be 'alice' or 'bob', got {self.player!r}")
        if self.pulses_per_move < 1:
            raise ValueError("need at least one pulse per move")
        if self.opponent is None:
            object.__setattr__(self, "opponent", pauli_control_strategy(self.spec.chain.T))

    @property
    def chain(self) -> ChainConfig:
        return self.spec.chain

    @property
    def num_variables(self) -> int:
        n = self.pulses_per_move
        return 2 * n if self.player == ALICE else n

    @property
    def init_scale(self) -> float:
        # one full rotation per pulse: |h| dt <= pi
        return np.pi * self.pulses_per_move / self.chain.T

    def sequences(self, amplitudes) -> list[ControlSequence]:
        x = self._check(amplitudes)
        n = self.pulses_per_move
        return [ControlSequence.alternating(x[k * n : (k + 1) * n]) for k in range(len(x) // n)]

    def _check(self, amplitudes) -> np.ndarray:
        x = np.asarray(amplitudes, dtype=float)
        if x.shape != (self.num_variables,):
            raise ValueError(f"expected {self.num_variables} amplitudes, got shape {x.shape}")
        return x

    @cached_property
    def _opponent_unitaries(self) -> list[np.ndarray]:
        return [self.spec.unitary(el) for el in self.opponent.elements]

    @cached_property
    def _rho0(self) -> np.ndarray:
        psi = self.spec.initial_state
        return np.outer(psi, psi.conj())

    @cached_property
    def _target(self) -> np.ndarray:
        # projector on the outcome the player wins with, first spin
        return first_spin_projector(1 if self.player == ALICE else 0, self.chain.n)

    @cached_property
    def _bob_io(self) -> tuple[np.ndarray, np.ndarray]:
        w = self.opponent.weights
        us = self._opponent_unitaries
        rho = sum(wi * u @ self._rho0 @ dagger(u) for wi, u in zip(w, us))
        q = sum(wi * dagger(u) @ self._target @ u for wi, u in zip(w, us))
        return rho, q


def _sandwich(q, rho, slices, with_grad=True):
    """Value of ``tr(q W rho W^dagger)`` with ``W`` the slice product, and its gradient."""
    unitaries, derivatives = slices
    k = len(unitaries)
    # left[j] = U_{j-1} ... U_0, right[j] = U_{K-1} ... U_{j+1}
    left = np.empty((k + 1,) + rho.shape, dtype=complex)
    left[0] = np.eye(rho.shape[0])
    for j in range(k):
        left[j + 1] = unitaries[j] @ left[j]
    w = left[k]
    value = float(np.real(np.trace(q @ w @ rho @ dagger(w))))
    if not with_grad:
        return value, None
    right = np.empty((k,) + rho.shape, dtype=complex)
    right[k - 1] = np.eye(rho.shape[0])
    for j in range(k - 1, 0, -1):
        right[j - 1] = right[j] @ unitaries[j]
    x = left[:k] @ (rho @ dagger(w) @ q) @ right
    grad = 2.0 * np.real(np.einsum("kij,kji->k", derivatives, x))
    return value, grad


def objective_and_gradient(problem: OptimizationProblem, amplitudes) -> tuple[float, np.ndarray]:
    """The player's mean winning probability and its exact gradient."""
    seqs = problem.sequences(amplitudes)
    chain = problem.chain
    if problem.player == BOB:
        rho, q = problem._bob_io
        slices = slice_propagators_with_derivatives(chain, seqs[0])
        return _sandwich(q, rho, slices)

    s1 = slice_propagators_with_derivatives(chain, seqs[0])
    s2 = slice_propagators_with_derivatives(chain, seqs[1])
    u1 = compose(s1[0])
    u2 = compose(s2[0])
    w = problem.opponent.weights
    vs = problem._opponent_unitaries
    target = problem._target
    back = dagger(u2) @ target @ u2
    m = sum(wi * dagger(v) @ back @ v for wi, v in zip(w, vs))
    value, g1 = _sandwich(m, problem._rho0, s1)
    mid = u1 @ problem._rho0 @ dagger(u1)
    sigma = sum(wi * v @ mid @ dagger(v) for wi, v in zip(w, vs))
    _, g2 = _sandwich(target, sigma, s2)
    return value, np.concatenate([g1, g2])


def objective(problem: OptimizationProblem, amplitudes) -> float:
    seqs = problem.sequences(amplitudes)
    chain = problem.chain
    if problem.player == BOB:
        rho, q = problem._bob_io
        u = compose(slice_propagators(chain, seqs[0]))
        return float(np.real(np.trace(q @ u @ rho @ dagger(u))))
    u1 = compose(slice_propagators(chain, seqs[0]))
    u2 = compose(slice_propagators(chain, seqs[1]))
    psi1 = u1 @ problem.spec.initial_state
    total = 0.0
    for wi, v in zip(problem.opponent.weights, problem._opponent_unitaries):
        psi = u2 @ v @ psi1
        total += wi * float(np.real(psi.conj() @ problem._target @ psi))
    return total


def gradient(problem: OptimizationProblem, amplitudes) -> np.ndarray:
    return objective_and_gradient(problem, amplitudes)[1]


@dataclass
class OptimizationResult:
    best_amplitudes: np.ndarray
    best_payoff: float
    restarts_run: int
    iterations: int
    gradient_norm: float
    seed: int
    best_start: int = 0
    converged: bool = False
    start_payoffs: list[float] = field(default_factory=list)


def _negated(problem):
    def fun(x):
        f, g = objective_and_gradient(problem, x)
        return -f, -g

    return fun


def optimize_from(problem: OptimizationProblem, x0, gtol: float = GTOL, maxiter: int = MAXITER):
    """Single conjugate-gradient ascent from ``x0``; returns the raw CG result."""
    return minimize_cg(_negated(problem), problem._check(x0), gtol=gtol, maxiter=maxiter)


def optimize(
    problem: OptimizationProblem,
    restarts: int = 50,
    seed: int = 0,
    gtol: float = GTOL,
    maxiter: int = MAXITER,
) -> OptimizationResult:
    """Best of ``restarts`` CG ascents; start ``r`` is seeded with ``seed + r``."""
    if restarts < 1:
        raise ValueError("need at least one restart")
    best = None
    payoffs = []
    for r in range(restarts):
        rng = np.random.default_rng(seed + r)
        x0 = rng.uniform(-problem.init_scale, problem.init_scale, problem.num_variables)
        res = optimize_from(problem, x0, gtol, maxiter)
        payoffs.append(-res.fun)
        if best is None or -res.fun > -best[1].fun:
            best = (r, res)
    r, res = best
    return OptimizationResult(
        best_amplitudes=res.x,
        best_payoff=-res.fun,
        restarts_run=restarts,
        iterations=res.nit,
        gradient_norm=res.grad_norm,
        seed=seed,
        best_start=r,
        converged=res.converged,
        start_payoffs=payoffs,
    )


def chain_sweep(
    lengths,
    pulses_per_move: int = 3,
    restarts: int = 50,
    seed: int = 0,
    J: float | None = None,
    T: float = 1.0,
    corrected: bool = False,
) -> list[tuple[int, OptimizationResult]]:
    """Bob's best payoff per chain length, at the two-spin fair coupling by default."""
    lengths = list(lengths)
    for n in lengths:
        if not 2 <= n <= 7:
            raise ValueError("chain sweep lengths must lie in 2..7")
    if J is None:
        J = find_fair_coupling(2, T, corrected=corrected)
    alice = pauli_control_strategy(T, corrected)
    rows = []
    for n in lengths:
        problem = OptimizationProblem(GameSpec(ChainConfig(n, J, T)), BOB, pulses_per_move, alice)
        rows.append((n, optimize(problem, restarts, seed)))
    return rows
