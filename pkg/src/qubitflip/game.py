"""The penny/qubit flip game: classical table, ideal unitaries, spin-chain play."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .chain import ChainConfig, ControlSequence, evolve_move
from .qla import (
    HADAMARD,
    IDENTITY,
    SIGMA_X,
    basis_state,
    first_qubit_probability,
    is_unitary,
)
from .strategy import MixedStrategy

NOT_FLIP, FLIP = "N", "F"

# Alice's payoff; rows are Bob's move, columns Alice's (first, second) moves.
CLASSICAL_PAYOFF = {
    "N": {"NN": -1, "NF": 1, "FN": 1, "FF": -1},
    "F": {"NN": 1, "NF": -1, "FN": -1, "FF": 1},
}

Move = Union[np.ndarray, ControlSequence]


def classical_payoff(a1: str, b: str, a2: str) -> int:
    """Alice's payoff (+1 she wins, -1 Bob wins) for classical moves 'N'/'F'."""
    for m in (a1, b, a2):
        if m not in (NOT_FLIP, FLIP):
            raise ValueError(f"classical move must be 'N' or 'F', got {m!r}")
    return CLASSICAL_PAYOFF[b][a1 + a2]


@dataclass(frozen=True)
class PayoffResult:
    p_alice: float

    @property
    def p_bob(self) -> float:
        return 1.0 - self.p_alice

    @property
    def sigma_z(self) -> float:
        """Expectation of sigma_z on the measured spin."""
        return 1.0 - 2.0 * self.p_alice


@dataclass(frozen=True)
class GameSpec:
    """Game on a chain, started in |0...0> and measured on the first spin."""

    chain: ChainConfig = ChainConfig(n=1)

    @property
    def dim(self) -> int:
        return self.chain.dim

    @property
    def initial_state(self) -> np.ndarray:
        return basis_state(self.dim, 0)

    def unitary(self, move: Move) -> np.ndarray:
        """Unitary of a move given as a control sequence or an explicit matrix."""
        if isinstance(move, ControlSequence):
            return evolve_move(self.chain, move)
        u = np.asarray(move, dtype=complex)
        if u.shape != (self.dim, self.dim):
            raise ValueError(f"move has shape {u.shape}, game needs {(self.dim, self.dim)}")
        return u


def alice_wins_probability(psi: np.ndarray) -> float:
    return float(first_qubit_probability(psi, 1))


def play_unitary(u_a1, u_b, u_a2) -> PayoffResult:
    """Single-qubit game with ideal unitary moves."""
    mats = [np.asarray(u, dtype=complex) for u in (u_a1, u_b, u_a2)]
    for u in mats:
        if u.shape != (2, 2) or not is_unitary(u):
            raise ValueError("moves must be 2x2 unitaries")
    psi = mats[2] @ mats[1] @ mats[0] @ basis_state(2)
    return PayoffResult(alice_wins_probability(psi))


def play_chain(spec: GameSpec, seq_a1: Move, seq_b: Move, seq_a2: Move) -> PayoffResult:
    psi = spec.initial_state
    for move in (seq_a1, seq_b, seq_a2):
        psi = spec.unitary(move) @ psi
    return PayoffResult(alice_wins_probability(psi))


def meyer_demo() -> tuple[list[str], PayoffResult]:
    """Quantum Alice against a classical Bob who may flip or not.

    Alice uses a Hadamard, Bob's move leaves |+> unchanged, and Alice
    finishes with sigma_x H. Returns the transcript and the worst case
    over Bob's two moves.
    """
    lines = []
    worst = 1.0
    for name, u_b in (("N (identity)", IDENTITY), ("F (sigma_x)", SIGMA_X)):
        res = play_unitary(HADAMARD, u_b, SIGMA_X @ HADAMARD)
        lines.append(f"Alice: H | Bob: {name} | Alice: sigma_x H -> p_alice = {res.p_alice:.12f}")
        worst = min(worst, res.p_alice)
    return lines, PayoffResult(worst)


def _as_mixed(move) -> MixedStrategy:
    if isinstance(move, MixedStrategy):
        return move
    if isinstance(move, ControlSequence):
        return MixedStrategy((move,), np.ones(1))
    return MixedStrategy((np.asarray(move, dtype=complex),), np.ones(1))


def _strategy_unitaries(spec: GameSpec, strategy: MixedStrategy) -> np.ndarray:
    return np.array([spec.unitary(el) for el in strategy.elements])


def mean_payoff_vs_mixed(
    spec: GameSpec, alice: Sequence, bob
) -> float:
    """Alice's expected winning probability, enumerating every joint draw.

    ``alice`` is a pair (first move, second move); each entry, like ``bob``,
    is a fixed move or a :class:`MixedStrategy`. Draws are independent.
    """
    if len(alice) != 2:
        raise ValueError("alice needs exactly two moves")
    strategies = [_as_mixed(alice[0]), _as_mixed(bob), _as_mixed(alice[1])]
    unitaries = [_strategy_unitaries(spec, s) for s in strategies]
    psi0 = spec.initial_state
    total = 0.0
    for idx in itertools.product(*(range(len(s)) for s in strategies)):
        w = np.prod([s.weights[i] for s, i in zip(strategies, idx)])
        psi = psi0
        for us, i in zip(unitaries, idx):
            psi = us[i] @ psi
        total += w * alice_wins_probability(psi)
    return float(total)


def sampled_mean_payoff(
    spec: GameSpec, alice: Sequence, bob, samples: int, rng: np.random.Generator
) -> tuple[float, float]:
    """Monte Carlo estimate of Alice's mean payoff and its standard error.

    Mixed strategies are sampled by their weights; fixed moves are reused.
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    strategies = [_as_mixed(alice[0]), _as_mixed(bob), _as_mixed(alice[1])]
    unitaries = [_strategy_unitaries(spec, s) for s in strategies]
    picks = [rng.choice(len(s), size=samples, p=s.weights) for s in strategies]
    psi = np.broadcast_to(spec.initial_state, (samples, spec.dim))
    for us, idx in zip(unitaries, picks):
        psi = np.einsum("sij,sj->si", us[idx], psi)
    p = first_qubit_probability(psi, 1)
    return float(p.mean()), float(p.std(ddof=1) / np.sqrt(samples))


def haar_bob_payoffs(
    u_a1: np.ndarray, u_a2: np.ndarray, bob_moves: np.ndarray
) -> np.ndarray:
    """Bob's winning probability for each of a stack of single-qubit moves."""
    start = np.asarray(u_a1) @ basis_state(2)
    psi = np.einsum("ij,sjk,k->si", np.asarray(u_a2), bob_moves, start)
    return first_qubit_probability(psi, 0)
