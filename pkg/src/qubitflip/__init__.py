"""Qubit flip game played through controls of a Heisenberg spin chain."""

from .chain import ChainConfig, ControlPulse, ControlSequence, drift_hamiltonian, evolve_move
from .game import GameSpec, PayoffResult, mean_payoff_vs_mixed, play_chain, play_unitary
from .strategy import MixedStrategy, pauli_control_strategy, pauli_strategy

__version__ = "0.1.0"

__all__ = [
    "ChainConfig",
    "ControlPulse",
    "ControlSequence",
    "GameSpec",
    "MixedStrategy",
    "PayoffResult",
    "drift_hamiltonian",
    "evolve_move",
    "mean_payoff_vs_mixed",
    "pauli_control_strategy",
    "pauli_strategy",
    "play_chain",
    "play_unitary",
]
