import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm
from scipy.stats import unitary_group

from qubitflip.chain import ChainConfig, ControlSequence
from qubitflip.game import (
    GameSpec,
    PayoffResult,
    classical_payoff,
    haar_bob_payoffs,
    mean_payoff_vs_mixed,
    meyer_demo,
    play_chain,
    play_unitary,
    sampled_mean_payoff,
)
from qubitflip.qla import HADAMARD, IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z
from qubitflip.strategy import (
    params_to_sequence,
    pauli_control_params,
    pauli_control_strategy,
    pauli_strategy,
)

FAIR_J = 4.10469


def test_classical_table_cells():
    assert classical_payoff("N", "N", "N") == -1
    assert classical_payoff("N", "N", "F") == 1
    assert classical_payoff("F", "F", "F") == 1


def test_classical_payoff_is_flip_parity():
    for a1, b, a2 in itertools.product("NF", repeat=3):
        flips = (a1 + b + a2).count("F")
        assert classical_payoff(a1, b, a2) == (1 if flips % 2 else -1)


def test_classical_game_has_no_winning_pure_strategy():
    # Bob can always answer to win, and so can Alice's second move
    for a1, a2 in itertools.product("NF", repeat=2):
        assert min(classical_payoff(a1, b, a2) for b in "NF") == -1


def test_classical_bad_move():
    with pytest.raises(ValueError):
        classical_payoff("N", "X", "N")


def test_payoff_result_is_zero_sum():
    r = PayoffResult(0.3)
    assert r.p_alice + r.p_bob == 1.0
    assert r.sigma_z == pytest.approx(0.4)


def test_quantum_alice_beats_classical_bob():
    assert play_unitary(HADAMARD, SIGMA_X, SIGMA_X @ HADAMARD).p_alice == pytest.approx(1, abs=1e-15)
    lines, res = meyer_demo()
    assert len(lines) == 2
    assert res.p_alice == pytest.approx(1, abs=1e-15)


def test_play_unitary_trivial_games():
    assert play_unitary(IDENTITY, IDENTITY, IDENTITY).p_alice == 0
    assert play_unitary(IDENTITY, SIGMA_X, IDENTITY).p_alice == 1


def test_play_unitary_rejects_non_unitary():
    with pytest.raises(ValueError):
        play_unitary(IDENTITY, 2 * IDENTITY, IDENTITY)


def test_play_chain_single_qubit_table_sequences():
    spec = GameSpec(ChainConfig(1, 0.0, 1.0))
    i_sx = params_to_sequence(pauli_control_params(1))
    ident = params_to_sequence(pauli_control_params(0))
    assert play_chain(spec, i_sx, ident, ident).p_alice == pytest.approx(1, abs=1e-12)


def test_play_chain_zero_controls_no_drift():
    spec = GameSpec(ChainConfig(2, 0.0, 1.0))
    zero = ControlSequence.alternating([0, 0, 0])
    assert play_chain(spec, zero, zero, zero).p_alice == pytest.approx(0, abs=1e-15)


def test_play_chain_against_dense_exponential_oracle():
    spec = GameSpec(ChainConfig(2, FAIR_J, 1.0))
    moves = [ControlSequence.alternating(a) for a in ([0.4, -1.1, 2.0], [0, 0, 0], [3.1, 0.2, -0.7])]
    sx, sy, sz = SIGMA_X, SIGMA_Y, SIGMA_Z
    h0 = FAIR_J * (np.kron(sx, sx) + np.kron(sy, sy) + np.kron(sz, sz))
    psi = np.array([1, 0, 0, 0], dtype=complex)
    for seq in moves:
        for p in seq.pulses:
            s = sz if p.axis == "z" else sy
            psi = expm(-1j / 3 * (h0 + p.amplitude * np.kron(s, np.eye(2)))) @ psi
    expected = abs(psi[2]) ** 2 + abs(psi[3]) ** 2
    got = play_chain(spec, *moves)
    assert got.p_alice == pytest.approx(expected, abs=1e-12)
    zero = moves[1]
    # |00> is a triplet eigenstate of the exchange, so free evolution never flips spin 1
    assert play_chain(spec, zero, zero, zero).p_alice == pytest.approx(0.0, abs=1e-14)


def test_play_chain_dimension_mismatch():
    with pytest.raises(ValueError):
        play_chain(GameSpec(ChainConfig(2)), np.eye(2), np.eye(4), np.eye(4))


def test_nash_lemma_random_alice_pairs():
    spec = GameSpec(ChainConfig(1))
    rng = np.random.default_rng(17)
    bob = pauli_strategy()
    for _ in range(100):
        a1, a2 = (unitary_group.rvs(2, random_state=rng) for _ in range(2))
        assert mean_payoff_vs_mixed(spec, (a1, a2), bob) == pytest.approx(0.5, abs=1e-12)


def test_hadamard_alice_cannot_beat_pauli_bob():
    spec = GameSpec(ChainConfig(1))
    assert mean_payoff_vs_mixed(spec, (HADAMARD, SIGMA_X @ HADAMARD), pauli_strategy()) == pytest.approx(
        0.5, abs=1e-12
    )


def test_all_pauli_moves_enumerate_64_terms():
    spec = GameSpec(ChainConfig(1))
    p = pauli_strategy()
    assert mean_payoff_vs_mixed(spec, (p, p), p) == pytest.approx(0.5, abs=1e-12)


def test_chain_pauli_game_fair_at_calibrated_coupling():
    spec = GameSpec(ChainConfig(2, FAIR_J, 1.0))
    p = pauli_control_strategy(1.0)
    assert 1 - mean_payoff_vs_mixed(spec, (p, p), p) == pytest.approx(0.5, abs=5e-3)


def test_single_qubit_chain_agrees_with_ideal_game():
    rng = np.random.default_rng(4)
    spec = GameSpec(ChainConfig(1, 123.0, 1.0))
    for _ in range(20):
        picks = rng.integers(0, 4, size=3)
        seqs = [params_to_sequence(pauli_control_params(i)) for i in picks]
        ideal = [pauli_strategy().elements[i] for i in picks]
        assert play_chain(spec, *seqs).p_alice == pytest.approx(play_unitary(*ideal).p_alice, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.lists(st.floats(0, 2 * np.pi), min_size=3, max_size=3))
def test_payoff_invariant_under_global_phases(seed, phases):
    rng = np.random.default_rng(seed)
    us = [unitary_group.rvs(2, random_state=rng) for _ in range(3)]
    base = play_unitary(*us)
    shifted = play_unitary(*(np.exp(1j * a) * u for a, u in zip(phases, us)))
    assert abs(base.p_alice - shifted.p_alice) < 1e-14
    assert abs(base.p_alice + base.p_bob - 1) < 1e-12
    assert 0 <= base.p_alice <= 1


def test_sampled_mean_converges_to_exhaustive():
    spec = GameSpec(ChainConfig(2, FAIR_J, 1.0))
    p = pauli_control_strategy(1.0)
    alice = (ControlSequence.alternating([1.0, 2.0, 0.5]), p)
    exact = mean_payoff_vs_mixed(spec, alice, p)
    mean, err = sampled_mean_payoff(spec, alice, p, 20_000, np.random.default_rng(0))
    assert abs(mean - exact) < 5 * err


def test_haar_bob_payoffs_vectorised():
    rng = np.random.default_rng(8)
    a1, a2 = (unitary_group.rvs(2, random_state=rng) for _ in range(2))
    bob = np.array([unitary_group.rvs(2, random_state=rng) for _ in range(5)])
    got = haar_bob_payoffs(a1, a2, bob)
    for b, p in zip(bob, got):
        assert p == pytest.approx(play_unitary(a1, b, a2).p_bob, abs=1e-14)
