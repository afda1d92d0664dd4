import itertools

import numpy as np
import pytest
from scipy.linalg import expm

from qubitflip.calib import (
    CORRELATED,
    NoFairCouplingError,
    PayoffCurve,
    bisect_root,
    bob_payoff_at,
    fair_coupling_bracket,
    find_fair_coupling,
    scan,
)
from qubitflip.qla import SIGMA_X, SIGMA_Y, SIGMA_Z
from qubitflip.strategy import PAULI_CONTROL_PARAMS

FAIR_J = 4.104690606  # frozen from the bisection below at tol 1e-9


def dense_bob_payoff(J, T=1.0, table=PAULI_CONTROL_PARAMS):
    """Two-spin oracle: enumerate all 64 state vectors with scipy's expm."""
    h0 = J * sum(np.kron(s, s) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z))
    ctrl = {"z": np.kron(SIGMA_Z, np.eye(2)), "y": np.kron(SIGMA_Y, np.eye(2))}

    def move(xi):
        u = np.eye(4, dtype=complex)
        for axis, x in zip("zyz", xi):
            u = expm(-1j * (T / 3) * (h0 + (3 * x / T) * ctrl[axis])) @ u
        return u

    us = [move(xi) for xi in table]
    total = 0.0
    for a1, b, a2 in itertools.product(us, repeat=3):
        psi = a2 @ b @ a1 @ np.array([1, 0, 0, 0], dtype=complex)
        total += abs(psi[0]) ** 2 + abs(psi[1]) ** 2
    return total / 64


@pytest.mark.parametrize("J", [0.0, 0.7, 2.5, FAIR_J, 9.3])
def test_bob_payoff_matches_dense_oracle(J):
    assert bob_payoff_at(J) == pytest.approx(dense_bob_payoff(J), abs=1e-12)


def test_zero_coupling_is_fair():
    assert abs(bob_payoff_at(0.0) - 0.5) < 1e-12
    assert abs(bob_payoff_at(0.0, n=3) - 0.5) < 1e-12


def test_payoff_is_a_probability():
    for J in np.linspace(0, 30, 31):
        assert 0.0 <= bob_payoff_at(J) <= 1.0


def test_negative_coupling_rejected():
    with pytest.raises(ValueError):
        bob_payoff_at(-1.0)
    with pytest.raises(ValueError):
        bob_payoff_at(1.0, convention="bogus")


@pytest.mark.parametrize("c", [0.5, 2.0])
@pytest.mark.parametrize("J", [1.3, FAIR_J])
def test_payoff_depends_on_J_times_T(J, c):
    assert abs(bob_payoff_at(J, T=1.0) - bob_payoff_at(J * c, T=1.0 / c)) < 1e-10


def test_scan_grid_and_validation():
    curve = scan(0, 10, 101)
    assert len(curve) == 101
    assert curve.J[0] == 0 and curve.p_bob[0] == pytest.approx(0.5, abs=1e-12)
    log = scan(100, 10000, 50, scale="log")
    assert log.J[0] == pytest.approx(100) and log.J[-1] == pytest.approx(10000)
    assert np.allclose(np.diff(np.log(log.J)), np.log(100) / 49)
    with pytest.raises(ValueError):
        scan(0, 0, 10)
    with pytest.raises(ValueError):
        scan(0, 1, 1)
    with pytest.raises(ValueError):
        scan(0, 1, 5, scale="log")


def test_scan_refinement_keeps_shared_points():
    coarse = scan(3.5, 4.5, 11)
    fine = scan(3.5, 4.5, 21)
    assert np.array_equal(coarse.p_bob, fine.p_bob[::2])


def test_scan_sees_crossing_near_fair_value():
    curve = scan(3.5, 4.5, 201)
    idx = curve.sign_changes()
    assert len(idx) >= 1
    assert any(curve.J[i] <= FAIR_J <= curve.J[i + 1] for i in idx)


def test_payoff_curve_validation():
    with pytest.raises(ValueError):
        PayoffCurve(np.array([1.0, 0.5]), np.array([0.5, 0.5]))
    with pytest.raises(ValueError):
        PayoffCurve(np.array([1.0]), np.array([0.5, 0.5]))


def test_bisect_root_contract():
    lo, hi = bisect_root(lambda x: x * x - 2, 0.0, 2.0, 1e-10)
    assert hi - lo < 1e-10 and lo <= np.sqrt(2) <= hi
    with pytest.raises(NoFairCouplingError):
        bisect_root(lambda x: x * x + 1, 0.0, 2.0, 1e-6)
    with pytest.raises(ValueError):
        bisect_root(lambda x: x, -1.0, 1.0, 0.0)


def test_fair_coupling_bracket_and_value():
    lo, hi = fair_coupling_bracket(tol=1e-9)
    assert hi - lo < 1e-9
    assert 0.5 * (lo + hi) == pytest.approx(FAIR_J, abs=1e-9)
    lo, hi = fair_coupling_bracket(tol=1e-6)
    assert hi - lo < 1e-6
    assert bob_payoff_at(lo) - 0.5 > 0 > bob_payoff_at(hi) - 0.5


def test_fair_coupling_is_the_first_crossing():
    curve = scan(0.1, FAIR_J - 1e-3, 400)
    assert len(curve.sign_changes()) == 0


def test_explicit_bracket():
    J = find_fair_coupling(J_lower=4.0, J_upper=4.2)
    assert J == pytest.approx(FAIR_J, abs=1e-6)
    with pytest.raises(NoFairCouplingError):
        find_fair_coupling(J_lower=1.0, J_upper=2.0)


def test_fair_coupling_halves_when_T_doubles():
    assert find_fair_coupling(2, T=2.0, tol=1e-9) == pytest.approx(FAIR_J / 2, abs=1e-8)


def test_continuity_near_root():
    d = 1e-6
    k = abs(bob_payoff_at(FAIR_J + d) - bob_payoff_at(FAIR_J)) / d
    assert k < 10


def test_deterministic():
    assert find_fair_coupling() == find_fair_coupling()


def test_correlated_convention_has_no_crossing():
    with pytest.raises(NoFairCouplingError):
        find_fair_coupling(convention=CORRELATED, search_limit=10.0)


def test_longer_chain_has_no_fair_coupling():
    with pytest.raises(NoFairCouplingError):
        find_fair_coupling(3, search_limit=10.0)


def test_corrected_table_matches_dense_oracle():
    from qubitflip.strategy import PAULI_CONTROL_PARAMS_CORRECTED

    for J in (0.3, 0.59, 2.0):
        expected = dense_bob_payoff(J, table=PAULI_CONTROL_PARAMS_CORRECTED)
        assert bob_payoff_at(J, corrected=True) == pytest.approx(expected, abs=1e-12)
    assert find_fair_coupling(corrected=True) == pytest.approx(0.590093, abs=1e-6)
