import numpy as np
import pytest
from scipy.optimize import rosen, rosen_der

from qubitflip.cg import minimize_cg


def quadratic(a, b):
    def f(x):
        return 0.5 * x @ a @ x - b @ x, a @ x - b

    return f


def test_quadratic_reaches_exact_minimiser():
    rng = np.random.default_rng(0)
    m = rng.normal(size=(6, 6))
    a = m @ m.T + 6 * np.eye(6)
    b = rng.normal(size=6)
    res = minimize_cg(quadratic(a, b), np.zeros(6))
    assert res.converged
    assert np.allclose(res.x, np.linalg.solve(a, b), atol=1e-8)


def test_rosenbrock():
    res = minimize_cg(lambda x: (rosen(x), rosen_der(x)), np.array([-1.2, 1.0]), gtol=1e-7, maxiter=2000)
    assert res.converged
    assert np.allclose(res.x, [1.0, 1.0], atol=1e-6)


def test_history_is_monotone():
    res = minimize_cg(lambda x: (rosen(x), rosen_der(x)), np.array([-1.2, 1.0, 0.4, -0.3]))
    assert np.all(np.diff(res.history) <= 1e-15)
    assert res.nit == len(res.history) - 1


def test_already_stationary_start():
    res = minimize_cg(quadratic(np.eye(3), np.zeros(3)), np.zeros(3))
    assert res.converged and res.nit == 0 and res.grad_norm == 0


def test_iteration_cap():
    res = minimize_cg(lambda x: (rosen(x), rosen_der(x)), np.array([-1.2, 1.0]), maxiter=3)
    assert res.nit <= 3 and not res.converged


def test_bounded_below_failure_is_reported_not_raised():
    # linear function: no Wolfe step exists
    res = minimize_cg(lambda x: (float(-x.sum()), -np.ones_like(x)), np.zeros(2), maxiter=20)
    assert not res.converged
    assert res.message in ("line search failed", "maximum iterations reached")


@pytest.mark.parametrize("seed", range(3))
def test_deterministic(seed):
    x0 = np.random.default_rng(seed).normal(size=4)
    a = minimize_cg(lambda x: (rosen(x), rosen_der(x)), x0)
    b = minimize_cg(lambda x: (rosen(x), rosen_der(x)), x0)
    assert np.array_equal(a.x, b.x) and a.nit == b.nit
