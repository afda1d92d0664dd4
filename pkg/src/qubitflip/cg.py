"""Polak-Ribiere (+) nonlinear conjugate gradient with a strong-Wolfe line search."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import line_search


@dataclass
class CGResult:
    x: np.ndarray
    fun: float
    grad: np.ndarray
    nit: int
    nfev: int
    converged: bool
    message: str
    history: list[float] = field(default_factory=list)

    @property
    def grad_norm(self) -> float:
        return float(np.max(np.abs(self.grad))) if self.grad.size else 0.0


class _Cached:
    """Evaluate ``fun_and_grad`` once per point for the separate f/g callbacks."""

    def __init__(self, fun_and_grad):
        self.fun_and_grad = fun_and_grad
        self.key = None
        self.value = None
        self.nfev = 0

    def __call__(self, x):
        key = x.tobytes()
        if key != self.key:
            f, g = self.fun_and_grad(x)
            self.key, self.value = key, (float(f), np.asarray(g, dtype=float))
            self.nfev += 1
        return self.value

    def f(self, x):
        return self(x)[0]

    def g(self, x):
        return self(x)[1]


def _wolfe_step(cache, x, d, g, f, c1, c2, guess):
    """Strong-Wolfe step along ``d``, trying ``guess`` first.

    The direction is pre-scaled so that scipy's first trial step (unit
    length) equals ``guess``; near an optimum the gradient is tiny and a
    unit first step would need many expansions.
    """
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="The line search algorithm")
        alpha, *_ = line_search(cache.f, cache.g, x, guess * d, g, f, None, c1=c1, c2=c2)
    return None if alpha is None else alpha * guess


def minimize_cg(
    fun_and_grad,
    x0,
    gtol: float = 1e-8,
    maxiter: int = 1000,
    c1: float = 1e-4,
    c2: float = 0.1,
) -> CGResult:
    """Minimise a smooth function given a callable returning ``(f, grad)``.

    Stops when the max-norm of the gradient drops below ``gtol``, after
    ``maxiter`` iterations, or when no step satisfying the Wolfe
    conditions exists even along steepest descent.
    """
    cache = _Cached(fun_and_grad)
    x = np.array(x0, dtype=float)
    f, g = cache(x)
    d = -g
    history = [f]
    message = "maximum iterations reached"
    converged = False
    nit = 0
    # first trial step moves the largest component by one unit
    guess = 1.0 / max(np.max(np.abs(g), initial=0.0), 1e-300)
    while nit < maxiter:
        if np.max(np.abs(g), initial=0.0) < gtol:
            converged, message = True, "gradient tolerance reached"
            break
        if g @ d >= 0:
            d = -g
        alpha = _wolfe_step(cache, x, d, g, f, c1, c2, guess)
        if alpha is None and not np.array_equal(d, -g):
            d = -g
            alpha = _wolfe_step(cache, x, d, g, f, c1, c2, guess)
        if alpha is None:
            message = "line search failed"
            break
        x_new = x + alpha * d
        f_new, g_new = cache(x_new)
        beta = max(0.0, g_new @ (g_new - g) / (g @ g))
        d = -g_new + beta * d
        # next first trial: minimiser of the quadratic through f, f_new and the new slope
        new_slope = g_new @ d
        guess = 2.02 * (f_new - f) / new_slope if new_slope < 0 and f_new < f else alpha
        x, f, g = x_new, f_new, g_new
        history.append(f)
        nit += 1
    else:
        if np.max(np.abs(g), initial=0.0) < gtol:
            converged, message = True, "gradient tolerance reached"
    return CGResult(x, f, g, nit, cache.nfev, converged, message, history)
