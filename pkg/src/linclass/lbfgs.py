"""Limited-memory BFGS with two-loop recursion and Armijo backtracking."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ARMIJO_C = 1e-4
SHRINK = 0.5
MAX_SHRINKS = 50


@dataclass
class LbfgsResult:
    x: np.ndarray
    fval: float
    grad: np.ndarray
    n_iter: int
    status: str  # "converged" | "max_iter" | "line_search_failed"
    trace: list = field(default_factory=list)  # objective after each accepted step


def _two_loop(grad, s_list, y_list, rho_list):
    q = grad.copy()
    alphas = []
    for s, y, rho in zip(reversed(s_list), reversed(y_list), reversed(rho_list)):
        a = rho * (s @ q)
        alphas.append(a)
        q -= a * y
    if s_list:
        s, y = s_list[-1], y_list[-1]
        q *= (s @ y) / (y @ y)
    for (s, y, rho), a in zip(zip(s_list, y_list, rho_list), reversed(alphas)):
        b = rho * (y @ q)
        q += (a - b) * s
    return -q


def minimize(fun, x0, max_iter=1000, memory=10, gtol=1e-6):
    """Minimize ``fun(x) -> (value, gradient)`` starting from ``x0``.

    Deterministic: no randomness, no wall-clock dependence. Stops when the
    max-abs gradient entry drops below ``gtol`` or after ``max_iter``
    accepted steps. A line search that fails after MAX_SHRINKS backtracks
    returns the best point so far with status "line_search_failed".
    """
    if max_iter < 1 or memory < 1 or gtol <= 0:
        raise ValueError("invalid optimizer configuration")
    x = np.asarray(x0, dtype=np.float64).copy()
    f, g = fun(x)
    trace = [float(f)]
    s_list, y_list, rho_list = [], [], []

    for it in range(max_iter):
        if np.abs(g).max() <= gtol:
            return LbfgsResult(x, float(f), g, it, "converged", trace)
        d = _two_loop(g, s_list, y_list, rho_list)
        gd = g @ d
        if gd >= 0:
            # not a descent direction; reset memory and fall back to steepest descent
            s_list, y_list, rho_list = [], [], []
            d = -g
            gd = g @ d

        step = 1.0
        accepted = False
        for _ in range(MAX_SHRINKS):
            x_new = x + step * d
            f_new, g_new = fun(x_new)
            if np.isfinite(f_new) and f_new <= f + ARMIJO_C * step * gd:
                accepted = True
                break
            step *= SHRINK
        if not accepted:
            return LbfgsResult(x, float(f), g, it, "line_search_failed", trace)

        s = x_new - x
        y = g_new - g
        sy = s @ y
        if sy > 1e-10 * np.linalg.norm(s) * np.linalg.norm(y):
            s_list.append(s)
            y_list.append(y)
            rho_list.append(1.0 / sy)
            if len(s_list) > memory:
                s_list.pop(0)
                y_list.pop(0)
                rho_list.pop(0)
        x, f, g = x_new, f_new, g_new
        trace.append(float(f))

    status = "converged" if np.abs(g).max() <= gtol else "max_iter"
    return LbfgsResult(x, float(f), g, max_iter, status, trace)
