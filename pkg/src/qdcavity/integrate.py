"""Adaptive Dormand-Prince 5(4) integrator for complex array states.

The state may be any complex ndarray (a density matrix, a vector of mean
fields); output is produced on a prescribed grid through the 4th order
continuous extension of the scheme, so the output spacing never limits
the internal step size.
"""
from __future__ import annotations

import math

import numpy as np

C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0])
A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
]
B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84])
# 5th minus embedded 4th order weights, 7th entry multiplies the FSAL stage
E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# continuous extension: y(t + th) = y + h * sum_i K_i * (P[i] @ [th, th^2, th^3, th^4])
P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0


class IntegrationError(RuntimeError):
    """Raised when the adaptive step collapses below the allowed minimum."""


def _norm(x: np.ndarray) -> float:
    return math.sqrt(float(np.mean(np.abs(x) ** 2))) if x.size else 0.0


def _initial_step(fun, t0, y0, f0, direction, rtol, atol, max_step):
    # Hairer, Norsett & Wanner, Solving ODEs I, II.4
    scale = atol + rtol * np.abs(y0)
    d0 = _norm(y0 / scale)
    d1 = _norm(f0 / scale)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, max_step)
    y1 = y0 + direction * h0 * f0
    f1 = fun(t0 + direction * h0, y1)
    d2 = _norm((f1 - f0) / scale) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, max_step)


def dopri5(fun, y0, t_eval, *, rtol=1e-8, atol=1e-10, max_step=math.inf,
           min_step_fraction=1e-6):
    """Integrate ``dy/dt = fun(t, y)`` and yield ``(t, y)`` at each ``t_eval``.

    Integration starts at ``t_eval[0]`` with state ``y0``.  The local error
    estimate is controlled per entry, ``|err_i| <= atol + rtol*|y_i|`` for
    every entry (max norm, so a few large entries cannot hide behind many
    near-zero ones).  Raises :class:`IntegrationError` if the step needed falls
    below ``min_step_fraction`` times the span of ``t_eval``.

    This is a generator so that callers can reduce each sample (e.g. to
    expectation values) without storing the whole state history.
    """
    t_eval = np.asarray(t_eval, dtype=float)
    if t_eval.ndim != 1 or t_eval.size == 0:
        raise ValueError("t_eval must be a non-empty 1-D array")
    if np.any(np.diff(t_eval) <= 0):
        raise ValueError("t_eval must be strictly increasing")
    y = np.array(y0, dtype=complex)
    t = float(t_eval[0])
    t_end = float(t_eval[-1])
    yield t, y.copy()
    if t_eval.size == 1:
        return
    span = t_end - t
    h_min = min_step_fraction * span

    f = fun(t, y)
    h = _initial_step(fun, t, y, f, 1.0, rtol, atol, max_step)
    K = np.empty((7,) + y.shape, dtype=complex)
    next_out = 1
    while next_out < t_eval.size:
        h = min(h, max_step, t_end - t)
        while True:
            K[0] = f
            for s in range(1, 6):
                dy = np.tensordot(A[s], K[:s], axes=1)
                K[s] = fun(t + C[s] * h, y + h * dy)
            y_new = y + h * np.tensordot(B, K[:6], axes=1)
            t_new = t + h
            f_new = fun(t_new, y_new)
            K[6] = f_new
            err = h * np.tensordot(E, K, axes=1)
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            err_norm = float(np.max(np.abs(err) / scale))
            if err_norm <= 1.0:
                break
            h *= max(MIN_FACTOR, SAFETY * err_norm ** -0.2)
            if h < h_min:
                raise IntegrationError(
                    f"step size {h:.3e} fell below {h_min:.3e} at t={t:.6g} "
                    f"(1e-6 of the integration span); the problem is too stiff "
                    f"or the tolerances too tight")
        if next_out < t_eval.size and t_eval[next_out] <= t_new:
            Q = np.tensordot(P.T, K, axes=(1, 0))  # shape (4,) + y.shape
            while next_out < t_eval.size and t_eval[next_out] <= t_new:
                t_out = t_eval[next_out]
                if t_out == t_new:
                    yield t_out, y_new.copy()
                else:
                    theta = (t_out - t) / h
                    powers = theta ** np.arange(1, 5)
                    yield t_out, y + h * np.tensordot(powers, Q, axes=1)
                next_out += 1
        factor = MAX_FACTOR if err_norm == 0 else min(MAX_FACTOR, SAFETY * err_norm ** -0.2)
        t, y, f = t_new, y_new, f_new
        h *= factor


def solve(fun, y0, t_eval, **kwargs) -> np.ndarray:
    """Collect :func:`dopri5` output into an array of shape ``(len(t_eval),) + y0.shape``."""
    return np.stack([y for _, y in dopri5(fun, y0, t_eval, **kwargs)])
