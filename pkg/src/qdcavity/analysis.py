"""Analytic and trace-derived diagnostics.

Polariton eigenvalues and weak-probe spectra come from the linear
(two coupled modes) model; peak spacing, oscillation contrast and the
integrated coherence are computed from sampled traces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid
from scipy.signal import find_peaks

from .params import PulseSpec, SystemParams
from .trace import TimeTrace

DEFAULT_PROMINENCE = 0.02


@dataclass(frozen=True)
class PolaritonPair:
    omega_plus: complex
    omega_minus: complex

    @property
    def splitting(self) -> complex:
        return self.omega_plus - self.omega_minus

    @property
    def strong_coupling(self) -> bool:
        return self.splitting.real > 0

    @property
    def beat_period(self) -> float:
        """``2 pi / Re(omega_+ - omega_-)``; ``inf`` without a real splitting."""
        re = self.splitting.real
        return 2 * math.pi / re if re > 0 else math.inf


def polariton_eigenvalues(params: SystemParams) -> PolaritonPair:
    """Complex eigenfrequencies of the lossy linear dot-cavity system.

    ``w_pm = (dc + da)/2 - i(kappa + gamma')/2 +- sqrt(g^2 + (delta - i(kappa - gamma'))^2 / 4)``
    with ``gamma' = gamma + gamma_d`` and ``delta = dc - da``.  The principal
    branch of the square root is used (Re >= 0), so ``omega_plus`` is the
    upper polariton whenever the system is strongly coupled.
    """
    gamma = params.gamma + params.gamma_d
    center = 0.5 * (params.delta_c + params.delta_a) - 0.5j * (params.kappa + gamma)
    root = np.sqrt(complex(params.g ** 2 + 0.25 * (params.delta - 1j * (params.kappa - gamma)) ** 2))
    return PolaritonPair(complex(center + root), complex(center - root))


@dataclass(eq=False)
class SpectrumTrace:
    detunings: np.ndarray
    transmission: np.ndarray


def _cavity_response(params: SystemParams, detunings) -> np.ndarray:
    """Steady-state <a> per unit drive (drive -1) for laser offsets ``detunings``."""
    d = np.asarray(detunings, dtype=float)
    gamma = params.gamma + params.gamma_d
    cav = params.kappa + 1j * (params.delta_c - d)
    dot = gamma + 1j * (params.delta_a - d)
    if params.g == 0:
        # decoupled dot; dot/det would be 0/0 on its resonance when gamma = 0
        dot, det = np.ones_like(cav), cav
    else:
        det = cav * dot + params.g ** 2
    bad = det == 0
    if np.any(bad):
        raise ZeroDivisionError(
            "linear response is singular at laser detuning(s) "
            f"{d[bad][:3].tolist()} rad/ps (undamped resonance)")
    return dot / det


def transmission_spectrum(params: SystemParams, detuning_grid) -> SpectrumTrace:
    """Weak-probe cavity transmission |<a>_ss|^2, normalized to the bare-cavity peak.

    ``detuning_grid`` holds laser frequency offsets (rad/ps) in the same
    rotating frame as ``params``; the cavity sits at ``params.delta_c``.
    """
    d = np.asarray(detuning_grid, dtype=float)
    resp = _cavity_response(params, d)
    if params.kappa <= 0:
        raise ValueError("kappa must be > 0 to normalize to the bare-cavity peak")
    return SpectrumTrace(detunings=d, transmission=(params.kappa * np.abs(resp)) ** 2)


def pulse_power_spectrum(pulse: PulseSpec, detunings) -> np.ndarray:
    """Power spectrum of the Gaussian envelope, unit height at the laser frequency."""
    d = np.asarray(detunings, dtype=float)
    return np.exp(-(d * pulse.sigma) ** 2)


def pulse_spectrum_overlap(pulse: PulseSpec, params: SystemParams,
                           half_width: Optional[float] = None,
                           n_points: int = 4001) -> float:
    """Pulse-power-weighted mean of the weak-probe transmission.

    ``sum S(d) T(d) / sum S(d)`` over laser offsets ``|d| <= half_width``.
    A very short pulse (flat S) gives the window average of T, a very long
    one gives ``T(0)``.  The default window covers both polaritons and
    four linewidths on either side.
    """
    if half_width is None:
        pair = polariton_eigenvalues(params)
        reach = max(abs(pair.omega_plus.real), abs(pair.omega_minus.real),
                    abs(params.delta_c), abs(params.delta_a))
        half_width = reach + 4 * (params.kappa + params.gamma + params.gamma_d + params.g)
    d = np.linspace(-half_width, half_width, n_points)
    weights = pulse_power_spectrum(pulse, d)
    trans = transmission_spectrum(params, d).transmission
    total = weights.sum()
    if total <= 0 or not np.isfinite(total):
        # spectrum narrower than the grid spacing: delta-function limit
        return float(transmission_spectrum(params, [0.0]).transmission[0])
    return float(np.sum(weights * trans) / total)


def _refine_peak(t: np.ndarray, y: np.ndarray, i: int) -> float:
    """Vertex of the parabola through the samples around index ``i``."""
    if i <= 0 or i >= len(y) - 1:
        return float(t[i])
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    curv = y0 - 2 * y1 + y2
    if curv == 0:
        return float(t[i])
    offset = 0.5 * (y0 - y2) / curv
    return float(t[i] + offset * (t[i + 1] - t[i]))


def prominent_maxima(trace: TimeTrace, prominence: float = DEFAULT_PROMINENCE) -> np.ndarray:
    """Indices of local maxima of cavity output with prominence >= ``prominence`` x global max."""
    y = np.asarray(trace.cavity_photon, dtype=float)
    if y.size < 3:
        return np.zeros(0, dtype=int)
    peak = float(np.max(y))
    if peak <= 0:
        return np.zeros(0, dtype=int)
    idx, _ = find_peaks(y, prominence=prominence * peak)
    return idx


def peak_separation(trace: TimeTrace, prominence: float = DEFAULT_PROMINENCE) -> Optional[float]:
    """Time between the first two prominent maxima of the cavity output.

    Maxima are located on the samples and refined by quadratic
    interpolation.  Returns ``None`` when fewer than two maxima reach the
    prominence threshold (a fraction of the global maximum).

    The search covers the whole trace.  For long pulses the leading output
    hump peaks before the pulse center, and it is the spacing of that hump
    and the one after the dip that shifts with pulse length.
    """
    idx = prominent_maxima(trace, prominence)
    if idx.size < 2:
        return None
    t = np.asarray(trace.times, dtype=float)
    y = np.asarray(trace.cavity_photon, dtype=float)
    return _refine_peak(t, y, idx[1]) - _refine_peak(t, y, idx[0])


def oscillation_contrast(trace: TimeTrace, prominence: float = DEFAULT_PROMINENCE) -> float:
    """``(m1 - m)/(m1 + m)`` for the first prominent maximum m1 and the
    minimum m between it and the second prominent maximum; 0 without a
    second prominent maximum."""
    idx = prominent_maxima(trace, prominence)
    if idx.size < 2:
        return 0.0
    y = np.asarray(trace.cavity_photon, dtype=float)
    first = y[idx[0]]
    dip = float(np.min(y[idx[0]:idx[1] + 1]))
    dip = max(dip, 0.0)
    return float((first - dip) / (first + dip))


def coherence_integral(trace: TimeTrace, omega0: float) -> float:
    """``|int (<a^dag s> - <a>^* <s>) dt| / omega0^2`` by the trapezoid rule.

    The magnitude of the complex time integral is reported.  Mean-field
    traces factorize by construction and give exactly 0.
    """
    if omega0 <= 0:
        raise ValueError("omega0 must be > 0")
    excess = trace.cross_coherence - np.conj(trace.mean_a) * trace.mean_sigma
    return float(abs(trapezoid(excess, trace.times))) / omega0 ** 2


def bare_cavity_field(params: SystemParams, pulse: PulseSpec, times) -> np.ndarray:
    """Closed-form <a>(t) of the driven empty cavity, ``d<a>/dt = -(kappa + i dc)<a> - Omega(t)``.

    Starts from the vacuum at ``t = -inf``.  Uses the scaled complementary
    error function so that neither tail overflows.
    """
    from scipy.special import erfc, erfcx

    lam = complex(params.kappa, params.delta_c)
    s = pulse.sigma
    tau = np.asarray(times, dtype=float) - pulse.t_center
    x = (lam * s * s - tau) / (s * math.sqrt(2.0))
    pref = -pulse.omega0 * s * math.sqrt(math.pi / 2.0)
    out = np.empty(tau.shape, dtype=complex)
    # exp(lam^2 s^2/2 - lam tau) erfc(x) == exp(x^2 - tau^2/(2 s^2)) erfc(x)
    pos = x.real >= 0
    out[pos] = erfcx(x[pos]) * np.exp(-0.5 * (tau[pos] / s) ** 2)
    neg = ~pos
    out[neg] = np.exp(0.5 * (lam * s) ** 2 - lam * tau[neg]) * erfc(x[neg])
    return pref * out
