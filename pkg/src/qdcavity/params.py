"""Physical parameters, drive pulses and time grids.

Internal units are picoseconds for time and rad/ps for every rate,
detuning and drive strength.  Humans (config files, CLI flags) quote
ordinary frequencies in GHz; :func:`ghz_to_angular` is the only place
that converts between the two.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

# rad/ps per GHz of ordinary frequency
_RAD_PER_PS_PER_GHZ = 2.0 * math.pi * 1e-3

FWHM_TO_SIGMA = 1.0 / (2.0 * math.sqrt(2.0 * math.log(2.0)))


def ghz_to_angular(f_ghz):
    """Ordinary frequency in GHz -> angular frequency in rad/ps."""
    return f_ghz * _RAD_PER_PS_PER_GHZ


def angular_to_ghz(omega):
    """Angular frequency in rad/ps -> ordinary frequency in GHz."""
    return omega / _RAD_PER_PS_PER_GHZ


@dataclass(frozen=True)
class SystemParams:
    """Rates and rotating-frame detunings of the dot-cavity system (rad/ps).

    ``kappa`` is the cavity *field* decay rate and ``gamma`` the dipole
    decay rate, so the dissipators enter as ``2*kappa*L[a]`` and
    ``2*gamma*L[sigma]``.  ``delta_c``/``delta_a`` are the cavity and dot
    detunings from the laser.
    """

    g: float
    kappa: float
    gamma: float = 0.0
    gamma_d: float = 0.0
    delta_c: float = 0.0
    delta_a: float = 0.0

    def __post_init__(self):
        for name in ("g", "kappa", "gamma", "gamma_d", "delta_c", "delta_a"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        for name in ("g", "kappa", "gamma", "gamma_d"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)!r}")

    @classmethod
    def from_ghz(cls, g, kappa, gamma=0.0, gamma_d=0.0, delta_c=0.0, delta_a=0.0):
        return cls(
            g=ghz_to_angular(g),
            kappa=ghz_to_angular(kappa),
            gamma=ghz_to_angular(gamma),
            gamma_d=ghz_to_angular(gamma_d),
            delta_c=ghz_to_angular(delta_c),
            delta_a=ghz_to_angular(delta_a),
        )

    @property
    def delta(self) -> float:
        """Dot-cavity detuning ``delta_c - delta_a``."""
        return self.delta_c - self.delta_a

    def with_delta(self, delta: float) -> "SystemParams":
        """Keep the cavity detuning, move the dot so that ``self.delta == delta``."""
        return replace(self, delta_a=self.delta_c - delta)

    def replace(self, **changes) -> "SystemParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class PulseSpec:
    """Gaussian drive ``Omega(t) = omega0 * exp(-(t - t_center)^2 / (2 s^2))``.

    ``fwhm`` is the full width at half maximum of the envelope p(t) itself,
    ``s = fwhm / (2 sqrt(2 ln 2))``.
    """

    omega0: float
    fwhm: float
    t_center: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.omega0) and self.omega0 >= 0):
            raise ValueError(f"omega0 must be finite and >= 0, got {self.omega0!r}")
        if not (math.isfinite(self.fwhm) and self.fwhm > 0):
            raise ValueError(f"fwhm must be finite and > 0, got {self.fwhm!r}")
        if not math.isfinite(self.t_center):
            raise ValueError(f"t_center must be finite, got {self.t_center!r}")

    @classmethod
    def from_ghz(cls, omega0, fwhm, t_center=0.0):
        """``omega0`` in GHz, ``fwhm`` and ``t_center`` in ps."""
        return cls(omega0=ghz_to_angular(omega0), fwhm=fwhm, t_center=t_center)

    @property
    def sigma(self) -> float:
        return self.fwhm * FWHM_TO_SIGMA

    def envelope(self, t):
        x = (np.asarray(t, dtype=float) - self.t_center) / self.sigma
        return np.exp(-0.5 * x * x)

    def drive(self, t):
        return self.omega0 * self.envelope(t)

    def replace(self, **changes) -> "PulseSpec":
        return replace(self, **changes)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform output grid from ``t_start`` to ``t_end`` (inclusive), in ps."""

    t_start: float
    t_end: float
    dt: float

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be > 0, got {self.dt!r}")
        if not self.t_end >= self.t_start:
            raise ValueError("t_end must be >= t_start")

    @property
    def n_samples(self) -> int:
        return int(round((self.t_end - self.t_start) / self.dt)) + 1

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_samples)

    @property
    def span(self) -> float:
        return self.t_end - self.t_start

    @classmethod
    def for_pulse(cls, pulse: PulseSpec, t_end: float = 200.0, dt: float = 0.1,
                  t_start: float = -20.0) -> "TimeGrid":
        """Default window, widened so the pulse starts at least 4 FWHM after ``t_start``."""
        t_start = min(t_start, pulse.t_center - 4.0 * pulse.fwhm)
        # snap to a multiple of dt so grids of different pulses share sample times
        t_start = math.floor(round(t_start / dt, 9)) * dt
        return cls(t_start=t_start, t_end=t_end, dt=dt)


def reference_params(**overrides) -> SystemParams:
    """g/2pi = 25 GHz, kappa/2pi = 29 GHz, gamma/2pi = 1 GHz, on resonance."""
    values = dict(g=25.0, kappa=29.0, gamma=1.0)
    values.update(overrides)
    return SystemParams.from_ghz(**values)
