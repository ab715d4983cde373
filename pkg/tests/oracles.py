"""Independent reference solutions used to freeze expected values.

These deliberately avoid the package's integrator and closed forms:
the linear two-mode response is a direct quadrature of the
matrix-exponential convolution integral.
"""
import numpy as np
from scipy.integrate import quad_vec
from scipy.linalg import expm
from scipy.optimize import minimize_scalar


def linear_response(g, kappa, gamma, omega0, fwhm, t, delta_c=0.0, delta_a=0.0):
    """<a>(t), <sigma>(t) of the linear model by quadrature (rad/ps, ps)."""
    s = fwhm / (2 * np.sqrt(2 * np.log(2)))
    gen = np.array([[-(kappa + 1j * delta_c), g], [-g, -(gamma + 1j * delta_a)]])
    kick = np.array([-1.0, 0.0])

    def integrand(tp):
        return expm(gen * (t - tp)) @ kick * omega0 * np.exp(-tp ** 2 / (2 * s * s))

    lo = -12 * s
    if t <= lo:
        return np.zeros(2, dtype=complex)
    val, _ = quad_vec(integrand, lo, t, epsabs=1e-14, epsrel=1e-12)
    return val


def photon_peak(bracket, **kw):
    """Time of the local maximum of |<a>|^2 inside ``bracket``."""
    res = minimize_scalar(lambda t: -abs(linear_response(t=t, **kw)[0]) ** 2,
                          bounds=bracket, method="bounded", options={"xatol": 1e-6})
    return res.x
