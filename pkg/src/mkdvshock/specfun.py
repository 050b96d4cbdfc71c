"""Special functions: complete elliptic K, Jacobi dn and the genus-one theta series.

Theta convention
----------------
Throughout the package the theta function is

    Theta(z, tau) = sum_m exp(tau*m**2/2 + z*m),    tau < 0 real,

with period ``2*pi*i`` in ``z`` and quasi-period ``tau``.  In classical
notation, with nome ``q = exp(tau/2)`` and ``z = 2*i*v``:

    ====================  ==========================
    this package          classical
    ====================  ==========================
    Theta(2iv, tau)       theta_3(v | q)
    Theta(2iv + pi*i)     theta_4(v | q)
    Theta(2iv + tau/2)    q**(-1/4) e^{-iv} theta_2(v | q)
    ====================  ==========================

For ``tau = -2*pi*K(1-m)/K(m)`` the nome is the one of parameter ``m``.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ConvergenceError, DomainError
from .quadrature import QuadratureSpec, integrate, integrate_with_error

__all__ = [
    "ThetaParams",
    "QuadratureSpec",
    "complete_elliptic_K",
    "jacobi_dn",
    "theta",
    "theta_poisson",
    "log_theta",
    "theta_term_count",
    "integrate",
    "integrate_with_error",
]

_LANDEN_DEPTH = 32
_TWO_PI = 2.0 * math.pi


def _check_parameter(m):
    if not (0.0 <= m < 1.0):
        raise DomainError(f"elliptic parameter m={m!r} outside [0, 1)")


def _agm(a, b):
    for _ in range(64):
        if abs(a - b) <= 1e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def complete_elliptic_K(m):
    """Complete elliptic integral of the first kind, parameter convention.

    ``K(m) = int_0^{pi/2} dtheta / sqrt(1 - m sin^2 theta)``, evaluated by
    the arithmetic-geometric mean.
    """
    m = float(m)
    _check_parameter(m)
    return math.pi / (2.0 * _agm(1.0, math.sqrt(1.0 - m)))


def jacobi_dn(u, m):
    """Jacobi ``dn(u | m)`` by descending Landen (AGM) recursion.

    ``u`` may be a scalar or an array.  The argument is first reduced
    modulo the real period ``2K(m)``.
    """
    m = float(m)
    _check_parameter(m)
    u_arr = np.asarray(u, dtype=float)
    if m == 0.0:
        out = np.ones_like(u_arr)
        return float(out) if out.ndim == 0 else out

    period = 2.0 * complete_elliptic_K(m)
    u_red = u_arr - period * np.round(u_arr / period)

    a, b, c = [1.0], [math.sqrt(1.0 - m)], [math.sqrt(m)]
    for _ in range(_LANDEN_DEPTH):
        if abs(c[-1]) <= 4e-16 * a[-1]:
            break
        a.append(0.5 * (a[-1] + b[-1]))
        b.append(math.sqrt(a[-2] * b[-1]))
        c.append(0.5 * (a[-2] - b[-2]))
    else:
        raise ConvergenceError("Landen recursion did not converge", estimate=None)
    n = len(a) - 1
    phi = (2.0 ** n) * a[n] * u_red
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(c[j] / a[j] * np.sin(phi)))
    # phi = am(u); dn^2 = cos^2 + (1 - m) sin^2 has no cancellation as m -> 1
    sn, cn = np.sin(phi), np.cos(phi)
    out = np.sqrt(cn * cn + (1.0 - m) * sn * sn)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ThetaParams:
    """Parameters of ``Theta(., tau)``; ``tau`` must be strictly negative."""

    tau: float
    truncation_tol: float = 1e-17

    def __post_init__(self):
        if not (self.tau < 0.0):
            raise DomainError(f"theta needs tau < 0, got {self.tau!r}")
        if not (0.0 < self.truncation_tol < 1.0):
            raise DomainError("truncation_tol must lie in (0, 1)")


def _as_params(params):
    if isinstance(params, ThetaParams):
        return params
    return ThetaParams(float(params))


def _cutoff(tau, shift, tol):
    """Largest |m| that survives truncation for |Re z| <= shift."""
    a = -0.5 * tau
    # a*m^2 - shift*m > -ln(tol)  =>  droppable
    big = -math.log(tol)
    return int(math.ceil((shift + math.sqrt(shift * shift + 4.0 * a * big)) / (2.0 * a)))


def _reduce(z, tau):
    """Shift ``z`` into the fundamental cell; return (z', log factor)."""
    z = complex(z)
    y = z.imag - _TWO_PI * round(z.imag / _TWO_PI)
    x = z.real
    l = round(x / tau)
    xr = x - l * tau
    # Theta(z) = Theta(z - l tau) * exp(tau l^2 / 2 - z l), using the reduced imaginary part
    zr_full = complex(x, y)
    log_factor = 0.5 * tau * l * l - zr_full * l
    return complex(xr, y), log_factor


def _direct_sum(z, tau, tol):
    M = _cutoff(tau, abs(z.real), tol)
    m = np.arange(-M, M + 1)
    return np.exp(0.5 * tau * m * m + z * m).sum(), 2 * M + 1


def _log_theta_reduced(z, tau, tol, method):
    if method == "direct":
        s, _ = _direct_sum(z, tau, tol)
        return np.log(s)
    # Poisson resummation, tau* = 4 pi^2 / tau
    tau_star = 4.0 * math.pi ** 2 / tau
    w = _TWO_PI * 1j * z / tau
    s, _ = _direct_sum(complex(w), tau_star, tol)
    return 0.5 * math.log(_TWO_PI / -tau) - z * z / (2.0 * tau) + np.log(s)


def _select(tau, method):
    if method == "auto":
        return "direct" if tau <= -_TWO_PI else "poisson"
    if method not in ("direct", "poisson"):
        raise DomainError(f"unknown theta method {method!r}")
    return method


def log_theta(z, params, method="auto"):
    """Principal-branch-free logarithm of ``Theta(z, tau)`` (complex).

    The imaginary part is only meaningful modulo ``2*pi``.  Working in logs
    avoids overflow when ``z`` has a large real part.
    """
    p = _as_params(params)
    zr, log_factor = _reduce(z, p.tau)
    return _log_theta_reduced(zr, p.tau, p.truncation_tol, _select(p.tau, method)) + log_factor


def theta(z, params, method="auto"):
    """``Theta(z, tau) = sum_m exp(tau m^2/2 + z m)``.

    ``method="auto"`` sums the series directly for ``tau <= -2 pi`` and the
    Poisson-resummed series otherwise; ``"direct"`` or ``"poisson"`` forces
    one of them.  ``z`` is scalar; use ``np.vectorize`` for arrays.
    """
    return complex(np.exp(log_theta(z, params, method)))


def theta_poisson(z, params):
    """Theta via the modular transform ``tau -> 4 pi^2 / tau``."""
    return theta(z, params, method="poisson")


def theta_term_count(z, params, method):
    """Number of series terms kept by ``method`` for argument ``z``."""
    p = _as_params(params)
    zr, _ = _reduce(z, p.tau)
    if _select(p.tau, method) == "direct":
        return _direct_sum(zr, p.tau, p.truncation_tol)[1]
    w = _TWO_PI * 1j * zr / p.tau
    return _direct_sum(complex(w), 4.0 * math.pi ** 2 / p.tau, p.truncation_tol)[1]
