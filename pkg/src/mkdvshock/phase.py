"""Zero-genus phase machinery for the plateau region ``xi < -c^2/2``.

Contents: the linear phase ``theta``, the plateau g-function ``g_c``, the
stationary point ``lambda(xi)``, the scalar functions ``nu``, ``chi`` and
``delta``, the solution ``F`` of the scalar RH problem on ``[ic, -ic]``,
and signature tables of ``Im theta``, ``Im g_c`` and ``Im g``.

Throughout, ``xi = x / (12 t)``.
"""

from dataclasses import dataclass
import io
import math

import numpy as np

from .errors import ContractError, DomainError
from .quadrature import (
    QuadratureSpec,
    gauss_legendre_graded,
    integrate,
    principal_value,
)
from .scattering import (
    ShockParams,
    Side,
    X,
    a_coeff,
    abs_r_squared_real,
    log_a_squared_real,
    r_coeff,
)

__all__ = [
    "Xi",
    "SignGrid",
    "theta_phase",
    "g_c",
    "lambda_stationary",
    "nu",
    "chi",
    "delta_fn",
    "log_delta_imag_axis",
    "F_plateau",
    "symmetry_integrals",
    "signature_grid",
]


@dataclass(frozen=True)
class Xi:
    """Self-similar variable ``xi = x/(12 t)`` with region helpers."""

    xi: float

    @classmethod
    def from_xt(cls, x, t):
        if not t > 0:
            raise DomainError("t must be positive")
        return cls(x / (12.0 * t))

    def region(self, c=1.0):
        if self.xi < -0.5 * c * c:
            return "plateau"
        if self.xi < c * c / 3.0:
            return "elliptic"
        return "vanishing"

    def __float__(self):
        return float(self.xi)


def _xi(xi):
    return float(xi.xi) if isinstance(xi, Xi) else float(xi)


def _params(params):
    if params is None:
        return ShockParams()
    if isinstance(params, ShockParams):
        return params
    return ShockParams(float(params))


def theta_phase(k, xi):
    """``theta(k, xi) = 4k^3 + 12 k xi``."""
    k = np.asarray(k, dtype=complex) if not np.isscalar(k) else complex(k)
    return 4.0 * k ** 3 + 12.0 * _xi(xi) * k


def g_c(k, xi, params=None, side=None):
    """Plateau g-function ``(4k^2 - 2c^2 + 12 xi) X(k)``.

    Points on ``(-ic, ic)`` need ``side``; ``g_c`` changes sign across the cut.
    """
    p = _params(params)
    kk = complex(k.k) if hasattr(k, "side") else k
    poly = 4.0 * np.asarray(kk, dtype=complex) ** 2 - 2.0 * p.c ** 2 + 12.0 * _xi(xi)
    val = poly * X(k, p, side)
    return complex(val) if np.ndim(val) == 0 else val


def lambda_stationary(xi, params=None):
    """``lambda(xi) = sqrt(-xi - c^2/2)``; zero of ``dg_c`` besides ``k = 0``."""
    p = _params(params)
    v = -_xi(xi) - 0.5 * p.c ** 2
    if v < 0:
        raise DomainError(
            f"xi={_xi(xi)!r} is not in the plateau region xi <= -c^2/2", edge="xi_minus"
        )
    return math.sqrt(v)


def _require_plateau(xi, p):
    lam = lambda_stationary(xi, p)
    if lam == 0.0:
        raise DomainError("xi must lie strictly inside the plateau region", edge="xi_minus")
    return lam


def nu(xi, params=None):
    """``nu = ln(1 + |r(lambda)|^2) / (2 pi)``; never negative."""
    p = _params(params)
    lam = lambda_stationary(xi, p)
    if lam > 0:
        r2 = abs(r_coeff(lam, p)) ** 2
    else:
        r2 = abs_r_squared_real(0.0, p)
    return math.log1p(r2) / (2.0 * math.pi)


def _gfun(s, lam, p):
    """``ln((1 + |r(s)|^2)/(1 + |r(lambda)|^2))`` for real ``s``."""
    return np.log1p(abs_r_squared_real(s, p)) - math.log1p(abs_r_squared_real(lam, p))


def _log_chi(k, lam, p, side):
    """``log chi`` for scalar complex ``k``; ``side`` selects real-segment boundary values."""
    quad = p.quad
    g = lambda s: _gfun(s, lam, p)
    if side is not Side.OFF:
        x0 = k.real
        if k.imag != 0.0 or not -lam < x0 < lam:
            raise ContractError("side-tagged delta points must lie on (-lambda, lambda)")
        # PV int (g(s)-g(x0))/(s-x0) ds + g(x0) log((lam-x0)/(lam+x0)); kink of |r|^2 at 0
        g0 = float(g(x0))
        f = lambda s: (g(s) - g0) / (s - x0)
        pts = sorted({-lam, 0.0, x0, lam})
        pv = sum(integrate(f, a, b, quad) for a, b in zip(pts[:-1], pts[1:]) if b > a)
        pv += g0 * math.log((lam - x0) / (lam + x0))
        sign = 1.0 if side is Side.PLUS else -1.0
        return pv / (2j * math.pi) + sign * 0.5 * g0
    if k.imag == 0.0 and -lam <= k.real <= lam:
        raise ContractError("delta on [-lambda, lambda] needs a side tag")
    s_star = min(max(k.real, -lam), lam)
    g0 = float(g(s_star))
    f = lambda s: (g(s) - g0) / (s - k)
    pts = sorted({-lam, 0.0, s_star, lam})
    total = sum(integrate(f, a, b, quad) for a, b in zip(pts[:-1], pts[1:]) if b > a)
    total += g0 * (np.log(lam - k) - np.log(-lam - k))
    return total / (2j * math.pi)


def chi(k, xi, params=None, side=None):
    """``chi(k) = exp((1/2 pi i) int_{-lambda}^{lambda} ln((1+|r(s)|^2)/(1+|r(lambda)|^2)) ds/(s-k))``.

    On ``(-lambda, lambda)`` pass ``side=Side.PLUS`` (from above) or
    ``Side.MINUS`` (from below); the Cauchy integral is evaluated with the
    singular part subtracted analytically.
    """
    p = _params(params)
    lam = _require_plateau(xi, p)
    side = Side.OFF if side is None else Side(side)
    return complex(np.exp(_log_chi(complex(k), lam, p, side)))


def delta_fn(k, xi, params=None, side=None):
    """``delta(k) = ((k - lambda)/(k + lambda))**(-i nu) * chi(k)``.

    Analytic off ``[-lambda, lambda]``.  There ``side`` picks the boundary
    value from above (``PLUS``) or below (``MINUS``), and
    ``delta_+ = delta_- (1 + |r|^2)``.
    """
    p = _params(params)
    lam = _require_plateau(xi, p)
    side = Side.OFF if side is None else Side(side)
    k = complex(k)
    n = nu(xi, p)
    if side is Side.OFF:
        log_ratio = np.log((k - lam) / (k + lam))
    else:
        if k.imag != 0.0 or not -lam < k.real < lam:
            raise ContractError("side-tagged delta points must lie on (-lambda, lambda)")
        arg = math.pi if side is Side.PLUS else -math.pi
        log_ratio = complex(math.log((lam - k.real) / (lam + k.real)), arg)
    return complex(np.exp(-1j * n * log_ratio + _log_chi(k, lam, p, side)))


def log_delta_imag_axis(y, xi, params=None):
    """``log delta(iy)`` for real ``y != 0`` (vectorized); the values are real.

    ``delta(iy) > 0`` and ``delta(-iy) = 1/delta(iy)``, so the result is odd
    in ``y`` with a jump at ``y = 0`` of size ``ln 2``.
    """
    p = _params(params)
    lam = _require_plateau(xi, p)
    y = np.asarray(y, dtype=float)
    n = nu(xi, p)
    ay = np.abs(y)
    sgn = np.sign(y)
    # ((iy - lam)/(iy + lam))^{-i nu} = exp(nu * (pi - 2 arctan(|y|/lam))) for y > 0
    part_nu = sgn * n * (math.pi - 2.0 * np.arctan(ay / lam))
    # log chi(iy) = (y/pi) int_0^lam g(s)/(s^2 + y^2) ds, with g(0) split off
    s, w = gauss_legendre_graded(lam)
    gs = _gfun(s, lam, p)
    g0 = float(_gfun(0.0, lam, p))
    yy = np.atleast_1d(y)
    smooth = ((gs - g0)[None, :] / (s[None, :] ** 2 + yy[:, None] ** 2)) @ w
    part_chi = (yy * smooth).reshape(y.shape) / math.pi + g0 * np.arctan2(lam, ay) * sgn / math.pi
    out = part_nu + part_chi
    return float(out) if out.ndim == 0 else out


def _I1(k, p):
    """``int_0^inf log a^2(s)/X(s) * 2s/(s^2 - k^2) ds`` (fold of the integral over R)."""
    c = p.c

    def f(s):
        return log_a_squared_real(s, p) / np.hypot(s, c) * 2.0 * s / (s * s - k * k)

    brk = max(abs(k), c)
    return integrate(f, 0.0, brk, p.quad) + integrate(f, brk, math.inf, p.quad)


def _L(y, xi, p):
    return -2.0 * log_delta_imag_axis(y, xi, p)


def _I2(k, xi, p):
    """Upward ``int_{-ic}^{ic} log delta^{-2}(s)/((s-k) X_+(s)) ds`` folded onto ``(0, c)``."""
    c = p.c

    def f(y):
        return _L(y, xi, p) * 2.0 * y / ((y * y + k * k) * np.sqrt(c * c - y * y))

    spec = p.quad
    return integrate(f, 0.0, 0.5 * c, spec) + integrate(f, 0.5 * c, c, spec, singular=(False, True))


def _I2_pv(y0, xi, p):
    """Principal value of ``_I2`` at ``k = i y0`` on the cut (even in ``y0``)."""
    c = p.c
    y0 = abs(y0)

    def psi(y):
        return _L(y, xi, p) * 2.0 * y / ((y + y0) * np.sqrt(c * c - y * y))

    return principal_value(psi, 0.0, c, y0, p.quad, singular=(False, True))


def F_plateau(k, xi, params=None, side=None):
    """Solution of the scalar RH problem ``F_- F_+ = h delta^{-2}`` on ``[ic, -ic]``.

    ``F = F_aux / a`` in the upper half-plane and ``a F_aux`` in the lower one.
    Points on the cut ``(-ic, ic) minus {0}`` need ``side`` (``PLUS`` is the
    limit from ``Re k > 0``); off the cut ``k`` must not be real.
    """
    p = _params(params)
    _require_plateau(xi, p)
    side = Side.OFF if side is None else Side(side)
    k = complex(k)
    two_pi_i = 2j * math.pi
    if side is Side.OFF:
        if k.imag == 0.0:
            raise ContractError("F_plateau is not defined on the real axis")
        if k.real == 0.0 and abs(k.imag) < p.c:
            raise ContractError("point on the cut needs a side tag")
        log_faux = X(k, p) * (_I1(k, p) - _I2(k, xi, p)) / two_pi_i
        a = a_coeff(k, p)
    else:
        if k.real != 0.0 or not 0.0 < abs(k.imag) < p.c:
            raise ContractError("side-tagged F points must lie on the open cut minus 0")
        y0 = k.imag
        phi = _L(y0, xi, p) / math.sqrt(p.c ** 2 - y0 ** 2)
        c2 = _I2_pv(y0, xi, p) / two_pi_i
        # upward orientation: the MINUS side (Re k < 0) is on the left
        c2 += 0.5 * phi if side is Side.MINUS else -0.5 * phi
        log_faux = X(k, p, side) * (_I1(k, p) / two_pi_i - c2)
        a = a_coeff(k, p, side)
    faux = np.exp(log_faux)
    return complex(faux / a if k.imag > 0 else faux * a)


def symmetry_integrals(xi, params=None):
    """Half-line pieces of the two integrals that make ``F(inf) = 1``.

    Returns ``(real_neg, real_pos, cut_neg, cut_pos)`` with
    ``int_R log a^2/X = real_neg + real_pos`` and
    ``int_{-ic}^{ic} log delta^{-2}/X_+ = cut_neg + cut_pos`` (both zero).
    """
    p = _params(params)
    c = p.c
    spec = p.quad

    def real(s):
        return log_a_squared_real(s, p) / X(s.astype(complex), p).real

    real_neg = integrate(real, -math.inf, 0.0, spec)
    real_pos = integrate(real, 0.0, math.inf, spec)

    # s = iy, ds = i dy, X_+(iy) = sqrt(c^2 - y^2)
    def cut(y):
        return 1j * _L(y, xi, p) / np.sqrt(c * c - y * y)

    cut_neg = integrate(cut, -c, 0.0, spec, singular=(True, False))
    cut_pos = integrate(cut, 0.0, c, spec, singular=(False, True))
    return real_neg, real_pos, cut_neg, cut_pos


@dataclass
class SignGrid:
    """Signs of ``Im phase`` on a rectangular grid.

    ``values[j, i]`` belongs to ``re[i] + 1j*im[j]``; rows run from
    ``im_min`` upwards.
    """

    re_range: tuple
    im_range: tuple
    resolution: tuple
    values: np.ndarray
    phase: str = "theta"
    xi: float = float("nan")

    def __post_init__(self):
        nx, ny = self.resolution
        if nx < 2 or ny < 2:
            raise DomainError("sign grids need at least 2x2 nodes")
        if self.values.shape != (ny, nx):
            raise ContractError("values shape does not match resolution")

    @property
    def re(self):
        return _axis(*self.re_range, self.resolution[0])

    @property
    def im(self):
        return _axis(*self.im_range, self.resolution[1])

    def to_csv(self, fh=None):
        """Write the grid as CSV; returns the text when ``fh`` is None."""
        out = io.StringIO() if fh is None else fh
        (r0, r1), (i0, i1) = self.re_range, self.im_range
        nx, ny = self.resolution
        out.write(
            f"re_min={r0!r},re_max={r1!r},im_min={i0!r},im_max={i1!r},nx={nx},ny={ny}\n"
        )
        for row in self.values:
            out.write(",".join(str(int(v)) for v in row) + "\n")
        if fh is None:
            return out.getvalue()
        return None

    @classmethod
    def from_csv(cls, text):
        lines = text.strip().splitlines()
        head = dict(item.split("=") for item in lines[0].split(","))
        vals = np.array([[int(v) for v in ln.split(",")] for ln in lines[1:]], dtype=np.int8)
        return cls(
            (float(head["re_min"]), float(head["re_max"])),
            (float(head["im_min"]), float(head["im_max"])),
            (int(head["nx"]), int(head["ny"])),
            vals,
        )


def _axis(lo, hi, n):
    ax = np.linspace(lo, hi, n)
    if lo == -hi:
        # exact mirror symmetry so conjugate nodes coincide
        ax = 0.5 * (ax - ax[::-1])
    return ax


def _phase_values(which, kk, xi, p):
    if which == "theta":
        return theta_phase(kk, xi)
    if which == "gc":
        lambda_stationary(xi, p)
        out = np.empty(kk.shape, dtype=complex)
        on_cut = (kk.real == 0.0) & (np.abs(kk.imag) < p.c)
        out[~on_cut] = g_c(kk[~on_cut], xi, p)
        if on_cut.any():
            out[on_cut] = g_c(kk[on_cut], xi, p, Side.PLUS)
        return out
    if which == "g":
        from .modulation import g_elliptic

        return g_elliptic(kk, xi, p, grid=True)
    raise DomainError(f"unknown phase {which!r}; expected theta, gc or g")


def signature_grid(which, xi, params=None, re_range=(-2.0, 2.0), im_range=(-2.0, 2.0),
                   resolution=(81, 81), zero_rel_tol=1e-9, zero_abs_tol=1e-10):
    """Sign table of ``Im phase`` for ``which`` in ``{"theta", "gc", "g"}``.

    A node gets ``0`` when ``|Im phase| <= zero_rel_tol * |phase|`` or
    ``|Im phase| <= zero_abs_tol * c^3`` (the phases vanish at some branch
    points, where a relative test alone would sign round-off).  On the
    cut, ``gc`` and ``g`` use their ``PLUS`` boundary values.
    """
    p = _params(params)
    nx, ny = resolution
    if nx < 2 or ny < 2:
        raise DomainError("sign grids need at least 2x2 nodes")
    re = _axis(*re_range, nx)
    im = _axis(*im_range, ny)
    kk = re[None, :] + 1j * im[:, None]
    vals = np.asarray(_phase_values(which, kk, xi, p))
    im_part = vals.imag
    zero = np.abs(im_part) <= np.maximum(zero_rel_tol * np.abs(vals), zero_abs_tol * p.c ** 3)
    signs = np.where(zero, 0, np.sign(im_part)).astype(np.int8)
    return SignGrid(tuple(re_range), tuple(im_range), (nx, ny), signs, which, _xi(xi))
