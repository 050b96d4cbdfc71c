"""Genus-one quantities of the elliptic region ``-c^2/2 < xi < c^2/3``.

The branch point ``id`` and the double zero ``i mu`` of ``dg`` solve

    F(mu, d) = int_0^1 (mu^2 - l^2 d^2) sqrt((1 - l^2)/(c^2 - l^2 d^2)) dl = 0,
    c^2/2 + xi = mu^2 + d^2/2.

On the surface ``w^2 = (k^2 + c^2)(k^2 + d^2)`` (cuts ``[id, ic]`` and
``[-ic, -id]``, ``w > 0`` on the real axis) the a-cycle runs through the
gap ``(-id, id)`` and the b-cycle encircles ``[id, ic]``.  With

    J_gap = int_0^d dy / sqrt((c^2-y^2)(d^2-y^2)) = K(d^2/c^2)/c,
    J_cut = int_d^c dy / sqrt((c^2-y^2)(y^2-d^2)) = K(1-d^2/c^2)/c,

the periods of ``dk/w`` are ``-4i J_gap`` and ``2 J_cut``, and
``tau = -pi J_cut/J_gap = -2 pi K(1-m)/K(m)`` with ``m = 4cd/(c+d)^2``.
"""

from dataclasses import asdict, dataclass
import functools
import hashlib
import json
import math
import os

import numpy as np
from scipy.optimize import brentq

from .errors import ContractError, DomainError
from .quadrature import QuadratureSpec, gauss_legendre_graded, integrate
from .scattering import Degenerate, ShockParams, Side, log_a_squared_real

__all__ = [
    "ModulationState",
    "SurfaceSpec",
    "F_constraint",
    "mu_of_d",
    "d_of_xi",
    "resolve_state",
    "clear_state_cache",
    "w_surface",
    "g_elliptic",
    "B_g_of_xi",
    "periods",
    "e0_and_B_Omega",
    "Delta_of_xi",
    "abel_map",
    "lattice_reduce",
    "g_at_ic",
    "Omega",
    "U_phase",
    "modulation_table",
    "write_modulation_table",
    "TABLE_COLUMNS",
]


def _params(params):
    if params is None:
        return ShockParams()
    if isinstance(params, ShockParams):
        return params
    return ShockParams(float(params))


def _edges(c):
    return -0.5 * c * c, c * c / 3.0


# ---------------------------------------------------------------- modulation equations

def _theta_moments(d, p):
    """``(int cos^2/R, int sin^2 cos^2/R)`` over ``[0, pi/2]``, ``R = sqrt(c^2 - d^2 sin^2)``.

    The substitution ``l = sin(theta)`` removes the square-root endpoint of
    the defining integrals.
    """
    c = p.c

    def root(th):
        return np.sqrt(c * c - (d * np.sin(th)) ** 2)

    m0 = integrate(lambda th: np.cos(th) ** 2 / root(th), 0.0, 0.5 * math.pi, p.quad)
    m2 = integrate(
        lambda th: (np.sin(th) * np.cos(th)) ** 2 / root(th), 0.0, 0.5 * math.pi, p.quad
    )
    return m0, m2


def _check_d(d, p, allow_c=False):
    if d < 0 or d > p.c or (d == p.c and not allow_c):
        raise DomainError(f"d={d!r} outside [0, c) for c={p.c!r}")


def F_constraint(mu, d, params=None):
    """``F(mu, d) = int_0^1 (mu^2 - l^2 d^2) sqrt((1-l^2)/(c^2 - l^2 d^2)) dl``."""
    p = _params(params)
    if mu < 0:
        raise DomainError("mu must be nonnegative")
    _check_d(d, p)
    m0, m2 = _theta_moments(d, p)
    return mu * mu * m0 - d * d * m2


def mu_of_d(d, params=None):
    """Root ``mu(d)`` of ``F(mu, d) = 0``; ``mu(0) = 0`` and ``mu(c) = c/sqrt(3)``."""
    p = _params(params)
    _check_d(d, p, allow_c=True)
    if d == 0.0:
        return 0.0
    if d == p.c:
        return p.c / math.sqrt(3.0)
    m0, m2 = _theta_moments(d, p)
    return d * math.sqrt(m2 / m0)


def _xi_of_d(d, p):
    mu = mu_of_d(d, p)
    return mu * mu + 0.5 * d * d - 0.5 * p.c ** 2


def d_of_xi(xi, params=None, xtol=1e-14):
    """Branch point ``d(xi)`` in ``(0, c)`` from ``mu^2(d) + d^2/2 = c^2/2 + xi``.

    The left side increases strictly from 0 to ``5c^2/6``, so a bracketed
    root (Brent's method) is unique.
    """
    p = _params(params)
    lo, hi = _edges(p.c)
    if not xi > lo:
        raise DomainError(f"xi={xi!r} at or left of the elliptic region", edge="xi_minus")
    if not xi < hi:
        raise DomainError(f"xi={xi!r} at or right of the elliptic region", edge="xi_plus")
    return brentq(lambda d: _xi_of_d(d, p) - xi, 0.0, p.c, xtol=xtol * p.c, rtol=1e-15)


# ---------------------------------------------------------------- the surface

@dataclass(frozen=True)
class SurfaceSpec:
    """Genus-one surface ``w^2 = (k^2 + c^2)(k^2 + d^2)``; ``sheet`` is 1 or 2."""

    c: float
    d: float
    sheet: int = 1

    def __post_init__(self):
        if not 0 < self.d < self.c:
            raise DomainError("surface needs 0 < d < c")
        if self.sheet not in (1, 2):
            raise DomainError("sheet must be 1 or 2")


def _xroot(k, a):
    # k sqrt(1 + a^2/k^2), with the radicand factored to stay accurate near +-ia
    with np.errstate(divide="ignore", invalid="ignore"):
        return k * np.sqrt((k - 1j * a) * (k + 1j * a) / (k * k))


def w_surface(k, surface, side=None):
    """``w(k)`` on the given sheet; ``w ~ k^2`` at infinity and ``w(0) = cd``.

    Points on the cuts ``[id, ic]`` or ``[-ic, -id]`` need ``side``
    (``PLUS`` is the limit from ``Re k > 0``).  The gap ``(-id, id)`` is not a
    cut of ``w``.  Exactly at ``+-ic`` or ``+-id`` a :class:`Degenerate` zero
    is returned.
    """
    c, d = surface.c, surface.d
    sign = 1.0 if surface.sheet == 1 else -1.0
    side = Side.OFF if side is None else Side(side)
    scalar = np.ndim(k) == 0
    kk = np.atleast_1d(np.asarray(k, dtype=complex))
    y = kk.imag
    on_axis = kk.real == 0.0
    ay = np.abs(y)
    if scalar and on_axis[0] and (ay[0] == c or ay[0] == d):
        return Degenerate(0.0)
    on_cut = on_axis & (ay > d) & (ay < c)
    in_gap = on_axis & (ay <= d)
    if side is Side.OFF and on_cut.any():
        raise ContractError("point on a cut of w needs a side tag")
    if side is not Side.OFF and not np.all(on_cut):
        raise ContractError("side tags for w are only valid on (id, ic) and (-ic, -id)")
    out = _xroot(kk, c) * _xroot(kk, d)
    if in_gap.any():
        yg = y[in_gap]
        out[in_gap] = np.sqrt((c * c - yg * yg) * (d * d - yg * yg))
    if on_cut.any():
        yc = y[on_cut]
        val = 1j * np.sign(yc) * np.sqrt((c * c - yc * yc) * (yc * yc - d * d))
        out[on_cut] = val if side is Side.PLUS else -val
    out = sign * out
    return complex(out[0]) if scalar else out.reshape(np.shape(k))


# ---------------------------------------------------------------- periods and constants

def _gap_node(phi, c, d):
    # y = d sin(phi); c^2 - y^2 formed without cancellation as d -> c
    sn, cs = np.sin(phi), np.cos(phi)
    return d * sn, np.sqrt((c - d) * (c + d) * sn * sn + c * c * cs * cs)


def _cut_node(phi, c, d):
    # y^2 = d^2 cos^2 + c^2 sin^2: c^2 - y^2 = D cos^2, y^2 - d^2 = D sin^2
    sn, cs = np.sin(phi), np.cos(phi)
    return np.sqrt(d * d * cs * cs + c * c * sn * sn), sn


def _j_gap(c, d, quad, weight=None):
    """``int_0^d weight(y) dy / sqrt((c^2-y^2)(d^2-y^2))`` via ``y = d sin(phi)``."""
    weight = weight or (lambda y: 1.0)

    def f(phi):
        y, root = _gap_node(phi, c, d)
        return weight(y) / root

    return integrate(f, 0.0, 0.5 * math.pi, quad)


def _j_cut(c, d, quad, weight=None):
    """``int_d^c weight(y) dy / sqrt((c^2-y^2)(y^2-d^2))``; the substitution removes both endpoint singularities."""
    weight = weight or (lambda y: 1.0)

    def f(phi):
        y, _ = _cut_node(phi, c, d)
        return weight(y) / y

    return integrate(f, 0.0, 0.5 * math.pi, quad)


def periods(surface, quad=None):
    """``(a_period, b_period, tau)`` of ``dk/w`` by real quadratures.

    ``a_period = -4i J_gap`` (cycle through the gap), ``b_period = 2 J_cut``
    (cycle around ``[id, ic]``), ``tau = 2 pi i b_period / a_period``.
    """
    quad = quad or QuadratureSpec()
    jg = _j_gap(surface.c, surface.d, quad)
    jc = _j_cut(surface.c, surface.d, quad)
    pa = -4j * jg
    pb = 2.0 * jc + 0j
    tau = (2j * math.pi * pb / pa).real
    return pa, pb, tau


def e0_and_B_Omega(surface, quad=None):
    """``e0`` from ``int_0^{id} (s^2 + e0) ds/w = 0`` and the gap jump ``B_Omega``.

    ``B_Omega = Omega_- - Omega_+ = 2 int_d^c (e0 - y^2)/sqrt((c^2-y^2)(y^2-d^2)) dy``.
    """
    quad = quad or QuadratureSpec()
    c, d = surface.c, surface.d
    e0 = _j_gap(c, d, quad, lambda y: y * y) / _j_gap(c, d, quad)
    b_omega = 2.0 * _j_cut(c, d, quad, lambda y: e0 - y * y)
    return e0, b_omega


def _B_g(c, d, mu, quad):
    dd = (c - d) * (c + d)

    def f(phi):
        y, sn = _cut_node(phi, c, d)
        return (y * y - mu * mu) * dd * sn * sn / y

    return 24.0 * integrate(f, 0.0, 0.5 * math.pi, quad)


def _Delta(c, d, p):
    def f(s):
        return log_a_squared_real(s, p) / np.sqrt((s * s + c * c) * (s * s + d * d))

    return (integrate(f, 0.0, c, p.quad) + integrate(f, c, math.inf, p.quad)) / math.pi


@dataclass(frozen=True)
class ModulationState:
    """All xi-dependent genus-one quantities, resolved once per xi."""

    xi: float
    c: float
    d: float
    mu: float
    m: float
    tau: float
    e0: float
    B_g: float
    B_Omega: float
    Delta: float
    J_gap: float
    J_cut: float

    @property
    def surface(self):
        return SurfaceSpec(self.c, self.d)

    @property
    def a_period(self):
        return -4j * self.J_gap

    @property
    def b_period(self):
        return 2.0 * self.J_cut + 0j

    @property
    def riemann_constant(self):
        return 0.5j * math.pi + 0.5 * self.tau

    @property
    def residual(self):
        """``c^2/2 + xi - mu^2 - d^2/2`` (zero at solver tolerance)."""
        return 0.5 * self.c ** 2 + self.xi - self.mu ** 2 - 0.5 * self.d ** 2

    def sign_violations(self):
        """Names of the sign invariants that fail for this state."""
        bad = []
        if not 0 < self.mu < self.d < self.c:
            bad.append("order")
        if not 0 < self.m < 1:
            bad.append("m")
        if not self.tau < 0:
            bad.append("tau")
        if not 0 < self.e0 < self.d ** 2:
            bad.append("e0")
        if not self.B_g > 0:
            bad.append("B_g")
        if not self.B_Omega < 0:
            bad.append("B_Omega")
        if not self.Delta < 0:
            bad.append("Delta")
        return bad


def _compute_state(xi, p):
    c = p.c
    d = d_of_xi(xi, p)
    mu = mu_of_d(d, p)
    jg = _j_gap(c, d, p.quad)
    jc = _j_cut(c, d, p.quad)
    e0, b_omega = e0_and_B_Omega(SurfaceSpec(c, d), p.quad)
    return ModulationState(
        xi=float(xi),
        c=c,
        d=d,
        mu=mu,
        m=4.0 * c * d / (c + d) ** 2,
        tau=-math.pi * jc / jg,
        e0=e0,
        B_g=_B_g(c, d, mu, p.quad),
        B_Omega=b_omega,
        Delta=_Delta(c, d, p),
        J_gap=jg,
        J_cut=jc,
    )


def _spill_path(xi, p):
    root = os.environ.get("MKDV_CACHE_DIR")
    if not root:
        return None
    key = hashlib.sha1(repr((float(xi), p.c, p.quad)).encode()).hexdigest()[:20]
    return os.path.join(root, f"state-{key}.json")


@functools.lru_cache(maxsize=1024)
def _cached_state(xi, p):
    path = _spill_path(xi, p)
    if path and os.path.exists(path):
        with open(path) as fh:
            return ModulationState(**json.load(fh))
    state = _compute_state(xi, p)
    if path:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        tmp = f"{path}.{os.getpid()}.tmp"
        with open(tmp, "w") as fh:
            json.dump(asdict(state), fh)
        os.replace(tmp, path)
    return state


def resolve_state(xi, params=None):
    """Memoized :class:`ModulationState` for ``xi`` (LRU, optional disk spill).

    When ``MKDV_CACHE_DIR`` is set, states are also stored there as JSON
    and reused across processes.
    """
    if isinstance(xi, ModulationState):
        return xi
    return _cached_state(float(xi), _params(params))


def clear_state_cache():
    _cached_state.cache_clear()


def B_g_of_xi(xi, params=None):
    """``B_g = 24 int_d^c (y^2 - mu^2) sqrt((y^2-d^2)/(c^2-y^2)) dy`` (the gap jump of g)."""
    return resolve_state(xi, params).B_g


def Delta_of_xi(xi, params=None):
    """``Delta = (1/2pi) int_R log a^2(s) ds / w(s)``; negative since ``0 < a < 1`` on R."""
    return resolve_state(xi, params).Delta


def U_phase(x, t, params=None):
    """Phase ``U = t B_g(xi) + B_Omega(xi) Delta(xi)`` with ``xi = x/(12t)``."""
    if not t > 0:
        raise DomainError("t must be positive")
    s = resolve_state(x / (12.0 * t), params)
    return t * s.B_g + s.B_Omega * s.Delta


# ---------------------------------------------------------------- Abelian integrals

def _w_shifted(z0, delta, state):
    """``w(z0 + delta)`` off the cuts, with each radicand factor formed from ``delta``.

    When ``z0`` is a branch point, ``z0 + delta - z0`` is never rounded, so
    the inverse square-root behaviour at ``z0`` survives the substitution
    ``delta ~ u^2`` down to ``u ~ 1e-150``.
    """
    c, d = state.c, state.d
    s = z0 + delta
    s2 = s * s
    fc = ((z0 - 1j * c) + delta) * ((z0 + 1j * c) + delta)
    fd = ((z0 - 1j * d) + delta) * ((z0 + 1j * d) + delta)
    return s * np.sqrt(fc / s2) * s * np.sqrt(fd / s2)


def _segment(h, z0, z1, state, quad, sing_start=False, sing_end=False):
    """``int h(s, w(s)) ds`` along the straight segment from ``z0`` to ``z1``."""
    if sing_end and not sing_start:
        return -_segment(h, z1, z0, state, quad, True, False)
    if sing_start and sing_end:
        mid = 0.5 * (z0 + z1)
        return (_segment(h, z0, mid, state, quad, True, False)
                - _segment(h, z1, mid, state, quad, True, False))
    dz = z1 - z0

    def f(t):
        delta = dz * t
        return h(z0 + delta, _w_shifted(z0, delta, state)) * dz

    return integrate(f, 0.0, 1.0, quad, singular=(sing_start, False))


def _path_from_ic(h, k, state, side, quad):
    """``int_{ic}^k h(s, w(s)) ds`` along a path avoiding the segment ``(-ic, ic)``.

    The path leaves ``ic`` horizontally into the half-plane selected by
    ``side`` (or by ``Re k``), runs vertically to ``Im k`` and then
    horizontally to ``k``.
    """
    c, d = state.c, state.d
    ic = 1j * c
    k = complex(k)
    if k == ic:
        return 0.0 + 0j
    if side is Side.OFF and k.real == 0.0 and k.imag > c:
        return _segment(h, ic, k, state, quad, sing_start=True)
    if side is Side.OFF and k.real == 0.0 and k.imag >= -c:
        raise ContractError("point on [-ic, ic] needs a side tag")
    if side is Side.OFF:
        h_re = math.copysign(max(abs(k.real), 0.5 * c), k.real if k.real != 0.0 else 1.0)
    else:
        if k.real != 0.0 or abs(k.imag) > c:
            raise ContractError("side-tagged path ends must lie on [-ic, ic]")
        h_re = 0.5 * c if side is Side.PLUS else -0.5 * c
    p1 = complex(h_re, c)
    p2 = complex(h_re, k.imag)
    end_sing = k.real == 0.0 and abs(k.imag) in (c, d)
    total = _segment(h, ic, p1, state, quad, sing_start=True)
    if p2 != p1:
        total += _segment(h, p1, p2, state, quad)
    if k != p2:
        total += _segment(h, p2, k, state, quad, sing_end=end_sing)
    return total


def _ray_from_ic(h, state, quad):
    """``int_{ic}^{i inf} h(s, w(s)) ds`` along the axis, ``s = ic (1 + x)``."""
    ic = 1j * state.c

    def f(x):
        delta = ic * x
        return h(ic + delta, _w_shifted(ic, delta, state)) * ic

    return integrate(f, 0.0, math.inf, quad, singular=(True, False))


def _ray_to_infinity(h, k, state, quad):
    """``int_k^inf h(s, w(s)) ds`` along ``s = k/u``; ``h = O(s^-2)`` is required."""
    k = complex(k)

    def f(u):
        s = k / u
        return h(s, _w_shifted(0.0, s, state)) * k / (u * u)

    return integrate(f, 0.0, 1.0, quad)


def abel_map(k, xi, params=None, side=None, reduce=False):
    """``A(k) = int_{ic}^k omega`` on the first sheet, ``omega = 2 pi i dk / (w a_period)``.

    ``k = inf`` is allowed.  Points on ``[-ic, ic]`` need ``side``.  With
    ``reduce=True`` the value is brought into the cell
    ``-pi < Im <= pi``, ``|Re| <= -tau/2``.
    """
    p = _params(params)
    state = resolve_state(xi, p)
    side = Side.OFF if side is None else Side(side)
    scale = 2j * math.pi / state.a_period
    h = lambda s, w: 1.0 / w
    k = complex(k)
    if np.isinf(abs(k)):
        val = _ray_from_ic(h, state, p.quad)
    elif side is Side.OFF and abs(k) > 2.0 * state.c:
        val = _ray_from_ic(h, state, p.quad) - _ray_to_infinity(h, k, state, p.quad)
    else:
        val = _path_from_ic(h, k, state, side, p.quad)
    val = complex(scale * val)
    if reduce:
        val = lattice_reduce(val, state.tau)
    return val


def lattice_reduce(z, tau):
    """Representative of ``z`` modulo ``2 pi i Z + tau Z``."""
    z = complex(z)
    im = z.imag - 2.0 * math.pi * math.floor((z.imag + math.pi) / (2.0 * math.pi))
    if im <= -math.pi:
        im += 2.0 * math.pi
    re = z.real - tau * round(z.real / tau)
    return complex(re, im)


def Omega(k, xi, params=None, side=None):
    """``Omega(k) = int_{ic}^k (s^2 + e0) ds / w(s)``; ``Omega(k) = k + O(1/k)``."""
    p = _params(params)
    state = resolve_state(xi, p)
    side = Side.OFF if side is None else Side(side)
    e0 = state.e0
    return complex(_path_from_ic(lambda s, w: (s * s + e0) / w, k, state, side, p.quad))


def _binom_tail(x, start):
    """``sum_{n >= start} binom(-1/2, n) x^n`` for ``|x| < 1/4``."""
    coef = 1.0
    for n in range(1, start):
        coef *= (-0.5 - (n - 1)) / n
    total = np.zeros_like(x)
    power = x ** start
    for n in range(start, 90):
        coef *= (-0.5 - (n - 1)) / n
        add = coef * power
        total = total + add
        if np.all(np.abs(add) <= 1e-18 * np.abs(total)):
            break
        power = power * x
    return total


def _dg_minus_dtheta(s, state):
    """``g'(s) - theta'(s)`` without cancellation, using the modulation relation.

    With ``sigma = s^2 + d^2``, ``D = c^2 - d^2`` and
    ``beta = (1 + D/sigma)^(-1/2) = X_d/X_c``:
    ``g' - theta' = 12 [sigma (beta - 1 + D/(2 sigma)) + (mu^2 - d^2)(beta - 1)]``.
    Valid for ``|s| > c``, where ``|D/sigma| < 1`` and no cut intervenes.
    """
    c, d, mu = state.c, state.d, state.mu
    s = np.asarray(s, dtype=complex)
    sigma = s * s + d * d
    x = (c * c - d * d) / sigma
    small = np.abs(x) < 0.25
    r2 = np.empty_like(x)
    bm1 = np.empty_like(x)
    if small.any():
        xs = x[small]
        tail = _binom_tail(xs, 2)
        r2[small] = tail
        bm1[small] = -0.5 * xs + tail
    if (~small).any():
        xl = x[~small]
        b = np.expm1(-0.5 * np.log1p(xl))
        bm1[~small] = b
        r2[~small] = b + 0.5 * xl
    return 12.0 * (sigma * r2 + (mu * mu - d * d) * bm1)


def _dg_h(state):
    """``dg/ds = 12 (s^2 + mu^2)(s^2 + d^2)/w`` as an ``h(s, w)`` integrand."""
    mu2, d2 = state.mu ** 2, state.d ** 2
    return lambda s, w: 12.0 * (s * s + mu2) * (s * s + d2) / w


def _dg_minus_dtheta_h(state):
    dg = _dg_h(state)

    def h(s, w):
        s = np.asarray(s, dtype=complex)
        out = np.empty(s.shape, dtype=complex)
        far = np.abs(s) > 1.5 * state.c
        if far.any():
            out[far] = _dg_minus_dtheta(s[far], state)
        if (~far).any():
            sn = s[~far]
            out[~far] = dg(sn, w[~far]) - 12.0 * (sn * sn + state.xi)
        return out

    return h


def g_elliptic(k, xi, params=None, side=None, grid=False):
    """Genus-one g-function ``g(k) = int_{ic}^k dg``, ``dg = 12 (s^2+mu^2)(s^2+d^2) ds / w``.

    Off the segment ``[-ic, ic]`` it is evaluated as
    ``theta(k) - int_k^inf (dg - dtheta)``, which equals the ``ic``-anchored
    integral because ``F(mu, d) = 0``.  On ``[-ic, ic]`` pass ``side``; then
    ``g_pm(k) = g(ic) + int_{ic}^k dg_pm``.  ``grid=True`` evaluates an array
    with a fixed graded Gauss-Legendre rule (for sign tables).
    """
    p = _params(params)
    state = resolve_state(xi, p)
    side = Side.OFF if side is None else Side(side)
    if grid:
        return _g_grid(np.asarray(k, dtype=complex), state, p)
    k = complex(k)
    c = state.c
    theta = 4.0 * k ** 3 + 12.0 * state.xi * k
    if side is Side.OFF:
        if k.real == 0.0 and abs(k.imag) < c:
            raise ContractError("point on (-ic, ic) needs a side tag")
        if k == 1j * c:
            return 0.0 + 0j
        return complex(theta - _ray_to_infinity(_dg_minus_dtheta_h(state), k, state, p.quad))
    if k.real != 0.0 or abs(k.imag) > c:
        raise ContractError("side tags for g are only valid on [-ic, ic]")
    return complex(g_at_ic(state, p) + _path_from_ic(_dg_h(state), k, state, side, p.quad))


def g_at_ic(xi, params=None):
    """``g(ic)`` from the infinity-normalized form; zero when ``F(mu, d) = 0``."""
    p = _params(params)
    state = resolve_state(xi, p)
    ic = 1j * state.c
    theta_ic = 4.0 * ic ** 3 + 12.0 * state.xi * ic
    return complex(theta_ic - _ray_from_ic(_dg_minus_dtheta_h(state), state, p.quad))


def _g_grid(kk, state, p):
    c = state.c
    out = np.empty(kk.shape, dtype=complex)
    on_seg = (kk.real == 0.0) & (np.abs(kk.imag) <= c)
    for idx in zip(*np.nonzero(on_seg)):
        out[idx] = g_elliptic(kk[idx], state, p, Side.PLUS)
    rest = ~on_seg
    if rest.any():
        kr = kk[rest]
        v, wv = gauss_legendre_graded(1.0, n_levels=40, order=16)
        u = 1.0 - v
        s = kr[:, None] / u[None, :]
        f = _dg_minus_dtheta_h(state)(s, _w_shifted(0.0, s, state))
        tail = (f * (kr[:, None] / (u * u)[None, :])) @ wv
        out[rest] = 4.0 * kr ** 3 + 12.0 * state.xi * kr - tail
    return out


# ---------------------------------------------------------------- tables

TABLE_COLUMNS = ("xi", "d", "mu", "m", "tau", "e0", "B_g", "B_Omega", "Delta")


def modulation_table(xi_values, params=None):
    """Resolve a state for every ``xi`` in ``xi_values``."""
    p = _params(params)
    return [resolve_state(float(x), p) for x in xi_values]


def write_modulation_table(states, fh):
    """CSV with :data:`TABLE_COLUMNS` plus a ``flags`` column (sign violations)."""
    fh.write(",".join(TABLE_COLUMNS + ("flags",)) + "\n")
    for s in states:
        vals = [getattr(s, name) for name in TABLE_COLUMNS]
        flags = ";".join(s.sign_violations())
        fh.write(",".join(f"{v:.17g}" for v in vals) + f",{flags}\n")
