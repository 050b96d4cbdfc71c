"""Leading-order asymptotic solution ``q(x, t)`` in all three regions.

* plateau ``x < -6c^2 t``: ``q = c``;
* elliptic ``-6c^2 t < x < 4c^2 t``: the modulated wave
  ``q_mod = sqrt(c^2 - d^2) Theta(pi i + iU)/Theta(iU)
  = (c + d) dn(K(m)(U/pi + 1) | m)``, ``U = t B_g + B_Omega Delta``;
* vanishing ``x > 4c^2 t``: ``q = 0``.

A band of half-width ``edge_width`` (in units of ``c^2`` in ``xi``) around
each edge is labelled ``BOUNDARY_LAYER``; values there are reported with a
low-confidence flag instead of being interpolated.
"""

from dataclasses import dataclass
import enum
import math

import numpy as np

from .errors import ConsistencyError, DomainError
from .modulation import abel_map, resolve_state
from .scattering import ShockParams
from .specfun import ThetaParams, jacobi_dn, complete_elliptic_K, log_theta

__all__ = [
    "Region",
    "RegionLabel",
    "WaveSample",
    "classify",
    "q_mod_theta",
    "q_mod_dn",
    "q_mod_from_state",
    "q_asymptotic",
    "envelope",
    "local_wavenumber",
    "wavelength",
    "model_matrix_entries",
    "q_from_model_matrix",
    "PROFILE_COLUMNS",
    "write_profile",
    "write_profile_svg",
    "synthetic_profile",
]

DEFAULT_EDGE_WIDTH = 0.01


def _params(params):
    if params is None:
        return ShockParams()
    if isinstance(params, ShockParams):
        return params
    return ShockParams(float(params))


class Region(enum.Enum):
    PLATEAU = "Plateau"
    ELLIPTIC = "Elliptic"
    VANISHING = "Vanishing"
    BOUNDARY_LAYER = "BoundaryLayer"


@dataclass(frozen=True)
class RegionLabel:
    """Region tag plus the signed distance of ``xi`` to the nearest edge.

    ``boundary_distance`` is in units of ``c^2`` and is positive inside the
    elliptic interval, negative outside it.
    """

    tag: Region
    boundary_distance: float
    nearest_edge: str

    def __str__(self):
        return self.tag.value


@dataclass(frozen=True)
class WaveSample:
    x: float
    t: float
    q: float
    region: RegionLabel
    envelope_lo: float = float("nan")
    envelope_hi: float = float("nan")
    wavelength: float = float("nan")
    low_confidence: bool = False
    error_order: str = ""

    @property
    def xi(self):
        return self.x / (12.0 * self.t)


def classify(x, t, c=1.0, edge_width=DEFAULT_EDGE_WIDTH):
    """Region of ``(x, t)`` from ``xi = x/(12t)`` and the edges ``-c^2/2``, ``c^2/3``."""
    if not t > 0:
        raise DomainError("t must be positive")
    c = c.c if isinstance(c, ShockParams) else float(c)
    xi = x / (12.0 * t)
    c2 = c * c
    lo, hi = -0.5 * c2, c2 / 3.0
    d_lo, d_hi = (xi - lo) / c2, (hi - xi) / c2
    if d_lo <= d_hi:
        dist, edge = d_lo, "xi_minus"
    else:
        dist, edge = d_hi, "xi_plus"
    w = edge_width * 1.0
    if xi < lo - w * c2:
        tag = Region.PLATEAU
    elif xi > hi + w * c2:
        tag = Region.VANISHING
    elif lo + w * c2 < xi < hi - w * c2:
        tag = Region.ELLIPTIC
    else:
        tag = Region.BOUNDARY_LAYER
    return RegionLabel(tag, dist, edge)


def _state_for(x, t, p):
    if not t > 0:
        raise DomainError("t must be positive")
    return resolve_state(x / (12.0 * t), p)


def q_mod_from_state(state, U):
    """Theta form ``sqrt(c^2 - d^2) Theta(pi i + iU)/Theta(iU)`` for a resolved state."""
    tp = ThetaParams(state.tau)
    num = log_theta(complex(0.0, math.pi + U), tp)
    den = log_theta(complex(0.0, U), tp)
    ratio = np.exp(num - den)
    return math.sqrt(state.c ** 2 - state.d ** 2) * float(ratio.real)


def q_mod_theta(x, t, params=None):
    """Modulated elliptic wave in theta form (canonical evaluator)."""
    p = _params(params)
    s = _state_for(x, t, p)
    return q_mod_from_state(s, t * s.B_g + s.B_Omega * s.Delta)


def _dn_forms(state, U):
    c, d, m = state.c, state.d, state.m
    K = complete_elliptic_K(m)
    first = (c + d) * jacobi_dn(K * (U / math.pi + 1.0), m)
    second = (c - d) / jacobi_dn(K * U / math.pi, m)
    return first, second


def q_mod_dn(x, t, params=None, rtol=1e-10):
    """Jacobi form ``(c+d) dn(K(U/pi + 1)|m)``, checked against ``(c-d)/dn(K U/pi|m)``.

    Raises :class:`ConsistencyError` carrying both values when they differ
    by more than ``rtol`` relative to ``c + d``.
    """
    p = _params(params)
    s = _state_for(x, t, p)
    U = t * s.B_g + s.B_Omega * s.Delta
    first, second = _dn_forms(s, U)
    if abs(first - second) > rtol * (s.c + s.d):
        raise ConsistencyError("the two dn forms of q_mod disagree", values=(first, second))
    return first


def envelope(xi, params=None):
    """``(c - d(xi), c + d(xi))``, the range of the modulated wave."""
    s = resolve_state(float(xi), _params(params))
    return s.c - s.d, s.c + s.d


def _dU_dx(xi, t, p, h=None):
    c2 = p.c ** 2
    lo, hi = -0.5 * c2, c2 / 3.0
    room = min(xi - lo, hi - xi)
    if room <= 0:
        raise DomainError("xi outside the elliptic region", edge="xi_minus" if xi <= lo else "xi_plus")
    h = min(1e-4 * c2, 0.5 * room) if h is None else h
    if h < 1e-10 * c2:
        raise DomainError("too close to an edge for a finite-difference wavenumber",
                          edge="xi_minus" if xi - lo < hi - xi else "xi_plus")
    sp = resolve_state(xi + h, p)
    sm = resolve_state(xi - h, p)
    dBg = (sp.B_g - sm.B_g) / (2.0 * h)
    dBD = (sp.B_Omega * sp.Delta - sm.B_Omega * sm.Delta) / (2.0 * h)
    return dBg / 12.0 + dBD / (12.0 * t)


def local_wavenumber(xi, t, params=None, h=None):
    """``dU/dx = B_g'(xi)/12 + (B_Omega Delta)'(xi)/(12 t)`` by central differences.

    ``B_g`` decreases with ``xi``, so the result is negative; the spatial
    wavenumber of the wave is its absolute value.
    """
    if not t > 0:
        raise DomainError("t must be positive")
    return _dU_dx(float(xi), t, _params(params), h)


def wavelength(xi, t, params=None):
    """Local wavelength ``2 pi / |dU/dx|`` (the theta ratio has period ``2 pi`` in U)."""
    return 2.0 * math.pi / abs(local_wavenumber(xi, t, params))


def q_asymptotic(x, t, params=None, edge_width=DEFAULT_EDGE_WIDTH, check=True):
    """Leading-order ``q(x, t)`` with region label, envelope and wavelength.

    In the elliptic region the theta form is cross-checked against the dn
    form (relative tolerance ``1e-10``) when ``check`` is set.
    """
    p = _params(params)
    c = p.c
    label = classify(x, t, c, edge_width)
    xi = x / (12.0 * t)
    lo, hi = -0.5 * c * c, c * c / 3.0
    inside = lo < xi < hi
    if label.tag is Region.PLATEAU or (label.tag is Region.BOUNDARY_LAYER and not inside and xi <= lo):
        return WaveSample(x, t, c, label, low_confidence=label.tag is Region.BOUNDARY_LAYER,
                          error_order="O(t^-1/2)")
    if label.tag is Region.VANISHING or (label.tag is Region.BOUNDARY_LAYER and not inside):
        return WaveSample(x, t, 0.0, label, low_confidence=label.tag is Region.BOUNDARY_LAYER,
                          error_order="O(t^-1/2) dispersive decay")
    s = resolve_state(xi, p)
    U = t * s.B_g + s.B_Omega * s.Delta
    q = q_mod_from_state(s, U)
    if check:
        first, second = _dn_forms(s, U)
        scale = s.c + s.d
        if abs(first - second) > 1e-10 * scale or abs(q - first) > 1e-10 * scale:
            raise ConsistencyError("theta and dn forms of q_mod disagree", values=(q, first, second))
    try:
        lam = wavelength(xi, t, p)
    except DomainError:
        lam = float("nan")
    return WaveSample(x, t, q, label, c - s.d, c + s.d, lam,
                      low_confidence=label.tag is Region.BOUNDARY_LAYER,
                      error_order="o(1)")


# ---------------------------------------------------------------- model problem

def _quartic(z):
    return np.power(complex(z), 0.25)


def _gamma(k, c, d):
    return _quartic((k - 1j * c) / (k - 1j * d)) * _quartic((k + 1j * d) / (k + 1j * c))


def _lambda(k, c, d):
    return _quartic((k - 1j * c) / (k + 1j * c)) * _quartic((k - 1j * d) / (k + 1j * d))


def model_matrix_entries(xi, t, k, params=None, form="gamma"):
    """Entries ``(M11, M12, M21, M22)`` of the genus-one model solution at ``k``.

    ``form="gamma"`` uses ``gamma(k) = ((k-ic)/(k-id))^(1/4) ((k+id)/(k+ic))^(1/4)``
    and the normalization ``Theta(0)/Theta(iU)``; ``form="lambda"`` uses
    ``lambda(k) = ((k-ic)/(k+ic))^(1/4) ((k-id)/(k+id))^(1/4)`` and
    ``Theta(pi i)/Theta(iU)``.  Quartic roots are principal.
    """
    p = _params(params)
    s = resolve_state(float(xi), p)
    U = t * s.B_g + s.B_Omega * s.Delta
    A = abel_map(k, s, p)
    tp = ThetaParams(s.tau)
    half = 0.5j * math.pi
    iU = 1j * U

    def th(z):
        return np.exp(log_theta(z, tp))

    if form == "gamma":
        g = _gamma(complex(k), s.c, s.d)
        plus, minus = 0.5 * (g + 1.0 / g), 0.5 * (g - 1.0 / g)
        norm = th(0.0) / th(iU)
        m11 = plus * th(A - half - iU) / th(A - half) * norm
        m12 = minus * th(-A - half - iU) / th(-A - half) * norm
        m21 = minus * th(A + half - iU) / th(A + half) * norm
        m22 = plus * th(-A + half - iU) / th(-A + half) * norm
    elif form == "lambda":
        lam = _lambda(complex(k), s.c, s.d)
        plus, minus = 0.5 * (lam + 1.0 / lam), 0.5 * (lam - 1.0 / lam)
        norm = th(1j * math.pi) / th(iU)
        m11 = plus * th(A - half - iU) / th(A + half) * norm
        m12 = minus * th(-A - half - iU) / th(-A + half) * norm
        m21 = minus * th(A + half - iU) / th(A - half) * norm
        m22 = plus * th(-A + half - iU) / th(-A - half) * norm
    else:
        raise DomainError(f"unknown model-matrix form {form!r}")
    return complex(m11), complex(m12), complex(m21), complex(m22)


def q_from_model_matrix(xi, t, params=None, form="gamma", radius=400.0,
                        direction=math.pi / 3, entry="12"):
    """``lim 2ik M_12`` (or ``M_21``) by Richardson extrapolation over ``R, 2R, 4R``."""
    idx = {"12": 1, "21": 2}[entry]

    def f(R):
        k = R * complex(math.cos(direction), math.sin(direction))
        return 2j * k * model_matrix_entries(xi, t, k, params, form)[idx]

    f1, f2, f4 = f(radius), f(2 * radius), f(4 * radius)
    g1, g2 = 2 * f2 - f1, 2 * f4 - f2
    return (4 * g2 - g1) / 3


# ---------------------------------------------------------------- synthetic slices

def synthetic_profile(x, t, params=None, n_xi=801, edge_width=DEFAULT_EDGE_WIDTH):
    """Vectorized leading-order profile on an array of ``x`` at fixed ``t``.

    States are resolved exactly on ``n_xi`` Chebyshev-spaced ``xi`` nodes
    spanning the elliptic interval minus ``edge_width``; ``d``, ``B_g`` and
    ``B_Omega Delta`` are spline-interpolated in between and the dn form is
    evaluated with :func:`scipy.special.ellipj`.  Plateau points get ``c``,
    everything right of the elliptic band gets ``0``, and the left boundary
    band gets ``c``.  Intended for synthetic comparison data.
    """
    from scipy.interpolate import CubicSpline
    from scipy.special import ellipj, ellipk

    p = _params(params)
    c = p.c
    if not t > 0:
        raise DomainError("t must be positive")
    x = np.asarray(x, dtype=float)
    xi = x / (12.0 * t)
    lo, hi = (-0.5 + edge_width) * c * c, (1.0 / 3.0 - edge_width) * c * c
    nodes = 0.5 * (lo + hi) - 0.5 * (hi - lo) * np.cos(np.linspace(0.0, math.pi, n_xi))
    states = [resolve_state(float(v), p) for v in nodes]
    d = CubicSpline(nodes, [s.d for s in states])
    bg = CubicSpline(nodes, [s.B_g for s in states])
    bod = CubicSpline(nodes, [s.B_Omega * s.Delta for s in states])
    q = np.where(xi < 0.5 * (lo + hi), c, 0.0)
    inside = (xi > lo) & (xi < hi)
    xs = xi[inside]
    dv = d(xs)
    m = 4.0 * c * dv / (c + dv) ** 2
    U = t * bg(xs) + bod(xs)
    _, _, dn, _ = ellipj(ellipk(m) * (U / math.pi + 1.0), m)
    q[inside] = (c + dv) * dn
    return q


# ---------------------------------------------------------------- output

PROFILE_COLUMNS = ("x", "t", "xi", "region", "q", "env_lo", "env_hi", "wavelength")


def write_profile(samples, fh):
    """Profile CSV with :data:`PROFILE_COLUMNS`; floats use 17 significant digits."""
    fh.write(",".join(PROFILE_COLUMNS) + "\n")
    for s in samples:
        nums = (s.x, s.t, s.xi)
        tail = (s.q, s.envelope_lo, s.envelope_hi, s.wavelength)
        fh.write(
            ",".join(f"{v:.17g}" for v in nums)
            + f",{s.region.tag.value},"
            + ",".join(f"{v:.17g}" for v in tail)
            + "\n"
        )


def write_profile_svg(samples, fh, width=800, height=300):
    """Minimal SVG: ``q`` as a polyline plus dashed envelope curves where defined."""
    xs = [s.x for s in samples]
    qs = [s.q for s in samples]
    env = [(s.x, s.envelope_lo, s.envelope_hi) for s in samples if not math.isnan(s.envelope_lo)]
    ys = qs + [v for _, lo, hi in env for v in (lo, hi)]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    x1 = x1 if x1 > x0 else x0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0
    pad = 10.0

    def px(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def py(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    def line(points, style):
        pts = " ".join(f"{px(a):.3f},{py(b):.3f}" for a, b in points)
        return f'<polyline fill="none" {style} points="{pts}"/>\n'

    fh.write(f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n')
    if env:
        dash = 'stroke="gray" stroke-dasharray="4,3"'
        fh.write(line([(x, lo) for x, lo, _ in env], dash))
        fh.write(line([(x, hi) for x, _, hi in env], dash))
    fh.write(line(list(zip(xs, qs)), 'stroke="black"'))
    fh.write("</svg>\n")
