"""Spectral data of the pure step: X(k), kappa(k) and the coefficients a, b, r, f.

Both branch functions are analytic off the segment ``[-ic, ic]``:

* ``X(k) = sqrt(k^2 + c^2)`` with ``X(k) ~ k`` at infinity (so ``X(1) > 0``
  and ``X`` is odd on the real line);
* ``kappa(k) = ((k - ic)/(k + ic))**(1/4)`` with ``kappa(inf) = 1``.

Boundary values on the cut are selected with :class:`Side`.  ``PLUS`` is the
limit from ``Re k > 0`` (left of the downward-oriented cut), ``MINUS`` from
``Re k < 0``.
"""

from dataclasses import dataclass, field
import enum

import numpy as np

from .errors import ContractError, DomainError
from .quadrature import QuadratureSpec

__all__ = [
    "Side",
    "CutPoint",
    "ShockParams",
    "Degenerate",
    "X",
    "kappa",
    "a_coeff",
    "b_coeff",
    "r_coeff",
    "f_jump",
    "f_hat",
    "abs_r_squared_real",
    "log_a_squared_real",
]


class Side(enum.Enum):
    OFF = "off"
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class ShockParams:
    """Step height ``c > 0`` plus the default quadrature tolerances."""

    c: float = 1.0
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self):
        if not self.c > 0:
            raise DomainError(f"step height must be positive, got c={self.c!r}")


@dataclass(frozen=True)
class CutPoint:
    """A spectral point, optionally tagged as a boundary value on the cut."""

    k: complex
    side: Side = Side.OFF

    def __post_init__(self):
        if self.side is not Side.OFF:
            k = complex(self.k)
            if k.real != 0.0:
                raise ContractError("side tags are only allowed on the imaginary axis")


class Degenerate(complex):
    """A complex value returned at a branch point; ``degenerate`` is True."""

    degenerate = True


def _height(params):
    if isinstance(params, ShockParams):
        return params.c
    c = float(params)
    if not c > 0:
        raise DomainError(f"step height must be positive, got c={c!r}")
    return c


def _unpack(p, side):
    if isinstance(p, CutPoint):
        return complex(p.k), p.side
    if side is None:
        side = Side.OFF
    elif not isinstance(side, Side):
        side = Side(side)
    return p, side


def _on_cut(k, c):
    return (np.real(k) == 0.0) & (np.abs(np.imag(k)) < c)


def _branch_point(k, c):
    return np.isscalar(k) and complex(k).real == 0.0 and abs(complex(k).imag) == c


def _prepare(p, params, side):
    k, side = _unpack(p, side)
    c = _height(params)
    scalar = np.isscalar(k)
    karr = np.asarray(k, dtype=complex)
    if side is Side.OFF:
        if np.any(_on_cut(karr, c)):
            raise ContractError("point on the cut (-ic, ic) needs a side tag")
    else:
        if np.any(np.real(karr) != 0.0) or np.any(np.abs(np.imag(karr)) > c):
            raise ContractError("side-tagged points must lie on [-ic, ic]")
    return karr, side, c, scalar


def _out(val, scalar):
    return complex(val) if scalar else val


def X(p, params, side=None):
    """``sqrt(k^2 + c^2)`` with ``X ~ k`` at infinity; cut on ``[-ic, ic]``.

    Returns a :class:`Degenerate` zero exactly at ``k = +-ic``.
    """
    k, side, c, scalar = _prepare(p, params, side)
    if scalar and _branch_point(complex(k), c) and side is Side.OFF:
        return Degenerate(0.0)
    if side is Side.OFF:
        with np.errstate(divide="ignore", invalid="ignore"):
            # factored radicand keeps relative accuracy near the branch points
            val = k * np.sqrt((k - 1j * c) * (k + 1j * c) / (k * k))
        return _out(val, scalar)
    y = np.imag(k)
    val = np.sqrt(np.maximum(c * c - y * y, 0.0)).astype(complex)
    if side is Side.MINUS:
        val = -val
    return _out(val, scalar)


def kappa(p, params, side=None):
    """``((k - ic)/(k + ic))**(1/4)``, ``kappa(inf) = 1``; ``kappa_- = i kappa_+``."""
    k, side, c, scalar = _prepare(p, params, side)
    if scalar and _branch_point(complex(k), c):
        return Degenerate(0.0 if complex(k).imag > 0 else complex("inf"))
    if side is Side.OFF:
        rho = (k - 1j * c) / (k + 1j * c)
        return _out(rho ** 0.25, scalar)
    y = np.imag(k)
    mod = (np.abs((y - c) / (y + c))) ** 0.25
    phase = np.exp(-0.25j * np.pi) if side is Side.PLUS else np.exp(0.25j * np.pi)
    return _out(mod * phase, scalar)


def _from_kappa(fn, p, params, side):
    kap = kappa(p, params, side)
    if isinstance(kap, Degenerate):
        with np.errstate(all="ignore"):
            return Degenerate(fn(np.complex128(complex(kap))))
    return fn(kap)


def a_coeff(p, params, side=None):
    """``a(k) = (kappa + 1/kappa)/2``; never zero, ``a -> 1`` at infinity."""
    return _from_kappa(lambda q: 0.5 * (q + 1.0 / q), p, params, side)


def b_coeff(p, params, side=None):
    """``b(k) = (kappa - 1/kappa)/2``."""
    return _from_kappa(lambda q: 0.5 * (q - 1.0 / q), p, params, side)


def r_coeff(p, params, side=None):
    """Reflection coefficient ``r = b/a = (kappa^2 - 1)/(kappa^2 + 1)``."""
    return _from_kappa(lambda q: (q * q - 1.0) / (q * q + 1.0), p, params, side)


def f_jump(p, params, side=None):
    """``f(k) = i/(a_-(k) a_+(k))`` on the cut (the side tag is ignored)."""
    k, s = _unpack(p, side)
    if s is Side.OFF:
        raise ContractError("f_jump is only defined on the cut; pass a side tag")
    a_plus = a_coeff(k, params, Side.PLUS)
    a_minus = a_coeff(k, params, Side.MINUS)
    return 1j / (a_minus * a_plus)


def f_hat(p, params, side=None):
    """Continuation ``4/(kappa^2 - kappa^-2) = (2i/c) X(k)`` of ``f`` off the cut."""
    c = _height(params)
    return (2j / c) * X(p, params, side)


def abs_r_squared_real(s, params):
    """``|r(s)|^2`` for real ``s`` (continuous through ``s = 0`` where it equals 1)."""
    c = _height(params)
    s = np.abs(np.asarray(s, dtype=float))
    # |r| = tan(arctan(c/|s|)/2) = (sqrt(s^2 + c^2) - |s|)/c
    val = (c / (np.hypot(s, c) + s)) ** 2
    return float(val) if val.ndim == 0 else val


def log_a_squared_real(s, params):
    """``log a(s)^2`` for real ``s``; ``a`` is real, positive and even on the line."""
    # a^2 = (1 + cos(phi/2))/2 with phi/2 = arctan(c/|s|): a^2 = (1 + |s|/X)/2
    c = _height(params)
    s = np.abs(np.asarray(s, dtype=float))
    val = np.log1p(s / np.hypot(s, c)) - np.log(2.0)
    return float(val) if val.ndim == 0 else val
