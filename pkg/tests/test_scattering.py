import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from mkdvshock.errors import ContractError, DomainError
from mkdvshock.scattering import (
    CutPoint,
    Degenerate,
    ShockParams,
    Side,
    X,
    a_coeff,
    abs_r_squared_real,
    b_coeff,
    f_hat,
    f_jump,
    kappa,
    log_a_squared_real,
    r_coeff,
)

mpmath.mp.dps = 40

heights = st.floats(min_value=0.2, max_value=3.0)
coords = st.floats(min_value=-6.0, max_value=6.0)


def off_cut(re, im, c):
    assume(abs(re) > 1e-6 or abs(im) > c * (1 + 1e-6))
    return complex(re, im)


def mp_X(k, c):
    k = mpmath.mpc(k)
    return complex(k * mpmath.sqrt(1 + c * c / (k * k)))


def mp_kappa(k, c):
    k = mpmath.mpc(k)
    return complex(mpmath.power((k - 1j * c) / (k + 1j * c), mpmath.mpf(1) / 4))


def test_X_normalization():
    assert X(1.0, 1.0) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert X(1.0, 1.0).real > 0


def test_X_large_k():
    for k in (1e6, 1e6j + 3, -2e7 + 1e7j):
        assert X(k, 1.0) / k == pytest.approx(1.0, rel=1e-12)


def test_X_plus_at_zero():
    assert X(CutPoint(0j, Side.PLUS), 1.0) == pytest.approx(1.0)
    assert X(0j, 1.0, Side.MINUS) == pytest.approx(-1.0)


@given(coords, coords, heights)
def test_X_matches_oracle(re, im, c):
    k = off_cut(re, im, c)
    ref = mp_X(k, c)
    assert abs(X(k, c) - ref) <= 1e-13 * max(1.0, abs(ref))


@given(st.floats(min_value=-0.999, max_value=0.999), heights)
def test_X_boundary_values(y, c):
    yk = y * c
    plus = X(1j * yk, c, Side.PLUS)
    minus = X(1j * yk, c, Side.MINUS)
    assert plus == pytest.approx(-minus, abs=1e-15)
    # the PLUS value is the limit from Re k > 0
    near = X(complex(1e-9, yk), c)
    assert abs(near - plus) <= 1e-6 * c


def test_branch_point_is_flagged():
    val = X(1j, 1.0)
    assert isinstance(val, Degenerate) and val.degenerate and val == 0
    assert isinstance(kappa(-1j, 1.0), Degenerate)


def test_off_side_on_cut_rejected():
    with pytest.raises(ContractError):
        X(0.5j, 1.0)
    with pytest.raises(ContractError):
        CutPoint(0.3 + 0.5j, Side.PLUS)


def test_params_validated():
    with pytest.raises(DomainError):
        ShockParams(0.0)
    with pytest.raises(DomainError):
        X(2.0, -1.0)


def test_kappa_values():
    assert kappa(1.0, 1.0) == pytest.approx(cmath.exp(-1j * math.pi / 8), abs=1e-15)
    assert kappa(1.0, 1.0) == pytest.approx(0.92388 - 0.38268j, abs=1e-5)
    assert kappa(1e9, 1.0) == pytest.approx(1.0, abs=1e-8)


@given(coords, coords, heights)
def test_kappa_matches_oracle_and_symmetry(re, im, c):
    k = off_cut(re, im, c)
    kap = kappa(k, c)
    assert abs(kap - mp_kappa(k, c)) <= 1e-13 * abs(kap)
    assert abs(kappa(-k.conjugate(), c).conjugate() - kap) <= 1e-12 * abs(kap)


@pytest.mark.parametrize("y", np.linspace(-0.95, 0.95, 20))
def test_kappa_cut_relation(y):
    plus = kappa(1j * y, 1.0, Side.PLUS)
    minus = kappa(1j * y, 1.0, Side.MINUS)
    assert abs(minus - 1j * plus) <= 1e-12 * abs(plus)
    # PLUS is the limit from Re k > 0
    assert abs(kappa(complex(1e-10, y), 1.0) - plus) <= 1e-6


def test_coefficients_at_one():
    s, cpi = math.sin(math.pi / 8), math.cos(math.pi / 8)
    assert a_coeff(1.0, 1.0) == pytest.approx(cpi, abs=1e-15)
    assert b_coeff(1.0, 1.0) == pytest.approx(-1j * s, abs=1e-15)
    assert r_coeff(1.0, 1.0) == pytest.approx(-1j * math.tan(math.pi / 8), abs=1e-15)
    assert abs(r_coeff(1.0, 1.0)) ** 2 == pytest.approx(0.17157, abs=1e-5)


def test_coefficients_at_infinity():
    k = 1e12
    assert a_coeff(k, 1.0) == pytest.approx(1.0)
    assert abs(b_coeff(k, 1.0)) < 1e-11
    assert abs(r_coeff(k, 1.0)) < 1e-11


@given(coords, coords, heights)
def test_unimodularity_and_symmetries(re, im, c):
    k = off_cut(re, im, c)
    a, b, r = a_coeff(k, c), b_coeff(k, c), r_coeff(k, c)
    scale = max(1.0, abs(a) ** 2)
    assert abs(a * a - b * b - 1) <= 1e-12 * scale
    assert abs(r - b / a) <= 1e-12 * max(1.0, abs(r))
    assert abs(a) > 0
    mk = -k.conjugate()
    assert abs(a_coeff(mk, c).conjugate() - a) <= 1e-12 * max(1.0, abs(a))
    assert abs(r_coeff(mk, c).conjugate() - r) <= 1e-12 * max(1.0, abs(r))


@given(st.floats(min_value=-50, max_value=50), heights)
def test_real_line(s, c):
    assume(s != 0)
    a = a_coeff(s, c)
    r = r_coeff(s, c)
    assert abs(a.imag) <= 1e-14 and a.real > 0
    assert abs(r) < 1
    assert abs_r_squared_real(s, c) == pytest.approx(abs(r) ** 2, rel=1e-12, abs=1e-15)
    assert log_a_squared_real(s, c) == pytest.approx(2 * math.log(a.real), rel=1e-10, abs=1e-14)


def test_f_hat_and_jump():
    assert f_hat(0j, 1.0, Side.PLUS) == pytest.approx(2j)
    assert abs(f_hat(complex(0, 1 - 1e-12), 1.0, Side.PLUS)) < 1e-5
    with pytest.raises(ContractError):
        f_jump(0.3j, 1.0)


@pytest.mark.parametrize("y", np.linspace(-0.97, 0.97, 15))
def test_f_is_plus_value_of_f_hat(y):
    p = CutPoint(1j * y, Side.PLUS)
    assert abs(f_jump(p, 1.0) - f_hat(p, 1.0)) <= 1e-12 * max(1.0, abs(f_hat(p, 1.0)))


@pytest.mark.parametrize("y", np.linspace(0.02, 0.98, 12))
def test_one_minus_f_a_b_vanishes(y):
    p = CutPoint(1j * y, Side.PLUS)
    val = 1 - f_jump(p, 1.0) * a_coeff(p, 1.0) * b_coeff(p, 1.0)
    assert abs(val) <= 1e-12


def test_array_inputs():
    ks = np.array([1.0, 2.0 + 1j, -3.0j])
    out = X(ks, 1.0)
    assert out.shape == (3,)
    assert np.allclose(out, [X(complex(k), 1.0) for k in ks], rtol=1e-15)
