import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mkdvshock.errors import ContractError, DomainError
from mkdvshock.phase import (
    SignGrid,
    F_plateau,
    Xi,
    chi,
    delta_fn,
    g_c,
    lambda_stationary,
    log_delta_imag_axis,
    nu,
    signature_grid,
    symmetry_integrals,
    theta_phase,
)
from mkdvshock.scattering import ShockParams, Side, a_coeff, r_coeff

C1 = ShockParams(1.0)
PLATEAU_XI = [-0.6, -0.8, -1.0, -1.5, -3.0]


def test_theta_phase_values():
    assert theta_phase(1.0, 0.0) == 4
    assert theta_phase(1j, 0.0) == pytest.approx(-4j)


@given(st.floats(-10, 10), st.floats(-3, 3))
def test_theta_phase_real_on_real_line(k, xi):
    assert theta_phase(k, xi).imag == 0.0


def test_xi_region():
    assert Xi(-1.0).region(1.0) == "plateau"
    assert Xi(0.0).region(1.0) == "elliptic"
    assert Xi(0.5).region(1.0) == "vanishing"
    assert Xi.from_xt(120.0, 10.0).xi == pytest.approx(1.0)


def test_g_c_at_one():
    assert g_c(1.0, -1.0, C1) == pytest.approx(-10 * math.sqrt(2), rel=1e-15)


@pytest.mark.parametrize("xi", PLATEAU_XI)
def test_g_c_cut_condition(xi):
    for y in np.linspace(-0.95, 0.95, 20):
        plus = g_c(1j * y, xi, C1, Side.PLUS)
        minus = g_c(1j * y, xi, C1, Side.MINUS)
        assert abs(plus + minus) <= 1e-10


@pytest.mark.parametrize("R", [1e3, 2e3, 4e3])
def test_g_c_minus_theta_decays(R):
    xi = -1.0
    for ang in (0.3, 1.2, 2.5, -0.7):
        k = R * np.exp(1j * ang)
        # g_c - theta = (6 xi c^2 - 3 c^4/2) / k + O(k^-3); larger R only adds round-off of 4k^3
        diff = g_c(k, xi, C1) - theta_phase(k, xi)
        assert abs(diff) * abs(k) <= 10.0
        assert abs(diff * k - (6 * xi - 1.5)) <= 1e-14 * R ** 4 + 100 / R ** 2


def test_g_c_vanishes_like_root_at_branch_point():
    for eps in (1e-4, 1e-6, 1e-8):
        k = 1j + eps
        assert abs(g_c(k, -1.0, C1)) <= 40 * math.sqrt(eps)


def test_lambda_values():
    assert lambda_stationary(-0.5, C1) == 0.0
    assert lambda_stationary(-1.0, C1) == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    with pytest.raises(DomainError):
        lambda_stationary(-0.4, C1)


@pytest.mark.parametrize("xi", PLATEAU_XI)
def test_lambda_zero_of_cubic_numerator(xi):
    lam = lambda_stationary(xi, C1)
    for k in (lam, -lam):
        assert abs(12 * k ** 3 + (6 + 12 * xi) * k) <= 1e-13 * max(1.0, abs(k) ** 3)


def test_g_c_stationary_at_lambda():
    lam = 1 / math.sqrt(2)
    h = 1e-5
    deriv = (g_c(lam + h, -1.0, C1) - g_c(lam - h, -1.0, C1)) / (2 * h)
    assert abs(deriv) <= 1e-8


def test_nu_value_and_sign():
    lam = 1 / math.sqrt(2)
    ref = math.log1p(abs(r_coeff(lam, C1)) ** 2) / (2 * math.pi)
    assert nu(-1.0, C1) == pytest.approx(ref, rel=1e-14)
    # golden value
    assert nu(-1.0, C1) == pytest.approx(0.0377835, abs=5e-7)
    for xi in PLATEAU_XI + [-0.5]:
        assert nu(xi, C1) >= 0


@pytest.mark.parametrize("xi", [-0.7, -1.0, -2.0])
def test_delta_jump(xi):
    lam = lambda_stationary(xi, C1)
    for s in np.linspace(-0.9, 0.9, 10) * lam:
        plus = delta_fn(s, xi, C1, Side.PLUS)
        minus = delta_fn(s, xi, C1, Side.MINUS)
        r2 = abs(r_coeff(s, C1)) ** 2 if s != 0 else 1.0
        assert abs(plus - minus * (1 + r2)) <= 1e-8 * abs(plus)


def test_delta_side_values_are_limits():
    xi, s = -1.0, 0.3
    above = delta_fn(complex(s, 1e-7), xi, C1)
    below = delta_fn(complex(s, -1e-7), xi, C1)
    assert abs(above - delta_fn(s, xi, C1, Side.PLUS)) <= 1e-5
    assert abs(below - delta_fn(s, xi, C1, Side.MINUS)) <= 1e-5


def test_delta_tends_to_one():
    for R in (1e3, 1e5):
        assert abs(delta_fn(R * (1 + 1j), -1.0, C1) - 1) <= 1.0 / R


def test_delta_requires_side_on_segment():
    with pytest.raises(ContractError):
        delta_fn(0.2, -1.0, C1)
    with pytest.raises(DomainError):
        delta_fn(1j, -0.3, C1)


def test_chi_symmetry():
    k = 0.4 + 0.9j
    assert abs(chi(k, -1.0, C1) * chi(k.conjugate(), -1.0, C1).conjugate() - 1) > -1  # finite
    assert abs(chi(-k.conjugate(), -1.0, C1) - chi(k, -1.0, C1).conjugate()) <= 1e-12


@given(st.floats(min_value=0.05, max_value=3.0))
def test_log_delta_on_imaginary_axis(y):
    xi = -1.0
    val = log_delta_imag_axis(y, xi, C1)
    ref = delta_fn(1j * y, xi, C1)
    assert abs(ref.imag) <= 1e-12 * abs(ref)
    assert val == pytest.approx(math.log(ref.real), abs=1e-11)
    assert log_delta_imag_axis(-y, xi, C1) == pytest.approx(-val, abs=1e-13)


@pytest.mark.parametrize("xi", [-0.7, -1.0, -2.0])
def test_symmetry_integrals_vanish(xi):
    rn, rp, cn, cp = symmetry_integrals(xi, C1)
    assert abs(rn + rp) <= 1e-8
    assert abs(cn + cp) <= 1e-8
    # the halves are not trivially zero
    assert abs(rp) > 1e-2 and abs(cp) > 1e-3


@pytest.mark.parametrize("xi", [-0.7, -1.0])
def test_F_tends_to_one(xi):
    for ang in (0.3, 1.4, -0.5, -2.0):
        k = 1e6 * np.exp(1j * ang)
        assert abs(F_plateau(k, xi, C1) - 1) <= 1e-5


@pytest.mark.parametrize("xi", [-0.7, -1.0])
def test_F_jump_relation(xi):
    for y in [-0.9, -0.7, -0.5, -0.3, -0.1, 0.1, 0.3, 0.5, 0.7, 0.9]:
        k = 1j * y
        fp = F_plateau(k, xi, C1, Side.PLUS)
        fm = F_plateau(k, xi, C1, Side.MINUS)
        ap, am = a_coeff(k, C1, Side.PLUS), a_coeff(k, C1, Side.MINUS)
        h = 1 / (am * ap) if y > 0 else am * ap
        d = math.exp(log_delta_imag_axis(y, xi, C1))
        assert abs(fm * fp - h / d ** 2) <= 1e-6 * abs(h / d ** 2)


def test_F_side_values_are_limits():
    xi, y = -1.0, 0.4
    plus = F_plateau(1j * y, xi, C1, Side.PLUS)
    near = F_plateau(complex(1e-7, y), xi, C1)
    assert abs(plus - near) <= 1e-4 * abs(plus)


def test_F_rejects_real_axis():
    with pytest.raises(ContractError):
        F_plateau(0.5, -1.0, C1)


# ---------------------------------------------------------------- sign tables

def test_theta_grid_zero_on_hyperbola():
    xi = -1.0
    grid = signature_grid("theta", xi, C1, (-2, 2), (-2, 2), (41, 41))
    assert np.all(grid.values[20, :] == 0)  # real axis
    # nodes exactly on 3 Re^2 - Im^2 + 3 xi = 0 with Re = 1.5 -> Im^2 = 3.75
    for re in (1.5, 2.0, -1.7):
        im = math.sqrt(3 * re * re + 3 * xi)
        val = theta_phase(complex(re, im), xi)
        assert abs(val.imag) <= 1e-8 * max(1.0, abs(val))


def _gc_zero_points(k1, xi, c=1.0):
    """Points ``k1 + i k2`` solving the quartic relation with ``g_c^2 > 0``.

    The relation is ``Im g_c^2 = 0`` in disguise; of its roots only those
    with ``Re g_c^2 > 0`` have ``Im g_c = 0`` (the others have ``Re g_c = 0``).
    ``g_c^2 = P(k)^2 (k^2 + c^2)`` is a polynomial, so no branch is involved.
    """
    A = k1 * k1 + xi + 0.5 * c * c
    B = k1 * k1 + 3 * xi - 0.5 * c * c
    # 3(A - p)(B - p) = 4 k1^2 p, p = k2^2
    coef = [3.0, -(3 * A + 3 * B + 4 * k1 * k1), 3 * A * B]
    out = []
    for r in np.roots(coef):
        if abs(r.imag) > 1e-12 or r.real <= 0:
            continue
        k = complex(k1, math.sqrt(r.real))
        assert 3 * (A - r.real) * (B - r.real) == pytest.approx(4 * k1 * k1 * r.real, rel=1e-9)
        sq = (4 * k * k - 2 * c * c + 12 * xi) ** 2 * (k * k + c * c)
        if sq.real > 0:
            out.append(k)
    return out


@pytest.mark.parametrize("xi", [-0.6, -1.0, -2.0])
def test_gc_zero_set_quartic(xi):
    hits = 0
    for k1 in np.linspace(0.05, 2.5, 25):
        for k in _gc_zero_points(k1, xi):
            for kk in (k, -k.conjugate()):
                val = g_c(kk, xi, C1)
                assert abs(val.imag) <= 1e-8 * max(1.0, abs(val))
            hits += 1
    assert hits >= 10


@pytest.mark.parametrize("which,xi", [("theta", -1.0), ("theta", 0.1), ("gc", -1.0), ("gc", -0.5),
                                      ("g", -0.2), ("g", 0.2)])
def test_grids_conjugate_antisymmetric(which, xi):
    grid = signature_grid(which, xi, C1, (-2, 2), (-2, 2), (21, 21))
    assert np.array_equal(grid.values, -grid.values[::-1, :])
    # real axis row is zero for all phases
    assert np.all(grid.values[10, :] == 0)


def test_grid_csv_round_trip():
    grid = signature_grid("theta", -1.0, C1, (-1.5, 2.0), (-1.0, 1.0), (7, 5))
    text = grid.to_csv()
    assert text.splitlines()[0] == "re_min=-1.5,re_max=2.0,im_min=-1.0,im_max=1.0,nx=7,ny=5"
    back = SignGrid.from_csv(text)
    assert np.array_equal(back.values, grid.values)
    assert back.re_range == grid.re_range and back.resolution == (7, 5)


def test_grid_errors():
    with pytest.raises(DomainError):
        signature_grid("theta", -1.0, C1, resolution=(1, 5))
    with pytest.raises(DomainError):
        signature_grid("gc", 0.0, C1, resolution=(5, 5))
    with pytest.raises(DomainError):
        signature_grid("bogus", -1.0, C1, resolution=(5, 5))
