import cmath
import math

import pytest
from hypothesis import given, strategies as st
from scipy import special

from gauss_kloosterman.utils import bessel
from gauss_kloosterman.utils.errors import DomainError


@pytest.mark.parametrize("n", [0, 1, 2, 5, -3])
@pytest.mark.parametrize("z", [0.5, 3 + 1j, 12 - 2j, 40.0, -7.5 + 0.5j])
def test_bessel_j_int_matches_scipy(n, z):
    reference = complex(special.jv(n, z))
    assert abs(bessel.bessel_j_int(n, z) - reference) <= 1e-9 * max(1.0, abs(reference))


@given(st.integers(0, 8), st.floats(-20, 20), st.floats(-3, 3))
def test_negative_order_reflection(n, x, y):
    z = complex(x, y)
    assert cmath.isclose(bessel.bessel_j_int(-n, z), (-1) ** n * bessel.bessel_j_int(n, z), abs_tol=1e-12)


def test_bessel_range_errors():
    with pytest.raises(DomainError):
        bessel.bessel_j_int(500, 1.0)
    with pytest.raises(DomainError):
        bessel.bessel_j_int(0, 1000.0)


@pytest.mark.parametrize("n, z", [(0, 0.5), (1, 2 + 1j), (3, 10.0)])
def test_bessel_bounds(n, z):
    row = bessel.bessel_bounds_check(n, z)
    assert not row.violated


@pytest.mark.parametrize("n", [0, 1, 4])
@pytest.mark.parametrize("z", [0.3, 2 - 1j, 6 + 2j])
def test_j_star_normalization(n, z):
    z = complex(z)
    assert cmath.isclose((z / 2) ** n * bessel.bessel_j_star(n, z), complex(special.jv(n, z)), rel_tol=1e-10, abs_tol=1e-14)


def test_j_star_is_even_and_agrees_with_array_form():
    z = 1.7 - 0.4j
    orders = [0.3 + 0.2j, -1.5 + 1j, 2.0]
    array = bessel.jstar_array(orders, z)
    for xi, value in zip(orders, array):
        assert cmath.isclose(value, bessel.bessel_j_star(xi, z), rel_tol=1e-10, abs_tol=1e-14)
        assert cmath.isclose(bessel.bessel_j_star(xi, -z), bessel.bessel_j_star(xi, z), rel_tol=1e-12)


@pytest.mark.parametrize("z", [25 + 10j, 40.0, -33 + 20j])
def test_j_star_array_at_large_argument(z):
    orders = [0.05 + 3j, -0.05 - 7.5j, 4 + 2j, -4 + 2j, -3.0, 0.0]
    array = bessel.jstar_array(orders, z)
    for xi, value in zip(orders, array):
        expected = bessel.bessel_j_star(xi, z)
        assert cmath.isclose(value, expected, rel_tol=1e-9, abs_tol=1e-13 * max(1.0, abs(expected)))


def test_j_star_rejects_large_argument():
    with pytest.raises(DomainError):
        bessel.bessel_j_star(0.5, 100.0)


@pytest.mark.parametrize("nu, p, z", [(0.5j, 0, 1.5), (0.1 + 0.3j, 1, 0.8 + 0.6j)])
def test_kernel_series_matches_integral(nu, p, z):
    series = bessel.kernel_K(nu, p, z)
    integral = bessel.kernel_K_integral(nu, p, z)
    assert abs(series - integral) <= 1e-5 * max(1.0, abs(series))


@pytest.mark.parametrize("nu", [0.4j, 0.2 + 1.1j])
@pytest.mark.parametrize("p", [1, 2])
def test_kernel_conjugation_symmetry(nu, p):
    z = -1.3 + 2j
    assert cmath.isclose(bessel.kernel_K(nu, -p, z), bessel.kernel_K(nu, p, z.conjugate()), abs_tol=1e-10)


def test_kernel_is_even_in_nu_and_p():
    z = 0.9 + 0.4j
    assert cmath.isclose(bessel.kernel_K(0.3j, 1, z), bessel.kernel_K(-0.3j, -1, z), rel_tol=1e-10)


def test_kernel_at_nu_zero_is_finite():
    value = bessel.kernel_K(0, 0, 1.2)
    assert math.isfinite(value.real)
    assert cmath.isclose(value, bessel.kernel_K(1e-4j, 0, 1.2), rel_tol=1e-5)


@pytest.mark.parametrize("nu, z", [(1.2, 1.0), (0.5, 0)])
def test_kernel_rejects_bad_input(nu, z):
    with pytest.raises(DomainError):
        bessel.kernel_K(nu, 0, z)


@pytest.mark.parametrize("p", [0, 1, 3])
@pytest.mark.parametrize("u", [0.5, 1 + 1j, -2 + 1.5j])
@pytest.mark.parametrize("y", [0.5, 1.3, 2.0])
def test_graf_expansion(p, u, y):
    assert bessel.graf_residual(p, u, y, 80) <= 1e-10


def test_graf_singular_point():
    with pytest.raises(DomainError):
        bessel.graf_residual(0, 1j, 1.0, 10)


@pytest.mark.parametrize("n", range(7))
@pytest.mark.parametrize("y", [0.0, 0.7, 2.0])
def test_gauss_fourier_recurrence(n, y):
    assert abs(bessel.gauss_fourier_G(n, y) - bessel.gauss_fourier_G_quad(n, y)) <= 1e-10


def test_gauss_fourier_small_orders():
    assert cmath.isclose(bessel.gauss_fourier_G(0, 0.0), math.sqrt(math.pi))
    assert bessel.gauss_fourier_G(1, 0.0) == 0
    assert cmath.isclose(bessel.gauss_fourier_G(2, 0.0), math.sqrt(math.pi) / 2)


@pytest.mark.parametrize("family", ["1", "abs2"])
@pytest.mark.parametrize("t", [0.5, 1.0])
def test_poisson_summation(family, t):
    check = bessel.poisson_check_2d(family, t, 10.0)
    assert check.agrees
    assert check.decay.summary()["violations"] == 0


def test_poisson_matches_theta_square():
    check = bessel.poisson_check_2d("1", 1.0, 10.0)
    assert abs(check.lhs - bessel.theta_square()) <= 1e-12


def test_poisson_unknown_family():
    with pytest.raises(DomainError):
        bessel.poisson_check_2d("cubic", 1.0, 5.0)


def test_psi_integral_closed_form():
    report = bessel.psi_integral_sweep((-1.2, 0.0, 0.7), (0.0, 0.5, 2.0))
    for row in report.rows:
        assert abs(row.lhs - row.extra["closed_form"]) <= 1e-7 * row.lhs
        assert math.isfinite(row.ratio)


def test_psi_integral_rejects_right_angle():
    with pytest.raises(DomainError):
        bessel.psi_integral_sweep((math.pi / 2,), (0.0,))
