import cmath
import math

import pytest
from hypothesis import given, strategies as st

from gauss_kloosterman.utils import btransform
from gauss_kloosterman.utils.config import constants
from gauss_kloosterman.utils.cusps import Cusp, build_frame
from gauss_kloosterman.utils.errors import ConfigError, DomainError
from gauss_kloosterman.utils.gaussint import ONE, GaussianInt

Params = btransform.TestParams


@pytest.mark.parametrize("P, K, sigma", [(0.5, 1.0, 0.75), (1.0, 0.9, 0.75), (1.0, 1.0, 0.5), (1.0, 1.0, 1.0)])
def test_params_validation(P, K, sigma):
    with pytest.raises(DomainError):
        Params(P, K, sigma)


def test_unknown_method():
    with pytest.raises(DomainError):
        btransform.BTransformConfig("simpson")


@given(st.floats(-0.7, 0.7), st.floats(-30, 30), st.integers(-10, 10))
def test_h_is_even_in_nu_and_p(s, t, p):
    params = Params(2.0, 3.0)
    nu = complex(s, t)
    assert btransform.test_h(params, nu, p) == btransform.test_h(params, -nu, -p)


def test_h_outside_the_strip():
    with pytest.raises(DomainError):
        btransform.test_h(Params(1.0, 1.0, 0.6), 0.7, 0)


@pytest.mark.parametrize("p", [0, 1, 3])
@pytest.mark.parametrize("y", [0.5, 1.0, 1.7])
def test_f_p_closed_form_matches_series(p, y):
    params = Params(2.0, 2.0)
    assert abs(btransform.f_p(params, p, y) - btransform.f_p_series(params, p, y)) <= 1e-10


@pytest.mark.parametrize("P", [1.0, 2.0, 3.0])
@pytest.mark.parametrize("K", [1.0, 2.0, 3.0])
def test_diagonal_term(P, K):
    term = btransform.diagonal_term(Params(P, K))
    assert term.deviation <= term.rel_envelope
    assert abs(term.exact.real - term.poisson) <= 1e-10 * term.main
    assert abs(term.exact.imag) <= 1e-12 * term.main


def test_diagonal_line_integral():
    params = Params(2.0, 2.0)
    line = btransform.diagonal_line_integral(params)
    assert abs(line - btransform.diagonal_term(params).exact) <= 1e-8


def test_diagonal_coefficients_without_extra_stabilizer():
    frame = build_frame(Cusp.of(1, 3), GaussianInt(9, 0))
    b = {ONE: 1 + 0j, GaussianInt(0, 1): 0.5j}
    assert btransform.diagonal_coefficients(frame, b) == b
    exact, main = btransform.diagonal_contribution(frame, Params(2.0, 2.0), b)
    assert exact > 0 and main > 0


def test_diagonal_coefficients_are_symmetrised():
    frame = build_frame(Cusp.of(1, 1), ONE)
    assert frame.stab_index == 4
    b = {ONE: 1 + 0j, -ONE: 0j}
    symmetric = btransform.diagonal_coefficients(frame, b)
    norm2 = sum(abs(value) ** 2 for value in symmetric.values())
    assert math.isclose(norm2, 0.5, rel_tol=1e-12)


def test_a_m_closed_form():
    for M in (0, 1, 4):
        for phi, theta in ((0.3, 0.2), (1.1, -0.4), (-2.0, 0.9)):
            direct = btransform.a_m(M, phi, theta)
            assert abs(direct.imag) <= 1e-12
            assert math.isclose(direct.real, btransform.a_m_closed(M, phi, theta), abs_tol=1e-10)


def test_resolve_window():
    M, Delta = btransform.resolve_window(None, None, 2.0)
    assert Delta <= M / 3.0 <= 2 * Delta
    assert Delta >= 1
    with pytest.raises(ConfigError):
        btransform.resolve_window(3, 5.0, 2.0)
    with pytest.raises(DomainError):
        btransform.resolve_window(-1, None, 2.0)


@pytest.mark.parametrize("u", [1 + 1j, -2.5 + 0.5j])
def test_kernel_direct_matches_bessel_1d(u):
    params = Params(2.0, 2.0)
    direct = btransform.b_transform(params, u)
    one_d = btransform.b_transform(params, u, btransform.BTransformConfig("bessel_1d"))
    assert abs(direct - one_d) <= constants.ROUTE_TOL
    assert abs(btransform.b_transform_graf(params, u) - one_d) <= constants.ROUTE_TOL


@pytest.mark.slow
@pytest.mark.parametrize("u", [25 + 10j, 40.0])
def test_kernel_direct_matches_bessel_1d_at_large_argument(u):
    params = Params(1.0, 1.0)
    direct = btransform.b_transform(params, u)
    one_d = btransform.b_transform(params, u, btransform.BTransformConfig("bessel_1d"))
    assert abs(direct - one_d) <= constants.ROUTE_TOL


def test_route_sweep_within_envelopes():
    report = btransform.route_sweep([Params(2.0, 2.0)], [1.5 * cmath.exp(0.4j)])
    assert len(report.rows) == 2
    assert report.summary()["violations"] == 0


def test_b_transform_rejects_zero():
    with pytest.raises(DomainError):
        btransform.b_transform(Params(1.0, 1.0), 0)


@pytest.mark.parametrize("P, K", [(1.0, 1.0), (2.0, 2.0)])
def test_decay_conditions(P, K):
    report = btransform.decay_conditions(Params(P, K))
    assert report.summary()["violations"] == 0
    assert all(row.extra["symmetric"] for row in report.rows)


def test_bump_function():
    f = btransform.BumpFunction(0.5, 1.5, k=1)
    assert f(0.25) == 0
    assert f(2.0) == 0
    assert abs(f(1.0j)) > 0
    assert cmath.isclose(f(1.0j), -abs(f(1.0j)))
    with pytest.raises(DomainError):
        btransform.BumpFunction(1.0, 0.5)


def test_k_transform_series_matches_quadrature():
    f = btransform.BumpFunction()
    for nu, p in ((0.4j, 0), (0.2 + 1.0j, 1)):
        series = btransform.k_transform(f, nu, p)
        quadrature = btransform.k_transform(f, nu, p, method="quadrature")
        assert abs(series - quadrature) <= 1e-3 * max(1.0, abs(series))


def test_k_transform_rejects_strip():
    with pytest.raises(DomainError):
        btransform.k_transform(btransform.BumpFunction(), 1.5, 0)


@pytest.mark.slow
def test_inversion():
    report = btransform.inversion_check(btransform.BumpFunction(), (0.7, 1.0j, -0.9 + 0.3j))
    assert report.summary()["violations"] == 0
