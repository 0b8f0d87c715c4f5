import math

import pytest
from scipy import special

from gauss_kloosterman.utils import sieve
from gauss_kloosterman.utils.btransform import TestParams, diagonal_term
from gauss_kloosterman.utils.cusps import class_representatives
from gauss_kloosterman.utils.errors import DomainError
from gauss_kloosterman.utils.gaussint import ONE, GaussianInt


@pytest.fixture
def level_one():
    return class_representatives(ONE)[0]


def _frames_and_moduli():
    for q0 in (ONE, GaussianInt(1, 1)):
        for frame in class_representatives(q0):
            for c in sieve.sweep_moduli(frame, 20.0, 2):
                yield frame, c


def test_annulus():
    points = sieve.annulus(8)
    assert len(points) == 12
    assert [w.norm() for w in points] == [5] * 8 + [8] * 4
    with pytest.raises(DomainError):
        sieve.annulus(0.5)


@pytest.mark.parametrize("family", ["ones", "spike", "random_phase", "twist"])
def test_make_coefficients(family):
    b = sieve.make_coefficients(family, 10.0, seed=3)
    assert b.omegas == sieve.annulus(10.0)
    if family == "spike":
        assert math.isclose(b.norm, 1.0)
    else:
        assert all(math.isclose(abs(value), 1.0) for value in b.values)
    assert sieve.make_coefficients(family, 10.0, seed=3) == b


def test_coefficients_validation():
    with pytest.raises(DomainError):
        sieve.make_coefficients("gaussian", 10.0)
    with pytest.raises(DomainError):
        sieve.CoeffVector(10.0, {ONE: 1 + 0j})
    with pytest.raises(DomainError):
        sieve.make_coefficients("spike", 10.0, spike=GaussianInt(3, 3))


def test_u_sum_paths_agree():
    b = sieve.make_coefficients("random_phase", 4.0, seed=1)
    cases = 0
    for frame, c in _frames_and_moduli():
        assert abs(sieve.u_sum(frame, 0.0, c, 0, b) - sieve.kloosterman_matrix_form(frame, c, b)) <= 1e-8
        assert abs(sieve.u_sum(frame, 0.7, c, 1, b) - sieve.u_sum_reference(frame, 0.7, c, 1, b)) <= 1e-8
        cases += 1
    assert cases


def test_u_sum_of_zero_vector(level_one):
    b = sieve.CoeffVector(4.0, {w: 0j for w in sieve.annulus(4.0)})
    assert sieve.u_sum(level_one, 0.5, 3, 1, b) == 0.0


def test_u_sum_rejects_inadmissible_modulus():
    frame = class_representatives(GaussianInt(3, 0))[0]
    b = sieve.make_coefficients("ones", 4.0)
    assert not sieve.samecusp_admissible(frame, GaussianInt(1, 1))
    with pytest.raises(DomainError):
        sieve.u_sum(frame, 0.0, GaussianInt(1, 1), 0, b)


def test_bound_rows_kinds():
    c = GaussianInt(2, 1)
    base = {"N": 16.0}
    with_psi = sieve.bound_rows(base, 1.0, c, 1.0, 0, 16.0, 1.0)
    assert [row.params["kind"] for row in with_psi] == ["tau", "large_sieve", "small_modulus"]
    without_psi = sieve.bound_rows(base, 1.0, c, 0.0, 0, 16.0, 1.0)
    assert [row.params["kind"] for row in without_psi] == ["tau", "large_sieve"]
    assert all("envelope_ideal" in row.extra for row in with_psi[:1])


def test_bound_sweep_is_finite():
    report = sieve.bound_sweep(levels=("1",), N_values=(4.0, 8.0), M_values=(0,), max_c_norm=10.0, moduli_per_frame=2)
    assert report.rows
    for kind in sieve.BOUND_KINDS[:2]:
        assert math.isfinite(report.select(kind=kind).summary()["max_ratio"])
    assert set(sieve.blow_up_flags(report)) == set(sieve.BOUND_KINDS)


@pytest.mark.parametrize("c", [GaussianInt(1, 1), GaussianInt(2, 1)])
@pytest.mark.parametrize("M, T, alpha, beta", [(1, 0.5, 1.0, 0.5), (0, 2.0, 0.3, -1.0)])
def test_e_sum_exact_matches_quadrature(c, M, T, alpha, beta):
    a = sieve.make_coefficients("random_phase", 10.0, seed=0)
    exact = sieve.e_sum(c, a, M, T, alpha, beta, method="exact")
    quad = sieve.e_sum(c, a, M, T, alpha, beta)
    assert abs(exact - quad) <= 1e-8 * max(exact, 1.0)
    row = sieve.e_sum_row(c, a, M, T, alpha, beta, family="random_phase")
    assert math.isfinite(row.ratio)


def test_e_sum_validation():
    a = sieve.make_coefficients("ones", 4.0)
    with pytest.raises(DomainError):
        sieve.e_sum(3, a, 0, 1.0, 0.0, 0.5)
    with pytest.raises(DomainError):
        sieve.e_sum(3, a, 0, 0.0, 1.0, 0.5)
    with pytest.raises(DomainError):
        sieve.e_sum(3, a, 0, 1.0, 1.0, 0.5, method="simpson")


def test_geometric_side_with_zero_frequency(level_one):
    side = sieve.geometric_side(level_one, level_one, 0, 1, TestParams(2.0, 2.0), 4.0)
    assert side.kloosterman_part == 0
    assert side.moduli == 0
    assert side.delta_part == 0


@pytest.mark.slow
def test_geometric_side_converges(level_one):
    params = TestParams(2.0, 2.0)
    first = sieve.geometric_side(level_one, level_one, 1, 1, params, 4.0)
    second = sieve.geometric_side(level_one, level_one, 1, 1, params, 6.0)
    assert abs(first.delta_part - 2 * diagonal_term(params).exact) <= 1e-12
    assert abs(second.kloosterman_part - first.kloosterman_part) <= first.tail_envelope
    assert second.tail_envelope < first.tail_envelope


def test_linnik_selberg(level_one):
    first = sieve.linnik_selberg_partial(level_one, level_one, 1, 1, 1.0, 4.0)
    second = sieve.linnik_selberg_partial(level_one, level_one, 1, 1, 1.0, 8.0)
    assert abs(second.Z_partial - first.Z_partial) <= first.tail
    s = 1.1 + 0.3j
    value = sieve.linnik_selberg_partial(level_one, level_one, 1, GaussianInt(2, 1), s, 4.0)
    mirror = sieve.linnik_selberg_partial(level_one, level_one, -1, GaussianInt(-2, -1), s.conjugate(), 4.0)
    assert abs(mirror.zeta_partial - value.zeta_partial.conjugate()) <= 1e-9 * max(1.0, abs(value.zeta_partial))


def test_jstar_pair_at_zero():
    s = 1.1 + 0.3j
    assert abs(sieve.jstar_pair(2 * s - 1, 0) - complex(special.rgamma(2 * s)) ** 2) <= 1e-12


@pytest.mark.parametrize("s, X", [(0.7, 4.0), (1.0, 0.5)])
def test_linnik_selberg_validation(level_one, s, X):
    with pytest.raises(DomainError):
        sieve.linnik_selberg_partial(level_one, level_one, 1, 1, s, X)
