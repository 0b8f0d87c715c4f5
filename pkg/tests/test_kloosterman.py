import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gauss_kloosterman.utils import kloosterman
from gauss_kloosterman.utils.cusps import INFINITY, allowed_moduli, build_frame, class_representatives
from gauss_kloosterman.utils.errors import DomainError
from gauss_kloosterman.utils.gaussint import ONE, GaussianInt, euler_phi
from gauss_kloosterman.utils.kloosterman import (
    check_bounds,
    delta_term,
    delta_term_bruteforce,
    frame_twist,
    gauss_sum,
    kloosterman_bruteforce,
    kloosterman_classical,
    kloosterman_classical_pairs,
    kloosterman_classical_table,
    kloosterman_crt,
    kloosterman_factor,
    kloosterman_general,
    kloosterman_samecusp,
    samecusp_admissible,
    samecusp_twist,
    twist_covariance,
)

TOL = 1e-9
FREQS = [GaussianInt(0, 0), ONE, GaussianInt(1, 1), GaussianInt(2, -1)]
small = st.builds(GaussianInt, st.integers(-6, 6), st.integers(-6, 6))
modulus = small.filter(lambda c: 0 < c.norm() <= 30)


def _pairs(q0, X):
    frames = class_representatives(q0)
    for f1 in frames:
        for f2 in frames:
            for C in allowed_moduli(f1, f2, X):
                yield f1, f2, C


def test_classical_small_values():
    c = GaussianInt(1, 1)
    assert abs(kloosterman_classical(1, 1, c).value - 1) < TOL
    assert abs(kloosterman_classical(0, 1, c).value + 1) < TOL


@given(modulus)
def test_classical_at_zero_frequencies(c):
    value = kloosterman_classical(0, 0, c)
    assert abs(value.value - euler_phi(c)) < TOL
    assert value.terms == euler_phi(c)


@given(small, small, modulus)
def test_classical_symmetries(m, n, c):
    value = kloosterman_classical(m, n, c).value
    assert abs(value.imag) < TOL
    assert abs(value - kloosterman_classical(n, m, c).value) < TOL
    assert abs(value - kloosterman_classical(m.conjugate(), n.conjugate(), c.conjugate()).value) < TOL


def test_classical_tables_agree_with_direct_sum():
    c = GaussianInt(3, 2)
    table = kloosterman_classical_table(c, FREQS, FREQS)
    for i, m in enumerate(FREQS):
        for j, n in enumerate(FREQS):
            assert abs(table[i, j] - kloosterman_classical(m, n, c).value) < TOL
    pairs = [(m, n) for m in FREQS for n in FREQS]
    column = kloosterman_classical_pairs(c, pairs)
    assert abs(column[5] - table[1, 1]) < TOL


@pytest.mark.parametrize("varpi", [GaussianInt(3, 0), GaussianInt(2, 1), GaussianInt(1, 4)])
def test_gauss_sum_modulus(varpi):
    assert abs(abs(gauss_sum(1, varpi)) ** 2 - varpi.norm()) < 1e-8


@pytest.mark.parametrize(
    "q0, X", [(ONE, 2.0), (GaussianInt(1, 1), 2.0), (GaussianInt(2, 0), 3.0), (GaussianInt(3, 0), 3.0)]
)
def test_general_matches_bruteforce_and_samecusp(q0, X):
    triples = list(_pairs(q0, X))
    assert triples
    for f1, f2, C in triples:
        for m in FREQS[:3]:
            for n in FREQS[:3]:
                general = kloosterman_general(f1, f2, m, n, C).value
                assert abs(general - kloosterman_bruteforce(f1, f2, m, n, C).value) < TOL
                if f1 == f2:
                    same = kloosterman_samecusp(f1, m, n, C * f1.v).value * frame_twist(f1, m, n)
                    assert abs(general - same) < TOL


def test_bruteforce_does_not_depend_on_the_admissibility_indicator(monkeypatch):
    triples = list(_pairs(GaussianInt(2, 0), 3.0))
    m, n = ONE, GaussianInt(1, 1)
    expected = [kloosterman_general(f1, f2, m, n, C).value for f1, f2, C in triples]
    everything = lambda f1, f2, a_re, *rest: np.ones(a_re.shape, dtype=bool)
    monkeypatch.setattr(kloosterman, "_indicator", everything)
    kloosterman._stable_cosets.cache_clear()
    for (f1, f2, C), value in zip(triples, expected):
        assert abs(kloosterman_bruteforce(f1, f2, m, n, C).value - value) < TOL


@pytest.mark.parametrize("q0", [GaussianInt(1, 1), GaussianInt(2, 0), GaussianInt(3, 0)])
def test_general_symmetry(q0):
    for f1, f2, C in _pairs(q0, 3.0):
        m, n = GaussianInt(1, 1), GaussianInt(2, -1)
        forward = kloosterman_general(f1, f2, m, n, C).value
        backward = kloosterman_general(f2, f1, -n, -m, C).value
        assert abs(forward - backward) < TOL


def test_general_at_unit_modulus():
    frame = build_frame(INFINITY, ONE)
    value = kloosterman_general(frame, frame, 1, GaussianInt(0, 1), ONE)
    assert value.terms == 1
    assert abs(value.value - 1) < TOL


@pytest.mark.parametrize("q0", [GaussianInt(1, 1), GaussianInt(2, 0), GaussianInt(3, 0)])
def test_factorization_through_q0_part(q0):
    for f1, f2, C in _pairs(q0, 4.0):
        general, simple = kloosterman_factor(f1, f2, ONE, GaussianInt(1, 2), C)
        direct = kloosterman_general(f1, f2, ONE, GaussianInt(1, 2), C).value
        assert abs((general * simple).value - direct) < TOL


@pytest.mark.parametrize("q0", [GaussianInt(1, 1), GaussianInt(3, 0)])
def test_crt_product(q0):
    for frame in class_representatives(q0):
        for k in range(1, 6):
            c = frame.v * frame.w * GaussianInt(k, 1)
            if not samecusp_admissible(frame, c):
                continue
            product, local = kloosterman_crt(frame, ONE, GaussianInt(0, 1), c)
            direct = kloosterman_samecusp(frame, ONE, GaussianInt(0, 1), c).value
            assert abs(product.value * samecusp_twist(frame, ONE, GaussianInt(0, 1)) - direct) < TOL
            assert local


def test_samecusp_rejects_modulus_outside_the_lattice():
    frame = build_frame(INFINITY, GaussianInt(3, 0))
    with pytest.raises(DomainError):
        kloosterman_samecusp(frame, 1, 1, GaussianInt(1, 1))


@pytest.mark.parametrize("q0", [ONE, GaussianInt(1, 1), GaussianInt(2, 0)])
def test_delta_term(q0):
    frames = class_representatives(q0)
    for f1 in frames:
        assert abs(delta_term(f1, f1, ONE, ONE).value - 2) < TOL
        for f2 in frames:
            for w1 in FREQS:
                for w2 in FREQS:
                    fast = delta_term(f1, f2, w1, w2).value
                    assert abs(fast - delta_term_bruteforce(f1, f2, w1, w2).value) < TOL
                    if f1 != f2:
                        assert fast == 0


def test_twist_covariance():
    q0 = GaussianInt(1, 1)
    for f1, f2, C in _pairs(q0, 2.0):
        recomputed, predicted, ok = twist_covariance(f1, f2, 1, GaussianInt(1, 1), C, 0.3 + 0.1j, -0.2 + 0.4j)
        assert ok
        assert cmath.isclose(recomputed, predicted, abs_tol=1e-8)


@given(small, small, modulus)
def test_trivial_and_weil_estermann_bounds(m, n, c):
    trivial = check_bounds("trivial", {"m": m, "n": n, "c": c})
    assert not trivial.violated
    assert not check_bounds("weil_estermann", {"m": m, "n": n, "c": c}).violated


def test_bound_rows_carry_parameters():
    row = check_bounds("weil_estermann_prime", {"m": 1, "n": 1, "prime": GaussianInt(2, 1), "k": 2})
    assert row.params["kind"] == "weil_estermann_prime"
    assert row.params["k"] == 2
    assert not row.violated


def test_unknown_bound_kind():
    with pytest.raises(DomainError):
        check_bounds("nonsense", {})
