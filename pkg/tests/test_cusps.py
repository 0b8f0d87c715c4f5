import math

import pytest
from hypothesis import given, strategies as st

from gauss_kloosterman.utils.cusps import (
    INFINITY,
    Cusp,
    allowed_moduli,
    brute_force_class_count,
    build_frame,
    class_representatives,
    cusp_count_formula,
    cusps_equivalent,
    equivalence_witness,
    format_cusp,
    index_and_covolume,
    normalize_cusp,
    parse_cusp,
    scaling_conjugation_check,
    stabilizer_data,
    width_lattice_check,
)
from gauss_kloosterman.utils.errors import DomainError, ParseError
from gauss_kloosterman.utils.gaussint import ONE, GaussianInt, coprime, divides, gcd
from gauss_kloosterman.utils.matrix import IDENTITY

LEVELS = [ONE, GaussianInt(1, 1), GaussianInt(2, 0), GaussianInt(3, 0), GaussianInt(2, 1), GaussianInt(2, 2)]

cusp_parts = st.builds(GaussianInt, st.integers(-9, 9), st.integers(-9, 9))
finite_cusps = st.builds(Cusp.of, cusp_parts, cusp_parts.filter(bool))


def test_parse_cusp():
    assert parse_cusp("inf") is INFINITY
    assert parse_cusp("2/4") == Cusp.of(1, 2)
    assert parse_cusp("3") == Cusp.of(3, 1)
    assert format_cusp(Cusp.of(1, GaussianInt(1, 1))) == "1/1+1i"


@pytest.mark.parametrize("text", ["1/", "x/2", "0/0"])
def test_parse_cusp_rejects(text):
    with pytest.raises(ParseError):
        parse_cusp(text)


@given(finite_cusps)
def test_cusp_lowest_terms(cusp):
    assert gcd(cusp.u, cusp.w) == ONE
    assert cusp.w == cusp.w.canonical()
    assert parse_cusp(format_cusp(cusp)) == cusp


@pytest.mark.parametrize("q0", LEVELS)
def test_class_count_matches_enumeration(q0):
    count = cusp_count_formula(q0)
    assert count == len(class_representatives(q0))
    assert count == brute_force_class_count(q0)


@pytest.mark.parametrize("q0, count", [(ONE, 1), (GaussianInt(1, 1), 2), (GaussianInt(3, 0), 2)])
def test_class_counts(q0, count):
    assert cusp_count_formula(q0) == count


@pytest.mark.parametrize("q0", LEVELS)
def test_representatives_are_inequivalent(q0):
    frames = class_representatives(q0)
    for i, first in enumerate(frames):
        for second in frames[i + 1 :]:
            assert not cusps_equivalent(first.cusp, second.cusp, q0)


@given(finite_cusps, st.sampled_from(LEVELS))
def test_normalize_cusp(cusp, q0):
    u, w, gamma = normalize_cusp(cusp, q0)
    assert u and divides(w, q0)
    assert coprime(u, q0)
    assert gamma.in_gamma0(q0)
    assert gamma.maps(cusp.pair, (u, w))


def test_normalize_infinity_at_level_one_plus_i():
    q0 = GaussianInt(1, 1)
    u, w, gamma = normalize_cusp(INFINITY, q0)
    assert w.associate(q0)
    assert gamma.maps(INFINITY.pair, (u, w))


def test_normalized_cusp_is_fixed():
    q0 = GaussianInt(3, 0)
    u, w, gamma = normalize_cusp(Cusp.of(1, 3), q0)
    assert (u, w) == (ONE, GaussianInt(3, 0))
    assert gamma == IDENTITY


@pytest.mark.parametrize("q0", LEVELS)
def test_infinity_is_one_over_q0(q0):
    assert cusps_equivalent(INFINITY, Cusp.of(1, q0), q0)


@given(finite_cusps, finite_cusps)
def test_level_one_has_a_single_class(c1, c2):
    assert cusps_equivalent(c1, c2, ONE)


@given(finite_cusps, finite_cusps, st.sampled_from(LEVELS[1:4]))
def test_equivalence_witness(c1, c2, q0):
    gamma = equivalence_witness(c1, c2, q0)
    if gamma is None:
        assert not cusps_equivalent(c1, c2, q0)
    else:
        assert gamma.in_gamma0(q0)
        assert gamma.maps(c1.pair, c2.pair)


@pytest.mark.parametrize("q0", LEVELS)
def test_frames(q0):
    for frame in class_representatives(q0):
        assert frame.pi.det() == ONE
        assert frame.pi.c == frame.w and frame.pi.a == frame.u
        assert divides(q0, frame.u * frame.u_tilde - 1)
        assert scaling_conjugation_check(frame)
        assert width_lattice_check(frame)
        stab_index, beta = stabilizer_data(frame)
        assert stab_index == frame.stab_index
        assert (beta is None) == (stab_index == 2)


@given(finite_cusps, st.sampled_from(LEVELS))
def test_mu_is_a_class_invariant(cusp, q0):
    frame = build_frame(cusp, q0)
    rep = next(f for f in class_representatives(q0) if cusps_equivalent(f.cusp, cusp, q0))
    assert frame.mu_inv.associate(rep.mu_inv)


@pytest.mark.parametrize("q0, stab_index", [(ONE, 4), (GaussianInt(1, 1), 4), (GaussianInt(3, 0), 4)])
def test_stabilizer_index_at_infinity(q0, stab_index):
    frame = build_frame(INFINITY, q0)
    assert frame.stab_index == stab_index
    assert frame.beta is not None


def test_stabilizer_index_two():
    # (w, q0/w) is 1 for 1/4 at level 4 and 3 for 1/3 at level 9
    frame = build_frame(Cusp.of(1, 4), GaussianInt(4, 0))
    assert frame.stab_index == 4
    frame = build_frame(Cusp.of(1, 3), GaussianInt(9, 0))
    assert frame.stab_index == 2
    assert frame.beta is None


@pytest.mark.parametrize("q0, index", [(ONE, 1), (GaussianInt(1, 1), 3), (GaussianInt(2, 0), 6), (GaussianInt(3, 0), 10)])
def test_index(q0, index):
    assert index_and_covolume(q0)[0] == index


def test_covolume_at_level_one():
    _, vol = index_and_covolume(ONE)
    assert math.isclose(vol, 0.915965594177219 / 3, rel_tol=1e-10)


def test_zero_level_rejected():
    with pytest.raises(DomainError):
        class_representatives(0)


def test_allowed_moduli_at_level_one():
    frame = build_frame(INFINITY, ONE)
    moduli = allowed_moduli(frame, frame, 3.0)
    norms = sorted(C.norm() for C in moduli)
    expected = sorted(a * a + b * b for a in range(-3, 4) for b in range(-3, 4) if 0 < a * a + b * b <= 9)
    assert norms == expected


@pytest.mark.parametrize("q0", [GaussianInt(1, 1), GaussianInt(2, 0), GaussianInt(3, 0)])
def test_allowed_moduli_lower_bound(q0):
    frames = class_representatives(q0)
    for f1 in frames:
        for f2 in frames:
            for C in allowed_moduli(f1, f2, 6.0):
                assert C
                assert C.norm() * math.sqrt(f1.v.norm() * f2.v.norm()) <= 36 + 1e-9
