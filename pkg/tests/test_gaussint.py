import math

import pytest
from hypothesis import assume, given, strategies as st

from gauss_kloosterman.utils.errors import DomainError, ParseError
from gauss_kloosterman.utils.gaussint import (
    ONE,
    GaussianInt,
    crt,
    crt_general,
    dedekind_zeta2,
    divides,
    divisors,
    euler_phi,
    exact_div,
    factorize,
    format_gaussian,
    gaussian_primes,
    gcd,
    hecke_zeta_partial,
    is_gaussian_prime,
    mod_inverse,
    multiplicative_stats,
    parse_gaussian,
    q0_part,
    reduce_mod,
    residues,
    xgcd,
)

small = st.integers(min_value=-40, max_value=40)
gaussian = st.builds(GaussianInt, small, small)
nonzero = gaussian.filter(bool)
modest = st.builds(GaussianInt, st.integers(-14, 14), st.integers(-14, 14)).filter(bool)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("3", GaussianInt(3, 0)),
        ("1+1i", GaussianInt(1, 1)),
        ("1+i", GaussianInt(1, 1)),
        ("2-3i", GaussianInt(2, -3)),
        ("-i", GaussianInt(0, -1)),
        ("4i", GaussianInt(0, 4)),
        (" -5 + 2i ", GaussianInt(-5, 2)),
    ],
)
def test_parse_gaussian(text, expected):
    assert parse_gaussian(text) == expected


@pytest.mark.parametrize("text, position", [("", 0), ("1+", 2), ("1+2", 3), ("ab", 0), ("1+2i3", 4)])
def test_parse_gaussian_reports_position(text, position):
    with pytest.raises(ParseError) as err:
        parse_gaussian(text)
    assert err.value.position == position
    assert err.value.exit_code == 1


@given(gaussian)
def test_format_then_parse(z):
    assert parse_gaussian(format_gaussian(z)) == z


def test_format_gaussian():
    assert format_gaussian(GaussianInt(1, 1)) == "1+1i"
    assert format_gaussian(GaussianInt(2, -3)) == "2-3i"
    assert format_gaussian(GaussianInt(0, -1)) == "-1i"
    assert format_gaussian(GaussianInt(7, 0)) == "7"


@given(gaussian, nonzero)
def test_divmod_remainder_is_small(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert 2 * r.norm() <= b.norm()
    assert reduce_mod(a, b) == r


@given(gaussian, gaussian)
def test_xgcd_identity(m, n):
    assume(m or n)
    g, s, t = xgcd(m, n)
    assert s * m + t * n == g
    assert g == gcd(m, n)
    assert g == g.canonical()
    assert divides(g, m) and divides(g, n)


def test_gcd_of_zeros():
    with pytest.raises(DomainError):
        gcd(0, 0)


@given(nonzero)
def test_factorization_expands(z):
    factorization = factorize(z)
    assert factorization.expand() == z
    assert factorization.unit.is_unit()
    assert all(is_gaussian_prime(p) for p in factorization.primes())


def test_factorize_two_and_three():
    two = factorize(2)
    assert two.factors == ((GaussianInt(1, 1), 2),)
    assert two.unit == GaussianInt(0, -1)
    assert factorize(3).factors == ((GaussianInt(3, 0), 1),)


def test_gaussian_primes():
    assert gaussian_primes(10) == [GaussianInt(1, 1), GaussianInt(1, 2), GaussianInt(2, 1), GaussianInt(3, 0)]


@pytest.mark.parametrize(
    "n, tau, omega, phi",
    [(GaussianInt(1, 1), 2, 1, 1), (2, 3, 1, 2), (3, 2, 1, 8), (5, 4, 2, 16), (GaussianInt(2, 1), 2, 1, 4)],
)
def test_multiplicative_stats(n, tau, omega, phi):
    stats = multiplicative_stats(n)
    assert stats.tau_ideal == tau
    assert stats.tau_assoc == 4 * tau
    assert stats.omega == omega
    assert stats.phi == phi
    assert euler_phi(n) == phi
    assert len(residues(n, coprime_only=True)) == phi


@given(modest)
def test_residue_system_is_complete(c):
    reps = residues(c)
    assert len(reps) == c.norm()
    assert len({reduce_mod(r, c) for r in reps}) == c.norm()


def test_divisors():
    assert len(divisors(2)) == 3
    assert len(divisors(2, associates=True)) == 12
    assert len(divisors(5)) == 4
    assert all(divides(d, 5) for d in divisors(5))


@given(nonzero, nonzero)
def test_mod_inverse(m, c):
    assume(not c.is_unit() and gcd(m, c) == ONE)
    inverse = mod_inverse(m, c)
    assert divides(c, m * inverse - 1)


def test_mod_inverse_rejects_common_factor():
    with pytest.raises(DomainError):
        mod_inverse(GaussianInt(1, 1), 2)


def test_crt():
    moduli = (GaussianInt(2, 1), GaussianInt(3, 0), GaussianInt(1, 1))
    targets = (GaussianInt(1, 0), GaussianInt(1, 2), GaussianInt(0, 0))
    x = crt(targets, moduli)
    for r, m in zip(targets, moduli):
        assert divides(m, x - r)


def test_crt_general_overlapping_moduli():
    # x = 1 mod 2 and x = 1 mod 1+i are compatible, x = 0 mod 2 and x = 1 mod 1+i are not
    x, modulus = crt_general(1, 2, 1, GaussianInt(1, 1))
    assert modulus.associate(2)
    assert divides(2, x - 1)
    assert crt_general(0, 2, 1, GaussianInt(1, 1)) is None


def test_exact_div():
    assert exact_div(GaussianInt(3, 1), GaussianInt(1, 1)) == GaussianInt(2, -1)
    with pytest.raises(DomainError):
        exact_div(3, GaussianInt(1, 1))


def test_q0_part():
    part, rest = q0_part(GaussianInt(6, 0), GaussianInt(1, 1))
    assert part.associate(2)
    assert rest.associate(3)


def test_zeta_partial_matches_closed_form():
    value, tail = hecke_zeta_partial(2, 0, 2000)
    assert abs(value - dedekind_zeta2()) <= tail
    assert math.isclose(dedekind_zeta2(), math.pi**2 / 6 * 0.915965594177219, rel_tol=1e-12)


def test_zeta_partial_rejects_divergent_region():
    with pytest.raises(DomainError):
        hecke_zeta_partial(1.0, 0, 100)
