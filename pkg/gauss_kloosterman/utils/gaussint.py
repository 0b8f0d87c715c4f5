"""Exact arithmetic in the Gaussian integers Z[i].

Scalar values are `GaussianInt` objects. The residue-sum evaluators work on whole
residue systems at once; for them the module also offers numpy helpers operating
on pairs of int64 arrays (real parts, imaginary parts).
"""

import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import mpmath
import numpy as np
import sympy
from sympy.ntheory import sqrt_mod

from gauss_kloosterman.logs import log_messages
from gauss_kloosterman.utils.errors import DomainError, ParseError

logger = logging.getLogger(__name__)

ZETA_CHUNK = 256


@dataclass(frozen=True, slots=True)
class GaussianInt:
    re: int = 0
    im: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", int(self.re))
        object.__setattr__(self, "im", int(self.im))

    # ### arithmetic ###
    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return GaussianInt(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return GaussianInt(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __neg__(self) -> "GaussianInt":
        return GaussianInt(-self.re, -self.im)

    def __pow__(self, exponent: int) -> "GaussianInt":
        if exponent < 0:
            raise DomainError(log_messages.NOT_DIVISIBLE.format(num=1, den=self))
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __divmod__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        remainder = reduce_mod(self, other)
        return exact_div(self - remainder, other), remainder

    def __mod__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return reduce_mod(self, other)

    def __bool__(self) -> bool:
        return bool(self.re or self.im)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def __str__(self) -> str:
        return format_gaussian(self)

    def __repr__(self) -> str:
        return f"GaussianInt({self.re}, {self.im})"

    # ### structure ###
    def conjugate(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_unit(self) -> bool:
        return self.norm() == 1

    def canonical(self) -> "GaussianInt":
        """The associate with re > 0 and im >= 0 (zero maps to itself)"""
        if not self:
            return self
        for unit in UNITS:
            candidate = self * unit
            if candidate.re > 0 and candidate.im >= 0:
                return candidate
        raise AssertionError(self)

    def unit_part(self) -> "GaussianInt":
        """The unit e with self = e * self.canonical()"""
        if not self:
            raise DomainError(log_messages.ZERO_ARGUMENT.format(name="z"))
        for unit in UNITS:
            candidate = self * unit
            if candidate.re > 0 and candidate.im >= 0:
                return unit.conjugate()
        raise AssertionError(self)

    def associate(self, other: "GaussianInt") -> bool:
        return self.canonical() == as_gaussian(other).canonical()


ZERO = GaussianInt(0, 0)
ONE = GaussianInt(1, 0)
I = GaussianInt(0, 1)
UNITS = (ONE, I, GaussianInt(-1, 0), GaussianInt(0, -1))


def _coerce(value) -> GaussianInt | None:
    if isinstance(value, GaussianInt):
        return value
    if isinstance(value, (int, np.integer)):
        return GaussianInt(int(value), 0)
    return None


def as_gaussian(value) -> GaussianInt:
    """Accepts GaussianInt, integers, integral complex numbers, (re, im) pairs and text literals"""
    if isinstance(value, GaussianInt):
        return value
    if isinstance(value, (int, np.integer)):
        return GaussianInt(int(value), 0)
    if isinstance(value, str):
        return parse_gaussian(value)
    if isinstance(value, complex) and value.real.is_integer() and value.imag.is_integer():
        return GaussianInt(int(value.real), int(value.imag))
    if isinstance(value, (tuple, list)) and len(value) == 2:
        return GaussianInt(int(value[0]), int(value[1]))
    raise ParseError(log_messages.BAD_LITERAL.format(kind="Gaussian integer", text=value, pos=0))


def _nonzero(value, name: str) -> GaussianInt:
    value = as_gaussian(value)
    if not value:
        raise DomainError(log_messages.ZERO_ARGUMENT.format(name=name))
    return value


#############################################################
# ### text format ###
def parse_gaussian(text: str) -> GaussianInt:
    """Parse "a", "a+bi", "a-bi", "bi" or "-bi"; spaces are ignored and a missing b means 1"""
    chars = [(pos, ch) for pos, ch in enumerate(text) if not ch.isspace()]

    def fail(at: int):
        pos = chars[at][0] if at < len(chars) else len(text)
        error = ParseError(log_messages.BAD_LITERAL.format(kind="Gaussian integer", text=text, pos=pos))
        error.position = pos
        raise error

    def read_signed(idx: int, sign_required: bool) -> tuple[int, str, int]:
        sign = 1
        if idx < len(chars) and chars[idx][1] in "+-":
            sign = -1 if chars[idx][1] == "-" else 1
            idx += 1
        elif sign_required:
            fail(idx)
        start = idx
        while idx < len(chars) and chars[idx][1].isdigit():
            idx += 1
        return sign, "".join(ch for _, ch in chars[start:idx]), idx

    if not chars:
        fail(0)
    sign, digits, idx = read_signed(0, sign_required=False)
    if idx < len(chars) and chars[idx][1] == "i":
        if idx + 1 != len(chars):
            fail(idx + 1)
        return GaussianInt(0, sign * (int(digits) if digits else 1))
    if not digits:
        fail(idx)
    real = sign * int(digits)
    if idx == len(chars):
        return GaussianInt(real, 0)

    sign, digits, idx = read_signed(idx, sign_required=True)
    if idx >= len(chars) or chars[idx][1] != "i":
        fail(idx)
    if idx + 1 != len(chars):
        fail(idx + 1)
    return GaussianInt(real, sign * (int(digits) if digits else 1))


def format_gaussian(z: GaussianInt) -> str:
    if not z.im:
        return str(z.re)
    if not z.re:
        return f"{z.im}i"
    return f"{z.re}{'+' if z.im > 0 else '-'}{abs(z.im)}i"


#############################################################
# ### division ###
def _nearest_quotient(a: GaussianInt, b: GaussianInt) -> GaussianInt:
    n = b.norm()
    num = a * b.conjugate()
    return GaussianInt((2 * num.re + n) // (2 * n), (2 * num.im + n) // (2 * n))


def divides(d, n) -> bool:
    d, n = as_gaussian(d), as_gaussian(n)
    if not d:
        return not n
    num = n * d.conjugate()
    norm = d.norm()
    return num.re % norm == 0 and num.im % norm == 0


def exact_div(a, b) -> GaussianInt:
    a, b = as_gaussian(a), _nonzero(b, "divisor")
    num = a * b.conjugate()
    norm = b.norm()
    if num.re % norm or num.im % norm:
        raise DomainError(log_messages.NOT_DIVISIBLE.format(num=a, den=b))
    return GaussianInt(num.re // norm, num.im // norm)


def _quadrant_rank(z: GaussianInt) -> int:
    if z.re > 0 and z.im >= 0:
        return 0
    if z.re <= 0 and z.im > 0:
        return 1
    if z.re < 0 and z.im <= 0:
        return 2
    return 3


def residue_key(z: GaussianInt) -> tuple[int, int, int, int]:
    """Total order used for every deterministic choice: norm, then quadrant, then coordinates"""
    return z.norm(), _quadrant_rank(z), z.re, z.im


_SHIFTS = tuple(GaussianInt(x, y) for x in (-1, 0, 1) for y in (-1, 0, 1))


def reduce_mod(x, c) -> GaussianInt:
    """Minimal-norm representative of x + cO; norm ties go to the earlier quadrant"""
    x, c = as_gaussian(x), _nonzero(c, "modulus")
    if c.is_unit():
        return ZERO
    r0 = x - _nearest_quotient(x, c) * c
    return min((r0 + shift * c for shift in _SHIFTS), key=residue_key)


#############################################################
# ### gcd ###
def gcd(m, n) -> GaussianInt:
    m, n = as_gaussian(m), as_gaussian(n)
    if not m and not n:
        raise DomainError(log_messages.BOTH_ZERO)
    while n:
        m, n = n, m - _nearest_quotient(m, n) * n
    return m.canonical()


def gcd_many(*values) -> GaussianInt:
    nonzero = [as_gaussian(v) for v in values if as_gaussian(v)]
    if not nonzero:
        raise DomainError(log_messages.BOTH_ZERO)
    result = nonzero[0].canonical()
    for value in nonzero[1:]:
        result = gcd(result, value)
    return result


def xgcd(m, n) -> tuple[GaussianInt, GaussianInt, GaussianInt]:
    """(g, s, t) with g = s m + t n and g the canonical gcd"""
    m, n = as_gaussian(m), as_gaussian(n)
    if not m and not n:
        raise DomainError(log_messages.BOTH_ZERO)
    r0, r1 = m, n
    s0, s1 = ONE, ZERO
    t0, t1 = ZERO, ONE
    while r1:
        q = _nearest_quotient(r0, r1)
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inverse = r0.unit_part().conjugate()
    return r0 * inverse, s0 * inverse, t0 * inverse


def lcm(m, n) -> GaussianInt:
    m, n = _nonzero(m, "m"), _nonzero(n, "n")
    return exact_div(m * n, gcd(m, n)).canonical()


def coprime(m, n) -> bool:
    return gcd(m, n) == ONE


#############################################################
# ### residues and congruences ###
@lru_cache(maxsize=4096)
def _residues(re: int, im: int, coprime_only: bool) -> tuple[GaussianInt, ...]:
    c = GaussianInt(re, im)
    norm = c.norm()
    g = math.gcd(re, im)
    reps = (reduce_mod(GaussianInt(x, y), c) for x in range(norm // g) for y in range(g))
    if coprime_only:
        reps = (r for r in reps if coprime(r, c))
    return tuple(sorted(reps, key=residue_key))


def residues(c, coprime_only: bool = False) -> list[GaussianInt]:
    """Minimal-norm residue system mod c, sorted by `residue_key`"""
    c = _nonzero(c, "modulus")
    return list(_residues(c.re, c.im, coprime_only))


def mod_inverse(m, c) -> GaussianInt:
    m, c = as_gaussian(m), _nonzero(c, "modulus")
    g, s, _ = xgcd(m, c)
    if g != ONE:
        raise DomainError(log_messages.NOT_COPRIME.format(m=m, c=c, g=g))
    return reduce_mod(s, c)


def solve_linear(a, b, m) -> tuple[GaussianInt, GaussianInt] | None:
    """Solutions of a x = b mod m as (x0, m') meaning x = x0 mod m', or None"""
    a, b, m = as_gaussian(a), as_gaussian(b), _nonzero(m, "modulus")
    g = gcd(a, m) if a else m.canonical()
    if not divides(g, b):
        return None
    reduced = exact_div(m, g)
    if reduced.is_unit():
        return ZERO, ONE
    x0 = exact_div(b, g) * mod_inverse(exact_div(a, g), reduced)
    return reduce_mod(x0, reduced), reduced.canonical()


def crt_general(r1, m1, r2, m2) -> tuple[GaussianInt, GaussianInt] | None:
    """Combine x = r1 mod m1 and x = r2 mod m2 into (x mod lcm, lcm); None when inconsistent"""
    r1, r2 = as_gaussian(r1), as_gaussian(r2)
    m1, m2 = _nonzero(m1, "m1"), _nonzero(m2, "m2")
    step = solve_linear(m1, r2 - r1, m2)
    if step is None:
        return None
    t, _ = step
    modulus = lcm(m1, m2)
    return reduce_mod(r1 + m1 * t, modulus), modulus


def crt(residue_list, moduli) -> GaussianInt:
    """Chinese remainder theorem for pairwise coprime moduli"""
    x, modulus = ZERO, ONE
    for r, m in zip(residue_list, moduli):
        m = _nonzero(m, "modulus")
        if not coprime(modulus, m):
            raise DomainError(log_messages.NOT_COPRIME.format(m=modulus, c=m, g=gcd(modulus, m)))
        combined = crt_general(x, modulus, r, m)
        x, modulus = combined
    return x


#############################################################
# ### factorization ###
@dataclass(frozen=True)
class Factorization:
    unit: GaussianInt
    factors: tuple[tuple[GaussianInt, int], ...]

    def expand(self) -> GaussianInt:
        value = self.unit
        for prime, exponent in self.factors:
            value = value * prime**exponent
        return value

    def primes(self) -> list[GaussianInt]:
        return [prime for prime, _ in self.factors]


def _valuation(n: GaussianInt, prime: GaussianInt) -> tuple[int, GaussianInt]:
    count = 0
    while divides(prime, n):
        n = exact_div(n, prime)
        count += 1
    return count, n


@lru_cache(maxsize=8192)
def _factorize(re: int, im: int) -> Factorization:
    n = GaussianInt(re, im)
    remaining = n
    factors: list[tuple[GaussianInt, int]] = []
    for p, e in sorted(sympy.factorint(n.norm()).items()):
        if p == 2:
            prime = GaussianInt(1, 1)
            factors.append((prime, e))
            remaining = exact_div(remaining, prime**e)
        elif p % 4 == 3:
            prime = GaussianInt(p, 0)
            factors.append((prime, e // 2))
            remaining = exact_div(remaining, prime ** (e // 2))
        else:
            root = int(sqrt_mod(p - 1, p))
            prime = gcd(GaussianInt(p, 0), GaussianInt(root, 1))
            for candidate in (prime, prime.conjugate().canonical()):
                count, remaining = _valuation(remaining, candidate)
                if count:
                    factors.append((candidate, count))
    factors.sort(key=lambda item: residue_key(item[0]))
    return Factorization(unit=remaining, factors=tuple(factors))


def factorize(n) -> Factorization:
    n = _nonzero(n, "n")
    return _factorize(n.re, n.im)


def is_gaussian_prime(z) -> bool:
    z = as_gaussian(z)
    if not z:
        return False
    if sympy.isprime(z.norm()):
        return True
    c = z.canonical()
    return c.im == 0 and c.re % 4 == 3 and sympy.isprime(c.re)


def gaussian_primes(max_norm: int) -> list[GaussianInt]:
    """Canonical Gaussian primes of norm <= max_norm, ordered by `residue_key`"""
    primes = []
    for p in sympy.primerange(2, int(max_norm) + 1):
        if p == 2:
            primes.append(GaussianInt(1, 1))
        elif p % 4 == 1:
            root = int(sqrt_mod(p - 1, p))
            prime = gcd(GaussianInt(p, 0), GaussianInt(root, 1))
            primes.extend((prime, prime.conjugate().canonical()))
        elif p * p <= max_norm:
            primes.append(GaussianInt(p, 0))
    return sorted(primes, key=residue_key)


def divisors(n, associates: bool = False) -> list[GaussianInt]:
    """Canonical generators of the divisor ideals of n, or every divisor when `associates` is set"""
    factorization = factorize(n)
    result = []
    for exponents in itertools.product(*(range(e + 1) for _, e in factorization.factors)):
        d = ONE
        for (prime, _), k in zip(factorization.factors, exponents):
            d = d * prime**k
        result.append(d.canonical())
    if associates:
        result = [d * unit for d in result for unit in UNITS]
    return sorted(result, key=residue_key)


class MultiplicativeStats(NamedTuple):
    tau_ideal: int
    tau_assoc: int
    omega: int
    phi: int


def multiplicative_stats(n) -> MultiplicativeStats:
    factorization = factorize(n)
    tau = math.prod(e + 1 for _, e in factorization.factors)
    phi = math.prod(p.norm() ** (e - 1) * (p.norm() - 1) for p, e in factorization.factors)
    return MultiplicativeStats(tau, 4 * tau, len(factorization.factors), phi)


def euler_phi(n) -> int:
    return multiplicative_stats(n).phi


def q0_part(C, q0) -> tuple[GaussianInt, GaussianInt]:
    """(C', C / C') with C' the product of the prime powers of C whose primes divide q0"""
    C, q0 = _nonzero(C, "C"), _nonzero(q0, "q0")
    level_primes = set(factorize(q0).primes())
    part = ONE
    for prime, exponent in factorize(C).factors:
        if prime in level_primes:
            part = part * prime**exponent
    return part, exact_div(C, part)


#############################################################
# ### zeta partial sums ###
def hecke_zeta_partial(s: complex, k: int, cutoff: float) -> tuple[complex, float]:
    """(1/4) sum over 0 < |alpha|^2 <= X of lambda^k(alpha) |alpha|^(-2s), with a bound on the tail"""
    s = complex(s)
    sigma = s.real
    if sigma <= 1:
        raise DomainError(log_messages.ZETA_DIVERGENT.format(re=sigma, bound=1))
    if cutoff < 2:
        raise DomainError(log_messages.ZETA_CUTOFF.format(cutoff=cutoff, minimum=2))

    # lambda^k is trivial on units, so the quarter-sum runs over canonical alpha = a + bi, a >= 1, b >= 0
    a_max = math.isqrt(int(cutoff))
    b = np.arange(0, a_max + 1)
    value = 0j
    for start in range(1, a_max + 1, ZETA_CHUNK):
        a = np.arange(start, min(start + ZETA_CHUNK, a_max + 1))
        A, B = np.meshgrid(a, b, indexing="ij")
        norms = A * A + B * B
        mask = norms <= cutoff
        log_norm = np.log(norms[mask].astype(float))
        angle = np.arctan2(B[mask], A[mask]).astype(float)
        value += complex(np.sum(np.exp(-s * log_norm + 4j * k * angle)))

    # lattice points with norm <= t number at most pi (sqrt(t) + 1/sqrt 2)^2
    tail = 0.25 * (
        sigma * math.pi * cutoff ** (1 - sigma) / (sigma - 1)
        + sigma * math.pi * math.sqrt(2) * cutoff ** (0.5 - sigma) / (sigma - 0.5)
        + 0.5 * math.pi * cutoff ** (-sigma)
    )
    return value, tail


def dedekind_zeta2() -> float:
    """zeta_Q(i)(2) = zeta(2) L(2, chi_4)"""
    return float(mpmath.zeta(2) * mpmath.catalan)


#############################################################
# ### array helpers ###
def array_mul(ar: np.ndarray, ai: np.ndarray, br, bi) -> tuple[np.ndarray, np.ndarray]:
    return ar * br - ai * bi, ar * bi + ai * br


def array_reduce(re: np.ndarray, im: np.ndarray, c: GaussianInt) -> tuple[np.ndarray, np.ndarray]:
    """Nearest-rounding remainders mod c (components bounded by |c|)"""
    norm = c.norm()
    num_re = re * c.re + im * c.im
    num_im = im * c.re - re * c.im
    q_re = np.floor_divide(2 * num_re + norm, 2 * norm)
    q_im = np.floor_divide(2 * num_im + norm, 2 * norm)
    return re - (q_re * c.re - q_im * c.im), im - (q_re * c.im + q_im * c.re)


def array_divisible(re: np.ndarray, im: np.ndarray, c: GaussianInt) -> np.ndarray:
    norm = c.norm()
    return ((re * c.re + im * c.im) % norm == 0) & ((im * c.re - re * c.im) % norm == 0)


def array_exact_div(re: np.ndarray, im: np.ndarray, c: GaussianInt) -> tuple[np.ndarray, np.ndarray]:
    norm = c.norm()
    return (re * c.re + im * c.im) // norm, (im * c.re - re * c.im) // norm


def box_representatives(c: GaussianInt) -> tuple[np.ndarray, np.ndarray]:
    """A complete residue system mod c as int64 arrays, reduced to small norm"""
    c = _nonzero(c, "modulus")
    norm = c.norm()
    g = math.gcd(c.re, c.im)
    x, y = np.meshgrid(np.arange(norm // g, dtype=np.int64), np.arange(g, dtype=np.int64), indexing="ij")
    return array_reduce(x.ravel(), y.ravel(), c)


def array_inverse(re: np.ndarray, im: np.ndarray, c: GaussianInt) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """x^(phi(c) - 1) mod c, plus the mask of entries that are actually units mod c"""
    exponent = euler_phi(c) - 1
    res_re, res_im = np.ones_like(re), np.zeros_like(im)
    base_re, base_im = array_reduce(re, im, c)
    while exponent:
        if exponent & 1:
            res_re, res_im = array_reduce(*array_mul(res_re, res_im, base_re, base_im), c)
        base_re, base_im = array_reduce(*array_mul(base_re, base_im, base_re, base_im), c)
        exponent >>= 1
    check_re, check_im = array_mul(re, im, res_re, res_im)
    return res_re, res_im, array_divisible(check_re - 1, check_im, c)
