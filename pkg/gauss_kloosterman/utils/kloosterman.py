"""Kloosterman sums over Z[i] for pairs of cusps of Gamma_0(q0).

Three independent evaluators of the same double-coset sum live here:

* `kloosterman_general` sums over (A mod v1 C, D mod v2 C) with AD = 1 mod C, keeping the pairs
  whose matrix pi_a [[A, B], [C, D]] pi_b^-1 lies in Gamma_0(q0);
* `kloosterman_samecusp` runs over the (alpha, delta) residues mod c' of a single cusp, with the
  normalization of the lower-triangular scaling matrix (use `frame_twist` to compare);
* `kloosterman_bruteforce` enumerates integral matrices by height, conjugates each candidate with
  the two scaling matrices and dedupes the double cosets of those landing in Gamma_0(q0).

All phases are e(Re(x)) with x rational, so every sum is assembled from integer numerators over a
common denominator and evaluated through `phase_sum`.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from gauss_kloosterman.logs import log_messages
from gauss_kloosterman.utils import EPS, e, phase_sum
from gauss_kloosterman.utils.config import constants
from gauss_kloosterman.utils.cusps import CuspFrame, cusps_equivalent, equivalence_witness, frame_from_pair
from gauss_kloosterman.utils.errors import ConsistencyError, DomainError, InconclusiveResult
from gauss_kloosterman.utils.gaussint import (
    I,
    ONE,
    ZERO,
    GaussianInt,
    array_divisible,
    array_exact_div,
    array_inverse,
    array_mul,
    array_reduce,
    as_gaussian,
    box_representatives,
    coprime,
    crt_general,
    divides,
    exact_div,
    factorize,
    gcd,
    gcd_many,
    lcm,
    mod_inverse,
    multiplicative_stats,
    q0_part,
    reduce_mod,
    residues,
    solve_linear,
    _nonzero,
)
from gauss_kloosterman.utils.matrix import IDENTITY, Mat2
from gauss_kloosterman.utils.report import SweepRow

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KloostermanValue:
    value: complex
    terms: int
    err: float
    meta: dict = field(default_factory=dict, compare=False)

    def __mul__(self, other: "KloostermanValue") -> "KloostermanValue":
        err = abs(self.value) * other.err + abs(other.value) * self.err + self.err * other.err
        return KloostermanValue(self.value * other.value, self.terms * other.terms, err)

    def scaled(self, factor: complex) -> "KloostermanValue":
        return KloostermanValue(self.value * factor, self.terms, self.err * abs(factor), dict(self.meta))

    def to_dict(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "terms": self.terms,
            "err": self.err,
            "meta": self.meta,
        }


@dataclass(frozen=True)
class DeltaTerm:
    value: complex
    contributing_cosets: int

    def to_dict(self) -> dict:
        return {"value": [self.value.real, self.value.imag], "contributing_cosets": self.contributing_cosets}


ZERO_VALUE = KloostermanValue(0j, 0, 0.0)


def check_same_level(f1: CuspFrame, f2: CuspFrame) -> None:
    if not f1.q0.associate(f2.q0):
        raise DomainError(log_messages.MISMATCHED_LEVELS.format(q1=f1.q0, q2=f2.q0))


def _real_numerators(re: np.ndarray, im: np.ndarray, k: GaussianInt) -> np.ndarray:
    """Re((re + i im) k) for an exact Gaussian constant k"""
    return re * k.re - im * k.im


def _combine(first: np.ndarray, den1: int, second: np.ndarray, den2: int) -> tuple[np.ndarray, int]:
    den = math.lcm(den1, den2)
    return first * (den // den1) + second * (den // den2), den


def _exact_real(z: GaussianInt, den: GaussianInt) -> Fraction:
    """Re(z / den) as an exact fraction"""
    num = z * den.conjugate()
    return Fraction(num.re, den.norm())


#############################################################
# ### classical sums ###
def kloosterman_classical(m, n, c) -> KloostermanValue:
    """S(m, n; c) = sum over delta mod c, (delta, c) ~ 1, of e(Re((m delta* + n delta) / c))"""
    m, n, c = as_gaussian(m), as_gaussian(n), _nonzero(c, "modulus")
    re, im = box_representatives(c)
    inv_re, inv_im, units = array_inverse(re, im, c)
    re, im, inv_re, inv_im = re[units], im[units], inv_re[units], inv_im[units]
    k = c.conjugate()
    numerators = _real_numerators(inv_re, inv_im, m * k) + _real_numerators(re, im, n * k)
    value, err = phase_sum(numerators, c.norm())
    return KloostermanValue(value, int(units.sum()), err, {"c": str(c)})


def _classical_phases(c: GaussianInt, ms, ns) -> tuple[np.ndarray, np.ndarray]:
    """e(Re(m x* / c)) and e(Re(n x / c)) over the units x mod c, one column per frequency"""
    re, im = box_representatives(c)
    inv_re, inv_im, units = array_inverse(re, im, c)
    re, im, inv_re, inv_im = re[units], im[units], inv_re[units], inv_im[units]
    k, norm = c.conjugate(), c.norm()
    first = np.stack([_real_numerators(inv_re, inv_im, as_gaussian(m) * k) for m in ms], axis=1)
    second = np.stack([_real_numerators(re, im, as_gaussian(n) * k) for n in ns], axis=1)
    return np.exp(2j * np.pi * np.mod(first, norm) / norm), np.exp(2j * np.pi * np.mod(second, norm) / norm)


def kloosterman_classical_table(c, ms, ns) -> np.ndarray:
    """S(m_i, n_j; c) for every pair of the given frequencies"""
    first, second = _classical_phases(_nonzero(c, "modulus"), ms, ns)
    return first.T @ second


def kloosterman_classical_pairs(c, pairs) -> np.ndarray:
    """S(m, n; c) for a list of (m, n)"""
    ms, ns = zip(*pairs)
    first, second = _classical_phases(_nonzero(c, "modulus"), ms, ns)
    return np.sum(first * second, axis=0)


def gauss_sum(a, varpi) -> complex:
    """sum over beta mod varpi of e(Re(a beta^2 / varpi))"""
    a, varpi = as_gaussian(a), _nonzero(varpi, "varpi")
    re, im = box_representatives(varpi)
    sq_re, sq_im = array_mul(re, im, re, im)
    value, _ = phase_sum(_real_numerators(sq_re, sq_im, a * varpi.conjugate()), varpi.norm())
    return value


#############################################################
# ### general sums ###
class AdmissiblePairs(NamedTuple):
    a_re: np.ndarray
    a_im: np.ndarray
    d_re: np.ndarray
    d_im: np.ndarray

    @property
    def size(self) -> int:
        return int(self.a_re.size)


def _indicator(f1: CuspFrame, f2: CuspFrame, a_re, a_im, d_re, d_im, C: GaussianInt) -> np.ndarray:
    """chi_q0(pi_a [[A, B], [C, D]] pi_b^-1) with B = (AD - 1) / C"""
    ad_re, ad_im = array_mul(a_re, a_im, d_re, d_im)
    b_re, b_im = array_exact_div(ad_re - 1, ad_im, C)
    w1, ut1, w2, ut2 = f1.w, f1.u_tilde, f2.w, f2.u_tilde
    # lower-left entry: (w1 A + u1~ C) u2~ - (w1 B + u1~ D) w2
    left_re, left_im = array_mul(a_re, a_im, w1.re, w1.im)
    k = ut1 * C
    left_re, left_im = array_mul(left_re + k.re, left_im + k.im, ut2.re, ut2.im)
    right_re, right_im = array_mul(b_re, b_im, w1.re, w1.im)
    r2_re, r2_im = array_mul(d_re, d_im, ut1.re, ut1.im)
    right_re, right_im = array_mul(right_re + r2_re, right_im + r2_im, w2.re, w2.im)
    return array_divisible(left_re - right_re, left_im - right_im, f1.q0)


@lru_cache(maxsize=4096)
def _admissible(f1: CuspFrame, f2: CuspFrame, C: GaussianInt) -> AdmissiblePairs:
    a_re, a_im = box_representatives(f1.v * C)
    inv_re, inv_im, units = array_inverse(a_re, a_im, C)
    a_re, a_im, inv_re, inv_im = a_re[units], a_im[units], inv_re[units], inv_im[units]
    j_re, j_im = box_representatives(f2.v)
    lift_re, lift_im = array_mul(j_re, j_im, C.re, C.im)
    d_re = (inv_re[:, None] + lift_re[None, :]).ravel()
    d_im = (inv_im[:, None] + lift_im[None, :]).ravel()
    a_re = np.repeat(a_re, j_re.size)
    a_im = np.repeat(a_im, j_re.size)

    mask = _indicator(f1, f2, a_re, a_im, d_re, d_im, C)
    # the indicator only depends on A mod v1 C and D mod v2 C
    for s, t in ((ONE, ZERO), (I, ZERO), (ZERO, ONE), (ZERO, I)):
        s, t = f1.v * C * s, f2.v * C * t
        shifted = _indicator(f1, f2, a_re + s.re, a_im + s.im, d_re + t.re, d_im + t.im, C)
        if not np.array_equal(shifted, mask):
            raise ConsistencyError(log_messages.PERIODICITY_FAILED.format(s=s, t=t, C=C))

    pairs = AdmissiblePairs(a_re[mask], a_im[mask], d_re[mask], d_im[mask])
    for array in pairs:
        array.setflags(write=False)
    return pairs


def admissible_pairs(f1: CuspFrame, f2: CuspFrame, C) -> AdmissiblePairs:
    check_same_level(f1, f2)
    return _admissible(f1, f2, _nonzero(C, "C"))


def _general_numerators(f1: CuspFrame, f2: CuspFrame, m, n, C, pairs: AdmissiblePairs):
    mod1, mod2 = f1.v * C, f2.v * C
    first = _real_numerators(pairs.a_re, pairs.a_im, m * mod1.conjugate())
    second = _real_numerators(pairs.d_re, pairs.d_im, n * mod2.conjugate())
    return _combine(first, mod1.norm(), second, mod2.norm())


def kloosterman_general(f1: CuspFrame, f2: CuspFrame, m, n, C) -> KloostermanValue:
    """S_{a,b}(m, n; C sqrt(v1 v2)) from the (A, D) double sum"""
    m, n = as_gaussian(m), as_gaussian(n)
    C = _nonzero(C, "C")
    pairs = admissible_pairs(f1, f2, C)
    c = complex(C) * f1.sqrt_v * f2.sqrt_v
    meta = {"C": str(C), "c": [c.real, c.imag]}
    if not pairs.size:
        return KloostermanValue(0j, 0, 0.0, meta)
    numerators, den = _general_numerators(f1, f2, m, n, C, pairs)
    value, err = phase_sum(numerators, den)
    return KloostermanValue(value, pairs.size, err, meta)


def twist_covariance(
    f1: CuspFrame, f2: CuspFrame, m, n, C, beta1: complex, beta2: complex
) -> tuple[complex, complex, bool]:
    """Recompute the general sum with scaling matrices g_a n[beta1], g_b n[beta2].

    Returns the recomputed value, the value predicted from the untwisted sum, and whether the two
    agree to the cross-path tolerance.
    """
    m, n = as_gaussian(m), as_gaussian(n)
    C = _nonzero(C, "C")
    pairs = admissible_pairs(f1, f2, C)
    base = kloosterman_general(f1, f2, m, n, C)
    a = (pairs.a_re + 1j * pairs.a_im) / complex(f1.v * C) - beta1
    d = (pairs.d_re + 1j * pairs.d_im) / complex(f2.v * C) + beta2
    recomputed = complex(np.sum(np.exp(2j * np.pi * np.real(complex(m) * a + complex(n) * d))))
    predicted = e((beta2 * complex(n) - beta1 * complex(m)).real) * base.value
    tolerance = constants.CROSS_PATH_TOL + 8 * EPS * max(pairs.size, 1)
    return recomputed, predicted, abs(recomputed - predicted) <= tolerance


#############################################################
# ### same-cusp sums ###
class SameCuspPairs(NamedTuple):
    alpha: tuple[GaussianInt, ...]
    delta: tuple[GaussianInt, ...]


def _cofactors(frame: CuspFrame, c: GaussianInt) -> tuple[GaussianInt, GaussianInt, GaussianInt]:
    """(gamma, u1, gamma1) with c = gamma v w and u1/gamma1 = u/gamma in lowest terms"""
    vw = frame.v * frame.w
    if not divides(vw, c):
        raise DomainError(log_messages.INADMISSIBLE_MODULUS.format(c=c, cusp=frame.cusp))
    gamma = exact_div(c, vw)
    t = gcd(frame.u, gamma)
    return gamma, exact_div(frame.u, t), exact_div(gamma, t)


@lru_cache(maxsize=4096)
def _samecusp_pairs(frame: CuspFrame, c: GaussianInt) -> SameCuspPairs:
    u, w, q0, d = frame.u, frame.w, frame.q0, frame.d
    gamma, u1, gamma1 = _cofactors(frame, c)
    m1 = exact_div(gamma * q0, w)
    m2 = gamma1 * w

    alphas, deltas = [], []
    for delta in residues(c):
        shifted = u * delta + gamma
        if not (divides(d, delta * shifted - u) and coprime(delta, m1) and coprime(shifted, w)):
            continue
        second = u1 * delta + gamma1
        rhs = solve_linear(u1 * second, gamma1 * second + u1 * u1, m2)
        combined = None if rhs is None else crt_general(mod_inverse(delta, m1), m1, rhs[0], rhs[1])
        if combined is None or not combined[1].associate(c):
            raise ConsistencyError(
                log_messages.ALPHA_UNDETERMINED.format(c=c, lcm=None if combined is None else combined[1])
            )
        alphas.append(reduce_mod(combined[0], c))
        deltas.append(delta)
    if len(set(alphas)) != len(alphas):
        raise ConsistencyError(log_messages.BIJECTION_FAILED.format(c=c))
    return SameCuspPairs(tuple(alphas), tuple(deltas))


def samecusp_pairs(frame: CuspFrame, c) -> SameCuspPairs:
    return _samecusp_pairs(frame, _nonzero(c, "c"))


def samecusp_twist(frame: CuspFrame, w1, w2) -> complex:
    """e(Re((w2 - w1) / (u v w)))"""
    diff = as_gaussian(w2) - as_gaussian(w1)
    return e(float(_exact_real(diff, frame.u * frame.v * frame.w)))


def frame_twist(frame: CuspFrame, w1, w2) -> complex:
    """Factor turning the same-cusp normalization into that of the frame's own scaling matrix.

    pi tau_v equals the lower-triangular scaling matrix times n[-w~/(u v)], which moves every
    sum by e(Re(-w~ (w2 - w1) / (u v))).
    """
    diff = as_gaussian(w2) - as_gaussian(w1)
    return e(float(_exact_real(-(diff * frame.w_tilde), frame.u * frame.v)))


def kloosterman_samecusp(frame: CuspFrame, w1, w2, c) -> KloostermanValue:
    """S_{a,a}(w1, w2; c) for c = gamma v w, with the lower-triangular scaling matrix"""
    w1, w2, c = as_gaussian(w1), as_gaussian(w2), _nonzero(c, "c")
    pairs = samecusp_pairs(frame, c)
    if not pairs.delta:
        raise DomainError(log_messages.INADMISSIBLE_MODULUS.format(c=c, cusp=frame.cusp))
    k = c.conjugate()
    alpha = np.array([(a.re, a.im) for a in pairs.alpha], dtype=np.int64)
    delta = np.array([(x.re, x.im) for x in pairs.delta], dtype=np.int64)
    numerators = _real_numerators(alpha[:, 0], alpha[:, 1], w1 * k) + _real_numerators(
        delta[:, 0], delta[:, 1], w2 * k
    )
    value, err = phase_sum(numerators, c.norm())
    return KloostermanValue(value * samecusp_twist(frame, w1, w2), len(pairs.delta), err, {"c": str(c)})


def samecusp_admissible(frame: CuspFrame, c) -> bool:
    c = as_gaussian(c)
    if not c or not divides(frame.v * frame.w, c):
        return False
    return bool(samecusp_pairs(frame, c).delta)


def k_sum(frame: CuspFrame, w1, w2, c, d=None) -> KloostermanValue:
    """K(w1, w2; d) for d | c: alpha, delta mod d under the two congruences reduced mod d"""
    w1, w2, c = as_gaussian(w1), as_gaussian(w2), _nonzero(c, "c")
    d = c if d is None else _nonzero(d, "d")
    gamma, u1, gamma1 = _cofactors(frame, c)
    g1 = gcd(exact_div(gamma * frame.q0, frame.w), d)
    g2 = gcd(gamma1 * frame.w, d)

    total, terms = 0j, 0
    for delta in residues(d):
        first = solve_linear(delta, ONE, g1)
        second = u1 * delta + gamma1
        rhs = solve_linear(u1 * second, gamma1 * second + u1 * u1, g2)
        if first is None or rhs is None:
            continue
        combined = crt_general(first[0], first[1], rhs[0], rhs[1])
        if combined is None:
            continue
        alpha, modulus = combined
        # alpha runs over alpha* + modulus O mod d
        quotient = exact_div(d, modulus)
        terms += quotient.norm()
        if divides(quotient, w1):
            phase = _exact_real(w1 * alpha + w2 * delta, d)
            total += quotient.norm() * e(float(phase))
    return KloostermanValue(total, terms, EPS * (terms + 1), {"d": str(d)})


def kloosterman_crt(frame: CuspFrame, w1, w2, c) -> tuple[KloostermanValue, list[tuple[GaussianInt, int, KloostermanValue]]]:
    """K(w1, w2; c) as the product of its prime-power factors K(w1 lambda, w2 lambda; p^e)"""
    w1, w2, c = as_gaussian(w1), as_gaussian(w2), _nonzero(c, "c")
    product = KloostermanValue(1 + 0j, 1, 0.0)
    local = []
    for prime, exponent in factorize(c).factors:
        power = prime**exponent
        lam = mod_inverse(exact_div(c, power), power)
        factor = k_sum(frame, w1 * lam, w2 * lam, c, power)
        local.append((prime, exponent, factor))
        product = product * factor
    return product, local


#############################################################
# ### factorization through the q0-part ###
def kloosterman_factor(f1: CuspFrame, f2: CuspFrame, m, n, C) -> tuple[KloostermanValue, KloostermanValue]:
    """(general part at C', simple part at C / C') whose product is the general sum at C"""
    check_same_level(f1, f2)
    m, n, C = as_gaussian(m), as_gaussian(n), _nonzero(C, "C")
    q0 = f1.q0
    if not coprime(f1.u * f2.u, q0):
        raise DomainError(log_messages.FACTOR_HYPOTHESIS.format(u1=f1.u, u2=f2.u, q0=q0))
    part, rest = q0_part(C, q0)
    c_tilde = mod_inverse(rest, lcm(lcm(f1.v, f2.v) * part, q0))
    g1 = frame_from_pair(c_tilde * f1.u, f1.w, q0)
    g2 = frame_from_pair(c_tilde * f2.u, f2.w, q0)
    general = kloosterman_general(g1, g2, c_tilde * m, c_tilde * n, part)
    simple = kloosterman_classical(
        mod_inverse(part * f1.v, rest) * m,
        mod_inverse(part * f2.v, rest) * n,
        rest,
    )
    return general, simple


#############################################################
# ### brute force ###
def _height_schedule(H: int) -> list[int]:
    if H < constants.MIN_HEIGHT:
        raise DomainError(log_messages.HEIGHT_TOO_SMALL.format(height=H, minimum=constants.MIN_HEIGHT))
    heights = [h for h in constants.HEIGHT_SCHEDULE if h < H] + [H]
    if len(heights) == 1:
        heights.insert(0, max(constants.MIN_HEIGHT, H // 2))
    return sorted(set(heights))


def _conjugate_lower_left(P: Mat2, Q: Mat2, a_re, a_im, b_re, b_im, C: GaussianInt, d_re, d_im):
    """Lower-left entry of P [[A, B], [C, D]] Q for integral arrays A, B, D"""
    left_re, left_im = array_mul(a_re, a_im, P.c.re, P.c.im)
    k = P.d * C
    left_re, left_im = array_mul(left_re + k.re, left_im + k.im, Q.a.re, Q.a.im)
    right_re, right_im = array_mul(b_re, b_im, P.c.re, P.c.im)
    r2_re, r2_im = array_mul(d_re, d_im, P.d.re, P.d.im)
    right_re, right_im = array_mul(right_re + r2_re, right_im + r2_im, Q.c.re, Q.c.im)
    return left_re + right_re, left_im + right_im


def _bruteforce_cosets(f1: CuspFrame, f2: CuspFrame, C: GaussianInt, height: int) -> set:
    """Double-coset keys (A mod v1 C, D mod v2 C) of integral [[A, B], [C, D]] with |A|, |D| <= height
    whose conjugate gamma = pi_a [[A, B], [C, D]] pi_b^-1 lies in Gamma_0(q0)"""
    q0, P, Q = f1.q0, f1.pi, f2.pi.inverse()
    side = np.arange(-height, height + 1, dtype=np.int64)
    grid_re, grid_im = (axis.ravel() for axis in np.meshgrid(side, side, indexing="ij"))
    mod1, mod2 = f1.v * C, f2.v * C
    keys = set()
    for start in range(0, grid_re.size, 256):
        a_re = np.repeat(grid_re[start : start + 256], grid_re.size)
        a_im = np.repeat(grid_im[start : start + 256], grid_re.size)
        d_re = np.tile(grid_re, a_re.size // grid_re.size)
        d_im = np.tile(grid_im, a_re.size // grid_re.size)
        ad_re, ad_im = array_mul(a_re, a_im, d_re, d_im)
        integral = array_divisible(ad_re - 1, ad_im, C)
        a_re, a_im, d_re, d_im = a_re[integral], a_im[integral], d_re[integral], d_im[integral]
        b_re, b_im = array_exact_div(ad_re[integral] - 1, ad_im[integral], C)
        low_re, low_im = _conjugate_lower_left(P, Q, a_re, a_im, b_re, b_im, C, d_re, d_im)
        inside = np.flatnonzero(array_divisible(low_re, low_im, q0))
        if not inside.size:
            continue
        reduced = array_reduce(a_re[inside], a_im[inside], mod1) + array_reduce(d_re[inside], d_im[inside], mod2)
        rows = np.stack(reduced, axis=1)
        _, first = np.unique(rows, axis=0, return_index=True)
        for j in inside[first].tolist():
            A, D = GaussianInt(int(a_re[j]), int(a_im[j])), GaussianInt(int(d_re[j]), int(d_im[j]))
            key = (reduce_mod(A, mod1), reduce_mod(D, mod2))
            if key in keys:
                continue
            gamma = P @ Mat2(A, GaussianInt(int(b_re[j]), int(b_im[j])), C, D) @ Q
            if not gamma.in_gamma0(q0):
                raise ConsistencyError(log_messages.COSET_OUTSIDE.format(gamma=gamma, q0=q0))
            keys.add(key)
    return keys


@lru_cache(maxsize=1024)
def _stable_cosets(f1: CuspFrame, f2: CuspFrame, C: GaussianInt, H: int) -> tuple[tuple, int]:
    previous = None
    for height in _height_schedule(H):
        keys = _bruteforce_cosets(f1, f2, C, height)
        logger.debug(log_messages.HEIGHT_STEP.format(height=height, count=len(keys)))
        if previous is not None and keys == previous:
            logger.debug(log_messages.BRUTEFORCE_STATUS.format(status="stabilized", height=height))
            return tuple(sorted(keys, key=str)), height
        previous = keys
    raise InconclusiveResult(log_messages.BRUTEFORCE_STATUS.format(status="did not stabilize", height=H))


def kloosterman_bruteforce(f1: CuspFrame, f2: CuspFrame, m, n, C, H: int = 64) -> KloostermanValue:
    """Enumerate matrices by height until the set of double cosets stops changing"""
    check_same_level(f1, f2)
    m, n, C = as_gaussian(m), as_gaussian(n), _nonzero(C, "C")
    keys, height = _stable_cosets(f1, f2, C, H)
    return _coset_value(f1, f2, m, n, C, keys, height)


def _coset_value(f1, f2, m, n, C, keys, height) -> KloostermanValue:
    mod1, mod2 = f1.v * C, f2.v * C
    c = complex(C) * f1.sqrt_v * f2.sqrt_v
    meta = {"C": str(C), "c": [c.real, c.imag], "height": height, "stabilized": True}
    if not keys:
        return KloostermanValue(0j, 0, 0.0, meta)
    total = 0j
    for a, d in keys:
        total += e(float(_exact_real(m * a, mod1) + _exact_real(n * d, mod2)))
    return KloostermanValue(total, len(keys), EPS * 4 * len(keys), meta)


#############################################################
# ### delta term ###
def _stabilizer_representatives(frame: CuspFrame) -> list[Mat2]:
    """Gamma_a' \\ Gamma_a as matrices of Gamma_0(q0)"""
    reps = [IDENTITY, -IDENTITY]
    if frame.stab_index == 4:
        twisted = frame.pi @ Mat2(I, frame.z0, ZERO, -I) @ frame.pi.inverse()
        reps += [twisted, -twisted]
    return reps


def _delta_contribution(frame: CuspFrame, unit: GaussianInt, b: GaussianInt, w1, w2) -> complex | None:
    if unit * unit * w1 != w2:
        return None
    return e(float(_exact_real(b * unit * w1, frame.v)))


def delta_cosets(f1: CuspFrame, f2: CuspFrame) -> list[tuple[GaussianInt, GaussianInt]]:
    """(u(gamma), B) with pi_a^-1 gamma pi_b = [[u, B], [0, 1/u]] over Gamma_a' \\ {gamma : gamma b = a}"""
    check_same_level(f1, f2)
    q0 = f1.q0
    if f1 == f2:
        gamma0 = IDENTITY
    else:
        gamma0 = equivalence_witness(f2.cusp, f1.cusp, q0)
        if gamma0 is None:
            return []
    cosets = []
    for rep in _stabilizer_representatives(f1):
        gamma = rep @ gamma0
        M = f1.pi.inverse() @ gamma @ f2.pi
        if not (gamma.in_gamma0(q0) and M.is_upper_triangular()):
            raise ConsistencyError(log_messages.NOT_UPPER_TRIANGULAR.format(gamma=gamma))
        cosets.append((M.a, M.b))
    return cosets


def delta_term(f1: CuspFrame, f2: CuspFrame, w1, w2) -> DeltaTerm:
    check_same_level(f1, f2)
    w1, w2 = as_gaussian(w1), as_gaussian(w2)
    if not cusps_equivalent(f1.cusp, f2.cusp, f1.q0):
        return DeltaTerm(0j, 0)
    if f1 == f2:
        value, count = 0j, 0
        if w1 == w2:
            value, count = 2 + 0j, 2
        if f1.stab_index == 4 and w2 == -w1:
            # e(-Re(beta w1)) with beta = -i z0 / v
            value += 2 * e(float(_exact_real(I * f1.z0 * w1, f1.v)))
            count += 2
        return DeltaTerm(value, count)

    value, count = 0j, 0
    for unit, b in delta_cosets(f1, f2):
        term = _delta_contribution(f1, unit, b, w1, w2)
        if term is not None:
            value += term
            count += 1
    return DeltaTerm(value, count)


@lru_cache(maxsize=256)
def _delta_cosets(f1: CuspFrame, f2: CuspFrame, H: int) -> tuple[Mat2, ...]:
    """Upper-triangular [[e, B], [0, 1/e]] with B mod v1 whose conjugate by pi_a, pi_b^-1 is in Gamma_0(q0)"""
    q0 = f1.q0
    pi_b_inv = f2.pi.inverse()
    previous = None
    for height in _height_schedule(H):
        cosets = set()
        for unit in (ONE, I, -ONE, -I):
            for x in range(-height, height + 1):
                for y in range(-height, height + 1):
                    M = Mat2(unit, GaussianInt(x, y), ZERO, unit.conjugate())
                    if (f1.pi @ M @ pi_b_inv).in_gamma0(q0):
                        cosets.add(Mat2(M.a, reduce_mod(M.b, f1.v), ZERO, M.d))
        logger.debug(log_messages.HEIGHT_STEP.format(height=height, count=len(cosets)))
        if previous is not None and cosets == previous:
            return tuple(sorted(cosets, key=str))
        previous = cosets
    raise InconclusiveResult(log_messages.BRUTEFORCE_STATUS.format(status="did not stabilize", height=H))


def delta_term_bruteforce(f1: CuspFrame, f2: CuspFrame, w1, w2, H: int = 16) -> DeltaTerm:
    """Enumerate [[e, B], [0, 1/e]] with |B| <= height, keep those conjugating into Gamma_0(q0).

    A coset M = [[a, B], [0, d]] contributes e(Re(w1 B / (v1 d))) when w1 a = w2 d.
    """
    check_same_level(f1, f2)
    w1, w2 = as_gaussian(w1), as_gaussian(w2)
    scale = complex(f1.v)
    value, count = 0j, 0
    for M in _delta_cosets(f1, f2, H):
        if w1 * M.a != w2 * M.d:
            continue
        value += e((complex(w1) * complex(M.b) / (complex(M.d) * scale)).real)
        count += 1
    return DeltaTerm(value, count)


#############################################################
# ### bounds ###
def tau_both(n) -> tuple[int, int]:
    stats = multiplicative_stats(n)
    return stats.tau_ideal, stats.tau_assoc


def _row(kind: str, params: dict, lhs: float, envelope: float, **extra) -> SweepRow:
    return SweepRow({"kind": kind, **params}, lhs, envelope, extra)


def check_bounds(kind: str, params: dict) -> SweepRow:
    """|S| against one bound; returns a sweep row (violations are reported, never raised)"""
    m, n = as_gaussian(params.get("m", 0)), as_gaussian(params.get("n", 0))
    text = {"m": str(m), "n": str(n)}
    match kind:
        case "trivial":
            c = as_gaussian(params["c"])
            lhs = abs(kloosterman_classical(m, n, c).value)
            return _row(kind, {**text, "c": str(c)}, lhs, float(multiplicative_stats(c).phi))
        case "weil_estermann_prime":
            prime, k = as_gaussian(params["prime"]), int(params["k"])
            c = prime**k
            tau, upsilon = (8 * math.sqrt(2), 2) if divides(prime, 2) else (2.0, 0)
            g = gcd_many(m, n, c)
            envelope = tau * math.sqrt(prime.norm()) ** upsilon * math.sqrt((g * c).norm())
            lhs = abs(kloosterman_classical(m, n, c).value)
            return _row(kind, {**text, "prime": str(prime), "k": k}, lhs, envelope)
        case "weil_estermann":
            c = as_gaussian(params["c"])
            g = gcd_many(m, n, c)
            envelope = 2**3.5 * 2 ** multiplicative_stats(c).omega * math.sqrt((g * c).norm())
            lhs = abs(kloosterman_classical(m, n, c).value)
            return _row(kind, {**text, "c": str(c)}, lhs, envelope)
        case "samecusp_we":
            frame, c = params["frame"], as_gaussian(params["c"])
            lhs = abs(kloosterman_samecusp(frame, m, n, c).value)
            base = math.sqrt(8) * math.sqrt((gcd_many(m, n, c) * c).norm())
            tau_ideal, tau_assoc = tau_both(c)
            return _row(
                kind,
                {**text, "c": str(c), "cusp": str(frame.cusp), "q0": str(frame.q0)},
                lhs,
                base * tau_assoc,
                envelope_ideal=base * tau_ideal,
                violated_ideal=lhs > base * tau_ideal + constants.CROSS_PATH_TOL,
            )
        case "general_trivial":
            f1, f2, C = params["f1"], params["f2"], as_gaussian(params["C"])
            lhs = abs(kloosterman_general(f1, f2, m, n, C).value)
            envelope = float((C * f1.v * f2.v).norm())
            return _row(kind, {**text, "C": str(C), "a": str(f1.cusp), "b": str(f2.cusp)}, lhs, envelope)
        case "general_we":
            f1, f2, C = params["f1"], params["f2"], as_gaussian(params["C"])
            lhs = abs(kloosterman_general(f1, f2, m, n, C).value)
            part, _ = q0_part(C, f1.q0)
            size = math.sqrt((gcd_many(m, n, C) * C * part).norm()) * f1.v.norm() * f2.v.norm()
            tau_ideal, tau_assoc = tau_both(C)
            return _row(
                kind,
                {**text, "C": str(C), "a": str(f1.cusp), "b": str(f2.cusp)},
                lhs,
                2**1.5 * tau_assoc * size,
                envelope_ideal=2**1.5 * tau_ideal * size,
                violated_ideal=lhs > 2**1.5 * tau_ideal * size + constants.CROSS_PATH_TOL,
            )
        case _:
            raise DomainError(log_messages.UNKNOWN_BOUND.format(kind=kind))
