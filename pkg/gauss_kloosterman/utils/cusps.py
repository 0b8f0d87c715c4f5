"""Cusps of the Hecke congruence subgroup Gamma_0(q0) of SL(2, Z[i]).

Every cusp is moved to a normalized representative u/w with w | q0 and (u, q0) ~ 1.
Its scaling matrix is the product of

    pi = [[u, -w~], [w, u~]] in SL(2, Z[i]), with u u~ = 1 mod q0, and
    tau_v = diag(sqrt v, 1/sqrt v),  where v = (q0/w) / (w, q0/w).

Only pi ever enters an exact computation. Conjugating by tau_v turns the entries
(A, B, C, D) of pi_a^-1 gamma pi_b into (A, B/v, Cv, D) when both cusps share v,
so every group-membership test stays inside Z[i].
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import sympy

from gauss_kloosterman.logs import log_messages
from gauss_kloosterman.utils import principal_sqrt
from gauss_kloosterman.utils.errors import ConsistencyError, DomainError, ParseError
from gauss_kloosterman.utils.gaussint import (
    I,
    ONE,
    ZERO,
    GaussianInt,
    as_gaussian,
    coprime,
    crt_general,
    dedekind_zeta2,
    divides,
    divisors,
    euler_phi,
    exact_div,
    factorize,
    gcd,
    parse_gaussian,
    reduce_mod,
    residue_key,
    residues,
    solve_linear,
    xgcd,
    _nonzero,
)
from gauss_kloosterman.utils.matrix import IDENTITY, Mat2, rotation, translation

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Cusp:
    """u/w in lowest terms with w canonical; infinity is stored as 1/0"""

    u: GaussianInt
    w: GaussianInt

    @classmethod
    def of(cls, u, w) -> "Cusp":
        u, w = as_gaussian(u), as_gaussian(w)
        if not w:
            return INFINITY
        g = gcd(u, w)
        u, w = exact_div(u, g), exact_div(w, g)
        unit = w.unit_part()
        return cls(u * unit.conjugate(), w.canonical())

    @property
    def is_infinity(self) -> bool:
        return not self.w

    @property
    def pair(self) -> tuple[GaussianInt, GaussianInt]:
        return self.u, self.w

    def __str__(self) -> str:
        return format_cusp(self)


INFINITY = Cusp(ONE, ZERO)


def parse_cusp(text: str) -> Cusp:
    """Read "inf" or "u/w"; a bare Gaussian integer u means u/1"""
    stripped = text.strip()
    if stripped.lower() in ("inf", "infinity", "oo"):
        return INFINITY
    numerator, slash, denominator = text.partition("/")
    u = _parse_part(text, numerator, offset=0)
    w = _parse_part(text, denominator, offset=len(numerator) + 1) if slash else ONE
    if not u and not w:
        raise ParseError(log_messages.BAD_LITERAL.format(kind="cusp", text=text, pos=len(numerator)))
    return Cusp.of(u, w)


def _parse_part(text: str, part: str, offset: int) -> GaussianInt:
    try:
        return parse_gaussian(part)
    except ParseError as err:
        pos = offset + getattr(err, "position", 0)
        error = ParseError(log_messages.BAD_LITERAL.format(kind="cusp", text=text, pos=pos))
        error.position = pos
        raise error from err


def format_cusp(cusp: Cusp) -> str:
    if cusp.is_infinity:
        return "inf"
    return f"{cusp.u}/{cusp.w}"


def as_cusp(value) -> Cusp:
    if isinstance(value, Cusp):
        return value
    if isinstance(value, str):
        return parse_cusp(value)
    if isinstance(value, tuple) and len(value) == 2:
        return Cusp.of(*value)
    return Cusp.of(value, ONE)


#############################################################
# ### frames ###
@dataclass(frozen=True)
class CuspFrame:
    cusp: Cusp
    q0: GaussianInt
    pi: Mat2
    v: GaussianInt
    mu_inv: GaussianInt
    stab_index: int
    z0: GaussianInt | None
    source: Cusp = field(compare=False)
    gamma: Mat2 = field(compare=False)

    @property
    def u(self) -> GaussianInt:
        return self.cusp.u

    @property
    def w(self) -> GaussianInt:
        return self.cusp.w

    @property
    def u_tilde(self) -> GaussianInt:
        return self.pi.d

    @property
    def w_tilde(self) -> GaussianInt:
        return -self.pi.b

    @property
    def width(self) -> GaussianInt:
        """m_c; the translations of the cusp stabilizer are n[m_c t], t in Z[i], in pi-coordinates"""
        return self.v

    @property
    def d(self) -> GaussianInt:
        return gcd(self.w, exact_div(self.q0, self.w))

    @property
    def sqrt_v(self) -> complex:
        return principal_sqrt(complex(self.v))

    @property
    def beta(self) -> complex | None:
        """beta_a = -i z0 / v, so that h[i] n[beta_a] is the extra stabilizer generator"""
        if self.z0 is None:
            return None
        return complex(-I * self.z0) / complex(self.v)

    def to_dict(self) -> dict:
        beta = self.beta
        return {
            "cusp": format_cusp(self.cusp),
            "source": format_cusp(self.source),
            "q0": str(self.q0),
            "u": str(self.u),
            "w": str(self.w),
            "u_tilde": str(self.u_tilde),
            "w_tilde": str(self.w_tilde),
            "width": str(self.width),
            "width_norm": self.width.norm(),
            "mu_inv": str(self.mu_inv),
            "stab_index": self.stab_index,
            "z0": None if self.z0 is None else str(self.z0),
            "beta": None if beta is None else [beta.real, beta.imag],
            "pi": [[str(self.pi.a), str(self.pi.b)], [str(self.pi.c), str(self.pi.d)]],
            "gamma": [[str(self.gamma.a), str(self.gamma.b)], [str(self.gamma.c), str(self.gamma.d)]],
        }


def frame_from_pair(u, w, q0, source: Cusp | None = None, gamma: Mat2 = IDENTITY) -> CuspFrame:
    """Frame for a cusp already given as u/w with w | q0 and (u, q0) ~ 1"""
    u, q0 = as_gaussian(u), _nonzero(q0, "q0")
    cusp = Cusp.of(u, w)
    u, w = cusp.pair
    if cusp.is_infinity or not divides(w, q0) or not u or not coprime(u, q0):
        raise DomainError(log_messages.NOT_NORMALIZED.format(cusp=cusp, q0=q0))

    # u r + q0 s = 1 gives u~ = r and w~ = (q0/w) s
    _, r, s = xgcd(u, q0)
    q_prime = exact_div(q0, w)
    pi = Mat2(u, -(q_prime * s), w, r)
    d = gcd(w, q_prime)
    v = exact_div(q_prime, d).canonical()
    mu_inv = exact_div(q0, d).canonical()
    stab_index, z0 = _stabilizer(cusp, q0, pi, d)
    return CuspFrame(
        cusp=cusp,
        q0=q0,
        pi=pi,
        v=v,
        mu_inv=mu_inv,
        stab_index=stab_index,
        z0=z0,
        source=source if source is not None else cusp,
        gamma=gamma,
    )


def build_frame(cusp, q0) -> CuspFrame:
    cusp, q0 = as_cusp(cusp), _nonzero(q0, "q0")
    u, w, gamma = normalize_cusp(cusp, q0)
    return frame_from_pair(u, w, q0, source=cusp, gamma=gamma)


def _stabilizer(cusp: Cusp, q0: GaussianInt, pi: Mat2, d: GaussianInt) -> tuple[int, GaussianInt | None]:
    if not divides(d, 2):
        return 2, None
    # pi [[i, z0], [0, -i]] pi^-1 has lower-left entry w (2 i u~ - w z0)
    w = cusp.w
    solution = solve_linear(w, 2 * I * pi.d, exact_div(q0, w))
    if solution is None:
        raise ConsistencyError(log_messages.STABILIZER_FAILED.format(cusp=cusp))
    z0 = solution[0]
    certificate = pi @ Mat2(I, z0, ZERO, -I) @ pi.inverse()
    if not certificate.in_gamma0(q0):
        raise ConsistencyError(log_messages.STABILIZER_FAILED.format(cusp=cusp))
    return 4, z0


def stabilizer_data(frame: CuspFrame) -> tuple[int, complex | None]:
    """[Gamma_a : Gamma_a'] and beta_a, recomputed and certified by exact matrix membership"""
    stab_index, z0 = _stabilizer(frame.cusp, frame.q0, frame.pi, frame.d)
    if z0 is None:
        return stab_index, None
    return stab_index, complex(-I * z0) / complex(frame.v)


def scaling_conjugation_check(frame: CuspFrame) -> bool:
    """g n[1] g^-1 and g n[i] g^-1 lie in Gamma_0(q0) and g sends infinity to the cusp"""
    pi_inv = frame.pi.inverse()
    for t in (ONE, I):
        if not (frame.pi @ translation(frame.v * t) @ pi_inv).in_gamma0(frame.q0):
            return False
    return frame.pi.maps((ONE, ZERO), frame.cusp.pair)


def width_lattice_check(frame: CuspFrame) -> bool:
    """The t with g n[t] g^-1 in Gamma_0(q0) form exactly Z[i].

    Any larger group of translations contains some k/p, p a rational prime, outside Z[i]; the
    conjugate is I + (v k / p) R with R = [[-u w, u^2], [-w^2, u w]], so only primes dividing
    2 |v|^2 can matter.
    """
    if not scaling_conjugation_check(frame):
        return False
    u, w, v = frame.u, frame.w, frame.v
    rank_one = (-(u * w), u * u, -(w * w), u * w)
    for p in sympy.primefactors(2 * v.norm()):
        for a in range(p):
            for b in range(p):
                if not a and not b:
                    continue
                k = GaussianInt(a, b) * v
                integral = all(divides(p, k * entry) for entry in rank_one)
                if integral and divides(frame.q0 * p, k * w * w):
                    return False
    return True


#############################################################
# ### normalization ###
def normalize_cusp(cusp, q0) -> tuple[GaussianInt, GaussianInt, Mat2]:
    """An equivalent u/w with w | q0, (u, q0) ~ 1, and gamma in Gamma_0(q0) sending the cusp there"""
    return _normalize(as_cusp(cusp), _nonzero(q0, "q0"))


@lru_cache(maxsize=65536)
def _normalize(cusp: Cusp, q0: GaussianInt) -> tuple[GaussianInt, GaussianInt, Mat2]:
    t, s = cusp.pair
    if s and divides(s, q0) and t and coprime(t, q0):
        return t, s, IDENTITY

    w = gcd(s, q0)
    q_prime = exact_div(q0, w)
    s_w = exact_div(s, w)
    # kappa q' t + delta s_w = 1, then shift delta until it is a unit mod q0
    _, kappa, delta = xgcd(q_prime * t, s_w)
    for sigma in residues(w):
        if coprime(delta + sigma * q_prime * t, q0):
            kappa, delta = kappa - sigma * s_w, delta + sigma * q_prime * t
            break
    _, x, y = xgcd(delta, q0 * kappa)
    gamma = Mat2(x, -y, q0 * kappa, delta)
    u0 = x * t - y * s
    if not u0:
        gamma = translation(ONE) @ gamma
        u0 = w

    u, move = _tidy(u0, w, q0)
    gamma = move @ gamma
    if not (gamma.in_gamma0(q0) and gamma.maps(cusp.pair, (u, w))):
        raise ConsistencyError(log_messages.WITNESS_FAILED.format(gamma=gamma, src=cusp, dst=f"{u}/{w}", q0=q0))
    logger.debug(log_messages.CUSP_NORMALIZED.format(cusp=cusp, normalized=f"{u}/{w}", q0=q0))
    return u, w, gamma


def _outside_primes(modulus: GaussianInt, q0: GaussianInt) -> GaussianInt:
    r = ONE
    for prime in factorize(q0).primes():
        if not divides(prime, modulus):
            r = r * prime
    return r


def _lift_coprime(u0: GaussianInt, modulus: GaussianInt, q0: GaussianInt) -> GaussianInt:
    """u = u0 mod `modulus` and u = 1 at the primes of q0 not dividing it"""
    r = _outside_primes(modulus, q0)
    x, _ = crt_general(u0, modulus, ONE, r)
    return x if x else ONE


def _tidy(u0: GaussianInt, w: GaussianInt, q0: GaussianInt) -> tuple[GaussianInt, Mat2]:
    best = None
    for sign, flip in ((ONE, IDENTITY), (-ONE, rotation(I))):
        u = _lift_coprime(sign * u0, w, q0)
        if best is None or residue_key(u) < residue_key(best[0]):
            k = exact_div(u - sign * u0, w)
            best = u, translation(k) @ flip
    return best


#############################################################
# ### equivalence and classes ###
def _criterion(first: tuple, second: tuple, q0: GaussianInt) -> bool:
    (u1, w1, _), (u2, w2, _) = first, second
    if w1 != w2:
        return False
    d = gcd(w1, exact_div(q0, w1))
    return divides(d, u2 - u1) or divides(d, u2 + u1)


def cusps_equivalent(c1, c2, q0) -> bool:
    q0 = _nonzero(q0, "q0")
    return _criterion(normalize_cusp(c1, q0), normalize_cusp(c2, q0), q0)


def equivalence_witness(c1, c2, q0) -> Mat2 | None:
    """gamma in Gamma_0(q0) with gamma c1 = c2, or None when the cusps are inequivalent"""
    c1, c2, q0 = as_cusp(c1), as_cusp(c2), _nonzero(q0, "q0")
    first, second = normalize_cusp(c1, q0), normalize_cusp(c2, q0)
    if not _criterion(first, second, q0):
        return None
    (u1, w, gamma1), (u2, _, gamma2) = first, second
    pi1, pi2 = frame_from_pair(u1, w, q0).pi, frame_from_pair(u2, w, q0).pi
    q_prime = exact_div(q0, w)
    for unit in (ONE, I, -ONE, -I):
        # pi2 [[e, x], [0, 1/e]] pi1^-1 has lower-left entry w (e u1~ - u2~/e - w x)
        solution = solve_linear(w, unit * pi1.d - unit.conjugate() * pi2.d, q_prime)
        if solution is None:
            continue
        middle = pi2 @ Mat2(unit, solution[0], ZERO, unit.conjugate()) @ pi1.inverse()
        gamma = gamma2.inverse() @ middle @ gamma1
        if gamma.in_gamma0(q0) and gamma.maps(c1.pair, c2.pair):
            return gamma
    raise ConsistencyError(log_messages.WITNESS_FAILED.format(gamma=None, src=c1, dst=c2, q0=q0))


def class_representatives(q0) -> list[CuspFrame]:
    return list(_class_representatives(_nonzero(q0, "q0").canonical()))


@lru_cache(maxsize=256)
def _class_representatives(q0: GaussianInt) -> tuple[CuspFrame, ...]:
    frames = []
    for w in divisors(q0):
        d = gcd(w, exact_div(q0, w))
        seen = set()
        for u0 in residues(d, coprime_only=True):
            u0 = min(u0, reduce_mod(-u0, d), key=residue_key)
            if u0 in seen:
                continue
            seen.add(u0)
            frames.append(frame_from_pair(_lift_coprime(u0, d, q0), w, q0))
    return tuple(frames)


def cusp_count_formula(q0) -> int:
    """The class number as a sum over all divisors w of q0, associates included"""
    q0 = _nonzero(q0, "q0")
    total = Fraction(0)
    for w in divisors(q0, associates=True):
        d = gcd(w, exact_div(q0, w))
        phi = euler_phi(d)
        total += Fraction(phi, 8)
        if divides(d, 2):
            total += Fraction(phi, 8)
    if total.denominator != 1:
        raise ConsistencyError(log_messages.NOT_INTEGRAL.format(what="cusp count", q0=q0, value=total))
    return int(total)


def brute_force_class_count(q0) -> int:
    """Union-find over an explicit finite set of cusps that meets every class"""
    q0 = _nonzero(q0, "q0")
    candidates = {INFINITY, Cusp.of(ZERO, ONE)}
    numerators = residues(q0, coprime_only=True)
    for w in divisors(q0, associates=True):
        for u in numerators:
            candidates.add(Cusp.of(u if u else ONE, w))
    candidates = sorted(candidates, key=lambda c: (residue_key(c.w), residue_key(c.u)))

    parent = list(range(len(candidates)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    roots: list[int] = []
    for idx, cusp in enumerate(candidates):
        for root in roots:
            if cusps_equivalent(candidates[root], cusp, q0):
                parent[idx] = find(root)
                break
        else:
            roots.append(idx)
    return len({find(i) for i in range(len(candidates))})


def index_and_covolume(q0, zeta2: complex | float | None = None) -> tuple[int, float]:
    q0 = _nonzero(q0, "q0")
    index = Fraction(q0.norm())
    for prime in factorize(q0).primes():
        index *= 1 + Fraction(1, prime.norm())
    if index.denominator != 1:
        raise ConsistencyError(log_messages.NOT_INTEGRAL.format(what="index", q0=q0, value=index))
    zeta = dedekind_zeta2() if zeta2 is None else complex(zeta2).real
    return int(index), 2 * zeta * int(index) / math.pi**2


#############################################################
# ### moduli ###
def allowed_moduli(f1: CuspFrame, f2: CuspFrame, X: float) -> list[GaussianInt]:
    """The C != 0 with c = C sqrt(v1 v2) in the modulus set and |c| <= X, ordered by |c| then arg(c)"""
    from gauss_kloosterman.utils.kloosterman import admissible_pairs, check_same_level

    check_same_level(f1, f2)
    scale = math.sqrt(math.sqrt(f1.v.norm() * f2.v.norm()))
    bound = (X / scale) ** 2
    radius = math.isqrt(int(bound)) + 1
    phase = f1.sqrt_v * f2.sqrt_v
    found = []
    for a in range(-radius, radius + 1):
        for b in range(-radius, radius + 1):
            C = GaussianInt(a, b)
            if not C or C.norm() > bound:
                continue
            if admissible_pairs(f1, f2, C).size:
                angle = math.atan2((complex(C) * phase).imag, (complex(C) * phase).real) % (2 * math.pi)
                found.append((C.norm(), angle, C))
    return [C for _, _, C in sorted(found, key=lambda item: (item[0], item[1]))]
