"""Large-sieve sums over Gaussian-integer frequencies and the geometric side of the sum formula.

U-sums run over a single cusp with the same-cusp modulus c (a Gaussian integer, c = C v for the
general modulus C). Their Kloosterman matrix is assembled once per (frame, c, N) and reused across
psi, M and the coefficient families.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import mpmath
import numpy as np

from gauss_kloosterman.logs import log_messages
from gauss_kloosterman.utils import e, parallel_map, principal_sqrt
from gauss_kloosterman.utils.bessel import bessel_j_star, finite, panel_nodes
from gauss_kloosterman.utils.btransform import TestParams, b_transform, diagonal_term
from gauss_kloosterman.utils.config import constants
from gauss_kloosterman.utils.cusps import CuspFrame, allowed_moduli, build_frame, class_representatives
from gauss_kloosterman.utils.errors import DomainError
from gauss_kloosterman.utils.gaussint import (
    GaussianInt,
    array_divisible,
    as_gaussian,
    box_representatives,
    divisors,
    exact_div,
    parse_gaussian,
    _nonzero,
)
from gauss_kloosterman.utils.kloosterman import (
    check_same_level,
    delta_term,
    frame_twist,
    kloosterman_general,
    kloosterman_samecusp,
    samecusp_admissible,
    samecusp_pairs,
    tau_both,
)
from gauss_kloosterman.utils.report import SweepReport, SweepRow

logger = logging.getLogger(__name__)

BOUND_KINDS = ("tau", "large_sieve", "small_modulus")


#############################################################
# ### coefficient vectors ###
def annulus(N: float) -> list[GaussianInt]:
    """The w with N/2 < |w|^2 <= N, by norm and then by argument in [0, 2 pi)"""
    if N < 1:
        raise DomainError(log_messages.SMALL_N.format(N=N))
    radius = math.isqrt(int(N))
    points = [
        GaussianInt(x, y)
        for x in range(-radius, radius + 1)
        for y in range(-radius, radius + 1)
        if N / 2 < x * x + y * y <= N
    ]
    return sorted(points, key=lambda w: (w.norm(), math.atan2(w.im, w.re) % (2 * math.pi)))


@dataclass(frozen=True)
class CoeffVector:
    N: float
    entries: dict[GaussianInt, complex]

    def __post_init__(self) -> None:
        if self.N < 1:
            raise DomainError(log_messages.SMALL_N.format(N=self.N))
        for omega in self.entries:
            if not self.N / 2 < omega.norm() <= self.N:
                raise DomainError(log_messages.OUT_OF_ANNULUS.format(omega=omega, N=self.N))

    @property
    def omegas(self) -> list[GaussianInt]:
        return list(self.entries)

    @property
    def values(self) -> np.ndarray:
        return np.array(list(self.entries.values()), dtype=complex)

    @property
    def norm(self) -> float:
        return math.sqrt(math.fsum(abs(value) ** 2 for value in self.entries.values()))

    def to_dict(self) -> dict:
        return {"N": self.N, "entries": {str(w): [v.real, v.imag] for w, v in self.entries.items()}}


def make_coefficients(
    family: str,
    N: float,
    seed: int = 0,
    beta: complex = constants.TWIST_BETA,
    spike: GaussianInt | None = None,
) -> CoeffVector:
    points = annulus(N)
    match family:
        case "ones":
            values = [1 + 0j] * len(points)
        case "spike":
            target = points[0] if spike is None else as_gaussian(spike)
            values = [1 + 0j if w == target else 0j for w in points]
            if target not in points:
                raise DomainError(log_messages.OUT_OF_ANNULUS.format(omega=target, N=N))
        case "random_phase":
            rng = np.random.default_rng(seed)
            values = [complex(z) for z in np.exp(2j * np.pi * rng.random(len(points)))]
        case "twist":
            values = [e((complex(beta) * complex(w)).real) for w in points]
        case _:
            raise DomainError(log_messages.UNSUPPORTED_FAMILY.format(family=family))
    return CoeffVector(N, dict(zip(points, values)))


def _units_and_moduli(b: CoeffVector) -> tuple[np.ndarray, np.ndarray]:
    z = np.array([complex(w) for w in b.omegas], dtype=complex)
    return z / np.abs(z), np.abs(z)


#############################################################
# ### U-sums ###
def _check_modulus(frame: CuspFrame, c) -> GaussianInt:
    c = _nonzero(c, "c")
    if not samecusp_admissible(frame, c):
        raise DomainError(log_messages.NOT_ALLOWED_MODULUS.format(c=c, a=frame.cusp, b=frame.cusp))
    return c


def _phase_matrix(residues: tuple[GaussianInt, ...], omegas: list[GaussianInt], c: GaussianInt) -> np.ndarray:
    """e(Re(r w / c)) for residues r (columns) and frequencies w (rows)"""
    k = [w * c.conjugate() for w in omegas]
    k_re = np.array([x.re for x in k], dtype=np.int64)
    k_im = np.array([x.im for x in k], dtype=np.int64)
    r_re = np.array([r.re for r in residues], dtype=np.int64)
    r_im = np.array([r.im for r in residues], dtype=np.int64)
    numerators = np.mod(np.outer(k_re, r_re) - np.outer(k_im, r_im), c.norm())
    return np.exp(2j * np.pi * numerators / c.norm())


def samecusp_matrix(frame: CuspFrame, c, omegas: list[GaussianInt]) -> np.ndarray:
    """S_{a,a}(w_i, w_j; c) for all pairs of frequencies, through the (alpha, delta) pairs"""
    c = _check_modulus(frame, c)
    pairs = samecusp_pairs(frame, c)
    first = _phase_matrix(pairs.alpha, omegas, c)
    second = _phase_matrix(pairs.delta, omegas, c)
    vw = frame.u * frame.v * frame.w
    twist = np.array([e((complex(w) / complex(vw)).real) for w in omegas], dtype=complex)
    return twist.conj()[:, None] * (first @ second.T) * twist[None, :]


def _u_from_matrix(S: np.ndarray, b: CoeffVector, psi: float, modulus: float, M: int) -> float:
    if M < 0:
        raise DomainError(log_messages.NEGATIVE_M.format(M=M))
    units, radii = _units_and_moduli(b)
    values = b.values
    weight = S * np.exp(2j * np.pi * psi * np.sqrt(np.outer(radii, radii)) / modulus)
    total = []
    for m in range(-M, M + 1):
        twist = units**m
        total.append(abs(np.dot(values.conj() * twist, weight @ (values * twist))))
    return math.fsum(total)


def u_sum(frame: CuspFrame, psi: float, c, M: int, b: CoeffVector) -> float:
    """sum over |m| <= M of |sum conj(b(w1)) b(w2) (w1 w2/|w1 w2|)^m S(w1, w2; c) e(psi sqrt|w1 w2| / |c|)|"""
    c = _check_modulus(frame, c)
    if not b.entries or not np.any(b.values):
        return 0.0
    S = samecusp_matrix(frame, c, b.omegas)
    return _u_from_matrix(S, b, psi, abs(complex(c)), M)


def u_sum_reference(frame: CuspFrame, psi: float, c, M: int, b: CoeffVector) -> float:
    """The same U-sum with every entry taken from the general (A, D) sum at C = c / v"""
    c = _check_modulus(frame, c)
    C = exact_div(c, frame.v)
    modulus = abs(complex(c))
    omegas, values = b.omegas, b.values
    weight = {}
    for i, w1 in enumerate(omegas):
        for j, w2 in enumerate(omegas):
            if values[i] and values[j]:
                s = kloosterman_general(frame, frame, w1, w2, C).value * frame_twist(frame, w1, w2).conjugate()
                phase = e(psi * math.sqrt(abs(complex(w1 * w2))) / modulus)
                weight[i, j] = values[i].conjugate() * values[j] * s * phase
    total = 0.0
    for m in range(-M, M + 1):
        inner = 0j
        for (i, j), term in weight.items():
            product = complex(omegas[i] * omegas[j])
            inner += term * (product / abs(product)) ** m
        total += abs(inner)
    return total


def kloosterman_matrix_form(frame: CuspFrame, c, b: CoeffVector) -> float:
    """|conj(b)^T S b| with S filled entry by entry from kloosterman_samecusp"""
    c = _check_modulus(frame, c)
    omegas = b.omegas
    S = np.array([[kloosterman_samecusp(frame, w1, w2, c).value for w2 in omegas] for w1 in omegas])
    values = b.values
    return abs(np.dot(values.conj(), S @ values))


#############################################################
# ### bounds for U-sums ###
def bound_rows(base: dict, lhs: float, c: GaussianInt, psi: float, M: int, N: float, norm2: float) -> list[SweepRow]:
    """One row per bound kind whose hypotheses hold at this point"""
    modulus = abs(complex(c))
    tau_ideal, tau_assoc = tau_both(c)
    rows = [
        SweepRow(
            {**base, "kind": "tau"},
            lhs,
            tau_assoc**1.5 * modulus * (M + 1) * N * norm2,
            {"envelope_ideal": tau_ideal**1.5 * modulus * (M + 1) * N * norm2},
        ),
        SweepRow(
            {**base, "kind": "large_sieve"},
            lhs,
            math.sqrt(1 + abs(psi)) * (modulus * (M + 1) + math.sqrt(N)) * (modulus + math.sqrt(N)) * norm2,
        ),
    ]
    eps = constants.SIEVE_EPSILON
    if 0 < abs(psi) <= constants.PSI_LIMIT and 0 < c.norm() <= constants.SMALL_C_RATIO * N ** (1 - eps):
        envelope = (
            (abs(psi) ** -0.5 + 1)
            * (math.sqrt(modulus) * N**0.75 + modulus**1.5 * M * N**0.25)
            * N**eps
            * norm2
        )
        rows.append(SweepRow({**base, "kind": "small_modulus"}, lhs, envelope))
    return rows


def _bound_block(block: tuple) -> list[SweepRow]:
    q0_text, cusp_text, c_text, N, psis, Ms, families, seed = block
    frame = build_frame(cusp_text, parse_gaussian(q0_text))
    c = parse_gaussian(c_text)
    omegas = annulus(N)
    S = samecusp_matrix(frame, c, omegas)
    modulus = abs(complex(c))
    rows = []
    for family in families:
        b = make_coefficients(family, N, seed)
        norm2 = b.norm**2
        for psi in psis:
            for M in Ms:
                lhs = _u_from_matrix(S, b, psi, modulus, M)
                base = {"q0": q0_text, "cusp": cusp_text, "c": c_text, "N": N, "M": M, "psi": psi, "family": family}
                rows.extend(bound_rows(base, lhs, c, psi, M, N, norm2))
    return rows


def sweep_moduli(frame: CuspFrame, max_norm: float, count: int) -> list[GaussianInt]:
    """Up to `count` same-cusp moduli with |c|^2 <= max_norm, spread from the smallest to the largest"""
    moduli = [C * frame.v for C in allowed_moduli(frame, frame, math.sqrt(max_norm))]
    moduli = [c for c in moduli if samecusp_admissible(frame, c)]
    if len(moduli) <= count:
        return moduli
    picks = np.linspace(0, len(moduli) - 1, count).round().astype(int)
    return [moduli[i] for i in sorted(set(picks.tolist()))]


def bound_sweep(
    levels=("1", "1+1i"),
    N_values=(8.0, 16.0),
    M_values=(0, 1),
    families=constants.SIEVE_FAMILIES,
    psis=constants.SIEVE_PSI,
    max_c_norm: float = 400.0,
    moduli_per_frame: int = 3,
    seed: int = 0,
    threads: int = 1,
) -> SweepReport:
    blocks = []
    for level in levels:
        q0 = parse_gaussian(level)
        for frame in class_representatives(q0):
            cusp_text = str(frame.cusp)
            for c in sweep_moduli(frame, max_c_norm, moduli_per_frame):
                for N in N_values:
                    blocks.append(
                        (str(q0), cusp_text, str(c), float(N), tuple(psis), tuple(M_values), tuple(families), seed)
                    )
    logger.debug(log_messages.SWEEP_BLOCKS.format(count=len(blocks)))
    rows = [row for block_rows in parallel_map(_bound_block, blocks, threads) for row in block_rows]
    return SweepReport("large_sieve_sweep", tuple(rows))


def blow_up_flags(report: SweepReport) -> dict[str, bool]:
    return {kind: report.select(kind=kind).blow_up("N") for kind in BOUND_KINDS}


#############################################################
# ### E-sums ###
def _phase_function(alpha: float, beta: float, x: np.ndarray) -> np.ndarray:
    """f with f'(x) = alpha x^beta"""
    if beta == -1:
        return alpha * np.log(x)
    return alpha * x ** (beta + 1) / (beta + 1)


def _check_e_sum(c, alpha: float, M: int, T: float) -> GaussianInt:
    c = as_gaussian(c)
    if not c or not alpha or M < 0 or T <= 0:
        raise DomainError(log_messages.BAD_E_SUM.format(c=c, alpha=alpha, M=M, T=T))
    return c


def _e_sum_exact(c: GaussianInt, a: CoeffVector, M: int, T: float, f: np.ndarray, units: np.ndarray) -> float:
    omegas = a.omegas
    re = np.array([w.re for w in omegas], dtype=np.int64)
    im = np.array([w.im for w in omegas], dtype=np.int64)
    congruent = array_divisible(re[:, None] - re[None, :], im[:, None] - im[None, :], c)
    angle = np.angle(units[:, None] * units[None, :].conj())
    dirichlet = sum(np.cos(m * angle) for m in range(-M, M + 1))
    window = 2 * T * np.sinc(2 * T * (f[:, None] - f[None, :]))
    values = a.values
    kernel = congruent * dirichlet * window
    return c.norm() * float(np.real(np.dot(values, kernel @ values.conj())))


def _e_sum_quadrature(c: GaussianInt, a: CoeffVector, M: int, T: float, f: np.ndarray, units: np.ndarray) -> float:
    re, im = box_representatives(c)
    residues = tuple(GaussianInt(int(x), int(y)) for x, y in zip(re, im))
    D = _phase_matrix(residues, a.omegas, c).T
    spread = float(np.ptp(f)) if f.size else 0.0
    t, weights = panel_nodes(-T, T, 2 * math.pi * spread)
    waves = np.exp(2j * np.pi * np.outer(f, t))
    total = 0.0
    for m in range(-M, M + 1):
        s = D @ ((a.values * units**m)[:, None] * waves)
        total += float(np.sum(np.abs(s) ** 2 @ weights))
    return total


def e_sum(c, a: CoeffVector, M: int, T: float, alpha: float, beta: float, method: str = "quadrature") -> float:
    """sum over delta mod c and |m| <= M of the integral over [-T, T] of |s(delta, m, t)|^2"""
    c = _check_e_sum(c, alpha, M, T)
    if not a.entries or not np.any(a.values):
        return 0.0
    units, radii = _units_and_moduli(a)
    f = _phase_function(alpha, beta, radii)
    match method:
        case "quadrature":
            value = _e_sum_quadrature(c, a, M, T, f, units)
        case "exact":
            value = _e_sum_exact(c, a, M, T, f, units)
        case _:
            raise DomainError(log_messages.UNKNOWN_INTEGRATION.format(method=method))
    return max(finite(value, "E-sum").real, 0.0)


def e_sum_envelope(c, a: CoeffVector, M: int, T: float, alpha: float, beta: float) -> float:
    modulus = abs(complex(as_gaussian(c)))
    N = a.N
    return (modulus * (M + 1) + math.sqrt(N)) * (modulus * T + N ** (-beta / 2) / abs(alpha)) * a.norm**2


def e_sum_row(c, a: CoeffVector, M: int, T: float, alpha: float, beta: float, family: str = "") -> SweepRow:
    lhs = e_sum(c, a, M, T, alpha, beta)
    params = {"c": str(as_gaussian(c)), "N": a.N, "M": M, "T": T, "alpha": alpha, "beta": beta, "family": family}
    return SweepRow(params, lhs, e_sum_envelope(c, a, M, T, alpha, beta))


#############################################################
# ### sums over moduli ###
def _divisor_constant(f1: CuspFrame, f2: CuspFrame, w: GaussianInt, sigma_star: float) -> float:
    """Bound for sum |S(w, w'; c)| / |c|^(4 sigma) over all moduli, valid for sigma >= sigma_star > 3/4"""
    widths = abs(complex(f1.v * f2.v))
    divisor_sum = math.fsum(1 / abs(complex(d)) for d in divisors(f1.q0, associates=True))
    s = 2 * sigma_star - 0.5
    zeta = mpmath.zeta(s) * mpmath.dirichlet(s, [0, 1, 0, -1])
    return float(
        2**-0.5 * abs(complex(w)) * widths ** (2 - 2 * sigma_star) * divisor_sum**2 * zeta**2
    )


def _tail_constant(f1: CuspFrame, f2: CuspFrame, w1: GaussianInt, w2: GaussianInt, sigma_star: float) -> float:
    # |S_{a,b}(w1, w2; c)| = |S_{b,a}(-w2, -w1; c)|
    if w1:
        return _divisor_constant(f1, f2, w1, sigma_star)
    if w2:
        return _divisor_constant(f2, f1, w2, sigma_star)
    raise DomainError(log_messages.ZERO_FREQUENCIES)


def _modulus(f1: CuspFrame, f2: CuspFrame, C: GaussianInt) -> complex:
    return complex(C) * f1.sqrt_v * f2.sqrt_v


class GeometricSide(NamedTuple):
    delta_part: complex
    kloosterman_part: complex
    tail_envelope: float
    moduli: int
    C_B: float

    def to_dict(self) -> dict:
        return {
            "delta_part": [self.delta_part.real, self.delta_part.imag],
            "kloosterman_part": [self.kloosterman_part.real, self.kloosterman_part.imag],
            "tail_envelope": self.tail_envelope,
            "moduli": self.moduli,
            "C_B": self.C_B,
        }


def _b_transform_worker(item: tuple) -> complex:
    P, K, sigma, u = item
    return b_transform(TestParams(P, K, sigma), u)


def _symmetric_key(u: complex) -> tuple[float, float]:
    # Bh is even in u
    if u.real < 0 or (u.real == 0 and u.imag < 0):
        u = -u
    return round(u.real, 12), round(u.imag, 12)


def small_u_constant(params: TestParams, u_max: float, threads: int = 1) -> float:
    """max |Bh(u)| / |u|^(2 sigma) over a polar grid of |u| <= u_max (half-plane, Bh being even)"""
    points = [
        radius * u_max * cmath.exp(1j * math.pi * k / constants.SMALL_U_ANGLES)
        for radius in constants.SMALL_U_RADII
        for k in range(constants.SMALL_U_ANGLES)
    ]
    items = [(params.P, params.K, params.sigma, u) for u in points]
    values = parallel_map(_b_transform_worker, items, threads)
    return max(abs(value) / abs(u) ** (2 * params.sigma) for value, u in zip(values, points))


def _smallest_modulus(f1: CuspFrame, f2: CuspFrame, moduli: list[GaussianInt]) -> GaussianInt:
    cutoff = 1.0
    while not moduli:
        cutoff *= 2
        moduli = allowed_moduli(f1, f2, cutoff)
    return moduli[0]


def geometric_side(
    f1: CuspFrame, f2: CuspFrame, w1, w2, params: TestParams, X: float, threads: int = 1
) -> GeometricSide:
    check_same_level(f1, f2)
    w1, w2 = as_gaussian(w1), as_gaussian(w2)
    delta = delta_term(f1, f2, w1, w2).value
    delta_part = delta * diagonal_term(params).exact

    product = complex(w1 * w2)
    if not product:
        return GeometricSide(delta_part, 0j, 0.0, 0, 0.0)
    root = principal_sqrt(product)
    moduli = allowed_moduli(f1, f2, X)

    args = {}
    for C in moduli:
        u = 2 * math.pi * root / _modulus(f1, f2, C)
        args.setdefault(_symmetric_key(u), u)
    keys = list(args)
    values = parallel_map(_b_transform_worker, [(params.P, params.K, params.sigma, args[k]) for k in keys], threads)
    table = dict(zip(keys, values))

    total = []
    for C in moduli:
        c = _modulus(f1, f2, C)
        u = 2 * math.pi * root / c
        S = kloosterman_general(f1, f2, w1, w2, C).value
        total.append(S / abs(c) ** 2 * table[_symmetric_key(u)])
    kloosterman_part = complex(math.fsum(z.real for z in total), math.fsum(z.imag for z in total))

    # C_B is sampled on |u| up to the value at the smallest modulus, so it does not depend on X
    c_min = abs(_modulus(f1, f2, _smallest_modulus(f1, f2, moduli)))
    sigma = params.sigma
    C_B = small_u_constant(params, 2 * math.pi * math.sqrt(abs(product)) / c_min, threads)
    s_prime = (1 + sigma) / 2
    sigma_star = (s_prime + 0.75) / 2
    tail = (
        C_B
        * (2 * math.pi) ** (2 * sigma)
        * abs(product) ** sigma
        * X ** (-4 * (s_prime - sigma_star))
        * _tail_constant(f1, f2, w1, w2, sigma_star)
    )
    return GeometricSide(delta_part, kloosterman_part, tail, len(moduli), C_B)


class LinnikSelberg(NamedTuple):
    Z_partial: complex
    zeta_partial: complex
    tail: float
    zeta_tail: float
    moduli: int

    def to_dict(self) -> dict:
        return {
            "Z_partial": [self.Z_partial.real, self.Z_partial.imag],
            "zeta_partial": [self.zeta_partial.real, self.zeta_partial.imag],
            "tail": self.tail,
            "zeta_tail": self.zeta_tail,
            "moduli": self.moduli,
        }


def jstar_pair(nu: complex, z: complex) -> complex:
    """J*_nu(z) J*_nu(conj z)"""
    return bessel_j_star(nu, z) * bessel_j_star(nu, complex(z).conjugate())


def linnik_selberg_partial(f1: CuspFrame, f2: CuspFrame, w1, w2, s: complex, X: float) -> LinnikSelberg:
    """Partial sums over |c| <= X of Z(s) = sum S / |c|^(4s) and of the J*-weighted zeta(s)"""
    check_same_level(f1, f2)
    s = complex(s)
    if s.real <= 0.75:
        raise DomainError(log_messages.ZETA_DIVERGENT.format(re=s.real, bound=0.75))
    if X < 1:
        raise DomainError(log_messages.ZETA_CUTOFF.format(cutoff=X, minimum=1))
    w1, w2 = as_gaussian(w1), as_gaussian(w2)
    root = principal_sqrt(complex(w1 * w2))
    index = f1.stab_index
    nu = 2 * s - 1

    moduli = allowed_moduli(f1, f2, X)
    z_terms, zeta_terms = [], []
    for C in moduli:
        c = _modulus(f1, f2, C)
        S = kloosterman_general(f1, f2, w1, w2, C).value
        weight = cmath.exp(-s * math.log(abs(c) ** 4))
        z_terms.append(S * weight)
        zeta_terms.append(jstar_pair(nu, 2 * math.pi * root / c) * S * weight / index)

    sigma_star = (s.real + 0.75) / 2
    tail = X ** (-4 * (s.real - sigma_star)) * _tail_constant(f1, f2, w1, w2, sigma_star)
    z_max = 2 * math.pi * abs(root) / X
    majorant = abs(complex(mpmath.rgamma(nu + 1))) ** 2 * float(mpmath.besseli(0, z_max)) ** 2
    return LinnikSelberg(
        complex(math.fsum(t.real for t in z_terms), math.fsum(t.imag for t in z_terms)),
        complex(math.fsum(t.real for t in zeta_terms), math.fsum(t.imag for t in zeta_terms)),
        tail,
        majorant * tail / index,
        len(moduli),
    )
