"""The Gaussian test function h(nu, p) = exp((nu/K)^2 - (p/P)^2) and its B-transform.

Routes to (Bh)(u):

* ``kernel_direct``: the p-sum and the Re(nu) = 0 line integral of K_{nu,p}(u) h(nu,p)(p^2 - nu^2),
  on a shifted trapezoid grid (the integrand is analytic in a strip, so the rule converges
  geometrically);
* ``bessel_1d``: the y-integral form with f_p(y) in closed form, one adaptive quadrature per p;
* ``triple_integral``: the (phi, xi, eta) integral with A_M, whose eta-integral is taken in closed
  form through the Jacobi-Anger expansion and G_n.

`b_transform_graf` is the Graf-expanded form of ``bessel_1d`` and serves as a further cross-check.
"""

import cmath
import logging
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate, special

from gauss_kloosterman.logs import log_messages
from gauss_kloosterman.utils import e
from gauss_kloosterman.utils.bessel import SQRT_PI, finite, gauss_fourier_G, jstar_array, kernel_K, panel_nodes
from gauss_kloosterman.utils.config import constants
from gauss_kloosterman.utils.cusps import CuspFrame
from gauss_kloosterman.utils.errors import ConfigError, DomainError
from gauss_kloosterman.utils.gaussint import GaussianInt
from gauss_kloosterman.utils.report import SweepReport, SweepRow

logger = logging.getLogger(__name__)

# weights e^(-x) below this are dropped from sums
UNDERFLOW_EXPONENT = 700.0
NEGLIGIBLE = 1e-18


@dataclass(frozen=True)
class TestParams:
    __test__ = False

    P: float
    K: float
    sigma: float = 0.75

    def __post_init__(self) -> None:
        if self.P < 1 or self.K < 1 or not 0.5 < self.sigma < 1:
            raise DomainError(log_messages.BAD_TEST_PARAMS.format(P=self.P, K=self.K, sigma=self.sigma))

    def to_dict(self) -> dict:
        return {"P": self.P, "K": self.K, "sigma": self.sigma}


@dataclass(frozen=True)
class BTransformConfig:
    method: str = "kernel_direct"
    M: int | None = None
    Delta: float | None = None
    nu_cutoff: float | None = None
    quad_tol: float = 1e-12

    def __post_init__(self) -> None:
        if self.method not in constants.B_METHODS:
            raise DomainError(log_messages.UNKNOWN_METHOD.format(method=self.method))


class TripleValue(NamedTuple):
    value: complex
    envelope: float
    M: int
    Delta: float
    j: int

    def to_dict(self) -> dict:
        return self._asdict()


class DiagonalTerm(NamedTuple):
    exact: complex
    poisson: float
    main: float
    rel_envelope: float

    @property
    def deviation(self) -> float:
        return abs(self.exact / self.main - 1)

    def to_dict(self) -> dict:
        return {**self._asdict(), "deviation": self.deviation}


def test_h(params: TestParams, nu: complex, p: int) -> complex:
    nu = complex(nu)
    if abs(nu.real) > params.sigma:
        raise DomainError(log_messages.STRIP_VIOLATION.format(re=abs(nu.real), sigma=params.sigma))
    return cmath.exp((nu / params.K) ** 2 - (p / params.P) ** 2)


test_h.__test__ = False


def f_p(params: TestParams, p: int, y: float) -> float:
    """(1/4 pi i) int_(0) y^2nu e^((nu/K)^2)(p^2 - nu^2) dnu in closed form"""
    K = params.K
    log_y = math.log(y)
    return K / (4 * SQRT_PI) * (p * p + K * K / 2 - K**4 * log_y**2) * math.exp(-((K * log_y) ** 2))


def f_p_series(params: TestParams, p: int, y: float) -> complex:
    """f_p through G_0 and G_2 at K log y"""
    K = params.K
    arg = K * math.log(y)
    return K / (4 * math.pi) * (p * p * gauss_fourier_G(0, arg) + K * K * gauss_fourier_G(2, arg))


def _p_values(P: float) -> range:
    reach = min(constants.P_TRUNCATION(P), math.ceil(P * math.sqrt(-math.log(NEGLIGIBLE))))
    return range(-reach, reach + 1)


def _nonzero_u(u: complex) -> complex:
    u = complex(u)
    if not u:
        raise DomainError(log_messages.ZERO_ARGUMENT.format(name="u"))
    return u


#############################################################
# ### kernel along the imaginary axis ###
def kernel_line(t: np.ndarray, p: int, u: complex) -> np.ndarray:
    """K_{it,p}(u) for an array of real t (t = 0 excluded)"""
    nu = 1j * np.asarray(t, dtype=float)
    log_half = math.log(abs(u) / 2)
    unit = u / abs(u)
    conj_u = u.conjugate()
    j_plus = np.exp(2 * nu * log_half) * unit ** (-2 * p) * jstar_array(nu - p, u) * jstar_array(nu + p, conj_u)
    j_minus = np.exp(-2 * nu * log_half) * unit ** (2 * p) * jstar_array(p - nu, u) * jstar_array(-nu - p, conj_u)
    return (j_minus - j_plus) / np.sin(np.pi * nu)


def shifted_grid(reach: float, step: float) -> np.ndarray:
    count = math.ceil(reach / step)
    return (np.arange(-count, count) + 0.5) * step


def b_from_samples(u: complex, t: np.ndarray, step: float, samples: Mapping[int, np.ndarray]) -> complex:
    """(1/4 pi) sum_p int K_{it,p}(u) h(it,p)(p^2 + t^2) dt from tabulated h on a shifted grid"""
    total = 0j
    for p, values in samples.items():
        mask = values != 0
        if not mask.any():
            continue
        kernel = kernel_line(t[mask], p, u)
        total += step * np.sum(kernel * values[mask] * (p * p + t[mask] ** 2))
    return total / (4 * math.pi)


def _kernel_direct(params: TestParams, u: complex, cfg: BTransformConfig) -> complex:
    K, P = params.K, params.P
    step = constants.TRAPEZOID_STEP * K
    t = shifted_grid(cfg.nu_cutoff or constants.NU_TRUNCATION(K), step)
    samples = {}
    for p in _p_values(P):
        exponent = (t / K) ** 2 + (p / P) ** 2
        samples[p] = np.where(exponent < UNDERFLOW_EXPONENT, np.exp(-np.minimum(exponent, UNDERFLOW_EXPONENT)), 0.0)
    return b_from_samples(u, t, step, samples)


#############################################################
# ### y-integral route ###
def _gauss_reach(scale: float, tol: float = 1e-14) -> float:
    """|x| beyond which scale * x^2 * e^(-x^2) stays below tol"""
    reach = 1.0
    while scale * reach * reach * math.exp(-reach * reach) > tol:
        reach += 0.25
    return min(reach, constants.XI_RANGE)


def _bessel_1d(params: TestParams, u: complex, cfg: BTransformConfig) -> complex:
    K, P = params.K, params.P
    modulus, rot = abs(u), u / abs(u)
    total = 0j
    for p in _p_values(P):
        weight = math.exp(-((p / P) ** 2))

        def integrand(xi, p=p):
            y = math.exp(xi / K)
            phi = y * rot + 1 / (y * rot)
            size = abs(phi)
            angular = (phi / size) ** (2 * p) if size else 1.0
            return (p * p + K * K / 2 - K * K * xi * xi) * math.exp(-xi * xi) * angular * special.jv(2 * p, modulus * size)

        value, _ = integrate.quad(
            integrand,
            -constants.XI_RANGE,
            constants.XI_RANGE,
            complex_func=True,
            epsabs=cfg.quad_tol,
            epsrel=cfg.quad_tol,
            limit=800,
        )
        total += (-1 if p % 2 else 1) * weight * value
    return 2 / math.pi * total / (4 * SQRT_PI)


def b_transform_graf(params: TestParams, u: complex) -> complex:
    """The y-integral route after Graf expansion of the Bessel factor, in xi = K log y"""
    u = _nonzero_u(u)
    K, P = params.K, params.P
    modulus = abs(u)
    phase2 = (1j * u / modulus) ** 2
    reach = _gauss_reach(P * P + K * K)
    edges = np.arange(-reach, reach + 1e-12, 0.5)
    total = 0j
    for a, b in zip(edges[:-1], edges[1:]):
        top = max(abs(a), abs(b))
        xi, w = panel_nodes(a, b, 2 * math.cosh(top / K) * modulus / K)
        y = np.exp(xi / K)
        bound = int((math.exp(top / K) + 1) * modulus) + 30
        for p in _p_values(P):
            m = np.arange(-bound - abs(p), bound + abs(p) + 1)
            products = special.jv(m - p, np.outer(y, modulus)) * special.jv(m + p, np.outer(1 / y, modulus))
            series = products @ phase2 ** m.astype(float)
            fp = K / (4 * SQRT_PI) * (p * p + K * K / 2 - K * K * xi**2) * np.exp(-(xi**2))
            total += math.exp(-((p / P) ** 2)) * np.sum(w * fp * series)
    return 2 / (math.pi * K) * total


#############################################################
# ### triple-integral route ###
def a_m(M: int, phi: float, theta: float) -> complex:
    if M < 0:
        raise DomainError(log_messages.NEGATIVE_M.format(M=M))
    return sum((-1) ** m * math.cos(2 * m * phi) * cmath.exp(2j * m * theta) for m in range(-M, M + 1))


def a_m_closed(M: int, phi: float, theta: float) -> float:
    """Closed form of A_M, valid where cos(phi +- theta) != 0"""
    sign = -1 if M % 2 else 1
    plus, minus = phi + theta, phi - theta
    return sign / 2 * (
        math.cos((2 * M + 1) * plus) / math.cos(plus) + math.cos((2 * M + 1) * minus) / math.cos(minus)
    )


def _a_m_array(M: int, phi: np.ndarray, theta: float) -> np.ndarray:
    m = np.arange(1, M + 1)
    signs = np.where(m % 2, -1.0, 1.0)
    return 1 + 2 * (signs * np.cos(2 * m * theta)) @ np.cos(2 * np.outer(m, phi))


def resolve_window(M: int | None, Delta: float | None, modulus: float) -> tuple[int, float]:
    """Pick or validate (M, Delta) with Delta <= M/(1+|u|) <= 2 Delta and Delta >= 1"""
    if M is None:
        M = math.ceil(3 * (1 + modulus))
    if M < 0:
        raise DomainError(log_messages.NEGATIVE_M.format(M=M))
    ratio = M / (1 + modulus)
    if Delta is None:
        Delta = ratio / 1.5
    if Delta < 1 or not Delta <= ratio <= 2 * Delta:
        raise ConfigError(log_messages.DELTA_WINDOW.format(M=M, delta=Delta, modulus=modulus))
    return M, Delta


def triple_integral(
    params: TestParams, u: complex, M: int | None = None, Delta: float | None = None, variant: str = "F", j: int = 2
) -> TripleValue:
    """Triple-integral approximation to (Bh)(u) with its remainder envelope (P^2+K^2)(1+|u|)Delta^(1-2j)"""
    u = _nonzero_u(u)
    modulus, theta = abs(u), cmath.phase(u)
    M, Delta = resolve_window(M, Delta, modulus)
    if variant not in ("F", "G"):
        raise DomainError(log_messages.UNSUPPORTED_FAMILY.format(family=variant))
    K, P = params.K, params.P
    k = np.arange(0, math.ceil(6.5 * P) + 2)
    eps_k = np.where(k == 0, 1.0, 2.0) * np.where(k % 2, -1.0, 1.0)
    g0 = lambda y: SQRT_PI * np.exp(-(y**2))
    reach = _gauss_reach((P * P + K * K) * (2 * M + 1))
    edges = np.arange(-reach, reach + 1e-12, 0.5)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        top = max(abs(a), abs(b))
        xi_nodes, xi_weights = panel_nodes(a, b, 2 * math.cosh(top / K) * modulus / K)
        for xi, wx in zip(xi_nodes, xi_weights):
            y = xi / K
            phi, wphi = panel_nodes(-math.pi, math.pi, 2 * math.cosh(y) * modulus + 2 * M + 2 * k[-1])
            # psi = R cos(eta/P + chi) as a function of eta
            big_a = 2 * math.cosh(y) * np.sin(phi)
            big_b = 2 * math.sinh(y) * np.cos(phi)
            radius, chi = np.hypot(big_a, big_b), np.arctan2(big_b, big_a)
            if variant == "F":
                eta_part = SQRT_PI * np.exp(-((k / P) ** 2)) * (k**2 + (0.5 - xi**2) * K * K)
            else:
                eta_part = np.cosh(2 * xi / K) * g0(k / P) - 0.5 * (g0((k + 1) / P) + g0((k - 1) / P))
            harmonics = special.jv(2 * k[:, None], modulus * radius[None, :]) * np.cos(2 * k[:, None] * chi[None, :])
            inner = (eps_k * eta_part) @ harmonics
            total += wx * math.exp(-xi * xi) * np.dot(wphi, _a_m_array(M, phi, theta) * inner)
    prefactor = 1 / (4 * math.pi**3) if variant == "F" else modulus**2 / (8 * math.pi**3)
    envelope = (P * P + K * K) * (1 + modulus) * Delta ** (1 - 2 * j)
    return TripleValue(complex(prefactor * total), envelope, M, Delta, j)


#############################################################
# ### dispatch ###
def b_transform(params: TestParams, u: complex, cfg: BTransformConfig | None = None) -> complex:
    cfg = cfg or BTransformConfig()
    u = _nonzero_u(u)
    match cfg.method:
        case "kernel_direct":
            value = _kernel_direct(params, u, cfg)
        case "bessel_1d":
            value = _bessel_1d(params, u, cfg)
        case "triple_integral":
            value = triple_integral(params, u, cfg.M, cfg.Delta).value
        case _:
            raise DomainError(log_messages.UNKNOWN_METHOD.format(method=cfg.method))
    logger.debug(log_messages.BTRANSFORM_VALUE.format(u=u, method=cfg.method, value=value))
    return finite(value, cfg.method)


def route_sweep(params_grid: Iterable[TestParams], points: Iterable[complex], j: int = 2) -> SweepReport:
    """bessel_1d and triple_integral against kernel_direct; envelopes are the route tolerance and E_M"""
    rows = []
    points = list(points)
    for params in params_grid:
        for u in points:
            reference = b_transform(params, u)
            one_d = b_transform(params, u, BTransformConfig("bessel_1d"))
            triple = triple_integral(params, u, j=j)
            base = {"P": params.P, "K": params.K, "u": complex(u)}
            rows.append(SweepRow({**base, "route": "bessel_1d"}, abs(one_d - reference), constants.ROUTE_TOL))
            rows.append(
                SweepRow(
                    {**base, "route": "triple_integral"},
                    abs(triple.value - reference),
                    triple.envelope,
                    {"M": triple.M, "Delta": triple.Delta},
                )
            )
    return SweepReport("route_consistency", tuple(rows))


#############################################################
# ### diagonal term ###
def diagonal_term(params: TestParams) -> DiagonalTerm:
    """(1/4 pi^3 i) sum_p int_(0) h(nu,p)(p^2 - nu^2) dnu, its Poisson form and main term KP(K^2+P^2)/(8 pi^2)"""
    K, P = params.K, params.P
    g0, g2 = gauss_fourier_G(0, 0.0), gauss_fourier_G(2, 0.0)
    terms = [math.exp(-((p / P) ** 2)) * (p * p * g0 + K * K * g2) for p in _p_values(P)]
    exact = K / (4 * math.pi**3) * complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    poisson = K * P / (4 * math.pi**2) * math.fsum(
        (P * P * (0.5 - (math.pi * P * v) ** 2) + K * K / 2) * math.exp(-((math.pi * P * v) ** 2))
        for v in range(-4, 5)
    )
    main = K * P * (K * K + P * P) / (8 * math.pi**2)
    rel_envelope = 4 * math.pi**2 * P * P * math.exp(-((math.pi * P) ** 2)) + 1e-9
    return DiagonalTerm(exact, poisson, main, rel_envelope)


def diagonal_line_integral(params: TestParams) -> complex:
    """The same diagonal constant by quadrature along Re(nu) = 0"""
    total = 0j
    for p in _p_values(params.P):
        value, _ = integrate.quad(
            lambda t, p=p: test_h(params, 1j * t, p) * (p * p - (1j * t) ** 2) * 1j,
            -np.inf,
            np.inf,
            complex_func=True,
        )
        total += value
    return total / (4j * math.pi**3)


def diagonal_coefficients(frame: CuspFrame, b: Mapping[GaussianInt, complex]) -> dict[GaussianInt, complex]:
    """b^a: symmetrised through the extra stabilizer element when the stabilizer index is 4"""
    if frame.stab_index != 4:
        return dict(b)
    beta = complex(frame.beta)
    result = {}
    for omega, value in b.items():
        phase = e((beta * complex(omega) / 2).real)
        result[omega] = (value * phase + b.get(-omega, 0j) * phase.conjugate()) / 2
    return result


def diagonal_contribution(frame: CuspFrame, params: TestParams, b: Mapping[GaussianInt, complex]) -> tuple[float, float]:
    """(index * diagonal constant * ||b^a||^2, index/(8 pi^2) (P K^3 + P^3 K) ||b^a||^2)"""
    coefficients = diagonal_coefficients(frame, b)
    norm2 = math.fsum(abs(value) ** 2 for value in coefficients.values())
    index = frame.stab_index
    exact = index * diagonal_term(params).exact.real * norm2
    main = index / (8 * math.pi**2) * (params.P * params.K**3 + params.P**3 * params.K) * norm2
    return exact, main


#############################################################
# ### conditions on h ###
def decay_constant(params: TestParams) -> float:
    """|h(nu,p)|(1+|Im nu|)^4(1+|p|)^4 <= 256 e^(sigma^2/K^2) K^4 P^4"""
    return 256 * math.exp(params.sigma**2 / params.K**2) * params.K**4 * params.P**4


def decay_conditions(params: TestParams, t_grid=None, p_grid=None) -> SweepReport:
    constant = decay_constant(params)
    t_grid = np.linspace(-20 * params.K, 20 * params.K, 81) if t_grid is None else t_grid
    p_grid = range(-int(6 * params.P) - 2, int(6 * params.P) + 3) if p_grid is None else p_grid
    rows = []
    for s in (-params.sigma, 0.0, params.sigma):
        for t in t_grid:
            for p in p_grid:
                nu = complex(s, t)
                value = test_h(params, nu, p)
                mirror = test_h(params, -nu, -p)
                rows.append(
                    SweepRow(
                        {"s": s, "t": float(t), "p": int(p)},
                        abs(value) * (1 + abs(t)) ** 4 * (1 + abs(p)) ** 4,
                        constant,
                        {"symmetric": abs(value - mirror) <= 1e-15 * max(1.0, abs(value))},
                    )
                )
    return SweepReport("decay_conditions", tuple(rows))


#############################################################
# ### K-transform ###
@dataclass(frozen=True)
class BumpFunction:
    """exp(-1/((r - r0)(r1 - r))) e^(2ik theta) on r0 < r < r1"""

    r0: float = 0.5
    r1: float = 1.5
    k: int = 0

    def __post_init__(self) -> None:
        if not 0 < self.r0 < self.r1:
            raise DomainError(log_messages.BAD_BUMP.format(r0=self.r0, r1=self.r1))

    def radial(self, r):
        r = np.asarray(r, dtype=float)
        inside = (r > self.r0) & (r < self.r1)
        gap = np.where(inside, (r - self.r0) * (self.r1 - r), 1.0)
        return np.where(inside, np.exp(-1 / gap), 0.0)

    def __call__(self, z: complex) -> complex:
        z = complex(z)
        return complex(self.radial(abs(z))) * cmath.exp(2j * self.k * cmath.phase(z))


def _angular_mean(nu: np.ndarray, p: int, k: int, r: np.ndarray, terms: int = 40) -> np.ndarray:
    """(1/2 pi) int J_{nu,p}(r e^(i theta)) e^(2ik theta) dtheta, shape (len(nu), len(r))"""
    # only J*-series index pairs with m - n = p - k survive the angular integral
    shift = p - k
    n = np.arange(max(0, -shift), max(0, -shift) + terms)
    m = n + shift
    signs = np.where((m + n) % 2, -1.0, 1.0)
    coef = signs * special.rgamma(nu[:, None] - p + m + 1) * special.rgamma(nu[:, None] + p + n + 1)
    coef = coef / (special.factorial(m) * special.factorial(n))
    half = np.asarray(r) / 2
    powers = half[None, :] ** (2 * (m + n))[:, None]
    return np.exp(2 * nu[:, None] * np.log(half)[None, :]) * (coef @ powers)


def k_transform_array(f: BumpFunction, nu, p: int, order: int = 240) -> np.ndarray:
    """(Kf)(nu, p) for an array of nu, with the angular integral done term by term"""
    if not isinstance(f, BumpFunction):
        raise DomainError(log_messages.UNSUPPORTED_FAMILY.format(family=type(f).__name__))
    nu = np.atleast_1d(np.asarray(nu, dtype=complex))
    x, w = np.polynomial.legendre.leggauss(order)
    lo, hi = math.log(f.r0), math.log(f.r1)
    s = (hi - lo) / 2 * x + (hi + lo) / 2
    weights = (hi - lo) / 2 * w * f.radial(np.exp(s))
    r = np.exp(s)
    difference = _angular_mean(-nu, -p, f.k, r) - _angular_mean(nu, p, f.k, r)
    return 2 * math.pi * (difference @ weights) / np.sin(np.pi * nu)


def k_transform(f: BumpFunction, nu: complex, p: int, method: str = "series") -> complex:
    """(Kf)(nu, p) = int K_{nu,p}(z) f(z) |z|^-2 d+z"""
    nu = complex(nu)
    if abs(nu.real) >= 1:
        raise DomainError(log_messages.KERNEL_STRIP.format(re=abs(nu.real), bound=1))
    if not isinstance(f, BumpFunction):
        raise DomainError(log_messages.UNSUPPORTED_FAMILY.format(family=type(f).__name__))
    if method == "series":
        if abs(nu) < constants.INTEGER_NU_STEP:
            step = constants.INTEGER_NU_STEP
            return complex(np.mean(k_transform_array(f, [nu + step, nu - step], p)))
        return finite(complex(k_transform_array(f, [nu], p)[0]), "K-transform")
    # plain polar quadrature with the scalar kernel
    x, w = np.polynomial.legendre.leggauss(24)
    lo, hi = math.log(f.r0), math.log(f.r1)
    s = (hi - lo) / 2 * x + (hi + lo) / 2
    angles = 2 * math.pi * np.arange(32) / 32
    total = 0j
    for si, wi in zip(s, (hi - lo) / 2 * w):
        r = math.exp(si)
        for angle in angles:
            z = cmath.rect(r, angle)
            total += wi * (2 * math.pi / 32) * kernel_K(nu, p, z) * f(z)
    return finite(total, "K-transform")


def inversion_check(
    f: BumpFunction, points: Iterable[complex], reach: float = 40.0, step: float = 0.2, p_reach: int = 16
) -> SweepReport:
    """pi B(Kf)(u) against f(u); the envelope is a 1e-3 relative error"""
    t = shifted_grid(reach, step)
    samples = {p: k_transform_array(f, 1j * t, p) for p in range(-p_reach, p_reach + 1)}
    rows = []
    for u in points:
        u = complex(u)
        value = math.pi * b_from_samples(u, t, step, samples)
        target = f(u)
        rows.append(
            SweepRow({"u": u}, abs(value - target), 1e-3 * abs(target), {"value": value, "target": target})
        )
    return SweepReport("inversion", tuple(rows))
