"""Bessel functions of integer order, the J*/J/K kernels of the sum formula and Fourier checks.

Scalar evaluators work in `mpmath` where cancellation is severe (large |z|, the K kernel near
nu = 0) and in double precision with `scipy` elsewhere. `jstar_array` is the vectorized J* series
used by the B-transform quadratures.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
import sympy
from scipy import integrate, special

from gauss_kloosterman.logs import log_messages
from gauss_kloosterman.utils import EPS
from gauss_kloosterman.utils.config import constants
from gauss_kloosterman.utils.errors import DomainError
from gauss_kloosterman.utils.report import SweepReport, SweepRow

logger = logging.getLogger(__name__)

SQRT_PI = math.sqrt(math.pi)


def finite(value: complex, what: str) -> complex:
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise DomainError(log_messages.NON_FINITE.format(value=value, what=what))
    return value


@lru_cache(maxsize=None)
def _legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def panel_nodes(a: float, b: float, freq: float, order: int = constants.GL_ORDER) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on [a, b] with enough panels for an oscillation of angular frequency freq"""
    panels = max(1, math.ceil((b - a) * (abs(freq) + 1.0) / 3.0))
    x, w = _legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


#############################################################
# ### integer order ###
def _check_range(n: int, z: complex) -> None:
    if abs(n) > constants.MAX_BESSEL_ORDER:
        raise DomainError(log_messages.ORDER_OUT_OF_RANGE.format(n=n, limit=constants.MAX_BESSEL_ORDER))
    if abs(z) > constants.MAX_BESSEL_ARGUMENT:
        raise DomainError(
            log_messages.ARGUMENT_OUT_OF_RANGE.format(modulus=abs(z), limit=constants.MAX_BESSEL_ARGUMENT)
        )


def bessel_j_int(n: int, z: complex) -> complex:
    """J_n(z) for integer n and complex z"""
    n, z = int(n), complex(z)
    _check_range(n, z)
    if n < 0:
        sign = -1 if n % 2 else 1
        return sign * bessel_j_int(-n, z)
    if abs(z) <= constants.INTEGRAL_RANGE:
        value = _j_integral(n, z)
    else:
        value = _j_series(n, z)
    return finite(value, f"J_{n}")


def _j_integral(n: int, z: complex) -> complex:
    # (1/pi) int_0^pi cos(n t - z sin t) dt
    scale = math.exp(abs(z.imag))
    value, _ = integrate.quad(
        lambda t: cmath.cos(n * t - z * math.sin(t)),
        0.0,
        math.pi,
        complex_func=True,
        epsabs=1e-15 * scale,
        epsrel=1e-13,
        limit=400,
    )
    return value / math.pi


def _j_series(n: int, z: complex) -> complex:
    with mpmath.workdps(int(abs(z) / 2.3) + 40):
        half = mpmath.mpc(z) / 2
        q = -half * half
        term = half**n / mpmath.factorial(n)
        total, peak = term, abs(term)
        small, m = 0, 0
        while small < 3:
            m += 1
            term *= q / (m * (n + m))
            total += term
            peak = max(peak, abs(term))
            small = small + 1 if abs(term) < constants.SERIES_CUTOFF * peak else 0
        logger.debug(log_messages.SERIES_TERMS.format(n=n, modulus=abs(z), terms=m))
        return complex(total)


def bessel_bounds_check(n: int, z: complex) -> SweepRow:
    """|J_n(z)| against min(e^|Im z|, |z/2|^|n| e^|z| / |n|!), with the large-argument ratio as extra"""
    n, z = int(n), complex(z)
    lhs = abs(bessel_j_int(n, z))
    power = math.exp(abs(n) * math.log(abs(z) / 2) - math.lgamma(abs(n) + 1) + abs(z)) if z else float(n == 0)
    envelope = min(math.exp(abs(z.imag)), power)
    extra = {}
    if z.real:
        extra["ratio_large_argument"] = lhs * math.sqrt(abs(z.real)) * math.exp(-abs(z.imag))
    return SweepRow({"n": n, "z": z}, lhs, envelope, extra)


#############################################################
# ### J* ###
def _jstar_mp(xi, z) -> mpmath.mpc:
    q = -(mpmath.mpc(z) / 2) ** 2
    power = mpmath.mpf(1)
    total = mpmath.rgamma(xi + 1)
    peak = abs(total)
    small, m = 0, 0
    while small < 3:
        m += 1
        power *= q / m
        term = power * mpmath.rgamma(xi + m + 1)
        total += term
        peak = max(peak, abs(term))
        # leading reciprocal-gamma zeros at negative integer xi do not count as small
        small = small + 1 if peak and abs(term) < constants.SERIES_CUTOFF * peak else 0
    return total


def bessel_j_star(xi: complex, z: complex) -> complex:
    """J*_xi(z) = sum (-1)^m (z/2)^2m / (m! Gamma(xi + m + 1)); entire in both variables and even in z"""
    z = complex(z)
    if abs(z) > constants.MAX_STAR_ARGUMENT:
        raise DomainError(
            log_messages.SERIES_OVERFLOW.format(modulus=abs(z), limit=constants.MAX_STAR_ARGUMENT)
        )
    with mpmath.workdps(int(abs(z) / 2.3) + 30):
        return finite(complex(_jstar_mp(mpmath.mpc(xi), z)), "J*")


def _jstar_mp_recursive(xi, zm) -> mpmath.mpc:
    # term_m = term_(m-1) q / (m (xi + m)); needs xi + m != 0, i.e. xi not a negative integer
    q = -(zm / 2) ** 2
    term = mpmath.rgamma(xi + 1)
    total, peak = term, abs(term)
    small, m = 0, 0
    while small < 3:
        m += 1
        term *= q / (m * (xi + m))
        total += term
        peak = max(peak, abs(term))
        small = small + 1 if abs(term) < constants.SERIES_CUTOFF * peak else 0
    return total


def _jstar_many_mp(xi: np.ndarray, z: complex) -> np.ndarray:
    with mpmath.workdps(int(abs(z) / 2.3) + 30):
        zm = mpmath.mpc(z)
        values = []
        for order in xi:
            near_pole = order.real < 0 and abs(order - round(order.real)) < constants.IDENTITY_TOL
            series = _jstar_mp if near_pole else _jstar_mp_recursive
            values.append(complex(series(mpmath.mpc(order), zm)))
    return np.array(values, dtype=complex)


def jstar_array(xi: np.ndarray, z: complex) -> np.ndarray:
    """J*_xi(z) for an array of orders.

    The series is summed in double precision until three consecutive terms fall below
    SERIES_CUTOFF times the running maximum. Orders whose largest term makes the relative rounding error
    exceed JSTAR_DOUBLE_TOL are summed again in mpmath with precision scaled to |z|.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=complex))
    z = complex(z)
    if abs(z) > constants.MAX_STAR_ARGUMENT:
        raise DomainError(
            log_messages.SERIES_OVERFLOW.format(modulus=abs(z), limit=constants.MAX_STAR_ARGUMENT)
        )
    q = -((z / 2) ** 2)
    term = special.rgamma(xi + 1)
    total, peak = term.copy(), np.abs(term)
    # rgamma(xi + m + 1) = rgamma(xi + m) / (xi + m) breaks down at negative integer orders
    shift = int(np.max(np.abs(xi.real), initial=0.0)) + 1
    power = 1 + 0j
    small, m = 0, 0
    limit = shift + int(4 * abs(z)) + 200
    while (small < 3 or m <= shift) and m < limit:
        m += 1
        power *= q / m
        term = power * special.rgamma(xi + m + 1)
        total = total + term
        peak = np.maximum(peak, np.abs(term))
        small = small + 1 if np.all(np.abs(term) < constants.SERIES_CUTOFF * peak) else 0
    rounding = EPS * peak * m
    unsafe = rounding > constants.JSTAR_DOUBLE_TOL * np.abs(total)
    if unsafe.any():
        logger.debug(log_messages.JSTAR_PRECISION.format(count=int(unsafe.sum()), modulus=abs(z)))
        total[unsafe] = _jstar_many_mp(xi[unsafe], z)
    return total


#############################################################
# ### kernels ###
def _jcal(nu, p: int, z: complex):
    """J_{nu,p}(z) = |z/2|^2nu (z/|z|)^-2p J*_{nu-p}(z) J*_{nu+p}(conj z)"""
    zm = mpmath.mpc(z)
    unit = zm / abs(zm)
    return (
        mpmath.exp(2 * nu * mpmath.log(abs(zm) / 2))
        * unit ** (-2 * p)
        * _jstar_mp(nu - p, zm)
        * _jstar_mp(nu + p, mpmath.conj(zm))
    )


def _kernel(nu, p: int, z: complex):
    return (_jcal(-nu, -p, z) - _jcal(nu, p, z)) / mpmath.sin(mpmath.pi * nu)


def kernel_K(nu: complex, p: int, z: complex) -> complex:
    """K_{nu,p}(z) = (J_{-nu,-p}(z) - J_{nu,p}(z)) / sin(pi nu) for |Re nu| < 1"""
    nu, p, z = complex(nu), int(p), complex(z)
    if not z:
        raise DomainError(log_messages.ZERO_KERNEL_ARGUMENT)
    if abs(nu.real) >= 1:
        raise DomainError(log_messages.KERNEL_STRIP.format(re=abs(nu.real), bound=1))
    if abs(z) > constants.MAX_STAR_ARGUMENT:
        raise DomainError(
            log_messages.SERIES_OVERFLOW.format(modulus=abs(z), limit=constants.MAX_STAR_ARGUMENT)
        )
    with mpmath.workdps(int(abs(z) / 2.3) + 40):
        nu_mp = mpmath.mpc(nu)
        if abs(nu) < constants.INTEGER_NU_STEP:
            # removable singularity at nu = 0
            step = constants.INTEGER_NU_STEP
            value = (_kernel(nu_mp + step, p, z) + _kernel(nu_mp - step, p, z)) / 2
        else:
            value = _kernel(nu_mp, p, z)
        return finite(complex(value), "K kernel")


def kernel_K_integral(nu: complex, p: int, z: complex) -> complex:
    """K_{nu,p}(z) through its y-integral, valid for |Re nu| < 1/4"""
    nu, p, z = complex(nu), int(p), complex(z)
    if not z:
        raise DomainError(log_messages.ZERO_KERNEL_ARGUMENT)
    if abs(nu.real) >= 0.25:
        raise DomainError(log_messages.KERNEL_STRIP.format(re=abs(nu.real), bound=0.25))
    modulus, theta = abs(z), cmath.phase(z)
    with mpmath.workdps(20):
        rot = mpmath.expj(theta)
        nu_mp = mpmath.mpc(nu)

        def integrand(y):
            phi = y * rot + 1 / (y * rot)
            size = abs(phi)
            if not size:
                return (y ** (2 * nu_mp) + y ** (-2 * nu_mp)) / y if p == 0 else mpmath.mpf(0)
            unit = (phi / size) ** (2 * p)
            # (0, 1] folded onto [1, inf): Phi(1/y) = conj(Phi(y))
            paired = y ** (2 * nu_mp) * unit + y ** (-2 * nu_mp) * mpmath.conj(unit)
            return paired * mpmath.besselj(2 * p, modulus * size) / y

        value = mpmath.quadosc(integrand, [1, mpmath.inf], omega=modulus)
        sign = -1 if p % 2 else 1
        return finite(complex(sign * 2 * value / mpmath.pi), "K integral")


#############################################################
# ### Graf addition ###
def graf_residual(p: int, u: complex, y: float, M_trunc: int) -> float:
    """|lhs - rhs| of the Neumann-Graf expansion of (-1)^p (Phi/|Phi|)^2p J_2p(|u||Phi|), Phi = y e^it + 1/(y e^it)"""
    p, u, y = int(p), complex(u), float(y)
    if not u:
        raise DomainError(log_messages.ZERO_ARGUMENT.format(name="u"))
    theta = cmath.phase(u)
    phi = y * cmath.exp(1j * theta) + 1 / (y * cmath.exp(1j * theta))
    if abs(phi) < 1e-12:
        raise DomainError(log_messages.GRAF_SINGULAR.format(y=y, theta=theta))
    sign = -1 if p % 2 else 1
    lhs = sign * (phi / abs(phi)) ** (2 * p) * special.jv(2 * p, abs(u) * abs(phi))
    m = np.arange(-M_trunc, M_trunc + 1)
    signs = np.where(m % 2, -1.0, 1.0)
    terms = signs * special.jv(m + p, y * abs(u)) * special.jv(m - p, abs(u) / y) * np.exp(2j * m * theta)
    # smallest terms first
    order = np.argsort(np.abs(terms))
    rhs = complex(np.sum(terms[order]))
    return abs(lhs - rhs)


#############################################################
# ### Gaussian Fourier integrals ###
def gauss_fourier_G(n: int, y: float) -> complex:
    """G_n(y) = int x^n e^(-x^2) e^(2ixy) dx by the three-term recurrence"""
    if n < 0:
        raise DomainError(log_messages.NEGATIVE_M.format(M=n))
    if n > constants.MAX_G_ORDER:
        raise DomainError(log_messages.ORDER_TOO_LARGE.format(n=n, limit=constants.MAX_G_ORDER))
    previous, current = 0j, complex(SQRT_PI * math.exp(-y * y))
    for k in range(n):
        previous, current = current, 1j * y * current + (k / 2) * previous
    return current


def gauss_fourier_G_quad(n: int, y: float) -> complex:
    """G_n(y) by quadrature of its cosine/sine half-line forms"""
    m, odd = divmod(n, 2)
    if odd:
        value, _ = integrate.quad(lambda x: x**n * math.exp(-x * x) * math.sin(2 * x * y), 0, np.inf, limit=200)
        return 2j * value
    value, _ = integrate.quad(lambda x: x ** (2 * m) * math.exp(-x * x) * math.cos(2 * x * y), 0, np.inf, limit=200)
    return complex(2 * value)


#############################################################
# ### Poisson summation over Z[i] ###
@dataclass(frozen=True)
class PoissonCheck:
    family: str
    t: float
    lhs: complex
    rhs: complex
    lhs_tail: float
    rhs_tail: float
    decay: SweepReport

    @property
    def agrees(self) -> bool:
        return abs(self.lhs - self.rhs) <= self.lhs_tail + self.rhs_tail + 1e-10

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "t": self.t,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "lhs_tail": self.lhs_tail,
            "rhs_tail": self.rhs_tail,
            "agrees": self.agrees,
            "decay": self.decay,
        }


def _radial_pair(family: str, t: float):
    """f(r) and its transform at |w| for the built-in family, plus majorants for the tails"""
    match family:
        case "1":
            f = lambda r: np.exp(-np.pi * t * r**2)
            f_hat = lambda s: np.exp(-np.pi * s**2 / t) / t
            f_major, hat_major = f, f_hat
        case "abs2":
            f = lambda r: r**2 * np.exp(-np.pi * t * r**2)
            f_hat = lambda s: np.exp(-np.pi * s**2 / t) / t * (1 / (np.pi * t) - s**2 / t**2)
            f_major = f
            hat_major = lambda s: np.exp(-np.pi * s**2 / t) / t * (1 / (np.pi * t) + s**2 / t**2)
        case _:
            raise DomainError(log_messages.UNSUPPORTED_FAMILY.format(family=family))
    return f, f_hat, f_major, hat_major


def _lattice_sum(g, cutoff: float) -> complex:
    bound = int(math.floor(cutoff))
    a, b = np.meshgrid(np.arange(-bound, bound + 1), np.arange(-bound, bound + 1))
    r = np.hypot(a, b)
    values = g(r[r <= cutoff])
    return complex(np.sum(np.sort(values)))


def _tail(g, cutoff: float) -> float:
    # every lattice point beyond the cutoff owns a unit square outside radius cutoff - sqrt 2
    start = max(cutoff - math.sqrt(2), 0.0)
    value, _ = integrate.quad(lambda s: g(s) * (s + math.sqrt(2) / 2), start, np.inf, limit=200)
    return 2 * math.pi * value


@lru_cache(maxsize=None)
def _laplacian_norms(family: str, t: float, order: int) -> tuple[float, ...]:
    """int |Lap^j f| over C for j = 0..order, with the Laplacians taken symbolically"""
    x, y, r = sympy.symbols("x y r", real=True)
    base = sympy.exp(-sympy.pi * sympy.Float(t) * (x**2 + y**2))
    expr = base if family == "1" else (x**2 + y**2) * base
    norms = []
    for _ in range(order + 1):
        radial = sympy.lambdify(r, expr.subs({x: r, y: 0}), "numpy")
        reach = math.sqrt(80 / (math.pi * t)) + 2
        value, _ = integrate.quad(lambda s: abs(radial(s)) * s, 0, reach, limit=400)
        norms.append(2 * math.pi * value)
        expr = sympy.expand(sympy.diff(expr, x, 2) + sympy.diff(expr, y, 2))
    return tuple(norms)


def laplacian_decay(family: str, t: float, radii=(0.25, 0.5, 1.0, 1.5, 2.0, 3.0), order: int = 3) -> SweepReport:
    """|f^(w)| <= (2 pi |w|)^(-2j) int |Lap^j f| for j <= order"""
    _, f_hat, _, _ = _radial_pair(family, t)
    norms = _laplacian_norms(family, float(t), order)
    rows = []
    for j, norm in enumerate(norms):
        for s in radii:
            envelope = (2 * math.pi * s) ** (-2 * j) * norm
            rows.append(SweepRow({"family": family, "t": t, "j": j, "w": s}, abs(float(f_hat(s))), envelope))
    return SweepReport("laplacian_decay", tuple(rows))


def poisson_check_2d(family: str, t: float, cutoff: float) -> PoissonCheck:
    """sum f(alpha) against sum f^(alpha) over Gaussian integers |alpha| <= cutoff"""
    f, f_hat, f_major, hat_major = _radial_pair(family, t)
    lhs = _lattice_sum(f, cutoff)
    rhs = _lattice_sum(f_hat, cutoff)
    return PoissonCheck(
        family,
        t,
        lhs,
        rhs,
        _tail(f_major, cutoff),
        _tail(lambda s: abs(hat_major(s)), cutoff),
        laplacian_decay(family, t),
    )


def theta_square() -> float:
    """(sum_n e^(-pi n^2))^2 through the Jacobi theta function"""
    return float(mpmath.jtheta(3, 0, mpmath.exp(-mpmath.pi)) ** 2)


#############################################################
# ### |psi|^(-1/2) sweep ###
PSI_CONSTANT = 2 * float(mpmath.beta(0.5, 0.25))


def _psi_amplitude(x: float, y: float) -> tuple[float, float]:
    """psi(y, x; phi) = R sin(phi - phi0)"""
    a = 2 * math.cosh(y) * math.cos(x)
    b = 2 * math.sinh(y) * math.sin(x)
    return math.hypot(a, b), math.atan2(b, a)


def psi_integral(x: float, y: float) -> float:
    """int_{-pi}^{pi} |psi(y, x; phi)|^(-1/2) dphi by quadrature between consecutive zeros"""
    amplitude, phi0 = _psi_amplitude(x, y)
    total = 0.0
    for start in (phi0, phi0 + math.pi):
        end = start + math.pi

        def smooth(phi, start=start, end=end):
            gap = (phi - start) * (end - phi)
            value = abs(amplitude * math.sin(phi - phi0))
            return math.sqrt(gap / value) if value > 0 else math.sqrt(math.pi / amplitude)

        value, _ = integrate.quad(smooth, start, end, weight="alg", wvar=(-0.5, -0.5))
        total += value
    return total


def psi_integral_sweep(x_grid, y_grid) -> SweepReport:
    """J(x, y) = int |psi|^(-1/2) dphi against (cos x)^(-1/2)"""
    rows = []
    for x in x_grid:
        if abs(x) >= math.pi / 2:
            raise DomainError(log_messages.X_OUT_OF_RANGE.format(x=x))
        for y in y_grid:
            amplitude, _ = _psi_amplitude(x, y)
            value = psi_integral(x, y)
            rows.append(
                SweepRow(
                    {"x": float(x), "y": float(y)},
                    value,
                    math.cos(x) ** -0.5,
                    {"closed_form": PSI_CONSTANT / math.sqrt(amplitude)},
                )
            )
    return SweepReport("psi_integral", tuple(rows))
