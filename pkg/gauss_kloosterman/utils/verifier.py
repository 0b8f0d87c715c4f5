"""Verification suites: every invariant of the library as a named check with a pass/fail/inconclusive status."""

import cmath
import logging
import math
import time
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import click
import numpy as np
from scipy import special

from gauss_kloosterman.logs import log_messages
from gauss_kloosterman.utils import bessel, btransform, sieve
from gauss_kloosterman.utils.config import constants
from gauss_kloosterman.utils.cusps import (
    allowed_moduli,
    brute_force_class_count,
    class_representatives,
    cusp_count_formula,
    index_and_covolume,
    scaling_conjugation_check,
    width_lattice_check,
)
from gauss_kloosterman.utils.errors import InconclusiveResult
from gauss_kloosterman.utils.gaussint import (
    GaussianInt,
    coprime,
    crt,
    dedekind_zeta2,
    divides,
    factorize,
    gaussian_primes,
    gcd,
    hecke_zeta_partial,
    multiplicative_stats,
    parse_gaussian,
    residue_key,
    residues,
    xgcd,
)
from gauss_kloosterman.utils.kloosterman import (
    check_bounds,
    delta_term,
    delta_term_bruteforce,
    frame_twist,
    gauss_sum,
    kloosterman_bruteforce,
    kloosterman_classical_pairs,
    kloosterman_classical_table,
    kloosterman_crt,
    kloosterman_factor,
    kloosterman_general,
    kloosterman_samecusp,
    samecusp_twist,
    twist_covariance,
)

logger = logging.getLogger(__name__)


class Outcome(NamedTuple):
    ok: bool
    detail: str
    metrics: dict


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    status: str
    seconds: float
    detail: str = ""
    metrics: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "name": self.name,
            "status": self.status,
            "seconds": round(self.seconds, 3),
            "detail": self.detail,
            "metrics": self.metrics,
        }


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    budget: str
    results: tuple[CheckResult, ...]

    def count(self, status: str) -> int:
        return sum(result.status == status for result in self.results)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "budget": self.budget,
            "passed": self.count("pass"),
            "failed": self.count("fail"),
            "inconclusive": self.count("inconclusive"),
            # timings vary run to run; keep them out of the payload
            "checks": [{k: v for k, v in r.to_dict().items() if k != "seconds"} for r in self.results],
        }


def _points(max_norm: int) -> list[GaussianInt]:
    bound = math.isqrt(max_norm)
    return [
        GaussianInt(x, y)
        for x in range(-bound, bound + 1)
        for y in range(-bound, bound + 1)
        if x * x + y * y <= max_norm
    ]


def _canonical(max_norm: int, min_norm: int = 1) -> list[GaussianInt]:
    found = {z.canonical() for z in _points(max_norm) if z.norm() >= min_norm}
    return sorted(found, key=lambda z: (z.norm(), residue_key(z)))


def _frames(levels) -> list:
    return [frame for level in levels for frame in class_representatives(parse_gaussian(level))]


def _worst(pairs) -> float:
    return max((abs(complex(a) - complex(b)) for a, b in pairs), default=0.0)


#############################################################
# ### gaussint ###
def check_euclid(sizes: dict, seed: int) -> Outcome:
    box = _points(sizes["gauss_norm"])
    bad = 0
    for m in box:
        for n in box:
            if not m and not n:
                continue
            g, s, t = xgcd(m, n)
            if g != gcd(m, n) or s * m + t * n != g or not divides(g, m) or not divides(g, n):
                bad += 1
    return Outcome(bad == 0, f"{bad} bad (m, n) pairs", {"pairs": len(box) ** 2, "bad": bad})


def check_factorization(sizes: dict, seed: int) -> Outcome:
    bad = [str(z) for z in _points(sizes["crt_norm"]) if z and factorize(z).expand() != z]
    return Outcome(not bad, f"mismatches: {bad[:5]}", {"mismatches": len(bad)})


def check_crt(sizes: dict, seed: int) -> Outcome:
    rng = np.random.default_rng(seed)
    moduli_pool = _canonical(sizes["gauss_norm"], 2)
    bad = 0
    for _ in range(sizes["random_cases"]):
        m1, m2 = (moduli_pool[i] for i in rng.choice(len(moduli_pool), 2, replace=False))
        if gcd(m1, m2) != GaussianInt(1, 0):
            continue
        r1, r2 = (GaussianInt(*map(int, rng.integers(-20, 21, 2))) for _ in range(2))
        x = crt((r1, r2), (m1, m2))
        if not (divides(m1, x - r1) and divides(m2, x - r2)):
            bad += 1
    return Outcome(bad == 0, f"{bad} failed reconstructions", {"bad": bad})


def check_zeta(sizes: dict, seed: int) -> Outcome:
    cutoff = 50.0 * sizes["gauss_norm"]
    value, tail = hecke_zeta_partial(2, 0, cutoff)
    gap = abs(value - dedekind_zeta2())
    return Outcome(gap <= tail, f"gap {gap:.3e} vs tail {tail:.3e}", {"gap": gap, "tail": tail})


#############################################################
# ### cusps ###
def check_class_count(sizes: dict, seed: int) -> Outcome:
    mismatches = []
    levels = _canonical(sizes["cusp_norm"])
    for q0 in levels:
        formula, brute, listed = cusp_count_formula(q0), brute_force_class_count(q0), len(class_representatives(q0))
        if not formula == brute == listed:
            mismatches.append(str(q0))
    return Outcome(not mismatches, f"mismatches at {mismatches}", {"levels": len(levels), "mismatches": len(mismatches)})


def check_frames(sizes: dict, seed: int) -> Outcome:
    bad = []
    for q0 in _canonical(min(sizes["cusp_norm"], 20)):
        index, covolume = index_and_covolume(q0)
        if index < q0.norm() or covolume <= 0:
            bad.append(f"index {index} @ {q0}")
        for frame in class_representatives(q0):
            if not (scaling_conjugation_check(frame) and width_lattice_check(frame)):
                bad.append(f"{frame.cusp} @ {q0}")
    return Outcome(not bad, f"bad frames {bad}", {"bad": len(bad)})


#############################################################
# ### kloosterman ###
def check_triple_path(sizes: dict, seed: int) -> Outcome:
    freqs = _points(sizes["frequency_norm"])
    general_vs_brute, general_vs_same, cases = [], [], 0
    for level in sizes["kloosterman_levels"]:
        frames = class_representatives(parse_gaussian(level))
        for f1 in frames:
            for f2 in frames:
                for C in allowed_moduli(f1, f2, math.sqrt(sizes["kloosterman_norm"])):
                    for m in freqs:
                        for n in freqs:
                            general = kloosterman_general(f1, f2, m, n, C).value
                            general_vs_brute.append((general, kloosterman_bruteforce(f1, f2, m, n, C).value))
                            if f1 == f2:
                                same = kloosterman_samecusp(f1, m, n, C * f1.v).value * frame_twist(f1, m, n)
                                general_vs_same.append((general, same))
                            cases += 1
    worst = max(_worst(general_vs_brute), _worst(general_vs_same))
    return Outcome(
        worst <= constants.CROSS_PATH_TOL,
        f"max deviation {worst:.3e}",
        {"cases": cases, "max_deviation": worst},
    )


def check_factor(sizes: dict, seed: int) -> Outcome:
    rng = np.random.default_rng(seed)
    frames = [
        frame
        for frame in _frames(level for level in sizes["kloosterman_levels"] if level != "1")
        if coprime(frame.u, frame.q0)
    ]
    freqs = _points(8)
    pairs = []
    for _ in range(sizes["random_cases"]):
        f1 = frames[rng.integers(len(frames))]
        same_level = [f for f in frames if f.q0 == f1.q0]
        f2 = same_level[rng.integers(len(same_level))]
        moduli = allowed_moduli(f1, f2, 10.0)
        if not moduli:
            continue
        C = moduli[rng.integers(len(moduli))]
        m, n = freqs[rng.integers(len(freqs))], freqs[rng.integers(len(freqs))]
        general, simple = kloosterman_factor(f1, f2, m, n, C)
        pairs.append(((general * simple).value, kloosterman_general(f1, f2, m, n, C).value))
    worst = _worst(pairs)
    return Outcome(worst <= constants.CROSS_PATH_TOL, f"max deviation {worst:.3e}", {"max_deviation": worst})


def check_crt_multiplicativity(sizes: dict, seed: int) -> Outcome:
    rng = np.random.default_rng(seed + 1)
    frames = _frames(sizes["kloosterman_levels"])
    freqs = _points(8)
    pairs = []
    for _ in range(sizes["random_cases"]):
        frame = frames[rng.integers(len(frames))]
        moduli = [C * frame.v for C in allowed_moduli(frame, frame, math.sqrt(sizes["crt_norm"]))]
        if not moduli:
            continue
        c = moduli[rng.integers(len(moduli))]
        w1, w2 = freqs[rng.integers(len(freqs))], freqs[rng.integers(len(freqs))]
        product, _ = kloosterman_crt(frame, w1, w2, c)
        pairs.append((product.value * samecusp_twist(frame, w1, w2), kloosterman_samecusp(frame, w1, w2, c).value))
    worst = _worst(pairs)
    return Outcome(worst <= constants.CROSS_PATH_TOL, f"max deviation {worst:.3e}", {"max_deviation": worst})


def _we_counts(c: GaussianInt, pairs, values) -> tuple[int, int, int, float]:
    """Violations of 2^(7/2) 2^omega(c) |(m, n, c) c| and of sqrt(8) |(m, n, c) c| tau(c), tau over ideals and associates"""
    stats = multiplicative_stats(c)
    weil = 2**3.5 * 2**stats.omega
    local = {}
    common = {}
    primary = ideal = assoc = 0
    worst = 0.0
    for (m, n), value in zip(pairs, values):
        dm = local.setdefault(m, gcd(m, c))
        dn = local.setdefault(n, gcd(n, c))
        size = common.setdefault((dm, dn), math.sqrt((gcd(dm, dn) * c).norm()))
        lhs = abs(value)
        worst = max(worst, lhs / (weil * size))
        primary += lhs > weil * size + constants.CROSS_PATH_TOL
        ideal += lhs > math.sqrt(8) * stats.tau_ideal * size + constants.CROSS_PATH_TOL
        assoc += lhs > math.sqrt(8) * stats.tau_assoc * size + constants.CROSS_PATH_TOL
    return primary, ideal, assoc, worst


def check_weil_estermann(sizes: dict, seed: int) -> Outcome:
    rng = np.random.default_rng(seed + 2)
    totals = np.zeros(3, dtype=int)
    worst, moduli = 0.0, 0
    for c in _canonical(sizes["we_exhaustive_norm"], 2):
        reps = residues(c)
        table = kloosterman_classical_table(c, reps, reps)
        primary, ideal, assoc, ratio = _we_counts(c, [(m, n) for m in reps for n in reps], table.ravel())
        totals += (primary, ideal, assoc)
        worst, moduli = max(worst, ratio), moduli + 1
    if sizes["we_sampled_norm"]:
        for c in _canonical(sizes["we_sampled_norm"], sizes["we_exhaustive_norm"] + 1):
            reps = residues(c)
            pairs = [(reps[i], reps[j]) for i, j in rng.integers(len(reps), size=(200, 2))]
            primary, ideal, assoc, ratio = _we_counts(c, pairs, kloosterman_classical_pairs(c, pairs))
            totals += (primary, ideal, assoc)
            worst, moduli = max(worst, ratio), moduli + 1
    primary, ideal, assoc = (int(count) for count in totals)
    needed = "ideal" if not ideal else "associates" if not assoc else "none"
    return Outcome(
        primary == 0,
        f"{primary} violations, max ratio {worst:.4f}; sqrt(8) tau form needs tau over {needed}",
        {
            "moduli": moduli,
            "violations": primary,
            "violations_tau_ideal": ideal,
            "violations_tau_associates": assoc,
            "tau_convention": needed,
            "max_ratio": worst,
        },
    )


def check_gauss_sums(sizes: dict, seed: int) -> Outcome:
    worst = 0.0
    for varpi in gaussian_primes(sizes["gauss_norm"]):
        if divides(varpi, 2):
            continue
        for a in residues(varpi, coprime_only=True):
            worst = max(worst, abs(abs(gauss_sum(a, varpi)) - math.sqrt(varpi.norm())))
    return Outcome(worst <= 1e-10, f"max ||G| - |varpi|| = {worst:.3e}", {"max_deviation": worst})


def check_delta(sizes: dict, seed: int) -> Outcome:
    points = _points(8 if sizes["inversion"] else sizes["frequency_norm"])
    pairs, cases = [], 0
    for level in sizes["kloosterman_levels"][:3]:
        frames = class_representatives(parse_gaussian(level))
        for f1 in frames:
            for f2 in frames:
                for w1 in points:
                    for w2 in points:
                        pairs.append((delta_term(f1, f2, w1, w2).value, delta_term_bruteforce(f1, f2, w1, w2).value))
                        cases += 1
    worst = _worst(pairs)
    return Outcome(
        worst <= constants.CROSS_PATH_TOL, f"max deviation {worst:.3e}", {"cases": cases, "max_deviation": worst}
    )


def check_twist_covariance(sizes: dict, seed: int) -> Outcome:
    bad = cases = 0
    for f1 in _frames(sizes["kloosterman_levels"][:2]):
        for f2 in class_representatives(f1.q0):
            for C in allowed_moduli(f1, f2, 3.0)[:3]:
                _, _, ok = twist_covariance(f1, f2, 1, GaussianInt(1, 1), C, 0.3 + 0.1j, -0.2 + 0.4j)
                bad += not ok
                cases += 1
    return Outcome(bad == 0, f"{bad} of {cases} cases differ", {"cases": cases, "bad": bad})


def check_samecusp_bound(sizes: dict, seed: int) -> Outcome:
    rows = []
    for frame in _frames(sizes["kloosterman_levels"]):
        for C in allowed_moduli(frame, frame, math.sqrt(sizes["kloosterman_norm"])):
            for m in _points(sizes["frequency_norm"]):
                rows.append(check_bounds("samecusp_we", {"frame": frame, "c": C * frame.v, "m": m, "n": 1}))
    violations = sum(row.violated for row in rows)
    return Outcome(violations == 0, f"{violations} violations", {"rows": len(rows), "violations": violations})


#############################################################
# ### bessel ###
def check_graf(sizes: dict, seed: int) -> Outcome:
    worst = 0.0
    for p in (0, 1, 2, 3):
        for u in (0.5, 1 + 1j, -2 + 1.5j, 4.0):
            for y in np.linspace(0.5, 2.0, 4):
                worst = max(worst, bessel.graf_residual(p, u, float(y), 80))
    return Outcome(worst <= constants.GRAF_TOL, f"max residual {worst:.3e}", {"max_residual": worst})


def check_bessel_paths(sizes: dict, seed: int) -> Outcome:
    worst = 0.0
    for n in (0, 1, 5, -3):
        for z in (0.5, 3 + 1j, 12 - 2j, 40.0):
            reference = complex(special.jv(n, z))
            worst = max(worst, abs(bessel.bessel_j_int(n, z) - reference) / max(1.0, abs(reference)))
    rows = [bessel.bessel_bounds_check(n, z) for n in (0, 1, 3) for z in (0.5, 2 + 1j, 10.0)]
    violations = sum(row.violated for row in rows)
    ok = worst <= 1e-9 and violations == 0
    return Outcome(ok, f"max deviation {worst:.3e}, {violations} bound violations", {"max_deviation": worst})


def check_kernel_integral(sizes: dict, seed: int) -> Outcome:
    cases = [(0.5j, 0, 1.5), (0.1 + 0.3j, 1, 0.8 + 0.6j)]
    if sizes["inversion"]:
        cases += [(0.5j, 1, 1.5), (0.1 + 0.3j, 0, -1 + 0.5j)]
    worst = 0.0
    for nu, p, z in cases:
        series, integral = bessel.kernel_K(nu, p, z), bessel.kernel_K_integral(nu, p, z)
        worst = max(worst, abs(series - integral) / max(1.0, abs(series)))
    return Outcome(worst <= 1e-5, f"max relative deviation {worst:.3e}", {"max_deviation": worst})


def check_kernel_symmetry(sizes: dict, seed: int) -> Outcome:
    pairs = [
        (bessel.kernel_K(nu, -p, z), bessel.kernel_K(nu, p, complex(z).conjugate()))
        for nu in (0.4j, 0.2 + 1.1j)
        for p in (1, 2)
        for z in (0.7 + 0.2j, -1.3 + 2j)
    ]
    worst = _worst(pairs)
    return Outcome(worst <= 1e-10, f"max deviation {worst:.3e}", {"max_deviation": worst})


def check_gauss_fourier(sizes: dict, seed: int) -> Outcome:
    pairs = [(bessel.gauss_fourier_G(n, y), bessel.gauss_fourier_G_quad(n, y)) for n in range(7) for y in (0.0, 0.7, 2.0)]
    worst = _worst(pairs)
    return Outcome(worst <= 1e-10, f"max deviation {worst:.3e}", {"max_deviation": worst})


def check_poisson(sizes: dict, seed: int) -> Outcome:
    checks = [bessel.poisson_check_2d(family, t, 10.0) for family in constants.POISSON_FAMILIES for t in (0.5, 1.0)]
    disagree = sum(not check.agrees for check in checks)
    violations = sum(check.decay.summary()["violations"] for check in checks)
    theta = abs(checks[1].lhs - bessel.theta_square())
    ok = disagree == 0 and violations == 0 and theta <= 1e-12
    return Outcome(
        ok,
        f"{disagree} disagreements, {violations} decay violations, theta gap {theta:.1e}",
        {"disagreements": disagree, "decay_violations": violations, "theta_gap": theta},
    )


def check_psi_integral(sizes: dict, seed: int) -> Outcome:
    report = bessel.psi_integral_sweep((-1.2, -0.4, 0.0, 0.7, 1.4), (0.0, 0.5, 2.0))
    worst = max(abs(row.lhs - row.extra["closed_form"]) / row.lhs for row in report.rows)
    ratio = report.summary()["max_ratio"]
    ok = worst <= 1e-7 and math.isfinite(ratio)
    return Outcome(ok, f"closed-form deviation {worst:.2e}, max ratio {ratio:.4f}", {"max_ratio": ratio})


#############################################################
# ### btransform ###
def check_diagonal(sizes: dict, seed: int) -> Outcome:
    worst = 0.0
    bad = []
    for P in (1.0, 2.0, 3.0):
        for K in (1.0, 2.0, 3.0):
            term = btransform.diagonal_term(btransform.TestParams(P, K))
            poisson_gap = abs(term.exact.real - term.poisson) / term.main
            worst = max(worst, term.deviation / term.rel_envelope)
            if term.deviation > term.rel_envelope or poisson_gap > 1e-10:
                bad.append((P, K))
    line = btransform.diagonal_line_integral(btransform.TestParams(2.0, 2.0))
    line_gap = abs(line - btransform.diagonal_term(btransform.TestParams(2.0, 2.0)).exact)
    ok = not bad and line_gap <= 1e-8
    return Outcome(ok, f"bad (P, K): {bad}, line gap {line_gap:.1e}", {"max_ratio": worst, "line_gap": line_gap})


def check_routes(sizes: dict, seed: int) -> Outcome:
    grid = [btransform.TestParams(P, K) for P, K in sizes["route_grid"]]
    count = sizes["route_points"]
    points = [4 * (k + 1) / count * cmath.exp(1j * (1.1 * k + 0.3)) for k in range(count)]
    report = btransform.route_sweep(grid, points)
    summary = report.summary()
    return Outcome(summary["violations"] == 0, f"{summary['violations']} violations", summary)


def check_f_p(sizes: dict, seed: int) -> Outcome:
    params = btransform.TestParams(2.0, 2.0)
    pairs = [
        (btransform.f_p(params, p, y), btransform.f_p_series(params, p, y)) for p in (0, 1, 3) for y in (0.5, 1.0, 1.7)
    ]
    worst = _worst(pairs)
    return Outcome(worst <= 1e-10, f"max deviation {worst:.3e}", {"max_deviation": worst})


def check_conditions(sizes: dict, seed: int) -> Outcome:
    violations, asymmetric = 0, 0
    for P, K in sizes["route_grid"]:
        report = btransform.decay_conditions(btransform.TestParams(P, K))
        violations += report.summary()["violations"]
        asymmetric += sum(not row.extra["symmetric"] for row in report.rows)
    ok = violations == 0 and asymmetric == 0
    return Outcome(ok, f"{violations} violations, {asymmetric} asymmetric", {"violations": violations})


def check_inversion(sizes: dict, seed: int) -> Outcome:
    f = btransform.BumpFunction()
    points = (0.7, 1.0j, -0.9 + 0.3j, 1.2 - 0.4j, 0.8 + 0.8j)
    report = btransform.inversion_check(f, points)
    summary = report.summary()
    return Outcome(summary["violations"] == 0, f"max ratio {summary['max_ratio']:.3f}", summary)


#############################################################
# ### sieve ###
def check_u_paths(sizes: dict, seed: int) -> Outcome:
    pairs = []
    for level in ("1", "1+1i"):
        for frame in class_representatives(parse_gaussian(level)):
            for c in sieve.sweep_moduli(frame, 20.0, 2):
                b = sieve.make_coefficients("random_phase", 4.0, seed)
                pairs.append((sieve.u_sum(frame, 0.0, c, 0, b), sieve.kloosterman_matrix_form(frame, c, b)))
                pairs.append((sieve.u_sum(frame, 0.7, c, 1, b), sieve.u_sum_reference(frame, 0.7, c, 1, b)))
    worst = _worst(pairs)
    return Outcome(worst <= 1e-8, f"max deviation {worst:.3e}", {"max_deviation": worst})


def check_bound_sweep(sizes: dict, seed: int, threads: int = 1) -> Outcome:
    full = sizes["inversion"]
    report = sieve.bound_sweep(
        levels=sizes["kloosterman_levels"][:2],
        N_values=sizes["sieve_N"],
        M_values=sizes["sieve_M"],
        max_c_norm=400.0 if full else 50.0,
        seed=seed,
        threads=threads,
    )
    flags = sieve.blow_up_flags(report)
    ratios = {kind: report.select(kind=kind).summary()["max_ratio"] for kind in sieve.BOUND_KINDS}
    finite = all(ratio is None or math.isfinite(ratio) for ratio in ratios.values())
    ok = finite and not any(flags.values())
    return Outcome(ok, f"max ratios {ratios}, blow-up {flags}", {"max_ratio": ratios, "blow_up": flags, "rows": len(report.rows)})


def check_e_sum(sizes: dict, seed: int) -> Outcome:
    gaps, ratios = [], []
    for c in (GaussianInt(1, 1), GaussianInt(2, 1)):
        for family in ("ones", "random_phase"):
            a = sieve.make_coefficients(family, 10.0, seed)
            for M, T, alpha, beta in ((1, 0.5, 1.0, 0.5), (0, 2.0, 0.3, -1.0)):
                exact = sieve.e_sum(c, a, M, T, alpha, beta, method="exact")
                quad = sieve.e_sum(c, a, M, T, alpha, beta)
                gaps.append(abs(exact - quad) / max(exact, 1.0))
                ratios.append(quad / sieve.e_sum_envelope(c, a, M, T, alpha, beta))
    worst = max(gaps)
    ok = worst <= 1e-8 and all(math.isfinite(r) for r in ratios)
    return Outcome(ok, f"max relative gap {worst:.2e}, max ratio {max(ratios):.4f}", {"max_ratio": max(ratios)})


def check_geometric(sizes: dict, seed: int, threads: int = 1) -> Outcome:
    frame = class_representatives(GaussianInt(1, 0))[0]
    params = btransform.TestParams(2.0, 2.0)
    first, second = (
        sieve.geometric_side(frame, frame, 1, 1, params, X, threads) for X in sizes["geometric_cutoffs"]
    )
    change = abs(second.kloosterman_part - first.kloosterman_part)
    converged = change <= first.tail_envelope and second.tail_envelope < first.tail_envelope

    level = class_representatives(GaussianInt(1, 1))
    f1, f2 = level[0], level[-1]
    X = 3.0
    side = sieve.geometric_side(f1, f2, 1, GaussianInt(1, 1), params, X, threads)
    partner = sieve.geometric_side(f2, f1, GaussianInt(-1, -1), -1, params, X, threads)
    symmetric = abs(side.kloosterman_part - partner.kloosterman_part) <= side.tail_envelope
    inequivalent = side.delta_part == 0 if f1 != f2 else True
    ok = converged and symmetric and inequivalent
    return Outcome(
        ok,
        f"change {change:.3e} vs tail {first.tail_envelope:.3e}",
        {"first": first.to_dict(), "second": second.to_dict(), "symmetric": symmetric},
    )


def check_linnik_selberg(sizes: dict, seed: int) -> Outcome:
    frame = class_representatives(GaussianInt(1, 0))[0]
    X = sizes["geometric_cutoffs"][0]
    first = sieve.linnik_selberg_partial(frame, frame, 1, 1, 1.0, X)
    second = sieve.linnik_selberg_partial(frame, frame, 1, 1, 1.0, 2 * X)
    stable = abs(second.Z_partial - first.Z_partial) <= first.tail
    s = 1.1 + 0.3j
    value = sieve.linnik_selberg_partial(frame, frame, 1, GaussianInt(2, 1), s, X)
    mirror = sieve.linnik_selberg_partial(frame, frame, -1, GaussianInt(-2, -1), s.conjugate(), X)
    conjugate = abs(mirror.zeta_partial - value.zeta_partial.conjugate()) <= 1e-9 * max(1.0, abs(value.zeta_partial))
    constant = abs(sieve.jstar_pair(2 * s - 1, 0) - complex(special.rgamma(2 * s)) ** 2)
    ok = stable and conjugate and constant <= 1e-12
    return Outcome(ok, f"stable {stable}, conjugation {conjugate}", {"tail": first.tail, "moduli": first.moduli})


#############################################################
# ### registry ###
Check = Callable[..., Outcome]

SUITE_CHECKS: dict[str, tuple[tuple[str, Check], ...]] = {
    "gaussint": (
        ("euclid", check_euclid),
        ("factorization", check_factorization),
        ("crt", check_crt),
        ("zeta_partial", check_zeta),
    ),
    "cusps": (
        ("class_count", check_class_count),
        ("frames", check_frames),
    ),
    "kloosterman": (
        ("triple_path", check_triple_path),
        ("factorization", check_factor),
        ("crt_multiplicativity", check_crt_multiplicativity),
        ("weil_estermann", check_weil_estermann),
        ("gauss_sums", check_gauss_sums),
        ("delta_term", check_delta),
        ("twist_covariance", check_twist_covariance),
        ("samecusp_bound", check_samecusp_bound),
    ),
    "bessel": (
        ("graf", check_graf),
        ("bessel_paths", check_bessel_paths),
        ("kernel_integral", check_kernel_integral),
        ("kernel_symmetry", check_kernel_symmetry),
        ("gauss_fourier", check_gauss_fourier),
        ("poisson", check_poisson),
        ("psi_integral", check_psi_integral),
    ),
    "btransform": (
        ("diagonal", check_diagonal),
        ("routes", check_routes),
        ("f_p", check_f_p),
        ("conditions", check_conditions),
        ("inversion", check_inversion),
    ),
    "sieve": (
        ("u_paths", check_u_paths),
        ("bound_sweep", check_bound_sweep),
        ("e_sum", check_e_sum),
        ("geometric_side", check_geometric),
        ("linnik_selberg", check_linnik_selberg),
    ),
}

# checks that accept a worker count
THREADED = {check_bound_sweep, check_geometric}
# checks that only run at the full budget
FULL_ONLY = {check_inversion}


def run_check(suite: str, name: str, check: Check, sizes: dict, seed: int, threads: int) -> CheckResult:
    start = time.perf_counter()
    try:
        outcome = check(sizes, seed, threads) if check in THREADED else check(sizes, seed)
    except InconclusiveResult as err:
        return CheckResult(suite, name, "inconclusive", time.perf_counter() - start, err.message)
    except click.ClickException as err:
        return CheckResult(suite, name, "fail", time.perf_counter() - start, err.message)
    except (ArithmeticError, ValueError, LookupError, TypeError) as err:
        detail = log_messages.UNEXPECTED_ERROR.format(kind=type(err).__name__, detail=err)
        logger.debug(detail)
        return CheckResult(suite, name, "fail", time.perf_counter() - start, detail)
    status = "pass" if outcome.ok else "fail"
    logger.debug(log_messages.CHECK_DETAIL.format(suite=suite, name=name, detail=outcome.detail))
    return CheckResult(suite, name, status, time.perf_counter() - start, outcome.detail, outcome.metrics)


def iter_checks(suite: str, budget: str, seed: int = 0, threads: int = 1) -> Iterator[CheckResult]:
    sizes = constants.BUDGET_MAP[budget]
    suites = [name for name in constants.SUITES if name != "all"] if suite == "all" else [suite]
    for name in suites:
        for check_name, check in SUITE_CHECKS[name]:
            if check in FULL_ONLY and not sizes["inversion"]:
                continue
            yield run_check(name, check_name, check, sizes, seed, threads)


def run_suite(suite: str, budget: str, seed: int = 0, threads: int = 1) -> VerificationReport:
    return VerificationReport(suite, budget, tuple(iter_checks(suite, budget, seed, threads)))
