import dataclasses
import os
from logging import Logger
from typing import Any

import click

from gauss_kloosterman.logs import log_messages
from gauss_kloosterman.logs.logger_factory import get_logger
from gauss_kloosterman.utils import bessel, btransform, sieve, verifier
from gauss_kloosterman.utils.config import constants
from gauss_kloosterman.utils.config.run_config import RunConfig, resolve_threads
from gauss_kloosterman.utils.cusps import (
    build_frame,
    class_representatives,
    cusp_count_formula,
    cusps_equivalent,
    format_cusp,
    index_and_covolume,
    parse_cusp,
)
from gauss_kloosterman.utils.errors import DomainError, InconclusiveResult, ParseError, VerificationFailure
from gauss_kloosterman.utils.gaussint import format_gaussian, parse_gaussian
from gauss_kloosterman.utils.kloosterman import (
    delta_term,
    delta_term_bruteforce,
    frame_twist,
    kloosterman_bruteforce,
    kloosterman_classical,
    kloosterman_factor,
    kloosterman_general,
    kloosterman_samecusp,
)
from gauss_kloosterman.utils.report import SweepReport, render

KLOOSTERMAN_PATHS = ("general", "samecusp", "bruteforce", "classical", "factor")
BESSEL_KINDS = ("j", "jstar", "kernel", "kernel_integral")
SIEVE_MODES = ("u_sum", "e_sum", "sweep")


def parse_complex(text: str, name: str) -> complex:
    """Python-style complex literal such as 1.5-2j"""
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise ParseError(log_messages.BAD_LITERAL.format(kind=f"complex ({name})", text=text, pos=0))


def _record(subcommand: str, **fields) -> dict[str, Any]:
    # worker count never reaches the payload
    config = RunConfig(subcommand=subcommand, **{k: v for k, v in fields.items() if v is not None})
    return {key: value for key, value in dataclasses.asdict(config).items() if key != "threads"}


def _emit(payload: Any, output_format: str, out: str | None, logger: Logger) -> None:
    text = render(payload, output_format.lower())
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text if text.endswith("\n") else text + "\n")
        logger.info(log_messages.WROTE_OUTPUT.format(path=os.path.abspath(out)))
    else:
        click.echo(text)


def _frames(q0: str, a: str, b: str):
    level = parse_gaussian(q0)
    return build_frame(parse_cusp(a), level), build_frame(parse_cusp(b), level)


#############################################################
# ### cusps ###
def cusps(
    q0: str,
    a: str,
    list_classes: bool,
    out: str | None,
    output_format: str,
    save: bool,
    output: str,
    log: str,
) -> None:
    logger = get_logger(output, save, log)
    level = parse_gaussian(q0)
    frames = class_representatives(level)
    index, covolume = index_and_covolume(level)
    logger.info(log_messages.CUSP_CLASSES.format(q0=level, count=len(frames), index=index, vol=covolume))

    cusp = parse_cusp(a)
    normalized = next(frame for frame in frames if cusps_equivalent(cusp, frame.cusp, level))
    logger.info(
        log_messages.CUSP_NORMALIZED.format(cusp=format_cusp(cusp), normalized=format_cusp(normalized.cusp), q0=level)
    )
    if list_classes:
        for frame in frames:
            logger.info(
                log_messages.CUSP_FRAME.format(
                    cusp=format_cusp(frame.cusp), width=frame.width, mu_inv=frame.mu_inv, stab=frame.stab_index
                )
            )

    if output_format == "csv":
        payload = [frame.to_dict() for frame in frames] if list_classes else [{"q0": level, "count": len(frames)}]
    else:
        payload = {
            "config": _record("cusps", q0=q0, a=a),
            "q0": level,
            "count": len(frames),
            "formula": cusp_count_formula(level),
            "index": index,
            "covolume": covolume,
            "class_of_a": normalized.cusp,
            "classes": frames if list_classes else [frame.cusp for frame in frames],
        }
    _emit(payload, output_format, out, logger)


#############################################################
# ### kloosterman ###
def kloosterman(
    q0: str,
    a: str,
    b: str,
    w1: str,
    w2: str,
    c: str | None,
    path: str,
    height: int,
    out: str | None,
    output_format: str,
    save: bool,
    output: str,
    log: str,
) -> None:
    logger = get_logger(output, save, log)
    if c is None:
        raise click.UsageError(log_messages.MISSING_OPTION.format(option="--c", command="kloosterman"))
    f1, f2 = _frames(q0, a, b)
    m, n, C = parse_gaussian(w1), parse_gaussian(w2), parse_gaussian(c)

    parts = None
    match path:
        case "general":
            value = kloosterman_general(f1, f2, m, n, C)
        case "samecusp":
            if f1 != f2:
                raise DomainError(log_messages.NOT_ALLOWED_MODULUS.format(c=C, a=f1.cusp, b=f2.cusp))
            value = kloosterman_samecusp(f1, m, n, C * f1.v).scaled(frame_twist(f1, m, n))
        case "bruteforce":
            value = kloosterman_bruteforce(f1, f2, m, n, C, height)
        case "classical":
            value = kloosterman_classical(m, n, C)
        case "factor":
            general, simple = kloosterman_factor(f1, f2, m, n, C)
            parts = {"general_part": general, "simple_part": simple}
            value = general * simple

    modulus = complex(C) * f1.sqrt_v * f2.sqrt_v
    logger.info(
        log_messages.KLOOSTERMAN_VALUE.format(
            a=format_cusp(f1.cusp),
            b=format_cusp(f2.cusp),
            w1=m,
            w2=n,
            c=format_gaussian(C),
            value=f"{value.value.real:.12g}{value.value.imag:+.12g}i",
            terms=value.terms,
            err=value.err,
        )
    )
    payload = {
        "config": _record("kloosterman", q0=q0, a=a, b=b, w1=w1, w2=w2, c=c),
        "path": path,
        "a": f1,
        "b": f2,
        "C": C,
        "modulus": modulus,
        **value.to_dict(),
        **(parts or {}),
    }
    _emit(payload, output_format, out, logger)


#############################################################
# ### delta ###
def delta(
    q0: str,
    a: str,
    b: str,
    w1: str,
    w2: str,
    check: bool,
    out: str | None,
    output_format: str,
    save: bool,
    output: str,
    log: str,
) -> None:
    logger = get_logger(output, save, log)
    f1, f2 = _frames(q0, a, b)
    m, n = parse_gaussian(w1), parse_gaussian(w2)
    term = delta_term(f1, f2, m, n)
    logger.info(
        log_messages.DELTA_VALUE.format(
            a=format_cusp(f1.cusp), b=format_cusp(f2.cusp), w1=m, w2=n, value=term.value, cosets=term.contributing_cosets
        )
    )
    payload = {"config": _record("delta", q0=q0, a=a, b=b, w1=w1, w2=w2), **term.to_dict()}
    if check:
        brute = delta_term_bruteforce(f1, f2, m, n)
        payload["bruteforce"] = brute.to_dict()
        if abs(brute.value - term.value) > constants.CROSS_PATH_TOL:
            _emit(payload, output_format, out, logger)
            raise VerificationFailure(log_messages.VERIFICATION_FAILED.format(failed=1))
    _emit(payload, output_format, out, logger)


#############################################################
# ### bessel ###
def bessel_value(
    order: str,
    z: str,
    p: int,
    kind: str,
    out: str | None,
    output_format: str,
    save: bool,
    output: str,
    log: str,
) -> None:
    logger = get_logger(output, save, log)
    argument = parse_complex(z, "z")
    row = None
    match kind:
        case "j":
            n = int(parse_complex(order, "order").real)
            value = bessel.bessel_j_int(n, argument)
            row = bessel.bessel_bounds_check(n, argument)
        case "jstar":
            value = bessel.bessel_j_star(parse_complex(order, "order"), argument)
        case "kernel":
            value = bessel.kernel_K(parse_complex(order, "order"), p, argument)
        case "kernel_integral":
            value = bessel.kernel_K_integral(parse_complex(order, "order"), p, argument)
    logger.info(log_messages.BESSEL_VALUE.format(kind=kind, n=order, z=argument, value=value))
    payload = {"kind": kind, "order": parse_complex(order, "order"), "p": p, "z": argument, "value": value}
    if row is not None:
        payload["bounds"] = row
    _emit(payload, output_format, out, logger)


#############################################################
# ### B-transform ###
def btransform_value(
    P: float,
    K: float,
    sigma: float,
    u: str,
    method: str,
    diagonal: bool,
    out: str | None,
    output_format: str,
    save: bool,
    output: str,
    log: str,
) -> None:
    logger = get_logger(output, save, log)
    params = btransform.TestParams(P, K, sigma)
    point = parse_complex(u, "u")
    value = btransform.b_transform(params, point, btransform.BTransformConfig(method))
    logger.info(log_messages.BTRANSFORM_VALUE.format(u=point, method=method, value=value))
    payload = {
        "config": _record("btransform", P=P, K=K, sigma=sigma, method=method),
        "u": point,
        "value": value,
    }
    if diagonal:
        payload["diagonal"] = btransform.diagonal_term(params)
    _emit(payload, output_format, out, logger)


#############################################################
# ### geometric side ###
def geom(
    q0: str,
    a: str,
    b: str,
    w1: str,
    w2: str,
    P: float,
    K: float,
    sigma: float,
    cutoff: float,
    s: str | None,
    threads: str,
    out: str | None,
    output_format: str,
    save: bool,
    output: str,
    log: str,
) -> None:
    logger = get_logger(output, save, log)
    f1, f2 = _frames(q0, a, b)
    m, n = parse_gaussian(w1), parse_gaussian(w2)
    side = sieve.geometric_side(f1, f2, m, n, btransform.TestParams(P, K, sigma), cutoff, resolve_threads(threads))
    logger.info(
        log_messages.GEOMETRIC_SIDE.format(
            delta=side.delta_part, kloosterman=side.kloosterman_part, tail=side.tail_envelope
        )
    )
    payload = {
        "config": _record("geom", q0=q0, a=a, b=b, w1=w1, w2=w2, P=P, K=K, sigma=sigma, cutoff=cutoff),
        **side.to_dict(),
    }
    if s is not None:
        payload["linnik_selberg"] = sieve.linnik_selberg_partial(f1, f2, m, n, parse_complex(s, "s"), cutoff)
    _emit(payload, output_format, out, logger)


#############################################################
# ### large sieve ###
def _report_summary(report: SweepReport, logger: Logger) -> dict[str, bool]:
    summary = report.summary()
    logger.info(
        log_messages.SIEVE_SUMMARY.format(
            rows=summary["rows"], max_ratio=summary["max_ratio"] or 0.0, argmax=summary["argmax"]
        )
    )
    flags = sieve.blow_up_flags(report)
    for kind, raised in flags.items():
        if raised:
            logger.info(log_messages.BLOW_UP.format(bound=kind))
    return flags


def sieve_run(
    q0: str,
    a: str,
    c: str | None,
    N: float,
    M: int,
    psi: float,
    family: str,
    mode: str,
    T: float,
    alpha: float,
    beta: float,
    budget: str,
    seed: int,
    threads: str,
    out: str | None,
    output_format: str,
    save: bool,
    output: str,
    log: str,
) -> None:
    logger = get_logger(output, save, log)
    match mode:
        case "sweep":
            sizes = constants.BUDGET_MAP[budget]
            report = sieve.bound_sweep(
                levels=sizes["kloosterman_levels"][:2],
                N_values=sizes["sieve_N"],
                M_values=sizes["sieve_M"],
                seed=seed,
                threads=resolve_threads(threads),
            )
            flags = _report_summary(report, logger)
            _emit(report, output_format, out, logger)
            if any(flags.values()):
                raise VerificationFailure(log_messages.VERIFICATION_FAILED.format(failed=sum(flags.values())))
            return
        case "u_sum":
            if c is None:
                raise click.UsageError(log_messages.MISSING_OPTION.format(option="--c", command="sieve"))
            frame = build_frame(parse_cusp(a), parse_gaussian(q0))
            modulus = parse_gaussian(c)
            b = sieve.make_coefficients(family, N, seed)
            lhs = sieve.u_sum(frame, psi, modulus, M, b)
            base = {"q0": q0, "cusp": format_cusp(frame.cusp), "c": c, "N": N, "M": M, "psi": psi, "family": family}
            report = SweepReport("u_sum", tuple(sieve.bound_rows(base, lhs, modulus, psi, M, N, b.norm**2)))
        case "e_sum":
            if c is None:
                raise click.UsageError(log_messages.MISSING_OPTION.format(option="--c", command="sieve"))
            coefficients = sieve.make_coefficients(family, N, seed)
            report = SweepReport(
                "e_sum", (sieve.e_sum_row(parse_gaussian(c), coefficients, M, T, alpha, beta, family),)
            )
    _report_summary(report, logger)
    _emit(report, output_format, out, logger)


#############################################################
# ### verify ###
def verify(
    suite: str,
    budget: str,
    seed: int,
    threads: str,
    out: str | None,
    output_format: str,
    save: bool,
    output: str,
    log: str,
) -> None:
    logger = get_logger(output, save, log)
    results = []
    current = None
    for result in verifier.iter_checks(suite, budget, seed, resolve_threads(threads)):
        if result.suite != current:
            current = result.suite
            logger.info(log_messages.SUITE_HEADER.format(suite=current, budget=budget))
        match result.status:
            case "pass":
                logger.info(log_messages.CHECK_PASSED.format(name=result.name, seconds=result.seconds))
            case "fail":
                logger.info(log_messages.CHECK_FAILED.format(name=result.name, detail=result.detail))
            case _:
                logger.info(log_messages.CHECK_INCONCLUSIVE.format(name=result.name, detail=result.detail))
        results.append(result)

    report = verifier.VerificationReport(suite, budget, tuple(results))
    failed, inconclusive = report.count("fail"), report.count("inconclusive")
    logger.info(log_messages.SUITE_SUMMARY.format(passed=report.count("pass"), failed=failed, inconclusive=inconclusive))
    payload = report.to_dict()
    _emit(payload["checks"] if output_format == "csv" else payload, output_format, out, logger)
    if failed:
        raise VerificationFailure(log_messages.VERIFICATION_FAILED.format(failed=failed))
    if inconclusive:
        raise InconclusiveResult(log_messages.INCONCLUSIVE.format(count=inconclusive))
