import click

from gauss_kloosterman.utils import commands
from gauss_kloosterman.utils.config import constants
from gauss_kloosterman.utils.config.run_config import load_config, to_default_map
from gauss_kloosterman.utils.decorator import (
    cusp_pair,
    frequencies,
    level,
    save_logs,
    test_function,
    write_results,
)


@click.group()
@click.option(
    "-c",
    "--config",
    type=click.Path(dir_okay=False),
    default=None,
    help="TOML, JSON or YAML file whose entries become option defaults",
)
@click.pass_context
def gk(ctx: click.Context, config: str | None) -> None:
    """Kloosterman sums, cusps and Bessel transforms over the Gaussian integers\f"""
    if config:
        ctx.default_map = to_default_map(load_config(config))


# ### cusps ###
@gk.command(options_metavar="<options>")
@level
@click.option(
    "--a",
    "a",
    type=click.STRING,
    default=constants.DEFAULTS["a"],
    help="Cusp to locate among the class representatives",
)
@click.option(
    "-l",
    "--list",
    "list_classes",
    is_flag=True,
    help="List every class representative with its frame data",
)
@write_results
@save_logs
def cusps(
    q0: str,
    a: str,
    list_classes: bool,
    out: str | None,
    output_format: str,
    seed: int,
    threads: str,
    save: bool,
    output: str,
    log: str,
) -> None:
    """Cusp classes of Gamma_0(q0)\f"""
    commands.cusps(q0, a, list_classes, out, output_format, save, output, log)


#############################################################
@gk.command(options_metavar="<options>")
@cusp_pair
@frequencies
@click.option(
    "--c",
    "c",
    type=click.STRING,
    default=constants.DEFAULTS["c"],
    help="Modulus coordinate C; the modulus is C sqrt(v1 v2)",
)
@click.option(
    "-p",
    "--path",
    type=click.Choice(commands.KLOOSTERMAN_PATHS, case_sensitive=False),
    default="general",
    help="Evaluation path",
)
@click.option(
    "-H",
    "--height",
    type=click.IntRange(constants.MIN_HEIGHT),
    default=constants.HEIGHT_SCHEDULE[-1],
    help="Largest entry-norm height for the brute-force path",
)
@write_results
@save_logs
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
    seed: int,
    threads: str,
    save: bool,
    output: str,
    log: str,
) -> None:
    """Kloosterman sum S_{a,b}(w1, w2; c)\f"""
    commands.kloosterman(q0, a, b, w1, w2, c, path.lower(), height, out, output_format, save, output, log)


#############################################################
@gk.command(options_metavar="<options>")
@cusp_pair
@frequencies
@click.option(
    "--check",
    is_flag=True,
    help="Cross-check against coset enumeration",
)
@write_results
@save_logs
def delta(
    q0: str,
    a: str,
    b: str,
    w1: str,
    w2: str,
    check: bool,
    out: str | None,
    output_format: str,
    seed: int,
    threads: str,
    save: bool,
    output: str,
    log: str,
) -> None:
    """Delta term of the sum formula for a cusp pair\f"""
    commands.delta(q0, a, b, w1, w2, check, out, output_format, save, output, log)


#############################################################
@gk.command(options_metavar="<options>")
@click.option(
    "-n",
    "--order",
    type=click.STRING,
    default="0",
    help="Order: an integer for J, complex for J* and the kernels",
)
@click.option(
    "-z",
    "--z",
    "z",
    type=click.STRING,
    required=True,
    help="Complex argument, e.g. 1.5-2j",
)
@click.option(
    "--p",
    "p",
    type=click.INT,
    default=0,
    help="Index p of the kernel K_{nu,p}",
)
@click.option(
    "-k",
    "--kind",
    type=click.Choice(commands.BESSEL_KINDS, case_sensitive=False),
    default="j",
    help="Function to evaluate",
)
@write_results
@save_logs
def bessel(
    order: str,
    z: str,
    p: int,
    kind: str,
    out: str | None,
    output_format: str,
    seed: int,
    threads: str,
    save: bool,
    output: str,
    log: str,
) -> None:
    """Bessel functions and the kernels of the B-transform\f"""
    commands.bessel_value(order, z, p, kind.lower(), out, output_format, save, output, log)


#############################################################
@gk.command(options_metavar="<options>")
@test_function
@click.option(
    "-u",
    "--u",
    "u",
    type=click.STRING,
    required=True,
    help="Complex point u",
)
@click.option(
    "-m",
    "--method",
    type=click.Choice(constants.B_METHODS, case_sensitive=False),
    default=constants.DEFAULTS["method"],
    help="Evaluation route",
)
@click.option(
    "--diagonal",
    is_flag=True,
    help="Include the diagonal constant and its main term",
)
@write_results
@save_logs
def btransform(
    P: float,
    K: float,
    sigma: float,
    u: str,
    method: str,
    diagonal: bool,
    out: str | None,
    output_format: str,
    seed: int,
    threads: str,
    save: bool,
    output: str,
    log: str,
) -> None:
    """B-transform of the built-in test function at u\f"""
    commands.btransform_value(P, K, sigma, u, method.lower(), diagonal, out, output_format, save, output, log)


#############################################################
@gk.command(options_metavar="<options>")
@cusp_pair
@frequencies
@test_function
@click.option(
    "-x",
    "--cutoff",
    type=click.FloatRange(min=1.0),
    default=constants.DEFAULTS["cutoff"],
    help="Moduli cutoff X on |c|",
)
@click.option(
    "--zeta-s",
    "s",
    type=click.STRING,
    default=None,
    help="Also report the Linnik-Selberg partial sums at this s",
)
@write_results
@save_logs
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
    out: str | None,
    output_format: str,
    seed: int,
    threads: str,
    save: bool,
    output: str,
    log: str,
) -> None:
    """Geometric side: delta part, Kloosterman part up to |c| <= X and the tail envelope\f"""
    commands.geom(q0, a, b, w1, w2, P, K, sigma, cutoff, s, threads, out, output_format, save, output, log)


#############################################################
@gk.command(options_metavar="<options>")
@level
@click.option(
    "--a",
    "a",
    type=click.STRING,
    default=constants.DEFAULTS["a"],
    help="Cusp of the same-cusp U-sum",
)
@click.option(
    "--c",
    "c",
    type=click.STRING,
    default=constants.DEFAULTS["c"],
    help="Modulus c (same-cusp form)",
)
@click.option("--N", "N", type=click.FloatRange(min=1.0), default=constants.DEFAULTS["N"], help="Annulus size N")
@click.option("--M", "M", type=click.IntRange(0), default=constants.DEFAULTS["M"], help="Harmonic range |m| <= M")
@click.option("--psi", type=click.FLOAT, default=constants.DEFAULTS["psi"], help="Oscillation parameter psi")
@click.option(
    "--family",
    type=click.Choice(constants.COEFFICIENT_FAMILIES, case_sensitive=False),
    default="ones",
    help="Coefficient family",
)
@click.option(
    "--mode",
    type=click.Choice(commands.SIEVE_MODES, case_sensitive=False),
    default="u_sum",
    help="Single U-sum, single E-sum, or the full bound sweep",
)
@click.option("--T", "T", type=click.FloatRange(min=0.0, min_open=True), default=1.0, help="E-sum range T")
@click.option("--alpha", type=click.FLOAT, default=1.0, help="E-sum phase scale alpha")
@click.option("--beta", type=click.FLOAT, default=0.5, help="E-sum phase exponent beta")
@click.option(
    "-b",
    "--budget",
    type=click.Choice(constants.BUDGETS, case_sensitive=False),
    default=constants.DEFAULTS["budget"],
    help="Grid size of the sweep",
)
@write_results
@save_logs
def sieve(
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
    out: str | None,
    output_format: str,
    seed: int,
    threads: str,
    save: bool,
    output: str,
    log: str,
) -> None:
    """Large-sieve U-sums and E-sums against their bounds\f"""
    commands.sieve_run(
        q0,
        a,
        c,
        N,
        M,
        psi,
        family.lower(),
        mode.lower(),
        T,
        alpha,
        beta,
        budget.lower(),
        seed,
        threads,
        out,
        output_format,
        save,
        output,
        log,
    )


#############################################################
@gk.command(options_metavar="<options>")
@click.option(
    "--suite",
    type=click.Choice(constants.SUITES, case_sensitive=False),
    default="all",
    help="Verification suite",
)
@click.option(
    "-b",
    "--budget",
    type=click.Choice(constants.BUDGETS, case_sensitive=False),
    default=constants.DEFAULTS["budget"],
    help="Sweep sizes: fast or full",
)
@write_results
@save_logs
def verify(
    suite: str,
    budget: str,
    out: str | None,
    output_format: str,
    seed: int,
    threads: str,
    save: bool,
    output: str,
    log: str,
) -> None:
    """Run the verification suites; exit 2 on any failed check, 3 on an inconclusive one\f"""
    commands.verify(suite.lower(), budget.lower(), seed, threads, out, output_format, save, output, log)
