import os
from typing import Callable, Any, TypeAlias

import click

from gauss_kloosterman.utils.config import constants

ClickCallable: TypeAlias = Callable[[Any, ...], None]


def save_logs(func: ClickCallable) -> ClickCallable:
    save = click.option("-s", "--save", is_flag=True, help="Save log messages to file")
    output = click.option(
        "-o",
        "--output",
        type=click.STRING,
        default=lambda: os.getcwd(),
        help="Path to output directory for the saved log file",
    )
    log = click.option(
        "--log",
        type=click.STRING,
        default=lambda: f"{func.__name__}.log",
        help="Saved log file name",
    )
    return save(output(log(func)))


def write_results(func: ClickCallable) -> ClickCallable:
    out = click.option(
        "--out",
        type=click.Path(dir_okay=False, writable=True),
        default=None,
        help="Write the result payload to this file instead of stdout",
    )
    output_format = click.option(
        "-f",
        "--format",
        "output_format",
        type=click.Choice(["json", "csv"], case_sensitive=False),
        default=constants.DEFAULTS["output_format"],
        help="Payload format",
    )
    seed = click.option(
        "--seed",
        type=click.INT,
        default=constants.DEFAULTS["seed"],
        help="Seed for random coefficient families and sampled checks",
    )
    threads = click.option(
        "-t",
        "--threads",
        type=click.STRING,
        default=constants.DEFAULTS["threads"],
        help="Worker processes, or 'auto'; GK_THREADS takes precedence",
    )
    return out(output_format(seed(threads(func))))


def level(func: ClickCallable) -> ClickCallable:
    return click.option(
        "-q",
        "--q0",
        type=click.STRING,
        default=constants.DEFAULTS["q0"],
        help="Level q0 of Gamma_0(q0), e.g. 1+1i",
    )(func)


def cusp_pair(func: ClickCallable) -> ClickCallable:
    a = click.option(
        "--a",
        "a",
        type=click.STRING,
        default=constants.DEFAULTS["a"],
        help="First cusp: 'inf' or 'u/w'",
    )
    b = click.option(
        "--b",
        "b",
        type=click.STRING,
        default=constants.DEFAULTS["b"],
        help="Second cusp: 'inf' or 'u/w'",
    )
    return level(a(b(func)))


def frequencies(func: ClickCallable) -> ClickCallable:
    w1 = click.option("--w1", type=click.STRING, default=constants.DEFAULTS["w1"], help="First frequency")
    w2 = click.option("--w2", type=click.STRING, default=constants.DEFAULTS["w2"], help="Second frequency")
    return w1(w2(func))


def test_function(func: ClickCallable) -> ClickCallable:
    P = click.option(
        "--P",
        "P",
        type=click.FloatRange(min=1.0),
        default=constants.DEFAULTS["P"],
        help="Spread P >= 1 of the test function in p",
    )
    K = click.option(
        "--K",
        "K",
        type=click.FloatRange(min=1.0),
        default=constants.DEFAULTS["K"],
        help="Spread K >= 1 of the test function in nu",
    )
    sigma = click.option(
        "--sigma",
        type=click.FloatRange(min=0.5, max=1.0, min_open=True, max_open=True),
        default=constants.DEFAULTS["sigma"],
        help="Strip half-width 1/2 < sigma < 1",
    )
    return P(K(sigma(func)))


test_function.__test__ = False
