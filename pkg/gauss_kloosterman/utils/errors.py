import click


class DomainError(click.ClickException):
    """Invalid mathematical input (zero modulus, non-coprime inverse, out-of-range order...)"""

    exit_code = 1


class ParseError(DomainError):
    """Malformed Gaussian-integer or cusp literal"""


class ConfigError(DomainError):
    """Unreadable config file or inconsistent transform configuration"""


class ConsistencyError(click.ClickException):
    """An identity that must hold by construction did not"""

    exit_code = 2


class VerificationFailure(click.ClickException):
    exit_code = 2


class InconclusiveResult(click.ClickException):
    """Brute-force enumeration did not stabilize within the height schedule"""

    exit_code = 3
