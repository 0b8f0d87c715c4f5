import dataclasses
import os
from dataclasses import dataclass
from typing import Any

import yaml

from gauss_kloosterman.logs import log_messages
from gauss_kloosterman.utils.config import constants
from gauss_kloosterman.utils.errors import ConfigError

THREADS_ENV = "GK_THREADS"


@dataclass(frozen=True)
class RunConfig:
    """Everything a single `gk` invocation was asked to do, in textual form"""

    subcommand: str
    q0: str = constants.DEFAULTS["q0"]
    a: str = constants.DEFAULTS["a"]
    b: str = constants.DEFAULTS["b"]
    w1: str = constants.DEFAULTS["w1"]
    w2: str = constants.DEFAULTS["w2"]
    c: str | None = constants.DEFAULTS["c"]
    P: float = constants.DEFAULTS["P"]
    K: float = constants.DEFAULTS["K"]
    sigma: float = constants.DEFAULTS["sigma"]
    N: float = constants.DEFAULTS["N"]
    M: int = constants.DEFAULTS["M"]
    psi: float = constants.DEFAULTS["psi"]
    cutoff: float = constants.DEFAULTS["cutoff"]
    method: str = constants.DEFAULTS["method"]
    output_format: str = constants.DEFAULTS["output_format"]
    seed: int = constants.DEFAULTS["seed"]
    threads: str = constants.DEFAULTS["threads"]
    budget: str = constants.DEFAULTS["budget"]

    def to_text(self) -> str:
        return yaml.safe_dump(dataclasses.asdict(self), sort_keys=True)

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        data = yaml.safe_load(text)
        if not data:
            raise ConfigError(log_messages.EMPTY_CONFIG_ERROR.format(path="<text>"))
        return cls.from_mapping(data)

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> "RunConfig":
        known = {field.name for field in dataclasses.fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(log_messages.UNKNOWN_CONFIG_KEY.format(entry=key))
        return cls(**data)


def load_config(path: str) -> dict[str, Any]:
    if not os.path.exists(path):
        raise ConfigError(log_messages.MISSING_CONFIG_ERROR.format(path=path))
    if not os.path.getsize(path):
        raise ConfigError(log_messages.EMPTY_CONFIG_ERROR.format(path=path))
    data = _read_file(path)
    if not data:
        raise ConfigError(log_messages.EMPTY_CONFIG_ERROR.format(path=path))
    return data


def _read_file(path: str) -> dict[str, Any]:
    with open(path, "rb") as f:
        _, extension = os.path.splitext(path)
        match extension.lower():
            case ".toml":
                import tomllib

                return tomllib.load(f)
            case ".json":
                import json

                return json.load(f)
            case ".yaml" | ".yml":
                return yaml.safe_load(f)
            case _:
                raise ConfigError(log_messages.UNSUPPORTED_TYPE_ERROR.format(value=extension))


def to_default_map(data: dict[str, Any]) -> dict[str, Any]:
    """Spread a flat config over every subcommand so click picks the values up as option defaults"""
    subcommands = ("cusps", "kloosterman", "delta", "bessel", "btransform", "geom", "sieve", "verify")
    shared = {key: value for key, value in data.items() if key not in subcommands}
    RunConfig.from_mapping({"subcommand": data.get("subcommand", ""), **shared})
    shared.pop("subcommand", None)
    default_map = {name: dict(shared) for name in subcommands}
    for name in subcommands:
        if isinstance(data.get(name), dict):
            default_map[name].update(data[name])
    return default_map


def resolve_threads(flag: str | int | None) -> int:
    value = os.environ.get(THREADS_ENV) or flag
    if value is None:
        return 1
    text = str(value).strip().lower()
    if text in ("auto", "0"):
        return os.cpu_count() or 1
    try:
        threads = int(text)
    except ValueError:
        raise ConfigError(log_messages.BAD_THREADS.format(value=value))
    if threads < 0:
        raise ConfigError(log_messages.BAD_THREADS.format(value=value))
    return threads
