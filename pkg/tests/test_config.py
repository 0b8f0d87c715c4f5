import json
import os

import pytest
import yaml

from gauss_kloosterman.utils.config.run_config import (
    THREADS_ENV,
    RunConfig,
    load_config,
    resolve_threads,
    to_default_map,
)
from gauss_kloosterman.utils.errors import ConfigError

SETTINGS = {"q0": "1+1i", "budget": "full", "verify": {"seed": 7}}


@pytest.mark.parametrize("extension", [".json", ".yaml", ".yml", ".toml"])
def test_load_config(tmp_path, extension):
    path = tmp_path / f"gk{extension}"
    match extension:
        case ".json":
            path.write_text(json.dumps(SETTINGS))
        case ".toml":
            path.write_text('q0 = "1+1i"\nbudget = "full"\n\n[verify]\nseed = 7\n')
        case _:
            path.write_text(yaml.safe_dump(SETTINGS))
    assert load_config(str(path)) == SETTINGS


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.yaml"))
    empty = tmp_path / "empty.json"
    empty.write_text("")
    with pytest.raises(ConfigError):
        load_config(str(empty))
    odd = tmp_path / "gk.ini"
    odd.write_text("[gk]\n")
    with pytest.raises(ConfigError):
        load_config(str(odd))


def test_default_map():
    default_map = to_default_map(SETTINGS)
    assert default_map["cusps"] == {"q0": "1+1i", "budget": "full"}
    assert default_map["verify"] == {"q0": "1+1i", "budget": "full", "seed": 7}


def test_default_map_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        to_default_map({"modulus": "3"})


def test_run_config_text_form():
    config = RunConfig(subcommand="kloosterman", q0="3", c="2+1i", P=3.0)
    assert RunConfig.from_text(config.to_text()) == config
    with pytest.raises(ConfigError):
        RunConfig.from_text("")
    with pytest.raises(ConfigError):
        RunConfig.from_mapping({"subcommand": "cusps", "level": "3"})


def test_resolve_threads(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert resolve_threads(None) == 1
    assert resolve_threads("4") == 4
    assert resolve_threads("auto") == (os.cpu_count() or 1)
    monkeypatch.setenv(THREADS_ENV, "3")
    assert resolve_threads("8") == 3


@pytest.mark.parametrize("value", ["-2", "many"])
def test_resolve_threads_rejects(monkeypatch, value):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    with pytest.raises(ConfigError):
        resolve_threads(value)
