import json

import pytest
import yaml

from gauss_kloosterman.cli import gk


def _invoke(runner, tmp_path, *args):
    out = tmp_path / "result.json"
    result = runner.invoke(gk, [*args, "--out", str(out)])
    return result, (json.loads(out.read_text()) if out.exists() else None)


def test_cusps_list(runner, tmp_path):
    result, payload = _invoke(runner, tmp_path, "cusps", "--q0", "1+1i", "--list")
    assert result.exit_code == 0
    assert payload["count"] == payload["formula"] == 2
    assert len(payload["classes"]) == 2
    assert payload["config"]["q0"] == "1+1i"


def test_cusps_csv(runner, tmp_path):
    out = tmp_path / "cusps.csv"
    result = runner.invoke(gk, ["cusps", "--q0", "3", "--list", "-f", "csv", "--out", str(out)])
    assert result.exit_code == 0
    assert len(out.read_text().strip().splitlines()) == 3


@pytest.mark.parametrize("path", ["classical", "general", "factor"])
def test_kloosterman(runner, tmp_path, path):
    result, payload = _invoke(
        runner, tmp_path, "kloosterman", "--q0", "1", "--w1", "1", "--w2", "1", "--c", "1+1i", "-p", path
    )
    assert result.exit_code == 0
    assert payload["path"] == path
    assert payload["C"] == "1+1i"
    assert payload["terms"] > 0
    if path == "classical":
        assert payload["value"] == pytest.approx([1.0, 0.0], abs=1e-12)


def test_kloosterman_requires_modulus(runner, tmp_path):
    result, payload = _invoke(runner, tmp_path, "kloosterman", "--q0", "1")
    assert result.exit_code == 2
    assert payload is None


def test_malformed_level(runner, tmp_path):
    result, _ = _invoke(runner, tmp_path, "cusps", "--q0", "1+")
    assert result.exit_code == 1


def test_delta_with_check(runner, tmp_path):
    result, payload = _invoke(runner, tmp_path, "delta", "--q0", "1", "--check")
    assert result.exit_code == 0
    assert payload["value"] == pytest.approx([2.0, 0.0])
    assert payload["bruteforce"]["value"] == pytest.approx(payload["value"])


def test_bessel(runner, tmp_path):
    result, payload = _invoke(runner, tmp_path, "bessel", "-n", "1", "-z", "2+1j")
    assert result.exit_code == 0
    assert payload["kind"] == "j"
    assert "bounds" in payload


def test_bessel_bad_literal(runner, tmp_path):
    result, _ = _invoke(runner, tmp_path, "bessel", "-z", "2+j1")
    assert result.exit_code == 1


def test_config_file_supplies_defaults(runner, tmp_path):
    config = tmp_path / "gk.yaml"
    config.write_text(yaml.safe_dump({"q0": "1", "kloosterman": {"c": "2+1i", "path": "classical"}}))
    result, payload = _invoke(runner, tmp_path, "-c", str(config), "kloosterman")
    assert result.exit_code == 0
    assert payload["path"] == "classical"
    assert payload["C"] == "2+1i"


def test_config_file_with_unknown_key(runner, tmp_path):
    config = tmp_path / "gk.json"
    config.write_text(json.dumps({"level": "3"}))
    result, _ = _invoke(runner, tmp_path, "-c", str(config), "cusps")
    assert result.exit_code == 1


def test_saved_log(runner, tmp_path):
    result, _ = _invoke(runner, tmp_path, "cusps", "--q0", "3", "-s", "-o", str(tmp_path), "--log", "cusps.log")
    assert result.exit_code == 0
    assert (tmp_path / "cusps.log").read_text()


def test_verify_single_suite(runner, tmp_path):
    result, payload = _invoke(runner, tmp_path, "verify", "--suite", "gaussint")
    assert result.exit_code == 0
    assert payload["failed"] == payload["inconclusive"] == 0
    assert payload["passed"] == len(payload["checks"])


def test_verify_unknown_suite(runner, tmp_path):
    result, _ = _invoke(runner, tmp_path, "verify", "--suite", "bogus")
    assert result.exit_code == 2


@pytest.mark.slow
def test_verify_all(runner, tmp_path):
    result, payload = _invoke(runner, tmp_path, "verify", "--suite", "all")
    assert result.exit_code == 0
    assert {check["suite"] for check in payload["checks"]} >= {"gaussint", "cusps", "kloosterman"}
