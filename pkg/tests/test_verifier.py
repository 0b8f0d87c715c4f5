import pytest

from gauss_kloosterman.utils import verifier
from gauss_kloosterman.utils.config import constants
from gauss_kloosterman.utils.errors import DomainError, InconclusiveResult
from gauss_kloosterman.utils.matrix import Mat2

FAST = constants.BUDGET_MAP["fast"]


def _failing(sizes, seed):
    return verifier.Outcome(False, "off by one", {"worst": 1.0})


def _raising(sizes, seed):
    raise DomainError("zero modulus")


def _stuck(sizes, seed):
    raise InconclusiveResult("did not stabilize")


def _singular(sizes, seed):
    Mat2.of(2, 0, 0, 1).inverse()


def _broken(sizes, seed):
    raise ValueError("math domain error")


@pytest.mark.parametrize(
    "check, status, detail",
    [
        (_failing, "fail", "off by one"),
        (_raising, "fail", "zero modulus"),
        (_stuck, "inconclusive", "did not stabilize"),
        (_singular, "fail", "[[2, 0], [0, 1]] has determinant 2, not 1"),
        (_broken, "fail", "ValueError: math domain error"),
    ],
)
def test_run_check_statuses(check, status, detail):
    result = verifier.run_check("demo", "check", check, FAST, 0, 1)
    assert result.status == status
    assert result.detail == detail


def test_report_counts_and_payload():
    results = (
        verifier.CheckResult("demo", "a", "pass", 0.5),
        verifier.CheckResult("demo", "b", "fail", 0.25, "broken"),
    )
    payload = verifier.VerificationReport("demo", "fast", results).to_dict()
    assert (payload["passed"], payload["failed"], payload["inconclusive"]) == (1, 1, 0)
    assert all("seconds" not in check for check in payload["checks"])


def test_every_suite_is_registered():
    assert set(verifier.SUITE_CHECKS) == set(constants.SUITES) - {"all"}


@pytest.mark.parametrize("suite", ["gaussint", "cusps"])
def test_fast_suites_pass(suite):
    report = verifier.run_suite(suite, "fast")
    assert [result.name for result in report.results] == [name for name, _ in verifier.SUITE_CHECKS[suite]]
    assert report.count("pass") == len(report.results)


def test_inversion_only_runs_at_full_budget():
    assert not FAST["inversion"]
    names = [result.name for result in verifier.iter_checks("btransform", "fast")]
    assert "inversion" not in names
