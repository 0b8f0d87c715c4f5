import json
import math

from gauss_kloosterman.utils.cusps import INFINITY, Cusp
from gauss_kloosterman.utils.gaussint import GaussianInt
from gauss_kloosterman.utils.report import SweepReport, SweepRow, encode, render, to_csv, to_json


def _report(*ratios):
    rows = tuple(SweepRow({"N": float(n), "kind": "tau"}, ratio, 1.0) for n, ratio in enumerate(ratios, start=1))
    return SweepReport("demo", rows)


def test_row_ratio_and_violation():
    assert SweepRow({}, 1.0, 2.0).ratio == 0.5
    assert not SweepRow({}, 2.0, 2.0).violated
    assert SweepRow({}, 2.1, 2.0).violated
    assert SweepRow({}, 1.0, 0.0).ratio == math.inf


def test_summary():
    assert _report().summary() == {"rows": 0, "max_ratio": None, "argmax": None, "violations": 0}
    summary = _report(0.2, 1.5, 0.7).summary()
    assert summary["rows"] == 3
    assert summary["max_ratio"] == 1.5
    assert summary["argmax"] == {"N": 2.0, "kind": "tau"}
    assert summary["violations"] == 1


def test_select():
    report = SweepReport(
        "mixed", (SweepRow({"kind": "tau"}, 1.0, 2.0), SweepRow({"kind": "large_sieve"}, 1.0, 4.0))
    )
    assert len(report.select(kind="tau").rows) == 1
    assert report.select(kind="small_modulus").rows == ()


def test_blow_up():
    assert not _report(0.1, 0.1, 0.1).blow_up()
    assert _report(0.1, 0.1, 0.1, 0.2, 0.5, 1.0).blow_up()
    assert not _report(0.1, 0.2).blow_up()


def test_encode():
    assert encode(GaussianInt(1, -2)) == "1-2i"
    assert encode(1.5 - 2j) == [1.5, -2.0]
    assert encode(INFINITY) == "inf"
    assert encode(Cusp.of(1, 2)) == "1/2"
    assert encode(float("nan")) == "nan"
    assert encode({GaussianInt(1, 0): (1j, None)}) == {"1": [[0.0, 1.0], None]}


def test_to_json_is_sorted():
    text = to_json({"b": GaussianInt(0, 1), "a": 1})
    assert json.loads(text) == {"a": 1, "b": "1i"}
    assert text.index('"a"') < text.index('"b"')


def test_to_csv_column_order():
    text = to_csv([{"ratio": 0.5, "c": "1+1i", "violated_ideal": False, "lhs": 1.0, "envelope": 2.0, "N": 8}])
    header, row = text.strip().split("\n")
    assert header == "N,c,lhs,envelope,ratio,violated_ideal"
    assert row == "8,1+1i,1.0,2.0,0.5,False"


def test_render():
    report = _report(0.5)
    assert json.loads(render(report, "json"))["summary"]["rows"] == 1
    assert render(report, "csv").splitlines()[0] == "N,kind,lhs,envelope,ratio"
    assert render({"value": 1 + 1j}, "csv").splitlines() == ["value", '"[1.0, 1.0]"']
    assert render([{"x": 1}, {"x": 2}], "csv").splitlines() == ["x", "1", "2"]
