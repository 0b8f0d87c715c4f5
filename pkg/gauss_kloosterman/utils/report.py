import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

from gauss_kloosterman.utils.config import constants
from gauss_kloosterman.utils.cusps import Cusp, CuspFrame, format_cusp
from gauss_kloosterman.utils.gaussint import GaussianInt, format_gaussian


@dataclass(frozen=True)
class SweepRow:
    params: dict[str, Any]
    lhs: float
    envelope: float
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        return self.lhs / self.envelope if self.envelope > 0 else math.inf

    @property
    def violated(self) -> bool:
        return self.lhs > self.envelope * (1 + constants.IDENTITY_TOL) + constants.CROSS_PATH_TOL

    def flat(self) -> dict[str, Any]:
        row = {key: encode(value) for key, value in self.params.items()}
        row.update({"lhs": self.lhs, "envelope": self.envelope, "ratio": self.ratio})
        row.update({key: encode(value) for key, value in self.extra.items()})
        return row


@dataclass(frozen=True)
class SweepReport:
    title: str
    rows: tuple[SweepRow, ...]

    def summary(self) -> dict[str, Any]:
        if not self.rows:
            return {"rows": 0, "max_ratio": None, "argmax": None, "violations": 0}
        best = max(self.rows, key=lambda row: row.ratio)
        return {
            "rows": len(self.rows),
            "max_ratio": best.ratio,
            "argmax": {key: encode(value) for key, value in best.params.items()},
            "violations": sum(row.violated for row in self.rows),
        }

    def select(self, **criteria) -> "SweepReport":
        rows = tuple(row for row in self.rows if all(row.params.get(k) == v for k, v in criteria.items()))
        return SweepReport(self.title, rows)

    def blow_up(self, size_key: str = "N") -> bool:
        """Max ratio over the largest-size third exceeds BLOW_UP_FACTOR times the max over the smallest third"""
        ordered = sorted(self.rows, key=lambda row: row.params[size_key])
        third = len(ordered) // 3
        if third == 0:
            return False
        low = max(row.ratio for row in ordered[:third])
        high = max(row.ratio for row in ordered[-third:])
        return high > constants.BLOW_UP_FACTOR * low

    def to_dict(self) -> dict[str, Any]:
        return {"title": self.title, "summary": self.summary(), "rows": [row.flat() for row in self.rows]}


def encode(value: Any) -> Any:
    """Turn library values into JSON-friendly ones"""
    match value:
        case bool() | int() | str() | None:
            return value
        case float():
            return value if math.isfinite(value) else str(value)
        case complex():
            return [value.real, value.imag]
        case GaussianInt():
            return format_gaussian(value)
        case Cusp():
            return format_cusp(value)
        case CuspFrame():
            return value.to_dict()
        case SweepReport() | SweepRow():
            return value.to_dict() if isinstance(value, SweepReport) else value.flat()
        case dict():
            return {str(key): encode(item) for key, item in value.items()}
        case list() | tuple():
            return [encode(item) for item in value]
        case _ if hasattr(value, "to_dict"):
            return encode(value.to_dict())
        case _ if hasattr(value, "item"):
            # numpy scalars
            return encode(value.item())
        case _:
            return str(value)


def to_json(payload: Any) -> str:
    return json.dumps(encode(payload), sort_keys=True, indent=2)


def to_csv(rows: list[dict[str, Any]]) -> str:
    """Rows as CSV: sorted params, then lhs/envelope/ratio, then any remaining columns sorted"""
    fixed = ("lhs", "envelope", "ratio")
    params, extras = set(), set()
    for row in rows:
        for key in row:
            if key in fixed:
                continue
            (extras if key.startswith(("envelope_", "ratio_", "violated")) else params).add(key)
    columns = sorted(params) + [key for key in fixed if any(key in row for row in rows)] + sorted(extras)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: _cell(row.get(key)) for key in columns})
    return buffer.getvalue()


def _cell(value: Any) -> Any:
    value = encode(value)
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True)
    return "" if value is None else value


def render(payload: Any, output_format: str) -> str:
    """JSON for anything; CSV for reports and row lists, falling back to a single flattened row"""
    if output_format == "json":
        return to_json(payload)
    match payload:
        case SweepReport():
            return to_csv([row.flat() for row in payload.rows])
        case list() if all(isinstance(item, dict) for item in payload):
            return to_csv([encode(item) for item in payload])
        case _:
            data = encode(payload)
            return to_csv([data if isinstance(data, dict) else {"value": data}])
