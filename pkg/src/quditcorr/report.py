from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable


def _jsonable(x: Any) -> Any:
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "tolist"):
        return _jsonable(x.tolist())
    return x


@dataclass
class InequalityReport:
    """One checked inequality ``lhs >= rhs``; ``passed`` iff ``margin >= -tolerance``."""

    name: str
    lhs: float
    rhs: float
    tolerance: float
    digest: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        if math.isinf(self.lhs) and self.lhs > 0:
            return math.inf
        return self.lhs - self.rhs

    @property
    def passed(self) -> bool:
        return self.margin >= -self.tolerance

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "margin": float(self.margin),
            "pass": bool(self.passed),
            "tolerance": self.tolerance,
            "digest": self.digest,
        }
        d.update(self.extra)
        return _jsonable(d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def to_jsonl(records: Iterable[dict]) -> str:
    return "".join(json.dumps(_jsonable(r)) + "\n" for r in records)


def to_csv(records: list[dict]) -> str:
    if not records:
        return ""
    fields: list[str] = []
    for r in records:
        for k in r:
            if k not in fields:
                fields.append(k)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in _jsonable(r).items()})
    return buf.getvalue()
