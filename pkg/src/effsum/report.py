"""Reports produced by the command line tool.

A report is a flat JSON object::

    {"report": "verdict", "format": 1, "fixture": "...", <payload fields>, "timing": {...}}

``fixture`` and ``timing`` appear only when set. Payload values are plain
JSON, so ``Report.from_json(r.to_json()) == r`` and the text survives the
round trip byte for byte. The text form lists the same fields as aligned
``key  value`` lines with dotted paths for nested values.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .errors import ParseError
from .groups import FiniteSet, GroupContext
from .instance import Instance
from .proofs import DerivationTrace, replay
from .relations import RelationOracle, efficient_set
from .verdict import Verdict

REPORT_FORMAT = 1
_RESERVED = ("report", "format", "fixture", "timing")


def _plain(value: Any) -> Any:
    """Normalize to what JSON gives back (tuples become lists, keys become strings)."""
    return json.loads(json.dumps(value, ensure_ascii=False))


@dataclass
class Report:
    kind: str
    data: dict = field(default_factory=dict)
    fixture: str | None = None
    timing: dict | None = None

    def __post_init__(self):
        clash = set(self.data) & set(_RESERVED)
        if clash:
            raise ValueError(f"payload uses reserved report keys {sorted(clash)}")
        self.data = _plain(self.data)
        if self.timing is not None:
            self.timing = _plain(self.timing)

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"report": self.kind, "format": REPORT_FORMAT}
        if self.fixture is not None:
            d["fixture"] = self.fixture
        d.update(self.data)
        if self.timing is not None:
            d["timing"] = self.timing
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, d: Any) -> "Report":
        if not isinstance(d, dict) or "report" not in d:
            raise ParseError("a report is a JSON object with a 'report' field")
        if d.get("format") != REPORT_FORMAT:
            raise ParseError(f"unsupported report format {d.get('format')!r}")
        data = {k: v for k, v in d.items() if k not in _RESERVED}
        return cls(d["report"], data, d.get("fixture"), d.get("timing"))

    @classmethod
    def from_json(cls, text: str) -> "Report":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(f"report: line {exc.lineno} column {exc.colno}: {exc.msg}") from None

    def to_text(self) -> str:
        if self.kind == "trace":
            return _trace_text(self)
        if self.kind == "bench":
            return _bench_text(self)
        rows = list(_flatten("", self.to_dict()))
        width = max(len(k) for k, _ in rows)
        return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


def _compact(v: Any) -> str:
    if isinstance(v, str):
        return v
    return json.dumps(v, ensure_ascii=False, separators=(",", ":"))


def _flatten(prefix: str, value: Any):
    if isinstance(value, dict) and value:
        for k, v in value.items():
            yield from _flatten(f"{prefix}.{k}" if prefix else str(k), v)
    elif isinstance(value, list) and value and all(isinstance(x, dict) for x in value):
        for i, x in enumerate(value):
            yield from _flatten(f"{prefix}[{i}]", x)
    else:
        yield prefix, _compact(value)


def _trace_text(r: Report) -> str:
    head = f"# {r.data.get('kind', '')} system, replay {'ok' if r.data.get('replay_ok') else 'FAILED'}\n"
    return head + "".join(line + "\n" for line in r.data.get("lines", []))


def _bench_text(r: Report) -> str:
    cols = ["family", "instances", "naive_ms", "shortcut_ms", "shortcut_hits", "agree"]
    table = [cols] + [[_compact(row[c]) for c in cols] for row in r.data.get("rows", [])]
    widths = [max(len(row[i]) for row in table) for i in range(len(cols))]
    out = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in table]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# builders


def _encode_set(S, g: GroupContext) -> list:
    return [g.encode(x) for x in S]


def _label(inst: Instance) -> dict:
    return {"instance": inst.name} if inst.name else {}


def verdict_report(inst: Instance, v: Verdict, fixture: str | None = None,
                   timing: dict | None = None) -> Report:
    g = inst.group
    o = v.oracle
    eff_a, eff_sum = FiniteSet(o.efficient_A), FiniteSet(o.efficient_sum)
    data = {
        **_label(inst),
        **v.theorem.to_dict(),
        "consistent": v.consistent,
        "oracle": {
            "equality_holds": o.equality_holds,
            "sum_size": o.sum_size,
            "efficient_A": _encode_set(eff_a, g),
            "efficient_sum": _encode_set(eff_sum, g),
            "only_in_sum": _encode_set(FiniteSet(x for x in eff_sum if x not in eff_a), g),
            "only_in_A": _encode_set(FiniteSet(x for x in eff_a if x not in eff_sum), g),
        },
        "statuses": {p: _status(s) for p, s in v.statuses.items()},
    }
    return Report("verdict", data, fixture, timing)


def _status(s) -> dict:
    d = s.to_dict()
    d.pop("property", None)
    return d


def _dominator(x, S, rel: RelationOracle):
    return next(y for y in S if rel.strictly(y, x))


def efficient_report(inst: Instance, which: str, S, fixture: str | None = None,
                     timing: dict | None = None) -> Report:
    g, rel = inst.group, inst.relation
    S = FiniteSet(S)
    part = efficient_set(S, rel)
    data = {
        **_label(inst),
        "set": which,
        "size": len(S),
        "efficient": _encode_set(part.efficient, g),
        "dominated": [{"point": g.encode(x), "by": g.encode(_dominator(x, S, rel))}
                      for x in part.dominated],
    }
    return Report("efficient", data, fixture, timing)


def audit_report(inst: Instance, statuses: dict, config, fixture: str | None = None,
                 timing: dict | None = None) -> Report:
    data = {
        **_label(inst),
        "config": config.to_dict(),
        "statuses": {p: _status(s) for p, s in statuses.items()},
    }
    return Report("audit", data, fixture, timing)


def trace_report(trace: DerivationTrace, rule: str | None = None, name: str | None = None,
                 fixture: str | None = None, timing: dict | None = None) -> Report:
    check = replay(trace)
    data: dict[str, Any] = {"instance": name} if name else {}
    if rule:
        data["rule"] = rule
    data.update({
        "kind": trace.system.kind,
        "conclusion": trace.conclusion,
        "replay_ok": check.ok,
        "replay_failures": list(check.failures),
        "lines": trace.lines(),
        "trace": trace.to_dict(),
    })
    return Report("trace", data, fixture, timing)
