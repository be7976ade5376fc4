"""Instance files: JSON with a group, a relation and the sets A and B.

Layout (``"format": 1``)::

    {
      "format": 1,
      "name": "yu_ehrgott_orthant",            (optional)
      "group": {"kind": "intvec", "dim": 2},
      "relation": {"kind": "product_order"},
      "A": [[1, 0], [0, 1]],
      "B": [[0, 0], [-1, 0]],
      "B_list": [[[0, 0], [0, -1]]],           (optional extra summands)
      "audit": {"depth": 2, "cap": 10000}      (optional)
    }

A file may instead carry a ``"system"`` object describing an equation and
comparison system for the ``trace`` command.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .audit import AuditConfig
from .errors import EffsumError, MalformedSystem, ParseError, ValidationError
from .groups import FiniteSet, GroupContext, group_from_descriptor, minkowski_sum_many
from .proofs import SystemInstance
from .relations import RelationOracle, relation_from_descriptor

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass(frozen=True)
class Instance:
    group: GroupContext | None
    relation: RelationOracle | None
    A: FiniteSet = FiniteSet()
    B: FiniteSet = FiniteSet()
    B_list: tuple = ()
    audit: AuditConfig = field(default_factory=AuditConfig)
    name: str | None = None
    system: SystemInstance | None = None

    @property
    def summands(self) -> list[FiniteSet]:
        return [self.B, *self.B_list]

    def effective_B(self) -> FiniteSet:
        """``B + B₁ + … + B_k``, the single set the verdict is about."""
        if not self.B_list:
            return self.B
        return minkowski_sum_many(self.B, list(self.B_list), self.group)

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"format": FORMAT_VERSION}
        if self.name:
            d["name"] = self.name
        if self.system is not None:
            d["system"] = self.system.to_dict()
            return d
        enc = self.group.encode
        d["group"] = self.group.descriptor()
        d["relation"] = self.relation.descriptor()
        d["A"] = [enc(x) for x in self.A]
        d["B"] = [enc(x) for x in self.B]
        if self.B_list:
            d["B_list"] = [[enc(x) for x in Bi] for Bi in self.B_list]
        defaults = AuditConfig().to_dict()
        audit = {k: v for k, v in self.audit.to_dict().items() if v != defaults[k]}
        if audit:
            d["audit"] = audit
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def _decode_set(raw: Any, g: GroupContext, label: str) -> FiniteSet:
    if not isinstance(raw, list):
        raise ValidationError(f"{label} must be an array of elements")
    if not raw:
        raise ValidationError(f"{label} must be nonempty")
    elems = []
    for i, item in enumerate(raw):
        try:
            elems.append(g.decode(item))
        except ValidationError as exc:
            raise ValidationError(f"{label}[{i}]: {exc}") from None
    out = FiniteSet(elems)
    if len(out) != len(elems):
        log.warning("%s lists %d duplicate element(s); they were dropped", label, len(elems) - len(out))
    return out


def instance_from_dict(d: Any) -> Instance:
    if not isinstance(d, dict):
        raise ValidationError("instance must be a JSON object")
    fmt = d.get("format", FORMAT_VERSION)
    if fmt != FORMAT_VERSION:
        raise ValidationError(f"unsupported instance format {fmt!r}; expected {FORMAT_VERSION}")
    name = d.get("name")
    if "system" in d:
        try:
            return Instance(None, None, name=name, system=SystemInstance.from_dict(d["system"]))
        except MalformedSystem as exc:
            raise ValidationError(f"system: {exc}") from None
    for key in ("group", "relation", "A", "B"):
        if key not in d:
            raise ValidationError(f"instance is missing {key!r}")
    g = group_from_descriptor(d["group"])
    rel = relation_from_descriptor(d["relation"], g)
    A = _decode_set(d["A"], g, "A")
    B = _decode_set(d["B"], g, "B")
    raw_list = d.get("B_list") or []
    if not isinstance(raw_list, list):
        raise ValidationError("B_list must be an array of element arrays")
    B_list = tuple(_decode_set(x, g, f"B_list[{i}]") for i, x in enumerate(raw_list))
    try:
        audit = AuditConfig.from_dict(d.get("audit"))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"audit: {exc}") from None
    for label, S in (("A", A), ("B", B), *((f"B_list[{i}]", s) for i, s in enumerate(B_list))):
        for x in S:
            try:
                rel.check_element(x)
            except EffsumError as exc:
                raise ValidationError(f"{label}: {exc}") from None
    return Instance(g, rel, A, B, B_list, audit, name)


def parse_instance_text(text: str, source: str = "<string>") -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return instance_from_dict(data)


def parse_instance(path: str | Path) -> Instance:
    """Read and validate an instance file.

    Raises ``ParseError`` for unreadable or malformed JSON and
    ``ValidationError`` for content that does not fit the group or relation.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not valid UTF-8 ({exc.reason})") from None
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from None
    return parse_instance_text(text, str(path))
