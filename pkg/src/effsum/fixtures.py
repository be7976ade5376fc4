"""Shipped example instances, stored as ``fixtures/<name>/instance.json``.

Next to each instance sits ``report.golden``, the JSON report the matching
command produces, and for traced fixtures ``trace.golden`` with the trace text.
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from .errors import ValidationError
from .instance import Instance, parse_instance


def fixture_root() -> Path:
    return Path(str(resources.files("effsum") / "fixtures"))


def list_fixtures() -> list[str]:
    root = fixture_root()
    return sorted(p.name for p in root.iterdir() if (p / "instance.json").is_file())


def fixture_path(name: str) -> Path:
    path = fixture_root() / name / "instance.json"
    if not path.is_file():
        raise ValidationError(f"unknown fixture {name!r}; available: {', '.join(list_fixtures())}")
    return path


def load_fixture(name: str) -> Instance:
    return parse_instance(fixture_path(name))
