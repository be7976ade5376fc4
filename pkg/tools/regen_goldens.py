"""Rewrite every fixture's golden files from the current code.

Run after an intentional output change, then review the diff.
"""
from effsum.cli import golden_outputs
from effsum.fixtures import fixture_root, list_fixtures

for name in list_fixtures():
    for fname, text in golden_outputs(name).items():
        (fixture_root() / name / fname).write_text(text, encoding="utf-8")
        print(f"wrote {name}/{fname}")
