"""Naive ``E(A+B)`` computation versus deciding by theorem rule first.

The shortcut path audits lazily and asks the verdict engine for an
unconditional rule. Only when none fires does it fall back to the full sum.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

from .generate import FAMILIES, FAST_AUDIT, generate_instance, sweep_sizes
from .instance import Instance
from .parallel import ordered_map
from .verdict import LazyAudit, oracle_verdict, shortcut_equality


def naive_equality(inst: Instance) -> bool:
    return oracle_verdict(inst.A, inst.effective_B(), inst.group, inst.relation).equality_holds


def shortcut_path(inst: Instance, config=FAST_AUDIT) -> tuple[bool, bool]:
    """``(equality_holds, decided_by_rule)``."""
    B = inst.effective_B()
    report = LazyAudit(inst.relation, inst.group, inst.A, B, config)
    decided = shortcut_equality(inst.A, B, inst.group, inst.relation, report)
    if decided is None:
        return naive_equality(inst), False
    return decided, True


@dataclass(frozen=True)
class BenchRow:
    family: str
    instances: int
    naive_ms: float
    shortcut_ms: float
    shortcut_hits: int
    agree: bool

    def to_dict(self) -> dict:
        return {"family": self.family, "instances": self.instances,
                "naive_ms": self.naive_ms, "shortcut_ms": self.shortcut_ms,
                "shortcut_hits": self.shortcut_hits, "agree": self.agree}


def _run_one(inst: Instance) -> tuple[float, float, bool, bool]:
    t0 = time.perf_counter()
    naive = naive_equality(inst)
    t1 = time.perf_counter()
    fast, hit = shortcut_path(inst)
    t2 = time.perf_counter()
    return t1 - t0, t2 - t1, hit, naive == fast


def bench_family(family: str, count: int, seed: int = 0, **sizes) -> BenchRow:
    def make(i: int) -> Instance:
        kw = {**sweep_sizes(seed + i, family), **sizes}
        return generate_instance(seed + i, family, **kw)

    results = ordered_map(_run_one, [make(i) for i in range(count)])
    return BenchRow(
        family,
        count,
        round(1000 * sum(r[0] for r in results), 3),
        round(1000 * sum(r[1] for r in results), 3),
        sum(r[2] for r in results),
        all(r[3] for r in results),
    )


def run_bench(families=FAMILIES, count: int = 50, seed: int = 0, **sizes) -> list[BenchRow]:
    import scipy.optimize  # noqa: F401  the certificate search loads it lazily; keep that out of the timings
    return [bench_family(f, count, seed, **sizes) for f in families]
