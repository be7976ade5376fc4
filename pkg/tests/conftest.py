"""Shared fixtures, plus a session-wide record of every derivation trace built.

Every trace finished by the proof builder during the run is kept and replayed
at the end; a trace that fails to replay fails the session.
"""
from __future__ import annotations

import pytest

from effsum import proofs

TRACE_LOG: list = []
_original_finish = proofs._Builder.finish


def _recording_finish(self, *args, **kwargs):
    trace = _original_finish(self, *args, **kwargs)
    TRACE_LOG.append(trace)
    return trace


def pytest_configure(config):
    proofs._Builder.finish = _recording_finish


def pytest_collection_modifyitems(session, config, items):
    # acceptance runs last so the trace-replay criterion sees the whole session
    items.sort(key=lambda it: it.path.name == "test_acceptance.py")


def replay_failures() -> list:
    return [(t, r) for t in TRACE_LOG for r in [proofs.replay(t)] if not r.ok]


def pytest_sessionfinish(session, exitstatus):
    bad = replay_failures()
    reporter = session.config.pluginmanager.get_plugin("terminalreporter")
    if reporter is not None:
        reporter.write_line(f"derivation traces built this session: {len(TRACE_LOG)}, "
                            f"failing replay: {len(bad)}")
    if bad:
        session.exitstatus = pytest.ExitCode.TESTS_FAILED


@pytest.fixture
def trace_log():
    return TRACE_LOG
