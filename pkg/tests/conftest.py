from __future__ import annotations

import time
from contextlib import contextmanager

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def bundled_fixture():
    from showprofile.ingest import fixture_dir

    return fixture_dir()


# ------------------------------------------------------------ acceptance log

_ACCEPTANCE = pytest.StashKey[list]()


class _Span:
    elapsed: float = 0.0


class AcceptanceRecorder:
    """Times one acceptance criterion and records a PASS/FAIL line for it."""

    def __init__(self, lines: list):
        self.lines = lines

    @contextmanager
    def criterion(self, number: int, title: str, budget: float | None = None):
        notes: dict = {}
        start = time.perf_counter()
        try:
            yield notes
        except BaseException as exc:
            self._emit(number, title, False, time.perf_counter() - start, budget, notes, type(exc).__name__)
            raise
        elapsed = time.perf_counter() - start
        ok = budget is None or elapsed < budget
        self._emit(number, title, ok, elapsed, budget, notes, "" if ok else "over time budget")
        assert ok, f"criterion {number} took {elapsed:.2f}s, budget {budget}s"

    @contextmanager
    def timer(self):
        """Times a sub-step whose budget is separate from the criterion total."""
        span = _Span()
        start = time.perf_counter()
        try:
            yield span
        finally:
            span.elapsed = time.perf_counter() - start

    def _emit(self, number, title, ok, elapsed, budget, notes, why):
        limit = f" (< {budget:g}s)" if budget is not None else ""
        extra = " ".join(f"{k}={v}" for k, v in notes.items())
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {title} [{elapsed:.2f}s{limit}]"
        if extra:
            line += f" {extra}"
        if why:
            line += f" -- {why}"
        self.lines.append(line)
        print(line)


@pytest.fixture(scope="session")
def acceptance(request):
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])
    return AcceptanceRecorder(lines)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
