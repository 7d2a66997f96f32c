import contextlib

import pytest
from hypothesis import settings

settings.register_profile("fixed", derandomize=True, max_examples=40, deadline=None)
settings.load_profile("fixed")

_CRITERIA: dict[str, str] = {}


@pytest.fixture
def criterion():
    """``with criterion("7"): ...`` records PASS/FAIL for the acceptance summary."""

    @contextlib.contextmanager
    def record(cid: str):
        try:
            yield
        except BaseException:
            _CRITERIA[cid] = "FAIL"
            raise
        _CRITERIA.setdefault(cid, "PASS")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_CRITERIA, key=lambda c: (int("".join(ch for ch in c if ch.isdigit())), c)):
        terminalreporter.write_line(f"criterion {cid}: {_CRITERIA[cid]}")
