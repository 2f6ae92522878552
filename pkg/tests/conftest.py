import time

import pytest

# criterion number -> (passed, detail), filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def rank4_report():
    """Full rank-4 run at nmax = 3, single worker; shared by the suites that need it."""
    from pmk.classify.rank4 import classify_rank4
    t0 = time.perf_counter()
    rep = classify_rank4(nmax=3, workers=1)
    rep.seconds = time.perf_counter() - t0
    return rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
