import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import OracleField  # noqa: E402


@pytest.fixture(scope="session")
def oracle_cache():
    cache = {}

    def get(p, f):
        if (p, f) not in cache:
            cache[(p, f)] = OracleField(p, f)
        return cache[(p, f)]

    return get


ACCEPTANCE: dict = {}


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for an acceptance criterion.

    Usage: ``with criterion(3, "detail") as rec: ...``; rec["detail"] may be updated.
    """
    import contextlib
    import time

    @contextlib.contextmanager
    def record(number: int, title: str):
        rec = {"title": title, "detail": ""}
        t0 = time.perf_counter()
        try:
            yield rec
        except BaseException as exc:
            rec["status"] = "FAIL"
            rec["detail"] = (rec["detail"] + f" [{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}]").strip()
            raise
        else:
            rec["status"] = "PASS"
        finally:
            rec["seconds"] = time.perf_counter() - t0
            ACCEPTANCE[number] = rec
            line = f"criterion {number:>2}: {rec['status']}  {title} ({rec['seconds']:.2f} s) {rec['detail']}"
            print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        r = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {r['status']}  {r['title']} ({r['seconds']:.2f} s) {r['detail']}")
