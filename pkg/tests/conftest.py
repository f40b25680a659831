import pytest
from hypothesis import HealthCheck, settings

from minorcat.homology import set_snf_checks

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(autouse=True, scope="session")
def snf_postconditions():
    """Every Smith normal form computed during the run checks its own postconditions."""
    set_snf_checks(True)
    yield
    set_snf_checks(False)


# acceptance verdicts, one line per criterion, repeated in the terminal summary
ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def verdict(request):
    """Record PASS/FAIL for an acceptance criterion; call with (number, failures, detail)."""
    def record(number: int, failures: list, detail: str = ""):
        line = f"criterion {number}: {'PASS' if not failures else 'FAIL'} {detail}".rstrip()
        if failures:
            line += f" ({len(failures)} failures, first: {failures[0]})"
        ACCEPTANCE[number] = line
        print(line)
        assert not failures, line
    return record


def pytest_terminal_summary(terminalreporter):
    ran = {int(r.nodeid.split("criterion_")[1].split("_")[0])
           for reports in terminalreporter.stats.values() for r in reports
           if "test_acceptance.py::test_criterion_" in getattr(r, "nodeid", "")
           and getattr(r, "when", "") == "call"}
    if ran:
        terminalreporter.section("acceptance")
        for k in sorted(ran):
            terminalreporter.write_line(ACCEPTANCE.get(k, f"criterion {k}: FAIL (crashed before a verdict)"))
