import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def city():
    from siminf import casebook
    return casebook.city_database()


@pytest.fixture
def city_sig():
    from siminf import casebook
    return casebook.city_signature()


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""
    def record(number, title, failures, elapsed):
        status = "PASS" if not failures else "FAIL"
        line = f"[{status}] criterion {number}: {title} ({elapsed:.2f}s)"
        for failure in failures:
            line += f"\n         - {failure}"
        _ACCEPTANCE_LINES.append((number, line))
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
