import pytest

from assignmax import distributions as d

_ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance criterion for the run summary."""

    def _report(label, ok, detail=""):
        _ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
        print(_ACCEPTANCE_LINES[-1])
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


CONTINUOUS_SPECS = [
    d.normal(),
    d.exponential(1.0),
    d.exponential(2.5),
    d.gumbel(0.0, 1.0),
    d.gumbel(-1.0, 3.0),
    d.laplace(0.0, 1.0),
    d.laplace(2.0, 0.5),
]
