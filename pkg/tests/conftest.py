from fractions import Fraction
from pathlib import Path

import pytest

from pearson_triage.model import fixture_text, load_fixture
from pearson_triage.pearson import Moments

GOLDEN = Path(__file__).parent / "golden"


def beta_moments(a, b, scale=1, shift=0) -> Moments:
    """Exact central moments of ``shift + scale * Beta(a, b)`` from closed forms."""
    a, b = Fraction(a), Fraction(b)
    s = a + b
    mean = a / s
    var = a * b / (s**2 * (s + 1))
    mu3 = 2 * a * b * (b - a) / (s**3 * (s + 1) * (s + 2))
    mu4 = 3 * a * b * (a * b * (s - 6) + 2 * s**2) / (s**4 * (s + 1) * (s + 2) * (s + 3))
    scale = Fraction(scale)
    return Moments(
        float(shift + scale * mean),
        float(scale**2 * var),
        float(scale**3 * mu3),
        float(scale**4 * mu4),
        n=0,
    )


@pytest.fixture(scope="session")
def patients():
    return load_fixture()


@pytest.fixture(scope="session")
def patients_text():
    return fixture_text()


@pytest.fixture
def beta23():
    return beta_moments(2, 3)


def pytest_terminal_summary(terminalreporter):
    verdicts = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion" in nodeid and rep.when == "call":
                name = nodeid.split("::")[-1].split("[")[0].replace("test_criterion_", "")
                verdicts[name] = verdicts.get(name, True) and outcome == "passed"
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for name in sorted(verdicts):
            terminalreporter.write_line(f"{'PASS' if verdicts[name] else 'FAIL'}  {name}")
