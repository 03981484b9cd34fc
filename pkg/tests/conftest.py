import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

HERE = Path(__file__).resolve().parent

# criterion number -> (passed, summary line), filled by test_acceptance
ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def frozen():
    """Values derived once by tests/derive_oracles.py (mpmath / sympy, independent of the package)."""
    return json.loads((HERE / "oracle_values.json").read_text())


@pytest.fixture(scope="session")
def chain():
    from tritronquee.contraction import run_chain
    return run_chain()


@pytest.fixture(scope="session")
def oracle_bundle():
    from tritronquee.oracle import cross_validate
    return cross_validate()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[k]
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {k:2d}: {line}")
