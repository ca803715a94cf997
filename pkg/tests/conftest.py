import pathlib

import numpy as np
import pytest

import rawarray as ra

REPO_ROOT = pathlib.Path(__file__).resolve().parent.parent
DATA_DIR = REPO_ROOT / "data"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    reports = []
    for outcome in ("passed", "failed"):
        reports.extend(
            (outcome, rep)
            for rep in terminalreporter.stats.get(outcome, [])
            if "test_acceptance" in rep.nodeid
        )
    if not reports:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for outcome, rep in sorted(reports, key=lambda pair: pair[1].nodeid):
        name = rep.nodeid.split("::")[-1]
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")


@pytest.fixture(scope="session")
def fixture_path() -> pathlib.Path:
    path = DATA_DIR / "test.ra"
    assert path.exists(), "data/test.ra fixture missing; see tests/test_io.py"
    return path


def canonical_fixture_array() -> ra.RaArray:
    """The 3x4 complex64 introspection fixture: values (k, -1/k), k=0..11."""
    vals = np.array(
        [complex(k, -np.inf if k == 0 else -1.0 / k) for k in range(12)],
        dtype=np.complex64,
    )
    return ra.from_numpy(vals.reshape((3, 4), order="F"))
