import os
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]

# published annual data for the golden replication, one year,value CSV per variable
GOLDEN_DIR = Path(os.environ.get("SPURIOUS_TS_GOLDEN_DIR", ROOT / "data" / "golden"))
GOLDEN_FILES = {
    "outcome": "gender_inequality.csv",
    "pathogens": "pathogens.csv",
    "climatic_stress": "climatic_stress.csv",
    "unemployment": "unemployment.csv",
    "conflict": "conflict.csv",
}

_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one pass/fail line for an acceptance criterion.

    Usage: ``criterion("3 Durbin-Watson", ok, "mean d = 2.00")`` followed by
    ``assert ok``.
    """
    def record(label: str, ok: bool, detail: str = "") -> bool:
        _ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def golden_data():
    missing = [name for name in GOLDEN_FILES.values() if not (GOLDEN_DIR / name).exists()]
    if missing:
        pytest.skip(
            f"golden replication data not found in {GOLDEN_DIR} (missing {', '.join(missing)}); "
            "see README 'Golden replication'"
        )
    from spurious_ts.io import read_series
    return {key: read_series(GOLDEN_DIR / name) for key, name in GOLDEN_FILES.items()}
