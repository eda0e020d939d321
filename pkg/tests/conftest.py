import json
from pathlib import Path

import pytest

BENCH_DIR = Path(__file__).resolve().parent.parent / "bench"


@pytest.fixture(scope="session")
def golden():
    """Frozen oracle numbers for the pinned benchmark."""
    with open(BENCH_DIR / "golden_oracle.json") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def bench_dir():
    return BENCH_DIR
