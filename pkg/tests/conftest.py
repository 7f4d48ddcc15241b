import sys
from datetime import date
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from isacl_mfnn.dataset import SeriesDataset  # noqa: E402
from oracles import logistic_curve  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def logistic_series():
    """73 noiseless days starting 2020-01-22, rounded to whole counts."""
    counts = np.round(logistic_curve(range(1, 74), 2e5, 0.15, 60))
    return SeriesDataset.from_counts(date(2020, 1, 22), counts)


@pytest.fixture
def series_csv(tmp_path, logistic_series):
    from isacl_mfnn.dataset import write_series

    path = tmp_path / "series.csv"
    write_series(path, logistic_series)
    return path


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
