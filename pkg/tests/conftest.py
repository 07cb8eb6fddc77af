import numpy as np
import pytest

from patred.core import TimeSeries, normalize_minmax


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def make_series():
    """Factory for seeded random-walk series, min-max normalized."""

    def _make(length, seed=0, labels=False):
        gen = np.random.default_rng(seed)
        values = normalize_minmax(np.cumsum(gen.normal(0.0, 1.0, length)))
        lab = tuple(f"t{i}" for i in range(length)) if labels else None
        return TimeSeries(values, lab)

    return _make


@pytest.fixture
def walk_csv(tmp_path):
    gen = np.random.default_rng(11)
    values = 50 + np.cumsum(gen.normal(0, 1, 120))
    values -= values.min() - 1.0
    path = tmp_path / "walk.csv"
    path.write_text("value\n" + "".join(f"{float(v)!r}\n" for v in values))
    return path


@pytest.fixture
def wedge_csv(tmp_path):
    ys = (1.0, 0.25, 0.78, 0.2, 0.6, 0.16, 0.45)
    path = tmp_path / "wedge.csv"
    path.write_text("x,y\n" + "".join(f"{i},{y}\n" for i, y in enumerate(ys)))
    return path
