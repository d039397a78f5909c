import math
from pathlib import Path

import numpy as np
import pytest

from config import settings
from schemas import FiniteDirichletSeries

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def rng():
    return np.random.default_rng(settings.SEED)


@pytest.fixture
def poisson_series():
    """f = 1 - e^{-s}, zeros 2 pi i k"""
    return FiniteDirichletSeries(lambdas=(1.0,), coeffs=(-1.0,))


@pytest.fixture
def factorable_series():
    """f = 1 - 1.5 e^{-s} + 0.5 e^{-2s} = (1 - e^{-s})(1 - e^{-s}/2)"""
    return FiniteDirichletSeries(lambdas=(1.0, 2.0), coeffs=(-1.5, 0.5))


@pytest.fixture
def generic_series():
    """f = 1 + 0.4 e^{-s} + 0.3 e^{-sqrt2 s}, incommensurable frequencies"""
    return FiniteDirichletSeries(lambdas=(1.0, math.sqrt(2)), coeffs=(0.4, 0.3))


@pytest.fixture
def zero_table_path():
    return DATA_DIR / "zeta_zeros.txt"


@pytest.fixture
def write_zero_file(tmp_path):
    def _write(lines, name="zeros.txt"):
        path = tmp_path / name
        path.write_text("\n".join(str(x) for x in lines) + "\n", encoding="utf-8")
        return path

    return _write
