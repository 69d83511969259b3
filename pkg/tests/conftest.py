import numpy as np
import pytest

from pendular.moments import moment_curves

DENSE_STEP = 0.01


@pytest.fixture(scope="session")
def dense_curves():
    """Moment fields on the standard [0, 12] grid with step 0.01."""
    xs = np.round(np.arange(0.0, 12.0 + DENSE_STEP / 2, DENSE_STEP), 12)
    return moment_curves(xs)
