import os

import numpy as np
import pytest

FULL_SCALE_ENV = "FRACDIFF_FULL_SCALE"


def pytest_collection_modifyitems(config, items):
    """Skip the full-scale table replications unless FRACDIFF_FULL_SCALE=1.

    They run a 1024 x 1024 reference per study and take minutes each. Desk-scale
    studies are marked `slow` and still run by default.
    """
    if os.environ.get(FULL_SCALE_ENV) == "1":
        return
    skip = pytest.mark.skip(reason=f"set {FULL_SCALE_ENV}=1 to run full-scale replications")
    for item in items:
        if "full_scale" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
