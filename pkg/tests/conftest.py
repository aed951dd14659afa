import json
from pathlib import Path

import numpy as np
import pytest

from ballasy.geometry import CPoint

ORACLES = Path(__file__).parent / "oracles" / "values.json"


def point(pairs):
    """CPoint from a list of [re, im] pairs (the oracle file format)."""
    return None if pairs is None else CPoint(tuple(complex(a, b) for a, b in pairs))


@pytest.fixture(scope="session")
def oracle_values():
    return json.loads(ORACLES.read_text())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
