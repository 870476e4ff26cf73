"""Shared fixtures: channels and code shapes used across the suite."""

import math

import pytest

from gmdthresh.gauss import Channel
from gmdthresh.single_threshold import CodeShape

LIMIT = 3.0 - 2.0 * math.sqrt(2.0)


@pytest.fixture
def ch04() -> Channel:
    return Channel(0.4)


@pytest.fixture
def ch02() -> Channel:
    return Channel(0.2)


@pytest.fixture
def short_code() -> CodeShape:
    """n=15, d=7: small enough for every exact sum and grid oracle."""
    return CodeShape(15, 7)


@pytest.fixture
def fig_code() -> CodeShape:
    return CodeShape(127, 63)
