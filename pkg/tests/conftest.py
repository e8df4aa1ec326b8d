from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

from bottkit.core import BottMatrix, read_matrix

settings.register_profile("exact", deadline=None)
settings.load_profile("exact")

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures():
    return FIXTURES


@pytest.fixture
def m7():
    return read_matrix(FIXTURES / "m7.mat")


@pytest.fixture
def h1():
    return BottMatrix.hirzebruch(1)


@st.composite
def bott_matrices(draw, min_r=1, max_r=5, lo=-3, hi=3):
    r = draw(st.integers(min_r, max_r))
    rows = tuple(tuple(draw(st.integers(lo, hi)) for _ in range(r - i)) for i in range(1, r + 1))
    return BottMatrix(r, rows)
