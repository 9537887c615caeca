import pytest

from coblab.arithmetic import GOLDEN, SQRT2_MINUS_1, select_subsequence
from coblab.fourier import build_chain


@pytest.fixture(scope="session")
def golden_subseq():
    return select_subsequence(GOLDEN, 1 / 16, 50)


@pytest.fixture(scope="session")
def golden_chain(golden_subseq):
    return build_chain(golden_subseq, GOLDEN, 3)


@pytest.fixture(scope="session")
def sqrt2_chain():
    return build_chain(select_subsequence(SQRT2_MINUS_1, 1 / 16, 20), SQRT2_MINUS_1, 2)


@pytest.fixture(scope="session")
def wide_chain():
    """eps close to 1/4 so r0 = 5 and the harmonic sums grow quickly."""
    return build_chain(select_subsequence(GOLDEN, 0.24, 10_000), GOLDEN, 1)
