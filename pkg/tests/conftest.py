import pytest

from cbwt.builder import build_collection

# Three-text worked example used for hand-checked values throughout the
# suite: texts 512, 5363, 4478 in input order, eleven conjugates total.
RUNNING_TEXTS = [[5, 1, 2], [5, 3, 6, 3], [4, 4, 7, 8]]
EXTENSION_TEXT = [7, 3, 1, 5, 2]


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Pay the one-time JIT compile cost before anything is timed."""
    idx = build_collection([[3, 1], [2, 2, 1]])
    idx.count([1, 2])


@pytest.fixture
def running_texts():
    return [list(t) for t in RUNNING_TEXTS]


@pytest.fixture
def running_index(running_texts):
    return build_collection(running_texts)
