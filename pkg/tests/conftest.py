import pytest

from ewcg.fixtures import example1_graph, example1_spec


@pytest.fixture(scope="session")
def spec1():
    return example1_spec()


@pytest.fixture(scope="session")
def g1():
    """Side-1 weighted projection of the running example (5-cycle)."""
    return example1_graph(1)


@pytest.fixture(scope="session")
def g2_side():
    """Side-2 projection (edgeless for f = first)."""
    return example1_graph(2)


@pytest.fixture(scope="session")
def g1_pow2():
    """Second power of the side-1 graph (25 vertices)."""
    return example1_graph(1, n=2)
