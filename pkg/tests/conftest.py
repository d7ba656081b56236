import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from homcount.sigstruct import GRAPH_SIGNATURE, Structure


def cycle_sym(n):
    """Symmetric n-cycle (both arc directions per edge)."""
    arcs = set()
    for i in range(n):
        arcs.add((i, (i + 1) % n))
        arcs.add(((i + 1) % n, i))
    return Structure.build(GRAPH_SIGNATURE, n, {"E": arcs})


def complete_sym(n):
    arcs = {(i, j) for i in range(n) for j in range(n) if i != j}
    return Structure.build(GRAPH_SIGNATURE, n, {"E": arcs})


def path_sym(n):
    arcs = set()
    for i in range(n - 1):
        arcs.add((i, i + 1))
        arcs.add((i + 1, i))
    return Structure.build(GRAPH_SIGNATURE, n, {"E": arcs})


def no_relation(n):
    return Structure.build(GRAPH_SIGNATURE, n, {})


def digraph(n, arcs):
    return Structure.build(GRAPH_SIGNATURE, n, {"E": arcs})


@pytest.fixture(scope="session")
def k3():
    return complete_sym(3)


@pytest.fixture(scope="session")
def c6():
    return cycle_sym(6)


@pytest.fixture(scope="session")
def two_c3():
    from homcount.sigstruct import disjoint_union

    return disjoint_union(cycle_sym(3), cycle_sym(3))


@pytest.fixture(scope="session")
def point():
    return no_relation(1)


@pytest.fixture(scope="session")
def loop_point():
    return digraph(1, {(0, 0)})


@pytest.fixture(scope="session")
def single_arc():
    return digraph(2, {(0, 1)})
