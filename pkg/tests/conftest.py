import pytest

from stackdual.dsl import parse_session


def ring_of(decl: str, name: str):
    """Build a ring from one DSL declaration line."""
    return parse_session(decl).rings[name]


@pytest.fixture
def qxy():
    return ring_of("ring R = Q[x,y]", "R")


@pytest.fixture
def node_ring():
    return ring_of("ring B = Q[x,y]/(x*y) group 2 weights {x:1, y:1}", "B")


@pytest.fixture
def triple_ring():
    return ring_of("ring C = Q[u,v,t] group 3 weights {u:1, v:1, t:1}", "C")
