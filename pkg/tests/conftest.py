import pytest

from finspace.poset import build_poset


@pytest.fixture
def circle():
    return build_poset("abcd", [("c", "a"), ("d", "a"), ("c", "b"), ("d", "b")])


@pytest.fixture
def zigzag():
    # b<a, t<a, b<s : contracting (a,b) creates t<s
    return build_poset(["a", "b", "t", "s"], [("b", "a"), ("t", "a"), ("b", "s")])


@pytest.fixture
def point():
    return build_poset(["p"], [])


@pytest.fixture
def two_chain():
    return build_poset(["lo", "hi"], [("lo", "hi")])
