import hypothesis.strategies as st
from hypothesis import settings

from nmlab.choice import ChoiceFunction
from nmlab.structures import PrefStructure

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def structures(draw, max_elements=4, max_copies=2):
    n = draw(st.integers(1, max_elements))
    nodes = [(e, c) for e in range(n) for c in range(draw(st.integers(1, max_copies)))]
    m = len(nodes)
    pairs = draw(st.sets(st.tuples(st.integers(0, m - 1), st.integers(0, m - 1)), max_size=m * m))
    return PrefStructure(tuple("abcd"[:n]), tuple(nodes), frozenset(pairs))


@st.composite
def choice_functions(draw, n=3, inside=True):
    """Choice functions on the full power set of n points."""
    table = {}
    for x in range(1 << n):
        table[x] = draw(st.integers(0, (1 << n) - 1)) & (x if inside else -1)
    return ChoiceFunction(tuple("abcd"[:n]), table)
