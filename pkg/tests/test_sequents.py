import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from nmlab.errors import InputError, ResourceError
from nmlab.sequents import (SequentSet, check_trace, close, derives, is_closed, parse_sequents,
                            six_atom_example, preferential_eval, scott_close)
from nmlab.sweeps import structure_from_relation

ATOMS = ("a", "b", "c")
SUBSETS = [frozenset(c) for k in range(4) for c in combinations(ATOMS, k)]


def oracle_close(start):
    """Naive fixpoint of inclusion, right monotony, cautious monotony and
    cautious cut on explicit pairs of frozensets."""
    cl = set(start)
    while True:
        new = set(cl)
        for X in SUBSETS:
            for a in X:
                new.add((X, frozenset(a)))
        for X, Y in cl:
            for b in ATOMS:
                new.add((X, Y | {b}))
            for a in ATOMS:
                if a not in X and (X, frozenset(a)) in cl:
                    new.add((X | {a}, Y))
        for X in SUBSETS:
            for Y in SUBSETS:
                good = [a for a in ATOMS if a not in X and (X, Y | {a}) in cl]
                for k in range(1, len(good) + 1):
                    for A in combinations(good, k):
                        if (X | set(A), Y) in cl:
                            new.add((X, Y))
        if new == cl:
            return cl
        cl = new


def as_pairs(s: SequentSet):
    return {(frozenset(s.atoms[i] for i in range(s.n) if x >> i & 1),
             frozenset(s.atoms[i] for i in range(s.n) if y >> i & 1)) for x, y in s}


seqs = st.lists(st.tuples(st.sets(st.sampled_from(ATOMS)), st.sets(st.sampled_from(ATOMS))), max_size=4)


@given(seqs)
def test_closure_matches_naive_fixpoint(pairs):
    s = SequentSet.of(ATOMS, pairs)
    start = {(frozenset(l), frozenset(r)) for l, r in pairs}
    assert as_pairs(close(s)) == oracle_close(start)


@given(seqs)
def test_derivations_replay(pairs):
    s = SequentSet.of(ATOMS, pairs)
    cl = close(s)
    for x, y in list(cl)[:20]:
        goal = ([ATOMS[i] for i in range(3) if x >> i & 1], [ATOMS[i] for i in range(3) if y >> i & 1])
        ok, trace = derives(s, "PlI PlRM PlCLM PlCC", goal)
        assert ok and check_trace(s, trace) and trace[-1].sequent == (x, y)


def test_six_atom_example():
    s = six_atom_example()
    cl = close(s)
    assert s <= cl
    assert (["a"], ["e"]) not in cl
    assert is_closed(cl, "PlI PlRM PlCLM PlCC").holds
    ok, trace = derives(s, "PlI PlRM PlCLM PlCC", (["a"], ["e"]))
    assert not ok and trace == []


def test_structures_give_closed_sets():
    # elements are the four valuations of two atoms, as masks
    rng = random.Random(3)
    owner = [0, 1, 2, 3, 0, 3]
    for _ in range(40):
        st_ = structure_from_relation(owner, rng.getrandbits(36))
        s = preferential_eval(("a", "b"), st_)
        assert is_closed(s, "PlI PlRM PlCC").holds


def test_scott_closure():
    s = parse_sequents("a |~ b\nb |~ c", atoms="abc")
    cl = scott_close(s, "s-R M CC")
    assert (["a"], ["c"]) in cl
    assert all(x and y for x, y in cl)
    assert (["a"], ["a"]) in cl


def test_errors():
    with pytest.raises(InputError):
        parse_sequents("a b c")
    with pytest.raises(InputError):
        close(six_atom_example(), "")
    with pytest.raises(InputError):
        close(six_atom_example(), "nonsense")
    with pytest.raises(ResourceError):
        scott_close(six_atom_example(), "C")
