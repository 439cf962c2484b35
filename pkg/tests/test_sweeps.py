from itertools import product

from nmlab.conditions import check_mu_condition
from nmlab.choice import ChoiceFunction
from nmlab.structures import is_smooth
from nmlab.sweeps import (general_sweep, plausibility_sweep, ranked_sweep, smooth_sweep,
                          structure_from_relation, weak_orders)


def test_weak_order_counts():
    # ordered Bell numbers
    assert [sum(1 for _ in weak_orders(m)) for m in range(1, 6)] == [1, 3, 13, 75, 541]
    assert len(set(weak_orders(4))) == 75


def test_small_sweeps_are_clean():
    for r in (general_sweep(3, 2), ranked_sweep(3, 2), smooth_sweep(3, 2, max_nodes=4, sample=2000),
              plausibility_sweep(2, 3)):
        assert r.ok, r.line()
        assert r.functions > 0


def test_relation_tables_agree_with_structures():
    # the vectorised smooth sweep against the structure class, all relations on 3 copies
    import numpy as np
    from nmlab.sweeps import _relation_tables
    owner = [0, 0, 1]
    rel = np.arange(1 << 9, dtype=np.uint64)
    mu, smooth = _relation_tables(owner, 2, rel)
    for r in range(1 << 9):
        s = structure_from_relation(owner, r)
        assert mu[r].tolist() == [s.mu_mask(X) for X in range(4)]
        assert bool(smooth[r]) == bool(is_smooth(s, range(4)))


def test_general_sweep_reaches_every_structure_function():
    # brute force: every structure on two elements with up to two copies each
    seen = set()
    for counts in product((1, 2), repeat=2):
        owner = [e for e, c in enumerate(counts) for _ in range(c)]
        m = len(owner)
        for r in range(1 << (m * m)):
            s = structure_from_relation(owner, r)
            seen.add(tuple(s.mu_mask(X) for X in range(4)))
    for t in seen:
        f = ChoiceFunction((0, 1), dict(enumerate(t)))
        assert check_mu_condition(f, "mu-PR").holds
    assert general_sweep(2, 2).functions >= len(seen)
