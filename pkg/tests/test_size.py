import random

import pytest
from hypothesis import given
import hypothesis.strategies as st

from nmlab.choice import ChoiceFunction
from nmlab.errors import InputError
from nmlab.nabla import eval_nabla, is_weak_filter, model_from_sets, nabla_axiom_soundness, parse_nabla
from nmlab.size import (check_rdown_equivalences, check_size_condition, check_size_rule, i_em_chain_sweep,
                        cm_without_and_system, independence_em_systems, level, level_system, mu_from_size, not_2s_sweep,
                        or_without_and_system, parse_size_system, random_system, size_from_mu,
                        size_holds, ultrafilter_system, verify_size_mu_row)


@given(st.integers(0, 10**6))
def test_text_round_trip(seed):
    s = random_system(random.Random(seed), 3)
    assert parse_size_system(s.to_text()) == s


def test_filter_and_ideal_lines_agree():
    a = parse_size_system("elements: x,y\nI{x,y} = {}, {x}")
    b = parse_size_system("elements: x,y\nF{x,y} = {x,y}, {y}")
    assert a == b
    with pytest.raises(InputError):
        parse_size_system("I{x} = {}")


def test_coherence_pair():
    first, second = independence_em_systems()
    rep = check_size_condition(first, "eMF")
    assert check_size_condition(first, "eMI").holds
    assert not rep.holds and rep.counterexample == (0b101, 0b111, 0b100)
    assert check_size_condition(second, "eMF").holds
    assert not check_size_condition(second, "eMI").holds


@pytest.mark.parametrize("n", [2, 3, 4])
def test_levels(n):
    s = level_system(n)
    assert level(s) == n
    assert size_holds(s, f"I_{n}") and not size_holds(s, f"I_{n + 1}")


@pytest.mark.parametrize("n", [3, 4])
def test_or_and_cm_without_and(n):
    coherent = ("iM", "eMI", "eMF", "eMF2")
    s = or_without_and_system(n)
    assert all(size_holds(s, c) for c in coherent)
    assert check_size_rule(s, "OR_n", n).holds and not check_size_rule(s, "AND_n", n).holds
    s = cm_without_and_system(n)
    assert all(size_holds(s, c) for c in coherent)
    assert check_size_rule(s, "CM_n", n).holds and not check_size_rule(s, "AND_n", n).holds
    assert not check_size_rule(s, "CM_n(1)", n).holds


@given(st.integers(0, 10**6))
def test_choice_to_size_and_back(seed):
    rng = random.Random(seed)
    table = {X: rng.randrange(1 << 3) & X for X in range(1, 8)}
    f = ChoiceFunction(tuple("abc"), table)
    assert mu_from_size(size_from_mu(f)).table == table


def test_principal_systems_make_all_variants_agree():
    rep = check_rdown_equivalences(ultrafilter_system(("a", "b", "c"), 0))
    assert rep.agree and all(rep.values.values())


def test_rdown_variants_agree_on_random_systems():
    rng = random.Random(5)
    for _ in range(200):
        assert check_rdown_equivalences(random_system(rng, 3)).agree


def test_small_sweeps():
    assert not_2s_sweep(bound=3).holds
    assert all(r.holds for r in i_em_chain_sweep(2, bound=3))


def test_size_row_at_two_points():
    assert verify_size_mu_row(3, bound=2).holds


def test_weak_filters_and_quantifier():
    assert is_weak_filter(0b111, [0b111, 0b011, 0b101, 0b110])
    assert not is_weak_filter(0b11, [0b11, 0b01, 0b10])
    m = model_from_sets("abc", {"P": "ab"}, {"abc": ["abc", "ab"]})
    assert eval_nabla(m, parse_nabla("nabla x. P(x)"))
    assert not eval_nabla(m, parse_nabla("forall x. P(x)"))


def test_quantifier_axioms_sound():
    assert nabla_axiom_soundness("plain", trials=40).holds
    assert nabla_axiom_soundness("system", trials=40).holds
