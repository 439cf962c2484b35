from itertools import product

import hypothesis.strategies as st
import pytest
from hypothesis import given

from nmlab.errors import InputError
from nmlab.logic import (Language, ModelSet, canonical_formula, entails, format_formula, formula_bits,
                         models_of, parse_formula, variables)
from nmlab.sets import bits, fmt, parse_braced, popcount, subsets

VARS = ["p", "q", "r"]

atoms = st.sampled_from([("var", v) for v in VARS])
formulas = st.recursive(
    atoms | st.just(("true",)) | st.just(("false",)),
    lambda sub: st.tuples(st.just("not"), sub)
    | st.tuples(st.sampled_from(["and", "or", "imp", "iff"]), sub, sub),
    max_leaves=12,
)


def brute(f, env):
    k = f[0]
    if k == "var":
        return env[f[1]]
    if k == "true":
        return True
    if k == "false":
        return False
    if k == "not":
        return not brute(f[1], env)
    a, b = brute(f[1], env), brute(f[2], env)
    return {"and": a and b, "or": a or b, "imp": (not a) or b, "iff": a == b}[k]


@given(formulas)
def test_format_parse_round_trip(f):
    assert parse_formula(format_formula(f)) == f


@given(formulas)
def test_bits_match_truth_table(f):
    lang = Language(VARS)
    want = 0
    for i, vals in enumerate(product([False, True], repeat=3)):
        env = {v: bool(i >> j & 1) for j, v in enumerate(VARS)}
        if brute(f, env):
            want |= 1 << i
    assert formula_bits(f, lang) == want


@given(st.integers(0, 255))
def test_canonical_formula_denotes_its_set(m):
    lang = Language(VARS)
    assert formula_bits(canonical_formula(ModelSet(lang, m)), lang) == m


def test_precedence_and_variables():
    f = parse_formula("p & q | ~r -> p")
    assert f[0] == "imp"
    assert variables(f) == {"p", "q", "r"}
    assert format_formula(parse_formula("(p | q) & r")) == "(p | q) & r"


@pytest.mark.parametrize("bad", ["p &", "(p", "p q", "&", ""])
def test_parse_errors(bad):
    with pytest.raises(InputError):
        parse_formula(bad)


def test_entailment():
    lang = Language(["p", "q"])
    assert entails([parse_formula("p & q")], parse_formula("p"), lang)
    assert not entails([parse_formula("p | q")], parse_formula("p"), lang)
    assert models_of([], lang).bits == lang.full_bits


def test_set_helpers():
    assert list(bits(0b1011)) == [0, 1, 3]
    assert popcount(0b1011) == 3
    assert sorted(subsets(0b101)) == [0, 1, 4, 5]
    assert fmt(0b101, ["a", "b", "c"]) == "{a,c}"
    assert parse_braced("{a, c}", {"a": 0, "b": 1, "c": 2}) == 0b101
