"""Small named inputs used as fixtures, demos and CLI samples.

Each builder returns an in-memory value; the matching ``*_TEXT`` strings
hold the same data in the file formats the CLI reads.
"""

from __future__ import annotations

from .choice import ChoiceFunction, parse_choice
from .circuits import Circuit, flip_flop
from .ibrs import IBRSGraph, graph
from .inheritance import InheritanceNet, net
from .structures import PrefStructure

PR_FAILURE_TEXT = """\
% identity except on {a,b}
elements: a,b,c
f{a,b,c}={a,b,c}; f{a,b}={b}; f{a,c}={a,c}; f{b,c}={b,c}
f{a}={a}; f{b}={b}; f{c}={c}
"""

CUMULATIVE_NOT_SUBSUP_TEXT = """\
elements: a,b,c,d
f{a,b,c}={a}; f{a,b,d}={a,b}
"""

EMPTY_PAIR_TEXT = """\
% {a,b} has no chosen element although both singletons do
elements: a,b
f{a,b}={}; f{a}={a}; f{b}={b}
"""


def pr_failure() -> ChoiceFunction:
    """Identity on the subsets of {a,b,c} except f({a,b}) = {b}."""
    return parse_choice(PR_FAILURE_TEXT)


def cumulative_not_subsup() -> ChoiceFunction:
    return parse_choice(CUMULATIVE_NOT_SUBSUP_TEXT)


def empty_pair() -> ChoiceFunction:
    return parse_choice(EMPTY_PAIR_TEXT)


def _meet_closure(gens) -> set[int]:
    dom = set(gens)
    while True:
        new = dom | {a & b for a in dom for b in dom}
        if new == dom:
            return dom
        dom = new


def ladder_structure(k: int) -> PrefStructure:
    """Non-transitive chains a < b < c and x_0 < x_1 < ... < x_{k+1} with
    x_i < x_i' hanging off each x_i, i <= k."""
    if k < 0:
        raise ValueError("k must be a natural number")
    els = ["a", "b", "c"] + [f"x{i}" for i in range(k + 2)] + [f"x{i}'" for i in range(k + 1)]
    pairs = [("a", "b"), ("b", "c")]
    pairs += [(f"x{i}", f"x{i + 1}") for i in range(k + 1)]
    pairs += [(f"x{i}", f"x{i}'") for i in range(k + 1)]
    return PrefStructure.build(els, [(e, 0) for e in els], [((p, 0), (q, 0)) for p, q in pairs])


def ladder(k: int) -> ChoiceFunction:
    """Choice function of :func:`ladder_structure` on the meet closure of
    U = {a,c,x0}, X_i = {c,x_i,x_i',x_{i+1}} for i < k and
    X'_k = {a,b,c,x_k,x_k',x_{k+1}}.

    The cumulativity ladder holds at every rank below k and breaks at k.
    """
    s = ladder_structure(k)
    idx = {e: i for i, e in enumerate(s.elements)}

    def m(*xs):
        return sum(1 << idx[x] for x in xs)

    gens = [m("a", "c", "x0")]
    gens += [m("c", f"x{i}", f"x{i}'", f"x{i + 1}") for i in range(k)]
    gens.append(m("a", "b", "c", f"x{k}", f"x{k}'", f"x{k + 1}"))
    dom = _meet_closure(gens) - {0}
    return ChoiceFunction.from_structure(s, dom)


# higher-level arrow diagrams

def attacked_shortcut() -> IBRSGraph:
    """a -> b -> c and a -> c, with the a -> c arrow attacked from a."""
    return graph("abc", [("al1", "a", "b"), ("al2", "b", "c"), ("al", "a", "c"), ("be", "a", "al")])


def attacked_chain(defended: bool) -> IBRSGraph:
    """a -> b -> c, a -> c, b attacks b -> c; ``defended`` adds a second
    attack on b -> c from a."""
    arrows = [("al", "a", "b"), ("al1", "b", "c"), ("al2", "a", "c"), ("be", "b", "al1")]
    if defended:
        arrows.append(("be1", "a", "al1"))
    return graph("abc", arrows)


def copy_chain() -> IBRSGraph:
    """a -> b -> c plus an unattacked second copy c1 of c."""
    return graph("abc", [("al", "a", "b"), ("be", "b", "c")], copies={"c1": "c"})


# inheritance nets

NIXON_TEXT = """\
a -> b
a -> c
b -> d
c -/> d
"""

TWEETY_TEXT = """\
a -> b
a -> c
c -> b
b -> d
c -/> d
"""


def diamond() -> InheritanceNet:
    """Two equally specific routes from a to d with opposite conclusions."""
    return net([("a", "b"), ("a", "c"), ("b", "d"), ("c", "d", "-")])


def penguin() -> InheritanceNet:
    """a is a c, c is a b; b's go to d, c's do not."""
    return net([("a", "b"), ("a", "c"), ("c", "b"), ("b", "d"), ("c", "d", "-")])


# circuits

def feedback_circuit(and_delay: int) -> Circuit:
    return flip_flop(and_delay)
