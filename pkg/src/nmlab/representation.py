"""Synthesis of preferential structures from choice functions.

Each synthesizer checks its preconditions first and raises
:class:`~nmlab.errors.ConditionError` naming the failing condition, or
:class:`~nmlab.errors.ClosureError` when the domain lacks a required
closure property.  All of them accept ``verify=True`` to compare the
resulting minimal sets with ``f`` on every domain set before returning.

Infinite descending chains used by the textbook constructions appear as
self-loop nodes.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Sequence

from .choice import ChoiceFunction, require_closure
from .conditions import MU_CONDITIONS, check_mu_condition, h_iterated, k_set
from .errors import ConditionError, ContractError, ResourceError
from .sets import bits, full
from .structures import PrefStructure, transitive_closure

DEFAULT_BUDGET = 10**6


def _require(f: ChoiceFunction, names: Iterable[str]) -> None:
    for name in names:
        rep = check_mu_condition(f, name)
        if not rep.holds:
            sym = MU_CONDITIONS[rep.name].symbol
            raise ConditionError(f"{sym} fails at {rep.describe(f.elements).split(' at ', 1)[-1]}", rep)


class _Builder:
    """Collects nodes and arrows under a size budget."""

    def __init__(self, f: ChoiceFunction, budget: int):
        self.f = f
        self.budget = budget
        self.nodes: list[tuple[int, int]] = []
        self.keys: dict = {}
        self.copies = [0] * len(f.elements)
        self.arrows: set[tuple[int, int]] = set()

    def node(self, elem: int, key) -> int:
        k = (elem, key)
        if k in self.keys:
            return self.keys[k]
        if len(self.nodes) >= self.budget:
            raise ResourceError(f"node budget of {self.budget} exceeded")
        idx = len(self.nodes)
        self.nodes.append((elem, self.copies[elem]))
        self.copies[elem] += 1
        self.keys[k] = idx
        return idx

    def arrow(self, i: int, j: int) -> None:
        self.arrows.add((i, j))
        if len(self.arrows) > self.budget:
            raise ResourceError(f"arrow budget of {self.budget} exceeded")

    def structure(self) -> PrefStructure:
        return PrefStructure(self.f.elements, tuple(self.nodes), frozenset(self.arrows))


def verify_round_trip(f: ChoiceFunction, s: PrefStructure) -> None:
    for x in f.domain:
        if s.mu_mask(x) != f.table[x]:
            raise ContractError(f"synthesized structure gives {f.names(s.mu_mask(x))} on {f.names(x)}, "
                                f"expected {f.names(f.table[x])}")


def killing_family(f: ChoiceFunction, x: int) -> list[int]:
    """Domain sets containing ``x`` outside their chosen subset."""
    return [Y for Y in f.domain if Y >> x & 1 and not f.table[Y] >> x & 1]


def choice_functions(family: Sequence[int]):
    """All selections picking one point of each set; yields tuples of points."""
    return product(*[list(bits(Y)) for Y in family])


def pi_x_criterion(f: ChoiceFunction, U: int, x: int) -> bool:
    """x in U and some selection over the killing family of x avoids U."""
    if not U >> x & 1:
        return False
    family = killing_family(f, x)
    for g in choice_functions(family):
        if not any(U >> y & 1 for y in g):
            return True
    return False


def gamma_x_criterion(f: ChoiceFunction, U: int, x: int, use_h: bool = False) -> bool:
    """x in U and some selection from the chosen subsets of the killing family avoids U (or H(U))."""
    if not U >> x & 1:
        return False
    avoid = h_iterated(f, U) if use_h else U
    family = [f.table[Y] for Y in killing_family(f, x)]
    for g in choice_functions(family):
        if not any(avoid >> y & 1 for y in g):
            return True
    return False


# ---------------------------------------------------------------------------

def represent_general(f: ChoiceFunction, budget: int = DEFAULT_BUDGET, verify: bool = False) -> PrefStructure:
    """Nodes (x, g) for each selection g over the killing family of x; (x', g') < (x, g) iff x' in ran(g)."""
    _require(f, ("mu-subset", "mu-PR"))
    b = _Builder(f, budget)
    by_elem: dict[int, list[tuple[int, tuple]]] = {}
    for x in range(len(f.elements)):
        family = killing_family(f, x)
        for g in choice_functions(family):
            idx = b.node(x, g)
            by_elem.setdefault(x, []).append((idx, g))
    for x, entries in by_elem.items():
        for idx, g in entries:
            for y in set(g):
                for jdx, _ in by_elem.get(y, []):
                    b.arrow(jdx, idx)
    s = b.structure()
    if verify:
        verify_round_trip(f, s)
    return s


def represent_transitive(f: ChoiceFunction, budget: int = DEFAULT_BUDGET, verify: bool = False) -> PrefStructure:
    """Transitive representation through trees.

    For every selection g over the killing family of x there is a tree with
    root x whose children are the points of ran(g); below a child y the
    tree continues as the constant chain y, y, y, ... when y has a nonempty
    killing family and stops otherwise.  A node is a tree and it is attacked
    by its proper subtrees.  The constant chains are self-loop nodes, so
    the relation is transitive.
    """
    _require(f, ("mu-subset", "mu-PR"))
    b = _Builder(f, budget)
    n = len(f.elements)
    families = [killing_family(f, x) for x in range(n)]
    sub = {}
    for y in range(n):
        if families[y]:
            c = b.node(y, "chain")
            b.arrow(c, c)
            sub[y] = c
        else:
            sub[y] = b.node(y, "leaf")
    for x in range(n):
        if not families[x]:
            continue
        for g in choice_functions(families[x]):
            root = b.node(x, ("tree", g))
            for y in set(g):
                b.arrow(sub[y], root)
    s = b.structure()
    if verify:
        verify_round_trip(f, s)
    return s


def _smooth_preconditions(f: ChoiceFunction) -> None:
    _require(f, ("mu-subset", "mu-PR", "mu-CUM"))
    require_closure(f.domain, ("cup",), [str(e) for e in f.elements])


def represent_smooth(f: ChoiceFunction, admissible: bool = False, budget: int = DEFAULT_BUDGET,
                     verify: bool = False) -> PrefStructure:
    """Domain-smooth representation.

    The default builds, for x in f(U), nodes (x, g) with g choosing from
    f(U | Y) - H(U) for every domain set Y containing x that is not
    contained in H(U).  Elements that are not chosen somewhere but occur
    outside their chosen subset get nodes (x, g) with g choosing from f(Y)
    for every Y containing x.  (x', .) < (x, g) iff x' is in ran(g).

    With ``admissible`` the sequence construction is used instead: nodes
    (x, S) where S is the union of the ranges of an infinite admissible
    sequence of selections for x.
    """
    _smooth_preconditions(f)
    if admissible:
        s = _smooth_admissible(f, budget)
    else:
        s = _smooth_simple(f, budget)
    if verify:
        verify_round_trip(f, s)
    return s


def _smooth_simple(f: ChoiceFunction, budget: int) -> PrefStructure:
    table = f.table
    dom = f.domain
    dset = set(dom)
    K = k_set(f)
    b = _Builder(f, budget)
    ranges: list[tuple[int, frozenset]] = []
    for U in dom:
        hU = h_iterated(f, U)
        for x in bits(table[U]):
            fam = [Y for Y in dom if Y >> x & 1 and Y & ~hU]
            opts = []
            for Y in fam:
                if U | Y not in dset:
                    raise ContractError("domain lost closure under unions")
                opts.append(list(bits(table[U | Y] & ~hU)))
            for g in product(*opts):
                idx = b.node(x, ("min", U, g))
                ranges.append((idx, frozenset(g)))
    for x in bits(K):
        if not any(Y >> x & 1 and not table[Y] >> x & 1 for Y in dom):
            continue
        fam = [Y for Y in dom if Y >> x & 1]
        for g in product(*[list(bits(table[Y])) for Y in fam]):
            idx = b.node(x, ("kill", g))
            ranges.append((idx, frozenset(g)))
    by_elem: dict[int, list[int]] = {}
    for idx, (e, _) in enumerate(b.nodes):
        by_elem.setdefault(e, []).append(idx)
    for idx, rng in ranges:
        for y in rng:
            for j in by_elem.get(y, []):
                b.arrow(j, idx)
    return b.structure()


def admissible_unions(f: ChoiceFunction, x: int) -> set[int]:
    """Unions of ranges of infinite admissible sequences for ``x``.

    The next selection only depends on the range of the previous one, so a
    sequence is a walk over states (range, accumulated union).  The union
    of an infinite walk is the accumulated part of a reachable state that
    lies on a cycle.
    """
    table = f.table
    dom = f.domain

    def selections(family):
        return {sum(1 << p for p in set(g)) for g in product(*[list(bits(table[Y])) for Y in family])}

    start = [Y for Y in dom if Y >> x & 1 and not table[Y] >> x & 1]
    initial = {(r, r) for r in selections(start)}
    succ: dict[tuple[int, int], set[tuple[int, int]]] = {}
    frontier = list(initial)
    seen = set(initial)
    while frontier:
        st = frontier.pop()
        r, acc = st
        fam = [X for X in dom if table[X] >> x & 1 and r & X]
        nxt = {(r2, acc | r2) for r2 in selections(fam)}
        succ[st] = nxt
        for t in nxt:
            if t not in seen:
                seen.add(t)
                frontier.append(t)
    states = sorted(seen)
    pos = {s: i for i, s in enumerate(states)}
    reach = transitive_closure(len(states), [(pos[a], pos[c]) for a, cs in succ.items() for c in cs])
    return {acc for (r, acc), i in pos.items() if reach[i] >> i & 1}


def _smooth_admissible(f: ChoiceFunction, budget: int) -> PrefStructure:
    K = k_set(f)
    b = _Builder(f, budget)
    ranges = []
    for x in bits(K):
        for acc in sorted(admissible_unions(f, x)):
            ranges.append((b.node(x, ("seq", acc)), acc))
    by_elem: dict[int, list[int]] = {}
    for idx, (e, _) in enumerate(b.nodes):
        by_elem.setdefault(e, []).append(idx)
    for idx, acc in ranges:
        for y in bits(acc):
            for j in by_elem.get(y, []):
                b.arrow(j, idx)
    return b.structure()


def represent_smooth_transitive(f: ChoiceFunction, budget: int = DEFAULT_BUDGET, verify: bool = False,
                                all_trees: bool = False) -> PrefStructure:
    """Smooth and transitive representation by trees of (set, point) pairs.

    For x in f(U) a (U, x)-tree has root (U, x); a node (V, y) gets one
    child (V | Y, g(Y)) for every domain set Y containing y that is not
    within H(V), where g chooses from f(V | Y) - H(V).  For every chosen
    point x a second kind of tree has root (empty, x) with children
    (U, h(U)), h choosing from f(U) for all U containing x, each continued
    by a (U, h(U))-tree.  Nodes are the trees together with all their
    subtrees, ordered by the proper-subtree relation.

    By default only the first choice is taken at every branching; pass
    ``all_trees`` to enumerate every tree.
    """
    _smooth_preconditions(f)
    table = f.table
    dom = f.domain
    K = k_set(f)
    hcache: dict[int, int] = {}
    count = [0]

    def H(V):
        if V not in hcache:
            hcache[V] = h_iterated(f, V)
        return hcache[V]

    def trees(V: int, y: int) -> list:
        hv = H(V)
        fam = [Y for Y in dom if Y >> y & 1 and Y & ~hv]
        opts = []
        for Y in fam:
            cand = list(bits(table[V | Y] & ~hv))
            if not cand:
                raise ContractError("no chosen point outside H for a required child")
            opts.append(cand if all_trees else cand[:1])
        out = []
        for g in product(*opts):
            child_opts = [trees(V | Y, z) for Y, z in zip(fam, g)]
            for kids in product(*child_opts):
                count[0] += 1
                if count[0] > budget:
                    raise ResourceError(f"node budget of {budget} exceeded")
                out.append((V, y, tuple(sorted(kids))))
        return out

    roots = []
    for U in dom:
        for x in bits(table[U]):
            ts = trees(U, x)
            roots.extend(ts if all_trees else ts[:1])
    for x in bits(K):
        fam = [U for U in dom if U >> x & 1]
        opts = [list(bits(table[U])) for U in fam]
        if not all_trees:
            opts = [o[:1] for o in opts]
        for h in product(*opts):
            kid_opts = []
            for U, z in zip(fam, h):
                ts = trees(U, z)
                kid_opts.append(ts if all_trees else ts[:1])
            for kids in product(*kid_opts):
                roots.append((0, x, tuple(sorted(kids)), "nonmin"))

    b = _Builder(f, budget)

    def add(t) -> int:
        idx = b.node(t[1], t)
        if getattr(add, "done", None) is None:
            add.done = set()
        if idx in add.done:
            return idx
        add.done.add(idx)
        below: set[int] = set()
        for kid in t[2]:
            k = add(kid)
            below.add(k)
            below |= descendants[k]
        descendants[idx] = below
        for k in below:
            b.arrow(k, idx)
        return idx

    descendants: dict[int, set[int]] = {}
    for t in roots:
        add(t)
    s = b.structure()
    if verify:
        verify_round_trip(f, s)
    return s


def equiv_transitive(s: PrefStructure) -> PrefStructure:
    """Transitive structure with the same minimal sets.

    Every arrow from node (b, j) to node (a, i) is replaced by an arrow from
    a fresh self-loop copy of b to (a, i).  The original nodes stay, each
    attacked only by such fresh copies, so the relation is transitive.
    """
    nodes = list(s.nodes)
    copies = [0] * len(s.elements)
    for e, c in nodes:
        copies[e] = max(copies[e], c + 1)
    arrows = set()
    for i, j in sorted(s.arrows):
        e = s.nodes[i][0]
        k = len(nodes)
        nodes.append((e, copies[e]))
        copies[e] += 1
        arrows.add((k, k))
        arrows.add((k, j))
    return PrefStructure(s.elements, tuple(nodes), frozenset(arrows))


# ---------------------------------------------------------------------------

def extend_to_total_preorder(n: int, relation: Iterable[tuple[int, int]]) -> list[int]:
    """Rank function of a total preorder S extending ``relation`` on ``0..n-1``.

    x S y iff rank[x] <= rank[y].  Points mutually reachable under the
    relation share a rank; otherwise ranks follow a topological order of
    the strongly connected components, so S-equivalence implies mutual
    reachability.
    """
    rel = [(a, b) for a, b in relation if a != b]
    reach = transitive_closure(n, rel)
    for i in range(n):
        reach[i] |= 1 << i
    comp = [-1] * n
    comps: list[int] = []
    for i in range(n):
        if comp[i] >= 0:
            continue
        members = 0
        for j in range(n):
            if reach[i] >> j & 1 and reach[j] >> i & 1:
                members |= 1 << j
                comp[j] = len(comps)
        comps.append(members)
    # edges between components; Kahn's algorithm, smallest index first for determinism
    m = len(comps)
    indeg = [0] * m
    out: list[set[int]] = [set() for _ in range(m)]
    for a, b in rel:
        ca, cb = comp[a], comp[b]
        if ca != cb and cb not in out[ca]:
            out[ca].add(cb)
            indeg[cb] += 1
    order = []
    ready = sorted(c for c in range(m) if indeg[c] == 0)
    while ready:
        c = ready.pop(0)
        order.append(c)
        for d in sorted(out[c]):
            indeg[d] -= 1
            if indeg[d] == 0:
                ready.append(d)
                ready.sort()
    level = {c: i for i, c in enumerate(order)}
    return [level[comp[i]] for i in range(n)]


def check_total_preorder_extension(n: int, relation: Iterable[tuple[int, int]], rank: Sequence[int]) -> bool:
    rel = list(relation)
    if any(rank[a] > rank[b] for a, b in rel):
        return False
    reach = transitive_closure(n, [(a, b) for a, b in rel if a != b])
    for i in range(n):
        reach[i] |= 1 << i
    for x in range(n):
        for y in range(n):
            if rank[x] == rank[y] and not (reach[x] >> y & 1 and reach[y] >> x & 1):
                return False
    return True


def represent_ranked(f: ChoiceFunction, verify: bool = False) -> PrefStructure:
    """Single-copy ranked structure.

    a R b iff a = b or some domain set A has a chosen and b in A.  The
    relation is extended to a total preorder S and a < b iff a S b and not
    b S a.
    """
    _require(f, ("mu-subset", "mu-empty", "mu-="))
    require_closure(f.domain, ("cup",), [str(e) for e in f.elements])
    n = len(f.elements)
    rel = set()
    for A in f.domain:
        for a in bits(f.table[A]):
            for b in bits(A):
                rel.add((a, b))
    rank = extend_to_total_preorder(n, rel)
    arrows = frozenset((a, b) for a in range(n) for b in range(n) if rank[a] < rank[b])
    s = PrefStructure(f.elements, tuple((e, 0) for e in range(n)), arrows)
    if verify:
        verify_round_trip(f, s)
    return s


SYNTHESIZERS = {
    "general": represent_general,
    "transitive": represent_transitive,
    "smooth": represent_smooth,
    "smooth-transitive": represent_smooth_transitive,
    "ranked": represent_ranked,
}
