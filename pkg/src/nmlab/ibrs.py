"""Graphs whose arrows may point at other arrows.

Nodes are copies of points; ``node c0 = c`` declares a second copy of the
point ``c``.  An arrow goes from a node to a node or to another arrow.
Level-1 arrows join two nodes and an arrow aimed at a level-n arrow has
level n+1.

Point sets passed to the evaluators are sets of point names.  An arrow
"comes from X" when the point of its origin node lies in X.

Text format, statements separated by ``;`` or newlines::

    node a; node b; node c0 = c
    arrow al1: a -> b +
    arrow al2: c0 -> al1 -
    h(p, al1) = 1
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping

from .conditions import ConditionReport
from .errors import ContractError, InputError
from .logic import Formula, parse_formula

DEFAULT_MAX_LEVEL = 3


@dataclass(frozen=True)
class Arrow:
    id: str
    origin: str
    target: str
    sign: str = "+"


@dataclass(frozen=True)
class IBRSGraph:
    nodes: Mapping[str, str]          # node name -> point name
    arrows: Mapping[str, Arrow]
    labels: Mapping[tuple[str, str], float] = field(default_factory=dict)
    max_level: int = DEFAULT_MAX_LEVEL
    _level: dict = field(init=False, repr=False, compare=False)
    _attackers: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nodes = dict(self.nodes)
        arrows = dict(self.arrows)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "arrows", arrows)
        object.__setattr__(self, "labels", dict(self.labels))
        clash = set(nodes) & set(arrows)
        if clash:
            raise InputError(f"names used for both a node and an arrow: {sorted(clash)}")
        attackers: dict[str, list[str]] = {k: [] for k in (*nodes, *arrows)}
        for a in arrows.values():
            if a.origin not in nodes:
                raise InputError(f"arrow {a.id}: origin {a.origin!r} is not a node")
            if a.target not in attackers:
                raise InputError(f"arrow {a.id}: unknown target {a.target!r}")
            if a.sign not in "+-":
                raise InputError(f"arrow {a.id}: sign must be + or -")
            attackers[a.target].append(a.id)
        level: dict[str, int] = {}
        for aid in arrows:
            chain, cur = [], aid
            while cur in arrows and cur not in level:
                if cur in chain:
                    raise InputError(f"arrow {aid} sits on a cycle of arrows")
                chain.append(cur)
                cur = arrows[cur].target
            base = level.get(cur, 0)
            for k, a in enumerate(reversed(chain), 1):
                level[a] = base + k
        top = max(level.values(), default=0)
        if top > self.max_level:
            raise InputError(f"arrow level {top} exceeds the maximum {self.max_level}")
        for (atom, item) in self.labels:
            if item not in attackers:
                raise InputError(f"label h({atom}, {item}) refers to an unknown item")
        object.__setattr__(self, "_level", level)
        object.__setattr__(self, "_attackers", {k: tuple(v) for k, v in attackers.items()})

    @property
    def points(self) -> frozenset:
        return frozenset(self.nodes.values())

    def level(self, aid: str) -> int:
        return self._level[aid]

    def attackers(self, item: str) -> tuple[str, ...]:
        """Arrows whose target is ``item`` (a node or an arrow)."""
        return self._attackers[item]

    def origin_point(self, aid: str) -> str:
        return self.nodes[self.arrows[aid].origin]

    def origins(self, aid: str) -> frozenset:
        """Points of all origins along the chain down to a node."""
        out, cur = set(), aid
        while cur in self.arrows:
            out.add(self.origin_point(cur))
            cur = self.arrows[cur].target
        return frozenset(out)

    def destination_node(self, aid: str) -> str:
        cur = aid
        while cur in self.arrows:
            cur = self.arrows[cur].target
        return cur

    def destinations(self, aid: str) -> frozenset:
        return frozenset({self.nodes[self.destination_node(aid)]})

    def copies(self, point: str) -> list[str]:
        return [n for n, p in self.nodes.items() if p == point]

    def to_text(self) -> str:
        lines = []
        for n, p in self.nodes.items():
            lines.append(f"node {n}" if n == p else f"node {n} = {p}")
        for a in self.arrows.values():
            lines.append(f"arrow {a.id}: {a.origin} -> {a.target} {a.sign}")
        for (atom, item), v in self.labels.items():
            lines.append(f"h({atom}, {item}) = {v:g}")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        out = ["digraph ibrs {"]
        for n, p in self.nodes.items():
            label = n if n == p else f"{n} ({p})"
            out.append(f'  "{n}" [label="{label}"];')
        targeted = {a.target for a in self.arrows.values() if a.target in self.arrows}
        for aid in targeted:
            out.append(f'  "{aid}" [shape=point, xlabel="{aid}"];')
        for a in self.arrows.values():
            style = "dashed" if a.sign == "-" else "solid"
            if a.id in targeted:
                out.append(f'  "{a.origin}" -> "{a.id}" [arrowhead=none, style={style}];')
                src = a.id
            else:
                src = a.origin
            out.append(f'  "{src}" -> "{a.target}" [style={style}, label="{a.id}"];')
        out.append("}")
        return "\n".join(out) + "\n"


_NODE = re.compile(r"node\s+(\w+)(?:\s*=\s*(\w+))?$")
_ARROW = re.compile(r"arrow\s+(\w+)\s*:\s*(\w+)\s*->\s*(\w+)(?:\s+([+-]))?$")
_LABEL = re.compile(r"h\(\s*(\w+)\s*,\s*(\w+)\s*\)\s*=\s*([-+0-9.eE]+)$")


def parse_ibrs(text: str, max_level: int = DEFAULT_MAX_LEVEL) -> IBRSGraph:
    nodes: dict[str, str] = {}
    arrows: dict[str, Arrow] = {}
    labels: dict[tuple[str, str], float] = {}
    for raw in re.split(r"[;\n]", text):
        line = raw.split("%")[0].split("#")[0].strip()
        if not line:
            continue
        if m := _NODE.match(line):
            if m[1] in nodes:
                raise InputError(f"duplicate node {m[1]!r}")
            nodes[m[1]] = m[2] or m[1]
        elif m := _ARROW.match(line):
            if m[1] in arrows:
                raise InputError(f"duplicate arrow {m[1]!r}")
            arrows[m[1]] = Arrow(m[1], m[2], m[3], m[4] or "+")
        elif m := _LABEL.match(line):
            labels[(m[1], m[2])] = float(m[3])
        else:
            raise InputError(f"cannot parse diagram statement {line!r}")
    return IBRSGraph(nodes, arrows, labels, max_level)


def graph(points: Iterable[str], arrows: Iterable[tuple], copies: Mapping[str, str] | None = None,
          max_level: int = DEFAULT_MAX_LEVEL) -> IBRSGraph:
    """Shorthand: ``arrows`` holds ``(id, origin, target)`` or ``(id, origin, target, sign)``."""
    nodes = {p: p for p in points}
    nodes.update(copies or {})
    return IBRSGraph(nodes, {a[0]: Arrow(*a) for a in arrows}, {}, max_level)


def _pset(xs) -> frozenset:
    return frozenset(xs)


def _validity(g: IBRSGraph, X: frozenset, Y: frozenset, mode: str):
    """Return a memoised predicate ``arrow id -> valid``."""
    if mode == "to":
        @lru_cache(maxsize=None)
        def valid(aid: str) -> bool:
            if not (g.origins(aid) <= X and g.destinations(aid) <= Y):
                return False
            return all(any(valid(c) for c in g.attackers(b))
                       for b in g.attackers(aid) if g.origin_point(b) in X)
    elif mode == "imp":
        if not X <= Y:
            raise ContractError("X => Y validity needs X to be a subset of Y")

        @lru_cache(maxsize=None)
        def valid(aid: str) -> bool:
            if g.origin_point(aid) not in X:
                return False
            if not (g.origins(aid) <= Y and g.destinations(aid) <= Y):
                return False
            return all(any(valid(c) for c in g.attackers(b))
                       for b in g.attackers(aid) if g.origin_point(b) in Y)
    else:
        raise InputError(f"unknown validity mode {mode!r}")
    return valid


def valid_arrow(g: IBRSGraph, alpha: str, X: Iterable[str], Y: Iterable[str] | None = None,
                mode: str = "to") -> bool:
    """``mode="to"``: valid X-to-Y arrow; ``mode="imp"``: valid X => Y arrow.

    ``Y`` defaults to ``X``.
    """
    if alpha not in g.arrows:
        raise InputError(f"unknown arrow {alpha!r}")
    X = _pset(X)
    Y = X if Y is None else _pset(Y)
    return _validity(g, X, Y, mode)(alpha)


def higher_mu(g: IBRSGraph, X: Iterable[str]) -> frozenset:
    X = _pset(X)
    valid = _validity(g, X, X, "to")
    return frozenset(
        x for x in X
        if any(not any(valid(a) for a in g.attackers(n)) for n in g.copies(x))
    )


def subsumes(g: IBRSGraph, X: Iterable[str], X2: Iterable[str]) -> ConditionReport:
    """Check ``X ⊑ X2``: X is exactly what survives in X2 with attacks from X.

    The counterexample names the offending point.
    """
    X, X2 = _pset(X), _pset(X2)
    name = "sub"
    if not X <= X2:
        return ConditionReport(name, False, tuple(sorted(X - X2)), 0, "X not a subset of X'")
    valid = _validity(g, X, X2, "imp")
    checked = 0
    for x in sorted(X2 - X):
        for n in g.copies(x):
            checked += 1
            if not any(valid(a) for a in g.attackers(n)):
                return ConditionReport(name, False, (x,), checked, f"copy {n} has no valid attack from X")
    for x in sorted(X):
        checked += 1
        ok = any(
            all(any(valid(b) for b in g.attackers(a))
                for a in g.attackers(n) if g.origin_point(a) in X2)
            for n in g.copies(x)
        )
        if not ok:
            return ConditionReport(name, False, (x,), checked, "every copy is attacked without defence")
    return ConditionReport(name, True, None, checked)


def subsumes_level3(g: IBRSGraph, X: Iterable[str], X2: Iterable[str]) -> bool:
    """Unfolded form of :func:`subsumes` for graphs of level at most 3."""
    X, X2 = _pset(X), _pset(X2)
    if max(g._level.values(), default=0) > 3:
        raise ContractError("the unfolded check only covers level <= 3")
    if not X <= X2:
        return False
    op = g.origin_point
    for x in X:
        ok = False
        for n in g.copies(x):
            if all(any(op(b) in X and not any(op(c) in X2 for c in g.attackers(b))
                       for b in g.attackers(a))
                   for a in g.attackers(n) if op(a) in X2):
                ok = True
                break
        if not ok:
            return False
    for x in X2 - X:
        for n in g.copies(x):
            if not any(op(a) in X and all(any(op(c) in X for c in g.attackers(b))
                                          for b in g.attackers(a) if op(b) in X2)
                       for a in g.attackers(n)):
                return False
    return True


def check_essential_smooth(g: IBRSGraph, X: Iterable[str]) -> ConditionReport:
    X = _pset(X)
    m = higher_mu(g, X)
    rep = subsumes(g, m, X)
    if max(g._level.values(), default=0) <= 3 and subsumes_level3(g, m, X) != rep.holds:
        raise ContractError("unfolded level-3 check disagrees with the recursive one")
    rep.name = "essentially smooth"
    return rep


def check_total_smooth(g: IBRSGraph, X: Iterable[str]) -> ConditionReport:
    """Every arrow inside X has a sibling from mu(X) on the same target,
    and a valid sibling when the arrow itself is valid."""
    X = _pset(X)
    m = higher_mu(g, X)
    valid = _validity(g, X, X, "to")
    checked = 0
    for aid in sorted(g.arrows):
        if not (g.origins(aid) | g.destinations(aid)) <= X:
            continue
        checked += 1
        target = g.arrows[aid].target
        sibs = [s for s in g.attackers(target) if g.origin_point(s) in m]
        if not sibs:
            return ConditionReport("totally smooth", False, (aid,), checked,
                                   f"no arrow from mu(X) to {target}")
        if valid(aid) and not any(valid(s) for s in sibs):
            return ConditionReport("totally smooth", False, (aid,), checked,
                                   f"no valid arrow from mu(X) to {target}")
    return ConditionReport("totally smooth", True, None, checked)


def to_pref_structure(g: IBRSGraph):
    """Level-1 graph as a plain preferential structure."""
    from .structures import PrefStructure
    if any(lv > 1 for lv in g._level.values()):
        raise ContractError("only level-1 graphs convert to plain structures")
    points = tuple(sorted(g.points))
    node_names = list(g.nodes)
    copy_no: dict[str, int] = {}
    seen: dict[str, int] = {}
    for n in node_names:
        p = g.nodes[n]
        copy_no[n] = seen.get(p, 0)
        seen[p] = copy_no[n] + 1
    nodes = [(g.nodes[n], copy_no[n]) for n in node_names]
    arrows = [((g.nodes[a.origin], copy_no[a.origin]), (g.nodes[a.target], copy_no[a.target]))
              for a in g.arrows.values()]
    return PrefStructure.build(points, nodes, arrows)


def random_ibrs(rng: random.Random, n_points: int, n_arrows: int, max_level: int = 2,
                extra_copies: int = 0) -> IBRSGraph:
    points = [chr(ord("a") + k) for k in range(n_points)]
    nodes = {p: p for p in points}
    for k in range(extra_copies):
        p = rng.choice(points)
        nodes[f"{p}{k + 1}"] = p
    node_names = list(nodes)
    arrows: dict[str, Arrow] = {}
    levels: dict[str, int] = {}
    for k in range(n_arrows):
        aid = f"r{k}"
        options = node_names + [a for a in arrows if levels[a] < max_level]
        target = rng.choice(options)
        arrows[aid] = Arrow(aid, rng.choice(node_names), target)
        levels[aid] = levels.get(target, 0) + 1
    return IBRSGraph(nodes, arrows, {}, max(max_level, 1))


def point_subsets(g: IBRSGraph):
    pts = sorted(g.points)
    for r in range(len(pts) + 1):
        for c in combinations(pts, r):
            yield frozenset(c)


# consequence over labelled points

def _holds(g: IBRSGraph, f: Formula, point: str) -> bool:
    kind = f[0]
    if kind == "var":
        try:
            return g.labels[(f[1], point)] >= 0.5
        except KeyError:
            raise ContractError(f"no label h({f[1]}, {point})") from None
    if kind == "true":
        return True
    if kind == "false":
        return False
    if kind == "not":
        return not _holds(g, f[1], point)
    a, b = _holds(g, f[1], point), _holds(g, f[2], point)
    return {"and": a and b, "or": a or b, "imp": (not a) or b, "iff": a == b}[kind]


def minimal_points(g: IBRSGraph, S: Iterable[str]) -> frozenset:
    """Nodes of S not attacked by an arrow coming from S."""
    S = frozenset(S)
    return frozenset(s for s in S if not any(g.arrows[a].origin in S for a in g.attackers(s)))


def ibrs_consequence(g: IBRSGraph, premise, conclusion) -> bool:
    """``premise |~ conclusion``: the conclusion holds at every minimal
    point where the premise holds.  Arrows on arrows and arrow labels are
    ignored; points are taken to be their own single node."""
    p = parse_formula(premise) if isinstance(premise, str) else premise
    q = parse_formula(conclusion) if isinstance(conclusion, str) else conclusion
    S = frozenset(x for x in g.nodes if _holds(g, p, x))
    return all(_holds(g, q, x) for x in minimal_points(g, S))
