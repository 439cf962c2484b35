"""Preferential structures with copies.

A structure has base elements, nodes ``(element, copy)`` and an arrow
relation on nodes.  An arrow ``(i, j)`` means node ``i`` is smaller than
node ``j`` and so attacks it.  A self-loop ``(i, i)`` stands in for an
infinite descending chain of copies below node ``i``: the node never
counts as minimal.

Sets of elements are bitmasks over the element indices.  The public
helpers also accept iterables of element names.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .errors import ContractError, InputError
from .sets import bits, fmt, full, subsets


@dataclass(frozen=True)
class PrefStructure:
    elements: tuple
    nodes: tuple[tuple[int, int], ...]
    arrows: frozenset[tuple[int, int]]
    _attackers: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise InputError("duplicate element names")
        if len(set(self.nodes)) != len(self.nodes):
            raise InputError("duplicate nodes")
        n = len(self.nodes)
        for e, _ in self.nodes:
            if not 0 <= e < len(self.elements):
                raise InputError(f"node refers to unknown element index {e}")
        att = [0] * n
        for i, j in self.arrows:
            if not (0 <= i < n and 0 <= j < n):
                raise InputError(f"arrow ({i}, {j}) refers to a missing node")
            att[j] |= 1 << self.nodes[i][0]
        object.__setattr__(self, "_attackers", tuple(att))

    @staticmethod
    def build(elements: Sequence, nodes: Iterable[tuple], arrows: Iterable[tuple]) -> "PrefStructure":
        """Build from element labels, ``(label, copy)`` nodes and node-pair arrows."""
        elements = tuple(elements)
        index = {e: k for k, e in enumerate(elements)}
        try:
            node_list = tuple((index[e], c) for e, c in nodes)
        except KeyError as exc:
            raise InputError(f"unknown element {exc.args[0]!r}") from None
        pos = {nd: k for k, nd in enumerate(node_list)}
        arrow_set = set()
        for a, b in arrows:
            try:
                arrow_set.add((pos[(index[a[0]], a[1])], pos[(index[b[0]], b[1])]))
            except KeyError:
                raise InputError(f"arrow {a} < {b} refers to a missing node") from None
        return PrefStructure(elements, node_list, frozenset(arrow_set))

    @staticmethod
    def single_copy(elements: Sequence, less: Iterable[tuple]) -> "PrefStructure":
        """One copy per element; ``less`` holds pairs of element labels ``(a, b)`` with a < b."""
        elements = tuple(elements)
        return PrefStructure.build(elements, [(e, 0) for e in elements],
                                   [((a, 0), (b, 0)) for a, b in less])

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def universe(self) -> int:
        return full(len(self.elements))

    def mask(self, xs: Iterable) -> int:
        index = {e: k for k, e in enumerate(self.elements)}
        out = 0
        for x in xs:
            if x not in index:
                raise InputError(f"unknown element {x!r}")
            out |= 1 << index[x]
        return out

    def names(self, mask: int) -> frozenset:
        return frozenset(self.elements[i] for i in bits(mask))

    def node_name(self, k: int) -> str:
        e, c = self.nodes[k]
        return f"{self.elements[e]}#{c}"

    def attacker_elements(self, k: int) -> int:
        """Mask of elements having a copy that attacks node ``k``."""
        return self._attackers[k]

    def mu_mask(self, x: int) -> int:
        out = 0
        for k, (e, _) in enumerate(self.nodes):
            if x >> e & 1 and not self._attackers[k] & x:
                out |= 1 << e
        return out

    def mu(self, xs: Iterable) -> frozenset:
        return self.names(self.mu_mask(self.mask(xs)))

    def mu_table(self, domain: Iterable[int] | None = None) -> dict[int, int]:
        dom = subsets(self.universe) if domain is None else domain
        return {x: self.mu_mask(x) for x in dom}

    def less(self, i: int, j: int) -> bool:
        return (i, j) in self.arrows

    def successors(self) -> list[set[int]]:
        out = [set() for _ in self.nodes]
        for i, j in self.arrows:
            out[i].add(j)
        return out

    def to_text(self) -> str:
        lines = ["elements: " + ", ".join(str(e) for e in self.elements),
                 "nodes: " + ", ".join(self.node_name(k) for k in range(len(self.nodes)))]
        arrows = sorted(self.arrows)
        lines.append("arrows: " + "; ".join(f"{self.node_name(i)} < {self.node_name(j)}" for i, j in arrows))
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        out = ["digraph structure {", "  rankdir=BT;"]
        for k in range(len(self.nodes)):
            out.append(f'  n{k} [label="{self.node_name(k)}"];')
        for i, j in sorted(self.arrows):
            out.append(f"  n{i} -> n{j};")
        out.append("}")
        return "\n".join(out) + "\n"


def parse_structure(text: str) -> PrefStructure:
    """Parse the text format written by :meth:`PrefStructure.to_text`.

    Missing ``nodes:`` means one copy ``#0`` per element; a bare element name
    in an arrow means copy 0.  Lines starting with ``%`` are comments.
    """
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        key, sep, value = line.partition(":")
        key = key.strip().lower()
        if not sep or key not in ("elements", "nodes", "arrows"):
            raise InputError(f"line {lineno}: expected 'elements:', 'nodes:' or 'arrows:'")
        fields[key] = (fields.get(key, "") + ("," if key != "arrows" else ";") + value)
    if "elements" not in fields:
        raise InputError("missing 'elements:' line")
    elements = [e.strip() for e in fields["elements"].split(",") if e.strip()]

    def node(tok: str):
        tok = tok.strip()
        m = re.fullmatch(r"([^#\s<]+)(?:#(\d+))?", tok)
        if not m:
            raise InputError(f"bad node {tok!r}")
        return (m.group(1), int(m.group(2) or 0))

    if "nodes" in fields:
        nodes = [node(t) for t in fields["nodes"].split(",") if t.strip()]
    else:
        nodes = [(e, 0) for e in elements]
    arrows = []
    for part in fields.get("arrows", "").split(";"):
        if not part.strip():
            continue
        if "<" not in part:
            raise InputError(f"bad arrow {part.strip()!r}: expected 'n1 < n2'")
        a, b = part.split("<", 1)
        arrows.append((node(a), node(b)))
    return PrefStructure.build(elements, nodes, arrows)


@dataclass
class Check:
    holds: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.holds


def is_smooth(s: PrefStructure, domain: Iterable[int]) -> Check:
    """Every non-minimal copy in X sits above a copy minimal in X, for each X in the domain."""
    for x in sorted(set(domain), key=lambda m: (bin(m).count("1"), m)):
        minimal = [k for k, (e, _) in enumerate(s.nodes) if x >> e & 1 and not s.attacker_elements(k) & x]
        mset = set(minimal)
        for k, (e, _) in enumerate(s.nodes):
            if not x >> e & 1 or k in mset:
                continue
            if not any((i, k) in s.arrows for i in mset):
                return Check(False, (x, k))
    return Check(True)


def is_irreflexive(s: PrefStructure) -> Check:
    for i, j in sorted(s.arrows):
        if i == j:
            return Check(False, (i,))
    return Check(True)


def is_transitive(s: PrefStructure) -> Check:
    succ = s.successors()
    for i in range(len(s.nodes)):
        for j in sorted(succ[i]):
            for k in sorted(succ[j]):
                if k not in succ[i]:
                    return Check(False, (i, j, k))
    return Check(True)


def transitive_closure(n: int, arrows: Iterable[tuple[int, int]]) -> list[int]:
    """Reachability masks: bit j of ``out[i]`` iff i reaches j in one or more steps."""
    reach = [0] * n
    for i, j in arrows:
        reach[i] |= 1 << j
    changed = True
    while changed:
        changed = False
        for i in range(n):
            r = reach[i]
            acc = r
            for j in bits(r):
                acc |= reach[j]
            if acc != r:
                reach[i] = acc
                changed = True
    return reach


def is_cycle_free(s: PrefStructure, ignore_self_loops: bool = False) -> Check:
    arrows = [(i, j) for i, j in s.arrows if not (ignore_self_loops and i == j)]
    reach = transitive_closure(len(s.nodes), arrows)
    for i in range(len(s.nodes)):
        if reach[i] >> i & 1:
            return Check(False, (i,))
    return Check(True)


def is_ranked(s: PrefStructure) -> Check:
    """For incomparable x, y: z < x implies z < y, and x < z implies y < z.

    The witness is ``(x, y, z)`` as node indices.
    """
    n = len(s.nodes)
    less = s.arrows
    for x in range(n):
        for y in range(n):
            if x == y or (x, y) in less or (y, x) in less:
                continue
            for z in range(n):
                if (z, x) in less and (z, y) not in less:
                    return Check(False, (x, y, z))
                if (x, z) in less and (y, z) not in less:
                    return Check(False, (x, y, z))
    return Check(True)


def consequence(s: PrefStructure, t, phi, lang) -> bool:
    """``T |~ phi`` in ``s``: the minimal models of ``T`` all satisfy ``phi``.

    Elements of ``s`` must be valuation indices of ``lang``.
    """
    from .logic import models_of

    for e in s.elements:
        if not isinstance(e, int) or not 0 <= e < lang.size:
            raise InputError(f"element {e!r} is not a valuation of the language")
    mt = models_of(t, lang).bits
    mphi = models_of([phi], lang).bits
    x = 0
    for k, e in enumerate(s.elements):
        if mt >> e & 1:
            x |= 1 << k
    m = s.mu_mask(x)
    return all(mphi >> s.elements[k] & 1 for k in bits(m))


def mu_equal(s: PrefStructure, t: PrefStructure, domain: Iterable[int] | None = None) -> tuple[bool, int | None]:
    """Compare the choice functions of two structures over the same elements."""
    if s.elements != t.elements:
        raise InputError("structures have different element lists")
    for x in (subsets(s.universe) if domain is None else domain):
        if s.mu_mask(x) != t.mu_mask(x):
            return False, x
    return True, None


def to_one_infinity(s: PrefStructure) -> PrefStructure:
    """Equivalent structure with one node per present element.

    Requires a ranked structure without cycles (self-loop markers are not
    counted as cycles).  Elements all of whose copies are attacked by
    copies of the same element become a single self-loop node carrying
    the union of the outgoing arrows of their copies.  Other elements keep
    their lowest-index copy not attacked by a copy of the same element.
    Elements without copies are dropped from the node list.
    """
    if not is_ranked(s):
        raise ContractError("structure is not ranked")
    if not is_cycle_free(s, ignore_self_loops=True):
        raise ContractError("structure has a cycle")
    by_elem: dict[int, list[int]] = {}
    for k, (e, _) in enumerate(s.nodes):
        by_elem.setdefault(e, []).append(k)
    chosen: dict[int, int] = {}
    looped: set[int] = set()
    for e, ks in by_elem.items():
        kset = set(ks)
        free = [k for k in ks if not any((i, k) in s.arrows for i in kset)]
        if free:
            chosen[e] = free[0]
        else:
            looped.add(e)
    new_nodes = tuple((e, 0) for e in sorted(by_elem))
    pos = {e: k for k, (e, _) in enumerate(new_nodes)}
    arrows = set()
    for i, j in s.arrows:
        ei, ej = s.nodes[i][0], s.nodes[j][0]
        src_ok = ei in looped or chosen.get(ei) == i
        dst_ok = ej in looped or chosen.get(ej) == j
        if src_ok and dst_ok and ei != ej:
            arrows.add((pos[ei], pos[ej]))
    for e in looped:
        arrows.add((pos[e], pos[e]))
    out = PrefStructure(s.elements, new_nodes, frozenset(arrows))
    ok, x = mu_equal(s, out)
    if not ok:
        raise ContractError(f"one-copy reduction changed the minimal set of {fmt(x, [str(e) for e in s.elements])}")
    return out


def random_structure(rng: random.Random, n_elements: int, max_copies: int = 2,
                     p_arrow: float = 0.3, names: Sequence | None = None) -> PrefStructure:
    elements = tuple(names) if names is not None else tuple("abcdefgh"[:n_elements])
    nodes = []
    for e in range(n_elements):
        for c in range(rng.randint(1, max_copies)):
            nodes.append((e, c))
    n = len(nodes)
    arrows = frozenset((i, j) for i, j in product(range(n), repeat=2) if rng.random() < p_arrow)
    return PrefStructure(elements, tuple(nodes), arrows)


def ranked_from_levels(elements: Sequence, nodes: Sequence[tuple[int, int]], levels: Sequence[int]) -> PrefStructure:
    """Single-level-per-node ranked structure: node i < node j iff level(i) < level(j)."""
    n = len(nodes)
    arrows = frozenset((i, j) for i in range(n) for j in range(n) if levels[i] < levels[j])
    return PrefStructure(tuple(elements), tuple(nodes), arrows)


def random_ranked(rng: random.Random, n_elements: int, max_copies: int = 2) -> PrefStructure:
    elements = tuple("abcdefgh"[:n_elements])
    nodes = [(e, c) for e in range(n_elements) for c in range(rng.randint(1, max_copies))]
    levels = [rng.randrange(len(nodes)) for _ in nodes]
    return ranked_from_levels(elements, nodes, levels)
