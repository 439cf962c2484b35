"""Sequent closures for connective-free languages.

A sequent ``X |~ Y`` over a finite atom set reads X conjunctively and Y
disjunctively.  Sets of atoms are bitmasks, and a sequent set is stored as
one bitset row per left side: bit ``Y`` of ``rows[X]`` says ``X |~ Y``.

Closures saturate in passes; each pass reads only the previous state, so
the pass number at which a sequent appears bounds the passes of its
premises.  That lets :func:`derives` rebuild a derivation afterwards
without bookkeeping inside the saturation loop.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

from .conditions import ConditionReport
from .errors import InputError, ResourceError
from .sets import bits, fmt, popcount, subsets

MAX_ATOMS = 8


@dataclass(frozen=True)
class SequentSet:
    atoms: tuple
    rows: tuple         # rows[X] is a bitset over right sides Y

    def __post_init__(self):
        if len(self.atoms) > MAX_ATOMS:
            raise InputError(f"at most {MAX_ATOMS} atoms")
        if len(self.rows) != 1 << len(self.atoms):
            raise InputError("one row per left side expected")

    @staticmethod
    def empty(atoms: Sequence) -> "SequentSet":
        return SequentSet(tuple(atoms), (0,) * (1 << len(atoms)))

    @staticmethod
    def of(atoms: Sequence, sequents: Iterable[tuple]) -> "SequentSet":
        """Build from ``(X, Y)`` pairs of masks or of atom iterables."""
        atoms = tuple(atoms)
        rows = [0] * (1 << len(atoms))
        for x, y in sequents:
            rows[_mask(atoms, x)] |= 1 << _mask(atoms, y)
        return SequentSet(atoms, tuple(rows))

    @property
    def n(self) -> int:
        return len(self.atoms)

    def mask(self, xs) -> int:
        return _mask(self.atoms, xs)

    def __contains__(self, seq) -> bool:
        x, y = seq
        return bool(self.rows[self.mask(x)] >> self.mask(y) & 1)

    def __iter__(self):
        for x, row in enumerate(self.rows):
            for y in bits(row):
                yield x, y

    def __len__(self):
        return sum(popcount(r) for r in self.rows)

    def __le__(self, other: "SequentSet") -> bool:
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def show(self, x: int, y: int) -> str:
        return f"{_side(self.atoms, x)} |~ {_side(self.atoms, y)}".strip()

    def to_text(self) -> str:
        lines = ["atoms: " + " ".join(map(str, self.atoms))]
        lines += [self.show(x, y) for x, y in self]
        return "\n".join(lines) + "\n"


def _side(atoms, m: int) -> str:
    return " ".join(str(atoms[i]) for i in bits(m))


def _mask(atoms: Sequence, xs) -> int:
    if isinstance(xs, int):
        if xs >> len(atoms):
            raise InputError(f"mask {xs} outside the atom set")
        return xs
    out = 0
    for a in xs:
        try:
            out |= 1 << atoms.index(a)
        except ValueError:
            raise InputError(f"unknown atom {a!r}") from None
    return out


def parse_sequents(text: str, atoms: Sequence | None = None) -> SequentSet:
    """Lines ``a b |~ c d``; an optional ``atoms: ...`` line fixes the language."""
    declared = list(atoms) if atoms is not None else None
    pairs = []
    for raw in re.split(r"[;\n]", text):
        line = raw.split("%")[0].split("#")[0].strip()
        if not line:
            continue
        if line.startswith("atoms:"):
            declared = line[6:].replace(",", " ").split()
            continue
        if "|~" not in line:
            raise InputError(f"expected 'X |~ Y', got {line!r}")
        left, right = line.split("|~", 1)
        pairs.append((left.replace(",", " ").split(), right.replace(",", " ").split()))
    if declared is None:
        declared = []
        for l, r in pairs:
            for a in (*l, *r):
                if a not in declared:
                    declared.append(a)
    return SequentSet.of(declared, pairs)


# rules --------------------------------------------------------------------
#
# Each rule maps the current rows to the rows it adds, and can name the
# premises of one instance that concludes a given sequent from an
# "earlier" predicate.

@dataclass(frozen=True)
class Rule:
    name: str
    apply: Callable[[list, int], list]
    justify: Callable[[int, int, int, Callable[[int, int], bool]], tuple | None]


def _no_atom(n: int, a: int) -> int:
    return sum(1 << y for y in range(1 << n) if not y >> a & 1)


def _apply_inclusion(rows, n):
    return [sum(1 << (1 << a) for a in bits(x)) for x in range(1 << n)]


def _just_inclusion(x, y, n, earlier):
    return () if popcount(y) == 1 and y & x else None


def _apply_reflexive(rows, n):
    return [sum(1 << y for y in range(1 << n) if y & x) for x in range(1 << n)]


def _just_reflexive(x, y, n, earlier):
    return () if x & y else None


def _apply_right_mono(rows, n):
    # one added atom per pass, so every new sequent has a premise from an
    # earlier pass
    out = list(rows)
    for a in range(n):
        keep = _no_atom(n, a)
        out = [o | ((r & keep) << (1 << a)) for o, r in zip(out, rows)]
    return out


def _just_right_mono(x, y, n, earlier):
    for a in bits(y):
        if earlier(x, y & ~(1 << a)):
            return ((x, y & ~(1 << a)),)
    return None


def _apply_left_mono(rows, n):
    out = list(rows)
    for x, r in enumerate(rows):
        for a in range(n):
            out[x | 1 << a] |= r
    return out


def _just_left_mono(x, y, n, earlier):
    for a in bits(x):
        if earlier(x & ~(1 << a), y):
            return ((x & ~(1 << a), y),)
    return None


def _apply_cautious_mono(rows, n):
    out = list(rows)
    for x, r in enumerate(rows):
        for a in range(n):
            if not x >> a & 1 and r >> (1 << a) & 1:
                out[x | 1 << a] |= r
    return out


def _just_cautious_mono(x, y, n, earlier):
    for a in bits(x):
        z = x & ~(1 << a)
        if earlier(z, 1 << a) and earlier(z, y):
            return ((z, 1 << a), (z, y))
    return None


def _cut_rule(limit: int | None):
    """Cautious cut with at most ``limit`` cut atoms (None: unbounded)."""

    def apply(rows, n):
        out = list(rows)
        for x, r in enumerate(rows):
            for y in range(1 << n):
                if r >> y & 1:
                    continue
                good = [a for a in range(n) if not x >> a & 1 and r >> (y | 1 << a) & 1]
                if not good:
                    continue
                top = len(good) if limit is None else min(limit, len(good))
                if any(rows[x | sum(1 << a for a in A)] >> y & 1
                       for k in range(1, top + 1) for A in combinations(good, k)):
                    out[x] |= 1 << y
        return out

    def justify(x, y, n, earlier):
        good = [a for a in range(n) if not x >> a & 1 and earlier(x, y | 1 << a)]
        top = len(good) if limit is None else min(limit, len(good))
        for k in range(1, top + 1):
            for A in combinations(good, k):
                xa = x | sum(1 << a for a in A)
                if earlier(xa, y):
                    return ((xa, y),) + tuple((x, y | 1 << a) for a in A)
        return None

    return apply, justify


def _apply_unit_cut_scott(rows, n):
    # from X |~ a and X, a |~ Y infer X |~ Y
    out = list(rows)
    for x, r in enumerate(rows):
        for a in range(n):
            if not x >> a & 1 and r >> (1 << a) & 1:
                out[x] |= rows[x | 1 << a]
    return out


def _just_unit_cut_scott(x, y, n, earlier):
    for a in range(n):
        if not x >> a & 1 and earlier(x, 1 << a) and earlier(x | 1 << a, y):
            return ((x, 1 << a), (x | 1 << a, y))
    return None


def _apply_rw(rows, n):
    # with "X |- Y iff X meets Y" the weakened atom must lie in X or be one of
    # the side atoms; the latter adds nothing new, and the bound on the number
    # of side premises plays no role
    out = list(rows)
    for x, r in enumerate(rows):
        if not x:
            continue
        for y in range(1 << n):
            if any(r >> (y | 1 << a) & 1 for a in range(n)):
                for p in bits(x):
                    out[x] |= 1 << (y | 1 << p)
    return out


def _just_rw(x, y, n, earlier):
    for p in bits(x & y):
        for base in (y & ~(1 << p), y):
            for a in range(n):
                if earlier(x, base | 1 << a):
                    return ((x, base | 1 << a),)
    return None


def _apply_scott_cut(rows, n):
    if n > 4:
        raise ResourceError("the full cut rule is limited to 4 atoms")
    out = list(rows)
    seqs = [(x, y) for x, r in enumerate(rows) for y in bits(r)]
    for p in range(n):
        pb = 1 << p
        left = [(x, y) for x, y in seqs if y & pb]
        right = [(x, y) for x, y in seqs if x & pb]
        for x1, y1 in left:
            for d1 in {y1 & ~pb, y1}:
                for x2, y2 in right:
                    for g2 in {x2 & ~pb, x2}:
                        out[x1 | g2] |= 1 << (d1 | y2)
    return out


def _just_scott_cut(x, y, n, earlier):
    for p in range(n):
        pb = 1 << p
        for x1 in subsets(x):
            for g2 in subsets(x):
                if x1 | g2 != x:
                    continue
                for d1 in subsets(y):
                    for y2 in subsets(y):
                        if d1 | y2 != y:
                            continue
                        if earlier(x1, d1 | pb) and earlier(g2 | pb, y2):
                            return ((x1, d1 | pb), (g2 | pb, y2))
    return None


_PlCC = _cut_rule(None)

RULES: dict[str, Rule] = {
    "PlI": Rule("PlI", _apply_inclusion, _just_inclusion),
    "PlRM": Rule("PlRM", _apply_right_mono, _just_right_mono),
    "PlCLM": Rule("PlCLM", _apply_cautious_mono, _just_cautious_mono),
    "PlCC": Rule("PlCC", *_PlCC),
    "s-R": Rule("s-R", _apply_reflexive, _just_reflexive),
    "Cum": Rule("Cum", _apply_reflexive, _just_reflexive),
    "M": Rule("M", lambda rows, n: [a | b for a, b in zip(_apply_left_mono(rows, n), _apply_right_mono(rows, n))],
              lambda x, y, n, e: _just_left_mono(x, y, n, e) or _just_right_mono(x, y, n, e)),
    "RM": Rule("RM", _apply_right_mono, _just_right_mono),
    "CM": Rule("CM", _apply_cautious_mono, _just_cautious_mono),
    "CC": Rule("CC", _apply_unit_cut_scott, _just_unit_cut_scott),
    "C": Rule("C", _apply_scott_cut, _just_scott_cut),
}
PL = ("PlI", "PlRM", "PlCLM", "PlCC")


def rule(name: str) -> Rule:
    """Look up a rule; ``LCC_n`` and ``RW_n`` take their bound from the name."""
    if name in RULES:
        return RULES[name]
    m = re.fullmatch(r"(LCC|RW)_?(\d+)", name)
    if not m:
        raise InputError(f"unknown rule {name!r}; known: {sorted(RULES)} plus LCC_n, RW_n")
    k = int(m[2])
    if not 1 <= k <= 4:
        raise InputError("indexed rules take 1 <= n <= 4")
    if m[1] == "LCC":
        return Rule(name, *_cut_rule(k))
    return Rule(name, _apply_rw, _just_rw)


def _rules(names) -> list[Rule]:
    if isinstance(names, str):
        names = [r for r in re.split(r"[,\s]+", names) if r]
    out = [rule(r) for r in names]
    if not out:
        raise InputError("at least one rule is needed")
    return out


@dataclass
class Closure:
    result: SequentSet
    stage: dict         # (X, Y) -> pass in which it first appeared
    rules: tuple


def _saturate(s: SequentSet, rules: list[Rule], nonempty: bool) -> Closure:
    n = s.n
    allowed = (1 << (1 << n)) - 1
    if nonempty:
        allowed &= ~1
    rows = [r & allowed for r in s.rows]
    if nonempty:
        rows[0] = 0
    stage = {(x, y): 0 for x, r in enumerate(rows) for y in bits(r)}
    k = 0
    while True:
        k += 1
        new = list(rows)
        for r in rules:
            add = r.apply(rows, n)
            new = [a | b for a, b in zip(new, add)]
        new = [r & allowed for r in new]
        if nonempty:
            new[0] = 0
        changed = False
        for x in range(1 << n):
            diff = new[x] & ~rows[x]
            if diff:
                changed = True
                for y in bits(diff):
                    stage[(x, y)] = k
        rows = new
        if not changed:
            break
    return Closure(SequentSet(s.atoms, tuple(rows)), stage, tuple(r.name for r in rules))


def close(s: SequentSet, rules=PL) -> SequentSet:
    """Least set containing ``s`` and closed under ``rules``."""
    return _saturate(s, _rules(rules), nonempty=False).result


def close_with_stages(s: SequentSet, rules=PL, nonempty: bool = False) -> Closure:
    return _saturate(s, _rules(rules), nonempty)


SCOTT_RULES = ("s-R", "M", "C", "CM", "CC", "Cum", "RM")


def scott_close(s: SequentSet, rules) -> SequentSet:
    """Closure restricted to sequents with nonempty sides on both ends."""
    return _saturate(s, _rules(rules), nonempty=True).result


@dataclass(frozen=True)
class Step:
    sequent: tuple
    rule: str           # "start" for members of the start set
    premises: tuple


def derives(s: SequentSet, rules, goal, nonempty: bool = False) -> tuple[bool, list[Step]]:
    """Is ``goal`` in the closure?  On success also return a derivation,
    premises before conclusions."""
    rule_list = _rules(rules)
    cl = _saturate(s, rule_list, nonempty)
    x, y = s.mask(goal[0]), s.mask(goal[1])
    if (x, y) not in cl.stage:
        return False, []
    trace: list[Step] = []
    done: set = set()

    def build(seq):
        if seq in done:
            return
        k = cl.stage[seq]
        if k == 0:
            trace.append(Step(seq, "start", ()))
            done.add(seq)
            return
        earlier = lambda a, b: cl.stage.get((a, b), k) < k  # noqa: E731
        for r in rule_list:
            prem = r.justify(seq[0], seq[1], s.n, earlier)
            if prem is not None:
                for p in prem:
                    build(p)
                trace.append(Step(seq, r.name, prem))
                done.add(seq)
                return
        raise AssertionError(f"no justification for {seq}")  # pragma: no cover

    build((x, y))
    return True, trace


def check_trace(s: SequentSet, trace: Sequence[Step], nonempty: bool = False) -> bool:
    """Replay a derivation: each step is a start member or follows by its rule
    from premises proved before it."""
    seen: set = set()
    for st in trace:
        x, y = st.sequent
        if nonempty and (not x or not y):
            return False
        if st.rule == "start":
            if (x, y) not in s:
                return False
        else:
            if any(p not in seen for p in st.premises):
                return False
            earlier = lambda a, b: (a, b) in st.premises  # noqa: E731
            if rule(st.rule).justify(x, y, s.n, earlier) is None:
                return False
        seen.add((x, y))
    return True


# preferential models ------------------------------------------------------

def _model_masks(atoms: Sequence, structure) -> list[int]:
    out = []
    for e in structure.elements:
        if isinstance(e, int):
            out.append(_mask(atoms, e))
        elif isinstance(e, str) and e not in atoms and all(ch in atoms for ch in e):
            out.append(_mask(atoms, list(e)))
        elif isinstance(e, str):
            out.append(_mask(atoms, [e] if e else []))
        else:
            out.append(_mask(atoms, e))
    return out


def preferential_eval(atoms: Sequence, structure) -> SequentSet:
    """All ``X |~ Y`` true in a structure whose elements are sets of atoms.

    An element satisfies X when it contains X; ``X |~ Y`` holds when every
    minimal element satisfying X meets Y.
    """
    atoms = tuple(atoms)
    n = len(atoms)
    models = _model_masks(atoms, structure)
    rows = []
    for x in range(1 << n):
        inside = sum(1 << k for k, m in enumerate(models) if m & x == x)
        mins = [models[k] for k in bits(structure.mu_mask(inside))]
        rows.append(sum(1 << y for y in range(1 << n) if all(m & y for m in mins)))
    return SequentSet(atoms, tuple(rows))


def model_sets(atoms: Sequence, structure) -> list[int]:
    """Element masks of M(X) for each left side X."""
    models = _model_masks(tuple(atoms), structure)
    return [sum(1 << k for k, m in enumerate(models) if m & x == x) for x in range(1 << len(atoms))]


def is_closed(s: SequentSet, rules) -> ConditionReport:
    """Is ``s`` already closed?  The counterexample is a missing sequent."""
    cl = close(s, rules)
    for x, y in cl:
        if (x, y) not in s:
            return ConditionReport("closed", False, (x, y), len(cl), s.show(x, y))
    return ConditionReport("closed", True, None, len(cl))


def cum1_instances(structure) -> ConditionReport:
    """For U, X, Y with the structure smooth on X and Y: mu(Y) <= U | X and
    mu(X) <= U imply X & Y & mu(U) <= mu(Y)."""
    from .structures import is_smooth
    full = (1 << structure.n) - 1
    sets = list(subsets(full))
    mu = {z: structure.mu_mask(z) for z in sets}
    checked = 0
    for X, Y in product(sets, repeat=2):
        if not is_smooth(structure, [X, Y]):
            continue
        for U in sets:
            if mu[Y] & ~(U | X) or mu[X] & ~U:
                continue
            checked += 1
            if X & Y & mu[U] & ~mu[Y]:
                return ConditionReport("cum1", False, (U, X, Y), checked)
    return ConditionReport("cum1", True, None, checked)


# the six-atom example -----------------------------------------------------

SIX_ATOMS = ("a", "b", "c", "d", "e", "f")
SIX_ATOM_EXAMPLE = """\
atoms: a b c d e f
a |~ b
b |~ a
a |~ c
a |~ f d
d c |~ b a
d c |~ e
f c b a |~ e
"""


def six_atom_example() -> SequentSet:
    return parse_sequents(SIX_ATOM_EXAMPLE)


def format_sequent(atoms: Sequence, x: int, y: int) -> str:
    return f"{fmt(x, [str(a) for a in atoms])} |~ {fmt(y, [str(a) for a in atoms])}"
