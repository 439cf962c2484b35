"""Belief change over finite point sets.

Sets of points (usually valuations) are bitmasks.  A revision operator
maps ``(X, A)`` to a subset of ``A``; contraction maps ``(X, A)`` to a
superset of ``X``; entrenchment relative to ``X`` is a predicate on pairs
``(A, B)``.  All three are wrapped in :class:`BeliefOp` so the postulate
checkers know what they are looking at.

Distance-based revision uses :class:`Distance`, an integer matrix with
optional identity and symmetry guarantees.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Sequence

import numpy as np

from .conditions import ConditionReport
from .errors import ConditionError, ContractError, InputError
from .logic import Formula, Language, ModelSet, models_of, theory_of
from .sets import bits, fmt, full, parse_braced


@dataclass(frozen=True)
class Distance:
    names: tuple[str, ...]
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.names)
        if len(self.matrix) != n or any(len(row) != n for row in self.matrix):
            raise InputError("distance matrix must be square over the point set")
        if any(v < 0 for row in self.matrix for v in row):
            raise InputError("distance values must be natural numbers")

    @property
    def n(self) -> int:
        return len(self.names)

    def __call__(self, a: int, b: int) -> int:
        return self.matrix[a][b]

    @property
    def respects_identity(self) -> bool:
        return all((self.matrix[i][j] == 0) == (i == j) for i in range(self.n) for j in range(self.n))

    @property
    def symmetric(self) -> bool:
        return all(self.matrix[i][j] == self.matrix[j][i] for i in range(self.n) for j in range(i))

    def between(self, x: int, y: int) -> int | None:
        """Set distance: the minimum over all pairs, None if a side is empty."""
        vals = [self.matrix[i][j] for i in bits(x) for j in bits(y)]
        return min(vals) if vals else None

    def to_text(self) -> str:
        lines = ["points: " + ",".join(self.names)]
        if self.symmetric:
            for i in range(1, self.n):
                lines.append(" ".join(str(self.matrix[i][j]) for j in range(i)))
        else:
            for row in self.matrix:
                lines.append(" ".join(map(str, row)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_function(cls, names: Sequence[str], fn: Callable[[int, int], int]) -> "Distance":
        n = len(names)
        return cls(tuple(names), tuple(tuple(fn(i, j) for j in range(n)) for i in range(n)))


def hamming(lang: Language) -> Distance:
    """Number of variables on which two valuations differ."""
    names = [format(i, f"0{lang.n}b")[::-1] if lang.n else "()" for i in range(lang.size)]
    return Distance.from_function(names, lambda a, b: bin(a ^ b).count("1"))


def random_distance(rng: random.Random, n: int, max_value: int = 4,
                    names: Sequence[str] | None = None) -> Distance:
    """Symmetric, identity-respecting distance with values in 1..max_value."""
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i):
            m[i][j] = m[j][i] = rng.randint(1, max_value)
    names = tuple(names) if names else tuple(f"p{i}" for i in range(n))
    return Distance(names, tuple(map(tuple, m)))


def parse_distance(text: str) -> Distance:
    """Read ``points: a,b,c`` followed by either the strict lower triangle
    (row i lists d(p_i, p_0) .. d(p_i, p_{i-1}); symmetric, zero diagonal)
    or the full square matrix."""
    rows = []
    names = None
    for raw in text.splitlines():
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if line.startswith("points:"):
            names = tuple(p.strip() for p in line[len("points:"):].split(",") if p.strip())
            continue
        try:
            rows.append([int(v) for v in line.replace(",", " ").split()])
        except ValueError:
            raise InputError(f"bad distance row {raw!r}") from None
    if names is None:
        raise InputError("missing 'points:' line")
    n = len(names)
    if len(set(names)) != n:
        raise InputError("duplicate point names")
    if [len(r) for r in rows] == list(range(1, n)):
        m = [[0] * n for _ in range(n)]
        for i, row in enumerate(rows, start=1):
            for j, v in enumerate(row):
                m[i][j] = m[j][i] = v
        return Distance(names, tuple(map(tuple, m)))
    if len(rows) == n and all(len(r) == n for r in rows):
        return Distance(names, tuple(map(tuple, rows)))
    raise InputError("expected a lower-triangular or square matrix")


# ---------------------------------------------------------------------------

def collective_revise(a: int, b: int, d: Distance) -> int:
    """Points of ``b`` realizing the minimal distance between ``a`` and ``b``."""
    best = d.between(a, b)
    if best is None:
        return 0
    out = 0
    for j in bits(b):
        if any(d(i, j) == best for i in bits(a)):
            out |= 1 << j
    return out


def individual_revise(a: int, b: int, d: Distance) -> int:
    """Union over x in ``a`` of the points of ``b`` closest to x."""
    if not b:
        return 0
    out = 0
    for i in bits(a):
        best = min(d(i, j) for j in bits(b))
        for j in bits(b):
            if d(i, j) == best:
                out |= 1 << j
    return out


def revise_theories(t: Iterable[Formula], t2: Iterable[Formula], lang: Language,
                    d: Distance | None = None) -> frozenset:
    """Theory of the models of ``t2`` closest to the models of ``t``."""
    d = d or hamming(lang)
    x = models_of(t, lang)
    y = models_of(t2, lang)
    return theory_of(ModelSet(lang, collective_revise(x.bits, y.bits, d)))


def neighbourhood(x: int, y: int, d: Distance) -> int:
    """Points at most as far from ``x`` as ``y`` is."""
    if not x or not y:
        raise ContractError("neighbourhood needs nonempty sets")
    r = d.between(x, y)
    out = 0
    for z in range(d.n):
        if d.between(x, 1 << z) <= r:
            out |= 1 << z
    return out


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BeliefOp:
    """A revision, contraction or entrenchment over ``n`` points."""

    kind: str  # "revision", "contraction" or "entrenchment"
    n: int
    fn: Callable = field(compare=False)

    def __post_init__(self):
        if self.kind not in ("revision", "contraction", "entrenchment"):
            raise InputError(f"unknown operator kind {self.kind!r}")

    def __call__(self, *args):
        return self.fn(*args)


def distance_revision(d: Distance) -> BeliefOp:
    cache: dict[tuple[int, int], int] = {}

    def rev(x, a):
        key = (x, a)
        if key not in cache:
            cache[key] = collective_revise(x, a, d)
        return cache[key]

    return BeliefOp("revision", d.n, rev)


def table_revision(n: int, table: dict[tuple[int, int], int]) -> BeliefOp:
    def rev(x, a):
        try:
            return table[(x, a)]
        except KeyError:
            raise InputError(f"operator table has no entry for ({x:#x}, {a:#x})") from None

    return BeliefOp("revision", n, rev)


def parse_operator_table(text: str, names: Sequence[str]) -> BeliefOp:
    """Lines ``{a,b} | {b,c} = {b}``."""
    index = {nm: i for i, nm in enumerate(names)}
    table = {}
    for raw in text.splitlines():
        line = raw.split("%", 1)[0].strip()
        if not line or line.startswith("points:"):
            continue
        try:
            left, res = line.split("=", 1)
            c, dd = left.split("|", 1)
            table[(parse_braced(c, index), parse_braced(dd, index))] = parse_braced(res, index)
        except ValueError as exc:
            raise InputError(f"bad operator line {raw!r}: {exc}") from None
    return table_revision(len(names), table)


def revision_from_contraction(c: BeliefOp) -> BeliefOp:
    U = full(c.n)
    return BeliefOp("revision", c.n, lambda x, a: c(x, U & ~a) & a)


def contraction_from_revision(r: BeliefOp) -> BeliefOp:
    U = full(r.n)
    return BeliefOp("contraction", r.n, lambda x, a: x | r(x, U & ~a))


def entrenchment_from_contraction(c: BeliefOp) -> BeliefOp:
    U = full(c.n)
    return BeliefOp("entrenchment", c.n,
                    lambda x, a, b: (a == U and b == U) or bool(c(x, a & b) & ~a))


def contraction_from_entrenchment(e: BeliefOp) -> BeliefOp:
    U = full(e.n)
    cache: dict[tuple[int, int], int] = {}

    def strictly(x, a, b):
        return e(x, a, b) and not e(x, b, a)

    def contr(x, a):
        if a == U:
            return x
        key = (x, a)
        if key not in cache:
            out = U
            for b in range(1 << e.n):
                if b & x == x and strictly(x, a, a | b):
                    out &= b
            cache[key] = out
        return cache[key]

    return BeliefOp("contraction", e.n, contr)


# ---------------------------------------------------------------------------
# postulates; each takes (op, U, x, a, b) and returns True when the instance is fine

def _rev_postulates():
    def p2(r, U, x, a, b):
        return r(x, a) & ~a == 0

    def p3(r, U, x, a, b):
        return (x & a) & ~r(x, a) == 0

    def p4(r, U, x, a, b):
        return not (x & a) or r(x, a) & ~(x & a) == 0

    def p5(r, U, x, a, b):
        return r(x, a) != 0 or a == 0

    def p7(r, U, x, a, b):
        return (r(x, a) & b) & ~r(x, a & b) == 0

    def p8(r, U, x, a, b):
        return not (r(x, a) & b) or r(x, a & b) & ~(r(x, a) & b) == 0

    return {"X|2": p2, "X|3": p3, "X|4": p4, "X|5": p5, "X|7": p7, "X|8": p8}


def _con_postulates():
    def p2(c, U, x, a, b):
        return x & ~c(x, a) == 0

    def p3(c, U, x, a, b):
        return x & ~a == 0 or c(x, a) == x

    def p4(c, U, x, a, b):
        return a == U or bool(c(x, a) & ~a)

    def p5(c, U, x, a, b):
        return (c(x, a) & a) & ~x == 0

    def p7(c, U, x, a, b):
        return c(x, a & b) & ~(c(x, a) | c(x, b)) == 0

    def p8(c, U, x, a, b):
        return not (c(x, a & b) & ~a) or c(x, a) & ~c(x, a & b) == 0

    return {"X⊖2": p2, "X⊖3": p3, "X⊖4": p4, "X⊖5": p5, "X⊖7": p7, "X⊖8": p8}


def _ee_postulates():
    # EE1 and EE4 quantify over a third set; handled with an extra loop
    def p2(e, U, x, a, b):
        return a & ~b != 0 or e(x, a, b)

    def p3(e, U, x, a, b):
        return e(x, a, a & b) or e(x, b, a & b)

    return {"EE2": p2, "EE3": p3}


REVISION_POSTULATES = _rev_postulates()
CONTRACTION_POSTULATES = _con_postulates()
ENTRENCHMENT_POSTULATES = _ee_postulates()

AGM_IDS = {
    **{k: "revision" for k in REVISION_POSTULATES},
    **{k: "contraction" for k in CONTRACTION_POSTULATES},
    "EE1": "entrenchment", "EE2": "entrenchment", "EE3": "entrenchment",
    "EE4": "entrenchment", "EE5": "entrenchment",
}
# The theory-side postulates coincide with the model-set ones once theories
# are identified with their model sets; closure and syntax independence are
# automatic.
THEORY_IDS = {
    "K*1": None, "K*2": "X|2", "K*3": "X|3", "K*4": "X|4", "K*5": "X|5", "K*6": None,
    "K*7": "X|7", "K*8": "X|8",
    "K-1": None, "K-2": "X⊖2", "K-3": "X⊖3", "K-4": "X⊖4", "K-5": "X⊖5", "K-6": None,
    "K-7": "X⊖7", "K-8": "X⊖8",
}
REVISION_SUITE = tuple(REVISION_POSTULATES)
CONTRACTION_SUITE = tuple(CONTRACTION_POSTULATES)
ENTRENCHMENT_SUITE = ("EE1", "EE2", "EE3", "EE4", "EE5")


def normalize_agm(which: str) -> str:
    w = which.strip().strip("()").replace(" ", "")
    w = w.replace("∗", "*").replace("−", "-").replace("X-", "X⊖").replace("Xominus", "X⊖")
    w = w.replace("Xo", "X⊖").replace("X/", "X|")
    if w in AGM_IDS or w in THEORY_IDS:
        return w
    raise InputError(f"unknown postulate {which!r}")


def _instances(n: int, sample: int | None, seed: int, arity: int, xs: Sequence[int] | None):
    size = 1 << n
    xs = list(xs) if xs is not None else list(range(1, size))
    if sample is None:
        for x in xs:
            for rest in product(range(size), repeat=arity):
                yield (x, *rest)
    else:
        rng = random.Random(seed)
        for _ in range(sample):
            yield (rng.choice(xs), *(rng.randrange(size) for _ in range(arity)))


def check_agm(op: BeliefOp, which: str, sample: int | None = None, seed: int = 0,
              xs: Sequence[int] | None = None, names: Sequence[str] | None = None) -> ConditionReport:
    """Check one postulate, quantifying over nonempty ``X`` (consistent
    belief sets) and all ``A``, ``B``.  ``sample`` switches to seeded random
    instances; ``xs`` restricts the belief sets."""
    key = normalize_agm(which)
    if key in THEORY_IDS:
        target = THEORY_IDS[key]
        if target is None:
            return ConditionReport(key, True, None, 0, "automatic for model-set operators")
        rep = check_agm(op, target, sample, seed, xs, names)
        return ConditionReport(key, rep.holds, rep.counterexample, rep.checked, f"via {target}")
    kind = AGM_IDS[key]
    if op.kind != kind:
        raise InputError(f"{key} is a {kind} postulate, got a {op.kind} operator")
    U = full(op.n)
    checked = 0
    if kind == "entrenchment" and key in ("EE1", "EE4", "EE5"):
        return _check_ee_quantified(op, key, sample, seed, xs)
    table = {**REVISION_POSTULATES, **CONTRACTION_POSTULATES, **ENTRENCHMENT_POSTULATES}[key]
    for x, a, b in _instances(op.n, sample, seed, 2, xs):
        checked += 1
        if not table(op, U, x, a, b):
            return ConditionReport(key, False, (x, a, b), checked)
    return ConditionReport(key, True, None, checked)


def _check_ee_quantified(e: BeliefOp, key: str, sample, seed, xs) -> ConditionReport:
    U = full(e.n)
    size = 1 << e.n
    checked = 0
    if key == "EE1":
        for x, a, b, c in _instances(e.n, sample, seed, 3, xs):
            checked += 1
            if e(x, a, b) and e(x, b, c) and not e(x, a, c):
                return ConditionReport(key, False, (x, a, b, c), checked)
        return ConditionReport(key, True, None, checked)
    for x, a in _instances(e.n, sample, seed, 1, xs):
        checked += 1
        below_all = all(e(x, a, b) for b in range(size))
        if key == "EE4":
            if bool(x & ~a) != below_all:
                return ConditionReport(key, False, (x, a), checked)
        else:
            if all(e(x, b, a) for b in range(size)) and a != U:
                return ConditionReport(key, False, (x, a), checked)
    return ConditionReport(key, True, None, checked)


SUITES = {"revision": REVISION_SUITE, "contraction": CONTRACTION_SUITE,
          "entrenchment": ENTRENCHMENT_SUITE}


def check_suite(op: BeliefOp, sample: int | None = None, seed: int = 0) -> list[ConditionReport]:
    return [check_agm(op, k, sample, seed) for k in SUITES[op.kind]]


def interdefine(source: BeliefOp, to: str, check: bool = True) -> BeliefOp:
    """Transform between revision, contraction and entrenchment.

    With ``check`` the source suite is verified first (exhaustively, so
    keep ``n`` small) and a failing postulate raises ConditionError.
    """
    if to not in SUITES:
        raise InputError(f"unknown target {to!r}")
    if check:
        for rep in check_suite(source):
            if not rep.holds:
                raise ConditionError(f"source {source.kind} violates {rep.name}", rep)
    if source.kind == to:
        return source
    if source.kind == "revision":
        c = contraction_from_revision(source)
        return c if to == "contraction" else entrenchment_from_contraction(c)
    if source.kind == "contraction":
        return revision_from_contraction(source) if to == "revision" else entrenchment_from_contraction(source)
    c = contraction_from_entrenchment(source)
    return c if to == "contraction" else revision_from_contraction(c)


def operators_equal(p: BeliefOp, q: BeliefOp, xs: Sequence[int] | None = None) -> tuple[int, int] | None:
    """First ``(X, A)`` where two revisions or contractions differ, or None."""
    size = 1 << p.n
    for x in (xs if xs is not None else range(1, size)):
        for a in range(size):
            if p(x, a) != q(x, a):
                return (x, a)
    return None


# ---------------------------------------------------------------------------

def check_loop(op: Callable[[int, int], int] | BeliefOp | Distance, n: int | None = None,
               max_len: int = 6, kind: str = "|Loop", domain: Sequence[int] | None = None,
               names: Sequence[str] | None = None) -> ConditionReport:
    """Loop condition over chains X_0 .. X_k, 1 <= k <= max_len.

    Premises: (X_i | (X_{i-1} u X_{i+1})) meets X_{i-1} for i = 1..k with
    X_{k+1} = X_0; conclusion: (X_0 | (X_k u X_1)) meets X_1.  The theory
    form is the same statement about model sets.  Chains are explored as
    walks over pairs of consecutive sets.
    """
    if kind not in ("|Loop", "*Loop"):
        raise InputError(f"unknown loop kind {kind!r}")
    if max_len > 8 or max_len < 1:
        raise InputError("max_len must be between 1 and 8")
    if isinstance(op, Distance):
        n = op.n
        op = distance_revision(op)
    if isinstance(op, BeliefOp):
        n = op.n
    if n is None:
        raise InputError("point count required for a bare operator")
    dom = list(domain) if domain is not None else list(range(1, 1 << n))
    m = len(dom)
    if m == 0:
        return ConditionReport(kind, True, None, 0)
    # P[a, b, c]: (X_b | (X_a u X_c)) meets X_a
    P = np.zeros((m, m, m), dtype=bool)
    for ia, a in enumerate(dom):
        for ib, b in enumerate(dom):
            for ic, c in enumerate(dom):
                P[ia, ib, ic] = bool(op(b, a | c) & a)
    # pair (a, b) -> (b, c) allowed when P[a, b, c]
    T = np.zeros((m * m, m * m), dtype=bool)
    for ia in range(m):
        for ib in range(m):
            row = ia * m + ib
            T[row, ib * m: ib * m + m] = P[ia, ib, :]
    # end check for start s = (x0, x1) and current pair (a, b) = (X_{k-1}, X_k):
    # P[a, b, x0] and not P[x1, x0, b]
    idx = np.arange(m)
    s0 = np.repeat(idx, m)  # x0 of start
    s1 = np.tile(idx, m)    # x1 of start
    e_a = np.repeat(idx, m)
    e_b = np.tile(idx, m)
    premise = P[e_a[None, :], e_b[None, :], s0[:, None]]
    concl = P[s1[:, None], s0[:, None], e_b[None, :]]
    bad = premise & ~concl
    V = np.eye(m * m, dtype=bool)
    steps = [V]
    checked = 0
    for k in range(1, max_len + 1):
        if k > 1:
            V = (V.astype(np.uint8) @ T.astype(np.uint8)) > 0
            steps.append(V)
        hit = V & bad
        checked += int(V.sum())
        if hit.any():
            s, e = map(int, np.argwhere(hit)[0])
            chain = _recover_chain(steps, T, s, e, m)
            return ConditionReport(kind, False, tuple(dom[i] for i in chain), checked,
                                   f"chain of length {k}")
    return ConditionReport(kind, True, None, checked)


def _recover_chain(steps, T, s, e, m) -> list[int]:
    """Indices X_0 .. X_k of a walk from start pair ``s`` to end pair ``e``."""
    pairs = [e]
    for k in range(len(steps) - 1, 0, -1):
        cur = pairs[-1]
        prev = next(p for p in range(m * m) if steps[k - 1][s, p] and T[p, cur])
        pairs.append(prev)
    pairs.reverse()
    chain = [pairs[0] // m, pairs[0] % m]
    for p in pairs[1:]:
        chain.append(p % m)
    return chain


# ---------------------------------------------------------------------------

def ambiguous_distance_pair() -> tuple[Distance, Distance]:
    """Two distances on four points that order distances from each point in
    the same way but disagree on whether d(x,y) exceeds d(a,b).

    Point order is a, b, x, y (resp. a', b', x, y), so the renaming is the
    identity on indices.
    """
    # from a: y < b < x; from b: y < a < x; from y: a = b < x; from x: y < a = b
    one = {(0, 3): 1, (1, 3): 1, (0, 1): 2, (2, 3): 3, (0, 2): 4, (1, 2): 4}
    # same orders, but now d(a', b') > d(x, y)
    two = {(0, 3): 1, (1, 3): 1, (2, 3): 3, (0, 1): 4, (0, 2): 5, (1, 2): 5}

    def build(names, vals):
        return Distance.from_function(names, lambda i, j: 0 if i == j else vals[(min(i, j), max(i, j))])

    return build(("a", "b", "x", "y"), one), build(("a'", "b'", "x", "y"), two)


@dataclass
class AmbiguousDistanceReport:
    entries: int
    equal: int
    differences: list[tuple[int, int, int, int]]
    order_constraints_hold: bool
    d_xy_vs_ab: tuple[bool, bool]

    @property
    def indistinguishable(self) -> bool:
        return not self.differences and self.entries == self.equal


def _order_constraints_hold(d: Distance) -> bool:
    a, b, x, y = range(4)
    return (d(a, y) < d(a, b) < d(a, x) and d(b, y) < d(b, a) < d(b, x)
            and d(y, a) == d(y, b) < d(y, x) and d(x, y) < d(x, a) == d(x, b)
            and d.respects_identity and d.symmetric)


def ambiguous_distance_demo() -> AmbiguousDistanceReport:
    d1, d2 = ambiguous_distance_pair()
    diffs = []
    entries = equal = 0
    for c in range(1, 16):
        for dd in range(1, 16):
            entries += 1
            r1 = collective_revise(c, dd, d1)
            r2 = collective_revise(c, dd, d2)
            if r1 == r2:
                equal += 1
            else:
                diffs.append((c, dd, r1, r2))
    return AmbiguousDistanceReport(entries, equal, diffs, _order_constraints_hold(d1) and _order_constraints_hold(d2),
                                   (d1(2, 3) > d1(0, 1), d2(2, 3) > d2(0, 1)))


def individual_rank_search(max_value: int = 4) -> list[Distance]:
    """Identity-respecting distances on a, b, c (values up to ``max_value``)
    whose individual variant gives {a,b}^{b,c} = {b} and {a,c}^{b,c} = {c}."""
    names = ("a", "b", "c")
    found = []
    off = [(i, j) for i in range(3) for j in range(3) if i != j]
    for vals in product(range(1, max_value + 1), repeat=len(off)):
        table = dict(zip(off, vals))
        d = Distance.from_function(names, lambda i, j: 0 if i == j else table[(i, j)])
        if individual_revise(0b011, 0b110, d) == 0b010 and individual_revise(0b101, 0b110, d) == 0b100:
            found.append(d)
    return found


def describe_sets(masks: Iterable[int], names: Sequence[str]) -> str:
    return ", ".join(fmt(m, names) for m in masks)
