"""Abstract size: ideals of small subsets per base set, and their coherence.

A :class:`SizeSystem` stores, for each base set ``X`` of its domain, the
ideal ``I(X)`` of small subsets.  Big sets are complements of small ones;
medium sets are neither.  Sets are bitmasks over the universe.

Condition ids follow the usual names: ``FAll``, ``iM``, ``eMI``, ``eMF``,
``I_3``, ``I_omega``, ``M+_3``, ``M+omega(4)``, ``M++(1)`` and so on;
:func:`normalize_size_condition` lists the accepted spellings.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Callable, Iterable, Iterator, Sequence

from .choice import ChoiceFunction
from .conditions import ConditionReport, check_mu_condition
from .errors import ContractError, InputError
from .sets import bits, canonical_order, fmt, full, parse_braced, subsets


@dataclass(frozen=True)
class SizeSystem:
    elements: tuple[str, ...]
    ideals: tuple[tuple[int, frozenset[int]], ...]

    def __post_init__(self):
        for X, ideal in self.ideals:
            if X == 0:
                raise InputError("the empty set cannot be a base set")
            for A in ideal:
                if A & ~X:
                    raise InputError(f"ideal member outside its base set {self.names(X)}")

    @classmethod
    def from_ideals(cls, elements: Sequence[str], ideals: dict[int, Iterable[int]]) -> "SizeSystem":
        return cls(tuple(elements), tuple((X, frozenset(ideals[X])) for X in canonical_order(ideals)))

    @classmethod
    def from_filters(cls, elements: Sequence[str], filters: dict[int, Iterable[int]]) -> "SizeSystem":
        return cls.from_ideals(elements, {X: {X & ~A for A in fs} for X, fs in filters.items()})

    @cached_property
    def table(self) -> dict[int, frozenset[int]]:
        return dict(self.ideals)

    @cached_property
    def big(self) -> dict[int, frozenset[int]]:
        return {X: frozenset(X & ~A for A in ideal) for X, ideal in self.ideals}

    @property
    def domain(self) -> list[int]:
        return [X for X, _ in self.ideals]

    @property
    def universe(self) -> int:
        u = 0
        for X, _ in self.ideals:
            u |= X
        return u

    def names(self, mask: int) -> str:
        return fmt(mask, self.elements)

    def I(self, X: int) -> frozenset[int]:
        return self.table[X]

    def F(self, X: int) -> frozenset[int]:
        return self.big[X]

    def small(self, A: int, X: int) -> bool:
        return A in self.table[X]

    def is_big(self, A: int, X: int) -> bool:
        return A in self.big[X]

    def medium(self, A: int, X: int) -> bool:
        return not self.small(A, X) and not self.is_big(A, X)

    def m_plus(self, A: int, X: int) -> bool:
        """Not small: medium or big."""
        return A & ~X == 0 and A not in self.table[X]

    def m_minus(self, A: int, X: int) -> bool:
        """Not big: small or medium."""
        return A & ~X == 0 and A not in self.big[X]

    def to_text(self) -> str:
        lines = ["elements: " + ",".join(self.elements)]
        for X, ideal in self.ideals:
            members = ", ".join(self.names(A) for A in canonical_order(ideal))
            lines.append(f"I{self.names(X)} = {members}")
        return "\n".join(lines) + "\n"


def parse_size_system(text: str) -> SizeSystem:
    """``elements: a,b,c`` then lines ``I{a,b} = {}, {a}`` or ``F{a,b} = {a,b}, {b}``."""
    elements = None
    ideals: dict[int, set[int]] = {}
    for raw in text.replace(";", "\n").splitlines():
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if line.startswith("elements:"):
            elements = [e.strip() for e in line[len("elements:"):].split(",") if e.strip()]
            continue
        if elements is None:
            raise InputError("'elements:' must come first")
        index = {e: i for i, e in enumerate(elements)}
        kind = line[0]
        if kind not in "IF" or "=" not in line:
            raise InputError(f"bad size line {raw!r}")
        head, body = line[1:].split("=", 1)
        try:
            X = parse_braced(head, index)
            members = [parse_braced(m, index) for m in _split_sets(body)]
        except ValueError as exc:
            raise InputError(f"bad size line {raw!r}: {exc}") from None
        if kind == "F":
            members = [X & ~A for A in members]
        ideals.setdefault(X, set()).update(members)
    if elements is None:
        raise InputError("missing 'elements:' line")
    return SizeSystem.from_ideals(elements, ideals)


def _split_sets(body: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in body:
        if ch == "{":
            depth += 1
        if depth:
            cur += ch
        if ch == "}":
            depth -= 1
            if depth == 0:
                out.append(cur)
                cur = ""
    return out


# ---------------------------------------------------------------------------
# bridge to choice functions

def size_from_mu(f: ChoiceFunction) -> SizeSystem:
    """Principal system: the big subsets of X are the sets between f(X) and X."""
    ideals = {}
    for X in f.domain:
        if X == 0:
            continue
        fx = f.table[X]
        ideals[X] = {A for A in subsets(X) if A & fx == 0}
    return SizeSystem.from_ideals(f.elements, ideals)


def mu_from_size(s: SizeSystem) -> ChoiceFunction:
    """f(X) is the smallest big subset of X; fails if there is none."""
    table = {}
    for X in s.domain:
        big = s.F(X)
        if not big:
            raise ContractError(f"no big subsets of {s.names(X)}")
        m = X
        for B in big:
            m &= B
        if m not in big:
            raise ContractError(f"big subsets of {s.names(X)} have no smallest element")
        table[X] = m
    return ChoiceFunction(s.elements, table)


# ---------------------------------------------------------------------------
# conditions

def _cover_number(X: int, ideal: frozenset[int], limit: int) -> int | None:
    """Least k <= limit such that k ideal members cover X, else None."""
    reach = {0}
    members = [A for A in ideal if A]
    if X == 0:
        return 0
    for k in range(1, limit + 1):
        reach = {r | A for r in reach for A in members} | reach
        if X in reach:
            return k
    return None


def _first_cover(X: int, ideal: frozenset[int], k: int) -> tuple[int, ...] | None:
    members = [A for A in canonical_order(ideal)]
    # breadth-first with parent pointers so the witness is a concrete family
    parent: dict[int, tuple[int, int] | None] = {0: None}
    layer = [0]
    for _ in range(k):
        nxt = []
        for r in layer:
            for A in members:
                u = r | A
                if u not in parent:
                    parent[u] = (r, A)
                    nxt.append(u)
        layer = nxt
    if X not in parent:
        return None
    fam, cur = [], X
    while parent[cur] is not None:
        r, A = parent[cur]
        fam.append(A)
        cur = r
    return tuple(reversed(fam)) or (0,)


def _per_base(check: Callable[[SizeSystem, int], tuple | None]):
    def run(s: SizeSystem) -> tuple[bool, tuple | None, int]:
        n = 0
        for X in s.domain:
            n += 1
            w = check(s, X)
            if w is not None:
                return False, w, n
        return True, None, n
    return run


def _pairs(check: Callable[[SizeSystem, int, int], tuple | None]):
    def run(s: SizeSystem) -> tuple[bool, tuple | None, int]:
        n = 0
        for X in s.domain:
            for Y in s.domain:
                n += 1
                w = check(s, X, Y)
                if w is not None:
                    return False, w, n
        return True, None, n
    return run


def _f_empty(s, X):
    return (X,) if X in s.I(X) else None


def _f_all(s, X):
    return (X,) if 0 not in s.I(X) else None


def _i_down(s, X):
    for B in canonical_order(s.I(X)):
        for A in subsets(B):
            if A not in s.I(X):
                return (X, A, B)
    return None


def _i_n(n):
    def check(s, X):
        if _cover_number(X, s.I(X), n) is not None:
            return (X, *_first_cover(X, s.I(X), n))
        return None
    return check


def _i_omega(s, X):
    ideal = canonical_order(s.I(X))
    for A in ideal:
        for B in ideal:
            if A | B not in s.I(X):
                return (X, A, B)
    return None


def _ultra(s, X):
    for A in subsets(X):
        if A not in s.F(X) and X & ~A not in s.F(X):
            return (X, A)
    return None


def _emi1(s, X, Y):
    if X & ~Y or X == Y:
        return None
    for A in canonical_order(s.I(X)):
        if A not in s.I(Y):
            return (X, Y, A)
    return None


def _emi2(s, X, Y):
    if X & ~Y or X == Y:
        return None
    for A in subsets(X):
        if s.m_minus(A, X) and not s.m_minus(A, Y):
            return (X, Y, A)
    return None


def _emf1(s, X, Y):
    if X & ~Y or X == Y:
        return None
    for A in canonical_order(s.F(Y)):
        if A & ~X == 0 and A not in s.F(X):
            return (X, Y, A)
    return None


def _emf2(s, X, Y):
    if X & ~Y or X == Y:
        return None
    for A in subsets(X):
        if s.m_plus(A, Y) and not s.m_plus(A, X):
            return (X, Y, A)
    return None


def _disj(plus: bool):
    def check(s, X, Y):
        dom = s.table
        if X | Y not in dom:
            return None
        if not plus and X & Y:
            return None
        for A in canonical_order(s.I(X)):
            for B in canonical_order(s.I(Y)):
                if plus and (X & ~A) & (Y & ~B):
                    continue
                if A | B not in s.I(X | Y):
                    return (X, Y, A, B)
        return None
    return check


def _m_plus_n(n):
    """X_1 in F(X_2), ..., X_{n-1} in F(X_n)  =>  X_1 not small in X_n."""
    def check(s, Z):
        level = {Z}
        for _ in range(n - 1):
            nxt = set()
            for Y in level:
                if Y in s.table:
                    nxt.update(s.F(Y))
            level = nxt
        for A in canonical_order(level):
            if A in s.I(Z):
                return (Z, A)
        return None
    return check


def _m_omega(variant):
    def check(s, X):
        dom = s.table
        if variant == 1:
            for A in canonical_order(s.F(X)):
                for Y in s.domain:
                    if X & ~Y == 0 and s.m_plus(X, Y) and not s.m_plus(A, Y):
                        return (X, Y, A)
        elif variant == 2:
            for A in subsets(X):
                if not s.m_plus(A, X):
                    continue
                for Y in s.domain:
                    if X & ~Y == 0 and s.is_big(X, Y) and not s.m_plus(A, Y):
                        return (X, Y, A)
        elif variant == 3:
            for A in canonical_order(s.F(X)):
                for Y in s.domain:
                    if X & ~Y == 0 and s.is_big(X, Y) and not s.is_big(A, Y):
                        return (X, Y, A)
        elif variant == 4:
            for A in canonical_order(s.I(X)):
                for B in canonical_order(s.I(X)):
                    R = X & ~B
                    if R in dom and (A & ~B) not in s.I(R):
                        return (X, A, B)
        else:
            for A in canonical_order(s.F(X)):
                for B in canonical_order(s.I(X)):
                    R = X & ~B
                    if R in dom and (A & ~B) not in s.F(R):
                        return (X, A, B)
        return None
    return check


def _m_plusplus(variant):
    def check(s, X):
        dom = s.table
        if variant == 3:
            for A in subsets(X):
                if not s.m_plus(A, X):
                    continue
                for Y in s.domain:
                    if X & ~Y == 0 and s.m_plus(X, Y) and not s.m_plus(A, Y):
                        return (X, Y, A)
            return None
        src = s.I(X) if variant == 1 else s.F(X)
        for A in canonical_order(src):
            for B in subsets(X):
                if B in s.F(X):
                    continue
                R = X & ~B
                if R not in dom:
                    continue
                ok = (A & ~B) in (s.I(R) if variant == 1 else s.F(R))
                if not ok:
                    return (X, A, B)
        return None
    return check


@dataclass(frozen=True)
class SizeCondition:
    key: str
    symbol: str
    run: Callable[[SizeSystem], tuple[bool, tuple | None, int]]


SIZE_CONDITIONS: dict[str, SizeCondition] = {}


def _register(key, symbol, run, *aliases):
    SIZE_CONDITIONS[key] = SizeCondition(key, symbol, run)
    for a in aliases:
        _ALIASES[a] = key


_ALIASES: dict[str, str] = {}

_register("F-empty", "(F∅)", _per_base(_f_empty), "F∅", "IAll", "I-all", "1*s", "I_1", "F_1", "F∩1", "I∪1")
_register("FAll", "(FAll)", _per_base(_f_all), "F-all", "I∅", "I-empty", "Opt")
_register("iM", "(iM)", _per_base(_i_down), "F↑", "I↓", "F-up", "I-down")
_register("I_omega", "(I_ω)", _per_base(_i_omega), "I_ω", "F_ω", "F∩", "I∪", "F∩ω", "I∪ω", "<ω*s",
          "F_omega", "omega*s")
_register("ultrafilter", "(ultrafilter)", _per_base(_ultra), "UF")
_register("eMI", "(eMI)", _pairs(_emi1), "eMI1", "eMI(1)", "R↑", "R-up")
_register("eMI2", "(eMI)(2)", _pairs(_emi2), "eMI(2)")
_register("eMF", "(eMF)", _pairs(_emf1), "eMF1", "eMF(1)")
_register("eMF2", "(eMF)(2)", _pairs(_emf2), "eMF(2)")
_register("R-cup-disj", "(R∪disj)", _pairs(_disj(False)), "R∪disj", "I∪disj", "I-cup-disj", "F∪disj")
_register("R-cup-disj+", "(R∪disj+)", _pairs(_disj(True)), "R∪disj+", "I∪disj+")
for _n in range(2, 6):
    _register(f"I_{_n}", f"(I_{_n})", _per_base(_i_n(_n)), f"F_{_n}", f"F∩{_n}", f"I∪{_n}", f"{_n}*s")
    _register(f"M+_{_n}", f"(M+_{_n})", _per_base(_m_plus_n(_n)), f"R↓{_n}", f"R-down{_n}", f"M+{_n}")
_ALIASES.update({"F∩'": "I_2", "I∪'": "I_2", "F∩′": "I_2", "I∪′": "I_2"})
for _v in range(1, 6):
    _register(f"M+omega({_v})", f"(M+_ω)({_v})", _per_base(_m_omega(_v)),
              f"M+_ω({_v})", f"M+ω({_v})", f"R↓ω({_v})", f"R-down-omega({_v})", f"M+_omega({_v})")
for _v in range(1, 4):
    _register(f"M++({_v})", f"(M++)({_v})", _per_base(_m_plusplus(_v)),
              f"R↓↓({_v})", f"R-down-down({_v})")
_ALIASES.update({"R↓": "M+omega(4)", "R↓ω": "M+omega(4)", "M++": "M++(1)", "R↓↓": "M++(1)",
                 "M+omega": "M+omega(4)"})


def normalize_size_condition(name: str) -> str:
    raw = name.strip()
    if raw.startswith("(") and raw.endswith(")") and raw.count("(") == 1:
        raw = raw[1:-1]
    raw = raw.replace(" ", "")
    if raw in SIZE_CONDITIONS:
        return raw
    if raw in _ALIASES:
        return _ALIASES[raw]
    alt = raw.replace("omega", "ω")
    if alt in _ALIASES:
        return _ALIASES[alt]
    raise InputError(f"unknown size condition {name!r}")


def check_size_condition(s: SizeSystem, name: str) -> ConditionReport:
    key = normalize_size_condition(name)
    cond = SIZE_CONDITIONS[key]
    holds, witness, checked = cond.run(s)
    return ConditionReport(cond.symbol, holds, witness, checked)


def size_holds(s: SizeSystem, name: str) -> bool:
    return SIZE_CONDITIONS[normalize_size_condition(name)].run(s)[0]


def level(s: SizeSystem, max_n: int = 5) -> int:
    """Largest n <= max_n such that the system is level n (0 if not even basic)."""
    if not all(size_holds(s, c) for c in ("iM", "eMI", "eMF")):
        return 0
    if not size_holds(s, "F-empty"):
        return 0
    best = 1
    for n in range(2, max_n + 1):
        if size_holds(s, f"I_{n}"):
            best = n
        else:
            break
    return best


# ---------------------------------------------------------------------------
# logical rule forms read off a size system: X |~ B iff X - B is small in X

def _nm(s: SizeSystem, X: int, B: int) -> bool:
    return (X & ~B) in s.table[X]


def _consequences(s: SizeSystem, X: int) -> list[int]:
    U = s.universe
    return [B for B in subsets(U) if _nm(s, X, B)]


def check_size_rule(s: SizeSystem, rule: str, n: int) -> ConditionReport:
    """``AND_n``, ``OR_n``, ``CM_n`` (nonmonotonic conclusion) or ``CM_n(1)``
    (classical conclusion) over the power set of the universe."""
    U = s.universe
    dom = s.table
    checked = 0
    if rule in ("AND_n", "CM_n(1)"):
        k = n
        for X in s.domain:
            cons = _consequences(s, X)
            for combo in product(cons, repeat=k):
                checked += 1
                m = X
                for B in combo:
                    m &= B
                if m == 0:
                    return ConditionReport(f"({rule.replace('_n', f'_{n}')})", False, (X, *combo), checked)
        return ConditionReport(f"({rule.replace('_n', f'_{n}')})", True, None, checked)
    if rule == "CM_n":
        for X in s.domain:
            cons = _consequences(s, X)
            for combo in product(cons, repeat=n - 1):
                checked += 1
                Z = X
                for B in combo[:-1]:
                    Z &= B
                last = combo[-1]
                if Z == 0 or (Z in dom and _nm(s, Z, U & ~last)):
                    return ConditionReport(f"(CM_{n})", False, (X, *combo), checked)
        return ConditionReport(f"(CM_{n})", True, None, checked)
    if rule == "OR_n":
        for B in subsets(U):
            sources = [X for X in s.domain if _nm(s, X, B)]
            for combo in product(sources, repeat=n - 1):
                checked += 1
                V = 0
                for X in combo:
                    V |= X
                if V in dom and _nm(s, V, U & ~B):
                    return ConditionReport(f"(OR_{n})", False, (*combo, B), checked)
        return ConditionReport(f"(OR_{n})", True, None, checked)
    raise InputError(f"unknown size rule {rule!r}")


# ---------------------------------------------------------------------------
# named systems

def independence_em_systems() -> tuple[SizeSystem, SizeSystem]:
    """U = {x,y,z}, X = {x,z}.  First: big in U iff containing z, only X big
    in X.  Second: only U big in U, big in X iff containing z."""
    names = ("x", "y", "z")
    U, X = 0b111, 0b101
    z = 0b100
    first = SizeSystem.from_filters(names, {U: {A for A in subsets(U) if A & z}, X: {X}})
    second = SizeSystem.from_filters(names, {U: {U}, X: {A for A in subsets(X) if A & z}})
    return first, second


def level_system(n: int) -> SizeSystem:
    """Level n but not level n+1: on {1..n+1} the singletons are small in U,
    nothing nonempty is small elsewhere."""
    names = tuple(str(i) for i in range(1, n + 2))
    U = full(n + 1)
    ideals = {X: {0} for X in range(1, U + 1)}
    ideals[U] = {0} | {1 << i for i in range(n + 1)}
    return SizeSystem.from_ideals(names, ideals)


def or_without_and_system(n: int) -> SizeSystem:
    """Singletons of {1..n} are small in {1..n} and in {1..n+1}; nothing else is."""
    names = tuple(str(i) for i in range(1, n + 2))
    U = full(n + 1)
    X = full(n)
    single = {0} | {1 << i for i in range(n)}
    ideals = {Y: {0} for Y in range(1, U + 1)}
    ideals[U] = set(single)
    ideals[X] = set(single)
    return SizeSystem.from_ideals(names, ideals)


def cm_without_and_system(n: int) -> SizeSystem:
    """Big sets contain n+1 wherever n+1 is present; singletons of {1..n}
    small in {1..n}; otherwise only the base set is big."""
    names = tuple(str(i) for i in range(1, n + 2))
    U = full(n + 1)
    X = full(n)
    top = 1 << n
    filters = {}
    for Y in range(1, U + 1):
        if Y & top:
            filters[Y] = {A for A in subsets(Y) if A & top}
        else:
            filters[Y] = {Y}
    filters[X] = {X & ~A for A in ({0} | {1 << i for i in range(n)})}
    return SizeSystem.from_filters(names, filters)


# ---------------------------------------------------------------------------
# enumeration and sweeps

def _down_closed_ideals(X: int) -> list[frozenset[int]]:
    """All families of subsets of X that contain the empty set and are closed downward."""
    subs = list(subsets(X))
    out = []
    for pick in range(1 << len(subs)):
        fam = {subs[i] for i in range(len(subs)) if pick >> i & 1}
        if 0 not in fam:
            continue
        if all(all(a in fam for a in subsets(b)) for b in fam):
            out.append(frozenset(fam))
    return out


def enumerate_systems(n: int) -> Iterator[SizeSystem]:
    """All systems on n points over all nonempty base sets whose ideals are
    down-closed and contain the empty set."""
    names = tuple(chr(ord("a") + i) for i in range(n))
    domain = list(range(1, 1 << n))
    options = [_down_closed_ideals(X) for X in domain]
    for combo in product(*options):
        yield SizeSystem(names, tuple(zip(domain, combo)))


def random_system(rng: random.Random, n: int, p: float = 0.3) -> SizeSystem:
    """Arbitrary families: each subset of each base set is small with probability p."""
    names = tuple(chr(ord("a") + i) for i in range(n))
    ideals = {}
    for X in range(1, 1 << n):
        ideals[X] = {A for A in subsets(X) if rng.random() < p}
    return SizeSystem.from_ideals(names, ideals)


@dataclass
class SweepReport:
    name: str
    systems: int
    premises_met: int
    violations: list

    @property
    def holds(self) -> bool:
        return not self.violations


def _systems(bound: int, sample: int, seed: int) -> Iterator[SizeSystem]:
    for n in range(1, min(bound, 3) + 1):
        yield from enumerate_systems(n)
    if bound >= 4:
        rng = random.Random(seed)
        for _ in range(sample):
            yield random_system(rng, 4, p=rng.choice((0.1, 0.2, 0.35)))


def not_2s_sweep(bound: int = 4, sample: int = 2000, seed: int = 0) -> SweepReport:
    """A base set satisfying (M++) but not (I_omega) forces some base set failing (I_2)."""
    count = met = 0
    bad = []
    m_pp = _m_plusplus(1)
    for s in _systems(bound, sample, seed):
        count += 1
        trigger = [X for X in s.domain if m_pp(s, X) is None and _i_omega(s, X) is not None]
        if not trigger:
            continue
        met += 1
        if size_holds(s, "I_2"):
            bad.append(s)
    return SweepReport("M++ without I_omega forces a (I_2) failure", count, met, bad)


def i_em_chain_sweep(n: int, bound: int = 4, sample: int = 2000, seed: int = 0) -> list[SweepReport]:
    """(I_n) + (eMI) => (M+_n) and (I_omega) + (eMF) => (M+omega)(4)."""
    reps = [SweepReport(f"(I_{n})+(eMI) => (M+_{n})", 0, 0, []),
            SweepReport("(I_ω)+(eMF) => (M+_ω)(4)", 0, 0, []),
            SweepReport("(I_ω)+(eMI) => (M+_ω)(3)", 0, 0, [])]
    for s in _systems(bound, sample, seed):
        for r in reps:
            r.systems += 1
        if size_holds(s, f"I_{n}") and size_holds(s, "eMI"):
            reps[0].premises_met += 1
            if not size_holds(s, f"M+_{n}"):
                reps[0].violations.append(s)
        if size_holds(s, "I_omega"):
            if size_holds(s, "eMF"):
                reps[1].premises_met += 1
                if not size_holds(s, "M+omega(4)"):
                    reps[1].violations.append(s)
            if size_holds(s, "eMI"):
                reps[2].premises_met += 1
                if not size_holds(s, "M+omega(3)"):
                    reps[2].violations.append(s)
    return reps


# ---------------------------------------------------------------------------
# size <-> choice function rows

SIZE_MU_ROWS: dict[int, tuple[tuple[str, ...], str]] = {
    1: (("eMI",), "mu-wOR"),
    2: (("eMI", "I_omega"), "mu-OR"),
    3: (("eMI", "I_omega"), "mu-PR"),
    4: (("R-cup-disj",), "mu-disjOR"),
    5: (("M+omega(4)", "M+omega(5)"), "mu-CM"),
    6: (("M++(1)", "M++(2)"), "mu-RatM"),
    7: (("I_omega",), "mu-AND"),
}


@dataclass
class SizeRowReport:
    row: int
    instances: int
    forward_failures: list  # size side holds, choice side fails
    backward_failures: list  # choice side holds, size side fails

    @property
    def holds(self) -> bool:
        return not self.forward_failures and not self.backward_failures


def _choice_functions_without_empty(n: int) -> Iterator[ChoiceFunction]:
    names = tuple(chr(ord("a") + i) for i in range(n))
    domain = list(range(1, 1 << n))
    for values in product(*[list(subsets(X)) for X in domain]):
        yield ChoiceFunction(names, dict(zip(domain, values)))


def verify_size_mu_row(row: int, bound: int = 3, limit: int | None = 10) -> SizeRowReport:
    """Both directions of a size/choice correspondence on all choice functions
    over nonempty subsets of universes of size 1..bound."""
    if row not in SIZE_MU_ROWS:
        raise InputError(f"unknown row {row}")
    if bound > 4:
        raise InputError("bound must be at most 4")
    size_side, mu_side = SIZE_MU_ROWS[row]
    rep = SizeRowReport(row, 0, [], [])
    for n in range(1, bound + 1):
        for f in _choice_functions_without_empty(n):
            rep.instances += 1
            s = size_from_mu(f)
            left = all(size_holds(s, c) for c in size_side)
            right = check_mu_condition(f, mu_side).holds
            if left and not right and (limit is None or len(rep.forward_failures) < limit):
                rep.forward_failures.append(f)
            if right and not left and (limit is None or len(rep.backward_failures) < limit):
                rep.backward_failures.append(f)
    return rep


@dataclass
class RDownReport:
    values: dict[str, bool]
    em_hold: bool

    @property
    def omega_agree(self) -> bool:
        return self.values["M+omega(4)"] == self.values["M+omega(5)"]

    @property
    def plusplus_agree(self) -> bool:
        v = self.values
        first_two = v["M++(1)"] == v["M++(2)"]
        if not self.em_hold:
            return first_two
        return first_two and v["M++(1)"] == v["M++(3)"]

    @property
    def agree(self) -> bool:
        return self.omega_agree and self.plusplus_agree


def check_rdown_equivalences(s: SizeSystem) -> RDownReport:
    """Evaluate the variant formulations; the third (M++) form is only
    expected to agree when (eMI) and (eMF) hold."""
    keys = ("M+omega(4)", "M+omega(5)", "M++(1)", "M++(2)", "M++(3)")
    values = {k: size_holds(s, k) for k in keys}
    return RDownReport(values, size_holds(s, "eMI") and size_holds(s, "eMF"))


def ultrafilter_system(elements: Sequence[str], point: int) -> SizeSystem:
    """Every base set gets the principal ultrafilter at ``point`` when it
    contains it, and the trivial filter otherwise."""
    n = len(elements)
    filters = {}
    for X in range(1, 1 << n):
        if X >> point & 1:
            filters[X] = {A for A in subsets(X) if A >> point & 1}
        else:
            filters[X] = {X}
    return SizeSystem.from_filters(elements, filters)
