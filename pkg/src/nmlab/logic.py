"""Finite propositional model theory.

Valuations over a language with ``n`` variables are the integers
``0 .. 2**n - 1``; bit ``j`` of a valuation index is the truth value of
``vars[j]``.  A :class:`ModelSet` is a bitset over those indices.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ClosureError, InputError
from .sets import bits

MAX_VARS = 16


@dataclass(frozen=True)
class Language:
    vars: tuple[str, ...]

    def __init__(self, vars: Iterable[str]):
        names = tuple(vars)
        if len(set(names)) != len(names):
            raise InputError(f"duplicate variable names in {names}")
        if len(names) > MAX_VARS:
            raise InputError(f"at most {MAX_VARS} variables supported")
        for name in names:
            if not _IDENT.fullmatch(name) or name in ("true", "false"):
                raise InputError(f"bad variable name {name!r}")
        object.__setattr__(self, "vars", names)

    @property
    def n(self) -> int:
        return len(self.vars)

    @property
    def size(self) -> int:
        """Number of valuations."""
        return 1 << len(self.vars)

    @property
    def full_bits(self) -> int:
        return (1 << self.size) - 1

    def index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise InputError(f"unknown variable {name!r}") from None

    def var_bits(self, j: int) -> int:
        """Bitset of the valuations in which ``vars[j]`` is true."""
        out = 0
        for i in range(self.size):
            if i >> j & 1:
                out |= 1 << i
        return out

    def valuation(self, i: int) -> dict[str, bool]:
        return {v: bool(i >> j & 1) for j, v in enumerate(self.vars)}

    def valuation_index(self, assignment: dict[str, bool]) -> int:
        i = 0
        for name, value in assignment.items():
            if value:
                i |= 1 << self.index(name)
        return i

    def empty(self) -> "ModelSet":
        return ModelSet(self, 0)

    def full(self) -> "ModelSet":
        return ModelSet(self, self.full_bits)

    def all_modelsets(self) -> Iterable["ModelSet"]:
        for b in range(1 << self.size):
            yield ModelSet(self, b)


# Formulas are nested tuples: ("var", name), ("not", f), (op, f, g) for op in
# and/or/imp/iff, ("true",), ("false",).
Formula = tuple
Theory = frozenset

TRUE: Formula = ("true",)
FALSE: Formula = ("false",)


def Var(name: str) -> Formula:
    return ("var", name)


def Not(f: Formula) -> Formula:
    return ("not", f)


def And(f: Formula, g: Formula) -> Formula:
    return ("and", f, g)


def Or(f: Formula, g: Formula) -> Formula:
    return ("or", f, g)


def Imp(f: Formula, g: Formula) -> Formula:
    return ("imp", f, g)


def Iff(f: Formula, g: Formula) -> Formula:
    return ("iff", f, g)


def conj(fs: Sequence[Formula]) -> Formula:
    if not fs:
        return TRUE
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(fs: Sequence[Formula]) -> Formula:
    if not fs:
        return FALSE
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_TOKEN = re.compile(r"\s*(<->|->|[~&|()]|[A-Za-z_][A-Za-z0-9_']*)")


def tokenize(text: str) -> list[tuple[str, int]]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise InputError(f"unexpected character at column {pos + 1}: {text[pos:pos + 10]!r}")
        out.append((m.group(1), m.start(1)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        if self.i >= len(self.tokens):
            raise InputError(f"unexpected end of formula {self.text!r}")
        tok, col = self.tokens[self.i]
        if expected is not None and tok != expected:
            raise InputError(f"expected {expected!r} at column {col + 1}, got {tok!r}")
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        if self.i != len(self.tokens):
            tok, col = self.tokens[self.i]
            raise InputError(f"trailing input at column {col + 1}: {tok!r}")
        return f

    def iff(self):
        left = self.imp()
        if self.peek() == "<->":
            self.take()
            return Iff(left, self.iff())
        return left

    def imp(self):
        left = self.orr()
        if self.peek() == "->":
            self.take()
            return Imp(left, self.imp())
        return left

    def orr(self):
        f = self.andd()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.andd())
        return f

    def andd(self):
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        tok = self.peek()
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok == "(":
            self.take()
            f = self.iff()
            self.take(")")
            return f
        if tok is None:
            raise InputError(f"unexpected end of formula {self.text!r}")
        if tok == "true":
            self.take()
            return TRUE
        if tok == "false":
            self.take()
            return FALSE
        if _IDENT.fullmatch(tok):
            self.take()
            return Var(tok)
        col = self.tokens[self.i][1]
        raise InputError(f"unexpected token {tok!r} at column {col + 1}")


def parse_formula(text: str) -> Formula:
    return _Parser(text).parse()


def parse_theory(text: str) -> Theory:
    """Parse a theory written as formulas separated by ``;`` or ``,``."""
    parts = [p for p in re.split(r"[;,]", text) if p.strip()]
    return frozenset(parse_formula(p) for p in parts)


_PREC = {"iff": 1, "imp": 2, "or": 3, "and": 4}
_SYM = {"iff": "<->", "imp": "->", "or": "|", "and": "&"}


def format_formula(f: Formula, parent: int = 0) -> str:
    kind = f[0]
    if kind == "var":
        return f[1]
    if kind == "true":
        return "true"
    if kind == "false":
        return "false"
    if kind == "not":
        return "~" + format_formula(f[1], 5)
    prec = _PREC[kind]
    if kind in ("imp", "iff"):
        s = f"{format_formula(f[1], prec + 1)} {_SYM[kind]} {format_formula(f[2], prec)}"
    else:
        s = f"{format_formula(f[1], prec)} {_SYM[kind]} {format_formula(f[2], prec + 1)}"
    return f"({s})" if prec < parent else s


def variables(f: Formula) -> set[str]:
    if f[0] == "var":
        return {f[1]}
    out: set[str] = set()
    for sub in f[1:]:
        out |= variables(sub)
    return out


def formula_bits(f: Formula, lang: Language, memo: dict[int, int] | None = None) -> int:
    """Bitset of the valuations of ``lang`` satisfying ``f``.

    ``memo`` maps ``id(subformula)`` to already known bitsets; callers that
    combine many prebuilt formulas use it to avoid re-evaluation.
    """
    full = lang.full_bits
    cache: dict[str, int] = {}

    def ev(g):
        if memo is not None and id(g) in memo:
            return memo[id(g)]
        kind = g[0]
        if kind == "var":
            name = g[1]
            if name not in cache:
                cache[name] = lang.var_bits(lang.index(name))
            return cache[name]
        if kind == "true":
            return full
        if kind == "false":
            return 0
        if kind == "not":
            return full & ~ev(g[1])
        a, b = ev(g[1]), ev(g[2])
        if kind == "and":
            return a & b
        if kind == "or":
            return a | b
        if kind == "imp":
            return (full & ~a) | b
        if kind == "iff":
            return full & ~(a ^ b)
        raise InputError(f"unknown connective {kind!r}")

    return ev(f)


@dataclass(frozen=True)
class ModelSet:
    lang: Language
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.lang.size:
            raise InputError("model set has bits outside the valuation range")

    def _check(self, other: "ModelSet"):
        if other.lang != self.lang:
            raise InputError("model sets over different languages")

    def __and__(self, other):
        self._check(other)
        return ModelSet(self.lang, self.bits & other.bits)

    def __or__(self, other):
        self._check(other)
        return ModelSet(self.lang, self.bits | other.bits)

    def __sub__(self, other):
        self._check(other)
        return ModelSet(self.lang, self.bits & ~other.bits)

    def __invert__(self):
        return ModelSet(self.lang, self.lang.full_bits & ~self.bits)

    def __le__(self, other):
        self._check(other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other):
        return self <= other and self != other

    def __contains__(self, valuation: int) -> bool:
        return bool(self.bits >> valuation & 1)

    def __iter__(self):
        return bits(self.bits)

    def __len__(self):
        return bin(self.bits).count("1")

    def __bool__(self):
        return self.bits != 0

    def to_hex(self) -> str:
        width = max(1, (self.lang.size + 3) // 4)
        return format(self.bits, f"0{width}x")

    def serialize(self) -> str:
        return f"{','.join(self.lang.vars)}:{self.to_hex()}"

    @staticmethod
    def deserialize(text: str) -> "ModelSet":
        try:
            names, hexpart = text.strip().rsplit(":", 1)
            value = int(hexpart, 16)
        except ValueError:
            raise InputError(f"bad model set serialization {text!r}") from None
        lang = Language([v for v in names.split(",") if v])
        return ModelSet(lang, value)

    def describe(self) -> list[dict[str, bool]]:
        return [self.lang.valuation(i) for i in self]


def models_of(t: Iterable[Formula], lang: Language, memo: dict[int, int] | None = None) -> ModelSet:
    """Model set of a theory; the empty theory has every valuation as model."""
    out = lang.full_bits
    for f in t:
        if memo is None or id(f) not in memo:
            for name in variables(f):
                lang.index(name)
        out &= formula_bits(f, lang, memo)
    return ModelSet(lang, out)


def minterm(i: int, lang: Language) -> Formula:
    lits = [Var(v) if i >> j & 1 else Not(Var(v)) for j, v in enumerate(lang.vars)]
    return conj(lits)


def canonical_formula(x: ModelSet) -> Formula:
    """Full DNF over the members of ``x``; ``false`` for the empty set and ``true`` for the full set."""
    if x.bits == 0:
        return FALSE
    if x.bits == x.lang.full_bits:
        return TRUE
    return disj([minterm(i, x.lang) for i in x])


def theory_of(x: ModelSet) -> Theory:
    """A finite axiomatization of ``Th(x)``: a single canonical formula."""
    return frozenset([canonical_formula(x)])


def is_intersection_closed(domain: Iterable[int]) -> tuple[bool, tuple[int, int] | None]:
    dom = set(domain)
    items = sorted(dom)
    for i, a in enumerate(items):
        for b in items[i + 1:]:
            if a & b not in dom:
                return False, (a, b)
    return True, None


def closure_hat(a: ModelSet, domain: Iterable[ModelSet]) -> ModelSet:
    """Smallest member of ``domain`` containing ``a``.

    The domain must be closed under intersections; the empty intersection
    is the full model set.
    """
    dom = list(domain)
    for x in dom:
        a._check(x)
    ok, pair = is_intersection_closed(x.bits for x in dom)
    if not ok:
        raise ClosureError(f"domain is not closed under intersection: {pair[0]:x} & {pair[1]:x} missing")
    out = a.lang.full_bits
    for x in dom:
        if a.bits & ~x.bits == 0:
            out &= x.bits
    return ModelSet(a.lang, out)


def definable_closure(a: ModelSet) -> ModelSet:
    """``M(Th(a))`` computed through the canonical theory."""
    return models_of(theory_of(a), a.lang)


def entails(t: Iterable[Formula], phi: Formula, lang: Language) -> bool:
    return models_of(t, lang) <= models_of([phi], lang)


@dataclass
class IdentityResult:
    name: str
    holds: bool
    checked: int
    counterexample: tuple | None = None


def modelset_algebra_suite(lang: Language, sample: int = 2000, seed: int = 0) -> list[IdentityResult]:
    """Check the basic model-set/theory identities over ``lang``.

    Formulas are taken up to logical equivalence: one canonical formula per
    model set.  A set of formulas ``Th(X)`` is represented by its
    membership vector over those classes.  Up to three variables the check
    is exhaustive; with four variables ``sample`` random instances are used.
    """
    if lang.n > 4:
        raise InputError("the identity suite supports at most 4 variables")
    nclass = 1 << lang.size
    full = lang.full_bits
    exhaustive = lang.n <= 3
    rng = random.Random(seed)
    forms: dict[int, Formula] = {}
    memo: dict[int, int] = {}
    results = []

    def formula(b: int) -> Formula:
        if b not in forms:
            f = canonical_formula(ModelSet(lang, b))
            forms[b] = f
            memo[id(f)] = formula_bits(f, lang)
        return forms[b]

    def pairs():
        if exhaustive:
            for a in range(nclass):
                for b in range(nclass):
                    yield a, b
        else:
            for _ in range(sample):
                yield rng.randrange(nclass), rng.randrange(nclass)

    # canonical formulas must denote their own class
    bad = None
    count = 0
    for b in (range(nclass) if exhaustive else (rng.randrange(nclass) for _ in range(sample))):
        count += 1
        if memo[id(formula(b))] != b:
            bad = (b,)
            break
    results.append(IdentityResult("canonical-theory-round-trip", bad is None, count, bad))

    # M(T) u M(T') == M(T v T') with T v T' = {phi | psi : phi in T, psi in T'}
    count, bad = 0, None
    for a, b in pairs():
        t1 = [formula(a), formula(a | b)]
        t2 = [formula(b)]
        lhs = models_of(t1, lang, memo) | models_of(t2, lang, memo)
        rhs = models_of([Or(p, q) for p in t1 for q in t2], lang, memo)
        count += 1
        if lhs != rhs:
            bad = (a, b)
            break
    results.append(IdentityResult("models-union-is-disjunction", bad is None, count, bad))

    classes = np.arange(nclass, dtype=np.int64) if exhaustive else None

    def th(x: int):
        # membership vector of Th(x) over the formula classes
        return (x & ~classes) == 0

    # Th(A u B) == Th(A) n Th(B), and closure(Th(Y) u Th(Z)) == Th(Y n Z)
    count, bad, bad2 = 0, None, None
    for a, b in pairs():
        count += 1
        if exhaustive:
            ta, tb = th(a), th(b)
            if not np.array_equal(th(a | b), ta & tb):
                bad = bad or (a, b)
            # M(Th(Y) u Th(Z)) is the intersection of all members of both theories
            members = classes[ta | tb]
            m = int(np.bitwise_and.reduce(members)) if len(members) else full
            if not np.array_equal(th(m), th(a & b)):
                bad2 = bad2 or (a, b)
        else:
            z = rng.randrange(nclass)
            lhs = (a | b) & ~z == 0
            rhs = (a & ~z == 0) and (b & ~z == 0)
            if lhs != rhs:
                bad = bad or (a, b, z)
            both = models_of([formula(a), formula(b)], lang, memo).bits
            if ((a & b) & ~z == 0) != (both & ~z == 0):
                bad2 = bad2 or (a, b, z)
        if bad and bad2:
            break
    results.append(IdentityResult("theory-of-union", bad is None, count, bad))
    results.append(IdentityResult("closure-of-theory-union", bad2 is None, count, bad2))

    # X n M(phi) |= psi  iff  X |= phi -> psi
    count, bad = 0, None
    if exhaustive:
        for p in range(nclass):
            for q in range(nclass):
                mimp = formula_bits(Imp(formula(p), formula(q)), lang, memo)
                lhs = (classes & p & ~q) == 0
                rhs = (classes & ~mimp) == 0
                count += nclass
                if not np.array_equal(lhs, rhs):
                    bad = (int(classes[np.argmax(lhs != rhs)]), p, q)
                    break
            if bad:
                break
    else:
        for _ in range(sample):
            x, p, q = (rng.randrange(nclass) for _ in range(3))
            mimp = formula_bits(Imp(formula(p), formula(q)), lang, memo)
            count += 1
            if ((x & p & ~q) == 0) != ((x & ~mimp) == 0):
                bad = (x, p, q)
                break
    results.append(IdentityResult("relativized-deduction", bad is None, count, bad))

    # definable closure of a union is the union of the closures
    def hat(x):
        return models_of([formula(x)], lang, memo).bits

    count, bad = 0, None
    for a, b in pairs():
        count += 1
        if hat(a | b) != hat(a) | hat(b):
            bad = (a, b)
            break
    results.append(IdentityResult("closure-of-union", bad is None, count, bad))
    return results
