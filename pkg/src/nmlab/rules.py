"""Logical inference rules for the consequence relation induced by a choice function.

For a language with valuations ``0..S-1`` every model set is a mask below
``N = 2**S``.  A choice function ``f`` defined on all ``N`` model sets
induces ``T |~ phi`` iff ``f(M(T)) <= M(phi)``.  Theories and formulas are
identified with their model sets (the language is finite, so every model
set is definable), and each rule is checked over all of them with numpy.
The consequence set of ``X`` has ``f(X)`` as its model set, written ``C(X)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .choice import ChoiceFunction
from .conditions import ConditionReport
from .errors import InputError, ResourceError
from .logic import Language, ModelSet, canonical_formula, format_formula


class _RuleCtx:
    def __init__(self, f: ChoiceFunction, lang: Language):
        S = lang.size
        N = 1 << S
        if len(f.elements) != S:
            raise InputError("choice function universe must be the valuations of the language")
        missing = [x for x in range(N) if x not in f.table]
        if missing:
            raise InputError(f"choice function undefined on model set {missing[0]:#x}")
        self.lang = lang
        self.N = N
        self.full = N - 1
        self.F = np.array([f.table[x] for x in range(N)], dtype=np.int64)

    def nm(self, x, a):
        return (self.F[x] & ~a) == 0

    @staticmethod
    def sub(a, b):
        return (a & ~b) == 0


@dataclass(frozen=True)
class Rule:
    key: str
    arity: int  # number of inner quantified sets besides X
    fn: Callable
    text: str


RULES: dict[str, Rule] = {}


def _rule(key, arity, text):
    def deco(fn):
        RULES[key] = Rule(key, arity, fn, text)
        return fn
    return deco


# each rule returns a boolean violation array over its inner sets (Y, A...)

@_rule("AND", 2, "T |~ a, T |~ b => T |~ a & b")
def _and(c, X, A, B):
    return c.nm(X, A) & c.nm(X, B) & ~c.nm(X, A & B)


@_rule("OR", 2, "T |~ a, T' |~ a => T v T' |~ a")
def _or(c, X, Y, A):
    return c.nm(X, A) & c.nm(Y, A) & ~c.nm(X | Y, A)


@_rule("wOR", 2, "T |~ a, T' |- a => T v T' |~ a")
def _wor(c, X, Y, A):
    return c.nm(X, A) & c.sub(Y, A) & ~c.nm(X | Y, A)


@_rule("disjOR", 2, "|- ~(T & T'), T |~ a, T' |~ a => T v T' |~ a")
def _disjor(c, X, Y, A):
    return ((X & Y) == 0) & c.nm(X, A) & c.nm(Y, A) & ~c.nm(X | Y, A)


@_rule("LLE", 2, "T, T' classically equivalent => same consequences")
def _lle(c, X, Y, A):
    # theories are identified with their model sets, so equivalent theories
    # are the same index
    return (X == Y) & (c.nm(X, A) != c.nm(Y, A))


@_rule("RW", 2, "T |~ a, a |- b => T |~ b")
def _rw(c, X, A, B):
    return c.nm(X, A) & c.sub(A, B) & ~c.nm(X, B)


@_rule("CCL", 2, "the consequence set is classically closed")
def _ccl(c, X, A, B):
    top = ~c.nm(X, np.int64(c.full)) & (A == A)
    return top | (c.nm(X, A) & c.nm(X, B) & ~c.nm(X, A & B)) | (c.nm(X, A) & c.sub(A, B) & ~c.nm(X, B))


@_rule("SC", 1, "T |- a => T |~ a")
def _sc(c, X, A):
    return c.sub(X, A) & ~c.nm(X, A)


@_rule("REF", 1, "T, a |~ a")
def _ref(c, X, A):
    return ~c.nm(X & A, A)


@_rule("CP", 1, "T |~ false => T inconsistent")
def _cp(c, X, A):
    return (A == 0) & c.nm(X, A) & (X != 0)


@_rule("PR", 2, "consequences of T u T' are classical consequences of C(T) u T'")
def _pr(c, X, Y, A):
    return c.nm(X & Y, A) & ~c.sub(c.F[X] & Y, A)


@_rule("CUT", 2, "T |~ a, T u {a} |~ b => T |~ b")
def _cut(c, X, A, B):
    return c.nm(X, A) & c.nm(X & A, B) & ~c.nm(X, B)


@_rule("CM", 2, "T |~ a, T |~ b => T u {a} |~ b")
def _cm(c, X, A, B):
    return c.nm(X, A) & c.nm(X, B) & ~c.nm(X & A, B)


@_rule("ResM", 2, "T |~ a, b => T u {a} |~ b")
def _resm(c, X, A, B):
    return c.nm(X, A) & c.nm(X, B) & ~c.nm(X & A, B)


@_rule("CUM", 2, "T |~ a => (T |~ b iff T u {a} |~ b)")
def _cum(c, X, A, B):
    return c.nm(X, A) & (c.nm(X, B) != c.nm(X & A, B))


@_rule("⊆⊇", 2, "T' |~ T, T |~ T' => same consequences")
def _subsup(c, X, Y, A):
    return c.nm(Y, X) & c.nm(X, Y) & (c.nm(X, A) != c.nm(Y, A))


@_rule("RatM", 2, "Con(T u C(T')), T |- T' => C(T) contains the closure of C(T') u T")
def _ratm(c, X, Y, A):
    fy = c.F[Y]
    return c.sub(X, Y) & ((X & fy) != 0) & c.sub(fy & X, A) & ~c.nm(X, A)


@_rule("RatM=", 2, "Con(T u C(T')), T |- T' => C(T) is the closure of C(T') u T")
def _ratm_eq(c, X, Y, A):
    fy = c.F[Y]
    return c.sub(X, Y) & ((X & fy) != 0) & (c.sub(fy & X, A) != c.nm(X, A))


@_rule("Log=′", 2, "Con(C(T') u T) => C(T u T') is the closure of C(T') u T")
def _log_eq_prime(c, X, Y, A):
    fy = c.F[Y]
    return ((fy & X) != 0) & (c.nm(X & Y, A) != c.sub(fy & X, A))


@_rule("Log∥", 1, "C(T v T') is C(T), C(T') or their intersection")
def _log_par(c, X, Y):
    A = np.arange(c.N, dtype=np.int64)[None, :]
    Yc = Y[:, None]
    rxy = c.nm(X | Yc, A)
    rx = c.nm(X, A)
    ry = c.nm(Yc, A)
    eq_x = (rxy == rx).all(axis=1)
    eq_y = (rxy == ry).all(axis=1)
    eq_both = (rxy == (rx & ry)).all(axis=1)
    return ~(eq_x | eq_y | eq_both)


@_rule("Log∪", 1, "Con(C(T') u T), not Con(C(T') u C(T)) => not Con(C(T v T') u T')")
def _log_cup(c, X, Y):
    fy, fx = c.F[Y], c.F[X]
    return ((fy & X) != 0) & ((fy & fx) == 0) & ((c.F[X | Y] & Y) != 0)


@_rule("Log∪′", 1, "Con(C(T') u T), not Con(C(T') u C(T)) => C(T v T') = C(T)")
def _log_cup_prime(c, X, Y):
    fy, fx = c.F[Y], c.F[X]
    A = np.arange(c.N, dtype=np.int64)[None, :]
    Yc = Y[:, None]
    same = (c.nm(X | Yc, A) == c.nm(X, A)).all(axis=1)
    return ((fy & X) != 0) & ((fy & fx) == 0) & ~same


_RULE_ALIASES = {"SS": "⊆⊇", "subset-supset": "⊆⊇", "Log=\'": "Log=′", "Log-eq'": "Log=′",
                 "Log||": "Log∥", "Log-par": "Log∥", "LogU": "Log∪", "Log-cup": "Log∪",
                 "LogU'": "Log∪′", "Log-cup'": "Log∪′", "Log∪'": "Log∪′"}

INDEXED = ("AND_n", "CM_n")


def normalize_rule(name: str) -> tuple[str, int | None]:
    key = name.strip()
    if key.startswith("(") and key.endswith(")"):
        key = key[1:-1]
    for base in ("AND", "CM"):
        for sep in ("_", ""):
            prefix = base + sep
            if key.startswith(prefix) and key[len(prefix):].isdigit() and (sep or len(key) > len(base)):
                return base + "_n", int(key[len(prefix):])
    key = _RULE_ALIASES.get(key, key)
    if key not in RULES:
        raise InputError(f"unknown rule {name!r}")
    return key, None


def _describe(lang: Language, masks) -> str:
    return "; ".join(format_formula(canonical_formula(ModelSet(lang, int(m)))) for m in masks)


def check_logical_rule(f: ChoiceFunction, lang: Language, name: str, n: int | None = None,
                       sample: int | None = None, seed: int = 0) -> ConditionReport:
    """Check a rule for ``T |~ phi iff f(M(T)) <= M(phi)``.

    Exhaustive up to 3 variables.  Larger languages need ``sample``: the
    outer theory and the inner sets are drawn at random (with ``seed``).
    Indexed rules take ``n`` from 2 to 5, either as argument or in the name
    (``AND_3``).
    """
    key, n_name = normalize_rule(name)
    if lang.n > 3 and sample is None:
        raise ResourceError("exhaustive rule checking supports at most 3 variables; pass a sample size")
    ctx = _RuleCtx(f, lang)
    if key in ("AND_n", "CM_n"):
        k = n if n is not None else n_name
        if k is None or not 2 <= k <= 5:
            raise InputError("indexed rules need n between 2 and 5")
        return _check_indexed(ctx, key, k, sample, seed)
    rule = RULES[key]
    rng = np.random.default_rng(seed)
    if sample is None:
        outer = range(ctx.N)
        inner = np.arange(ctx.N, dtype=np.int64)
    else:
        outer = [int(v) for v in rng.integers(0, ctx.N, size=sample)]
        inner = None
    checked = 0
    for X in outer:
        X = np.int64(X)
        inn = inner if inner is not None else rng.integers(0, ctx.N, size=64).astype(np.int64)
        if rule.arity == 1:
            viol = rule.fn(ctx, X, inn)
            checked += viol.size
            if viol.any():
                i = int(np.argmax(viol))
                w = (int(X), int(inn[i]))
                return ConditionReport(key, False, w, checked, detail=_describe(lang, w))
        else:
            viol = rule.fn(ctx, X, inn[:, None], inn[None, :])
            checked += viol.size
            if viol.any():
                i, j = np.unravel_index(int(np.argmax(viol)), viol.shape)
                w = (int(X), int(inn[i]), int(inn[j]))
                return ConditionReport(key, False, w, checked, detail=_describe(lang, w))
    return ConditionReport(key, True, None, checked)


def _check_indexed(ctx: _RuleCtx, key: str, n: int, sample, seed) -> ConditionReport:
    """AND_n: X consistent, X |~ B_1..B_n  =>  X & B_1 & .. & B_n consistent.
    CM_n: X |~ B_1..B_{n-1}  =>  X & B_1 & .. & B_{n-2} does not entail ~B_{n-1} nonmonotonically.
    """
    name = f"{key[:-2]}_{n}"
    rng = np.random.default_rng(seed)
    outer = range(ctx.N) if sample is None else [int(v) for v in rng.integers(0, ctx.N, size=sample)]
    all_sets = np.arange(ctx.N, dtype=np.int64)
    checked = 0
    for X in outer:
        if X == 0:
            continue
        row = all_sets[ctx.nm(np.int64(X), all_sets)]
        # all k-fold intersections of consequences
        meets = {ctx.full}
        for _ in range(n if key == "AND_n" else n - 2):
            arr = np.array(sorted(meets), dtype=np.int64)
            meets = set(np.unique(np.bitwise_and.outer(arr, row)).tolist())
        if key == "AND_n":
            for m in sorted(meets):
                checked += 1
                if X & m == 0:
                    return ConditionReport(name, False, (X, m), checked,
                                           detail=_describe(ctx.lang, (X, m)))
        else:
            for m in sorted(meets):
                z = X & m
                comp = ctx.full & ~row
                checked += len(row)
                bad = ctx.nm(np.int64(z), comp)
                if bad.any():
                    b = int(row[int(np.argmax(bad))])
                    return ConditionReport(name, False, (X, m, b), checked,
                                           detail=_describe(ctx.lang, (X, m, b)))
    return ConditionReport(name, True, None, checked)


SYSTEM_P = ("AND", "OR", "LLE", "RW", "SC", "CP", "CM", "CUM")
SYSTEM_R = SYSTEM_P + ("RatM",)


def choice_from_structure_over(lang: Language, s) -> ChoiceFunction:
    """Choice function on all model sets from a structure whose elements are valuation indices."""
    N = 1 << lang.size
    pos = {e: k for k, e in enumerate(s.elements)}
    table = {}
    for x in range(N):
        m = 0
        for v in range(lang.size):
            if x >> v & 1 and v in pos:
                m |= 1 << pos[v]
        mu = s.mu_mask(m)
        out = 0
        for k in range(len(s.elements)):
            if mu >> k & 1:
                out |= 1 << s.elements[k]
        table[x] = out
    return ChoiceFunction(tuple(range(lang.size)), table)
