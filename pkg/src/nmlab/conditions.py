"""Checkers for the algebraic conditions on choice functions.

Every checker quantifies over the domain of the choice function: a set
that is an argument of ``f`` must be a domain member, and an instance
whose derived argument (``X | Y``, ``X & Y`` ...) lies outside the domain
is skipped.  The two sets of the restricted monotony condition that only
bound values (``A`` and ``B``) range over all subsets of the universe.

Counterexamples are the first failing instance in canonical order:
smaller sets first, loops nested in the order of the condition's
variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Sequence

from .choice import ChoiceFunction, closure_failure
from .errors import ContractError, InputError
from .sets import bits, canonical_order, fmt, is_subset, popcount, subsets


@dataclass
class ConditionReport:
    name: str
    holds: bool
    counterexample: tuple | None = None
    checked: int = 0
    detail: str = ""

    def __bool__(self):
        return self.holds

    def describe(self, names: Sequence | None = None) -> str:
        status = "holds" if self.holds else "fails"
        out = f"{self.name}: {status}"
        if self.counterexample is not None:
            if names is not None:
                parts = [fmt(c, [str(n) for n in names]) if isinstance(c, int) else str(c)
                         for c in self.counterexample]
            else:
                parts = [str(c) for c in self.counterexample]
            out += " at (" + ", ".join(parts) + ")"
        if self.detail:
            out += f" [{self.detail}]"
        return out


class _Ctx:
    """Domain view shared by the condition functions."""

    __slots__ = ("f", "dom", "dset", "U", "subsets_U")

    def __init__(self, f: dict[int, int], U: int):
        self.f = f
        self.dom = canonical_order(f)
        self.dset = set(f)
        self.U = U
        self.subsets_U = None

    def all_sets(self):
        if self.subsets_U is None:
            self.subsets_U = canonical_order(subsets(self.U))
        return self.subsets_U


def _c_subset(c):
    f = c.f
    for x in c.dom:
        if f[x] & ~x:
            return (x,)


def _c_pr(c):
    # X subset of Y  =>  f(Y) & X subset of f(X); reported as (Y, X)
    f = c.f
    for y in c.dom:
        fy = f[y]
        for x in c.dom:
            if x & ~y == 0 and fy & x & ~f[x]:
                return (y, x)


def _c_pr_prime(c):
    f, dset = c.f, c.dset
    for x in c.dom:
        fx = f[x]
        for y in c.dom:
            xy = x & y
            if xy in dset and fx & y & ~f[xy]:
                return (x, y)


def _c_or(c):
    f, dset = c.f, c.dset
    for x in c.dom:
        for y in c.dom:
            u = x | y
            if u in dset and f[u] & ~(f[x] | f[y]):
                return (x, y)


def _c_wor(c):
    f, dset = c.f, c.dset
    for x in c.dom:
        for y in c.dom:
            u = x | y
            if u in dset and f[u] & ~(f[x] | y):
                return (x, y)


def _c_disjor(c):
    f, dset = c.f, c.dset
    for x in c.dom:
        for y in c.dom:
            u = x | y
            if x & y == 0 and u in dset and f[u] & ~(f[x] | f[y]):
                return (x, y)


def _c_cut(c):
    # f(X) <= Y <= X  =>  f(X) <= f(Y)
    f = c.f
    for x in c.dom:
        fx = f[x]
        for y in c.dom:
            if fx & ~y == 0 and y & ~x == 0 and fx & ~f[y]:
                return (x, y)


def _c_cm(c):
    # f(X) <= Y <= X  =>  f(Y) <= f(X)
    f = c.f
    for x in c.dom:
        fx = f[x]
        for y in c.dom:
            if fx & ~y == 0 and y & ~x == 0 and f[y] & ~fx:
                return (x, y)


def _c_resm(c):
    # f(X) <= A & B  =>  f(X & A) <= B, with A, B arbitrary subsets of U.
    # For fixed X and A the weakest admissible bound is B = f(X).
    f, dset = c.f, c.dset
    for x in c.dom:
        fx = f[x]
        for a in c.all_sets():
            xa = x & a
            if fx & ~a == 0 and xa in dset and f[xa] & ~fx:
                return (x, a, fx)


def _c_cum(c):
    f = c.f
    for x in c.dom:
        fx = f[x]
        for y in c.dom:
            if fx & ~y == 0 and y & ~x == 0 and f[y] != fx:
                return (x, y)


def _c_subset_supset(c):
    f = c.f
    for x in c.dom:
        fx = f[x]
        for y in c.dom:
            if fx & ~y == 0 and f[y] & ~x == 0 and f[y] != fx:
                return (x, y)


def _c_ratm(c):
    # X <= Y, X & f(Y) nonempty  =>  f(X) <= f(Y) & X
    f = c.f
    for x in c.dom:
        fx = f[x]
        for y in c.dom:
            if x & ~y == 0 and x & f[y] and fx & ~(f[y] & x):
                return (x, y)


def _c_eq(c):
    f = c.f
    for x in c.dom:
        fx = f[x]
        for y in c.dom:
            if x & ~y == 0 and x & f[y] and fx != f[y] & x:
                return (x, y)


def _c_eq_prime(c):
    # f(Y) & X nonempty  =>  f(Y & X) = f(Y) & X
    f, dset = c.f, c.dset
    for x in c.dom:
        for y in c.dom:
            fy = f[y]
            yx = y & x
            if fy & x and yx in dset and f[yx] != fy & x:
                return (x, y)


def _c_par(c):
    f, dset = c.f, c.dset
    for x in c.dom:
        for y in c.dom:
            u = x | y
            if u in dset:
                fu = f[u]
                if fu != f[x] and fu != f[y] and fu != f[x] | f[y]:
                    return (x, y)


def _c_cup(c):
    # f(Y) & (X - f(X)) nonempty  =>  f(X | Y) & Y empty
    f, dset = c.f, c.dset
    for x in c.dom:
        for y in c.dom:
            u = x | y
            if u in dset and f[y] & x & ~f[x] and f[u] & y:
                return (x, y)


def _c_cup_prime(c):
    f, dset = c.f, c.dset
    for x in c.dom:
        for y in c.dom:
            u = x | y
            if u in dset and f[y] & x & ~f[x] and f[u] != f[x]:
                return (x, y)


def _c_in(c):
    # a in X - f(X)  =>  some b in X with {a,b} in the domain and a not in f({a,b})
    f, dset = c.f, c.dset
    for x in c.dom:
        for a in bits(x & ~f[x]):
            ok = False  # reported as (X, {a})
            for b in bits(x):
                pair = (1 << a) | (1 << b)
                if pair in dset and not f[pair] >> a & 1:
                    ok = True
                    break
            if not ok:
                return (x, 1 << a)


def _c_empty(c):
    f = c.f
    for x in c.dom:
        if x and not f[x]:
            return (x,)


def _c_true(c):
    return None


@dataclass(frozen=True)
class MuCondition:
    key: str
    symbol: str
    check: Callable
    text: str


MU_CONDITIONS: dict[str, MuCondition] = {}


def _register(key, symbol, fn, text, aliases=()):
    cond = MuCondition(key, symbol, fn, text)
    MU_CONDITIONS[key] = cond
    for a in aliases:
        _ALIASES[a] = key


_ALIASES: dict[str, str] = {}

_register("mu-subset", "(μ⊆)", _c_subset, "f(X) ⊆ X", ["mu-⊆", "mu-SC", "mu-sub"])
_register("mu-PR", "(μPR)", _c_pr, "X ⊆ Y ⇒ f(Y) ∩ X ⊆ f(X)")
_register("mu-PR'", "(μPR′)", _c_pr_prime, "f(X) ∩ Y ⊆ f(X ∩ Y)", ["mu-PR′"])
_register("mu-OR", "(μOR)", _c_or, "f(X ∪ Y) ⊆ f(X) ∪ f(Y)")
_register("mu-wOR", "(μwOR)", _c_wor, "f(X ∪ Y) ⊆ f(X) ∪ Y")
_register("mu-disjOR", "(μdisjOR)", _c_disjor, "X ∩ Y = ∅ ⇒ f(X ∪ Y) ⊆ f(X) ∪ f(Y)")
_register("mu-CUT", "(μCUT)", _c_cut, "f(X) ⊆ Y ⊆ X ⇒ f(X) ⊆ f(Y)")
_register("mu-CM", "(μCM)", _c_cm, "f(X) ⊆ Y ⊆ X ⇒ f(Y) ⊆ f(X)")
_register("mu-ResM", "(μResM)", _c_resm, "f(X) ⊆ A ∩ B ⇒ f(X ∩ A) ⊆ B")
_register("mu-CUM", "(μCUM)", _c_cum, "f(X) ⊆ Y ⊆ X ⇒ f(X) = f(Y)")
_register("mu-subset-supset", "(μ⊆⊇)", _c_subset_supset, "f(X) ⊆ Y, f(Y) ⊆ X ⇒ f(X) = f(Y)",
          ["mu-⊆⊇"])
_register("mu-RatM", "(μRatM)", _c_ratm, "X ⊆ Y, X ∩ f(Y) ≠ ∅ ⇒ f(X) ⊆ f(Y) ∩ X")
_register("mu-=", "(μ=)", _c_eq, "X ⊆ Y, X ∩ f(Y) ≠ ∅ ⇒ f(X) = f(Y) ∩ X", ["mu-eq"])
_register("mu-='", "(μ=′)", _c_eq_prime, "f(Y) ∩ X ≠ ∅ ⇒ f(Y ∩ X) = f(Y) ∩ X", ["mu-=′", "mu-eq'"])
_register("mu-par", "(μ∥)", _c_par, "f(X ∪ Y) is f(X), f(Y) or f(X) ∪ f(Y)", ["mu-∥", "mu-||"])
_register("mu-cup", "(μ∪)", _c_cup, "f(Y) ∩ (X − f(X)) ≠ ∅ ⇒ f(X ∪ Y) ∩ Y = ∅", ["mu-∪"])
_register("mu-cup'", "(μ∪′)", _c_cup_prime, "f(Y) ∩ (X − f(X)) ≠ ∅ ⇒ f(X ∪ Y) = f(X)",
          ["mu-∪′", "mu-∪'"])
_register("mu-in", "(μ∈)", _c_in, "a ∈ X − f(X) ⇒ ∃b ∈ X. a ∉ f({a,b})", ["mu-∈"])
_register("mu-empty", "(μ∅)", _c_empty, "f(X) = ∅ ⇒ X = ∅", ["mu-∅"])
# all sets are finite here, so the finite-set version coincides with the plain one
_register("mu-empty-fin", "(μ∅fin)", _c_empty, "X finite, X ≠ ∅ ⇒ f(X) ≠ ∅", ["mu-∅fin"])
_register("mu-AND", "(μAND)", _c_true, "holds for every f")


def normalize_condition(name: str) -> str:
    key = name.strip()
    if key.startswith("(") and key.endswith(")"):
        key = key[1:-1]
    key = key.replace("μ", "mu-")
    if key in MU_CONDITIONS:
        return key
    if key in _ALIASES:
        return _ALIASES[key]
    raise InputError(f"unknown condition {name!r}")


def check_mu_condition(f: ChoiceFunction, name: str) -> ConditionReport:
    key = normalize_condition(name)
    cond = MU_CONDITIONS[key]
    ctx = _Ctx(f.table, f.universe)
    w = cond.check(ctx)
    return ConditionReport(key, w is None, w, checked=len(ctx.dom))


def holds(table: dict[int, int], U: int, key: str) -> bool:
    """Fast boolean form used by the exhaustive sweeps."""
    return MU_CONDITIONS[key].check(_Ctx(table, U)) is None


# ---------------------------------------------------------------------------
# H(U), H(U,u), K

@dataclass
class HUSets:
    H: int
    H_single: int
    H_u: dict[int, int] = field(default_factory=dict)
    K: int = 0


def h_single(f: ChoiceFunction, U: int) -> int:
    out = 0
    for x, fx in f.table.items():
        if fx & ~U == 0:
            out |= x
    return out | U


def h_iterated(f: ChoiceFunction, U: int, u: int | None = None) -> int:
    """Fixpoint of H_{a+1} = H_a | union{X : f(X) <= H_a} (restricted to X containing u if given)."""
    h = U
    while True:
        nxt = h
        for x, fx in f.table.items():
            if u is not None and not x >> u & 1:
                continue
            if fx & ~h == 0:
                nxt |= x
        if nxt == h:
            return h
        h = nxt


def k_set(f: ChoiceFunction) -> int:
    out = 0
    for fx in f.table.values():
        out |= fx
    return out


def compute_hu(f: ChoiceFunction, U: int, u: int | None = None) -> HUSets:
    if U not in f.table:
        raise ContractError("U must be a domain member")
    res = HUSets(H=h_iterated(f, U), H_single=h_single(f, U), K=k_set(f))
    points = [u] if u is not None else list(bits(U))
    for p in points:
        res.H_u[p] = h_iterated(f, U, p)
    return res


def check_hu_property(f: ChoiceFunction, u_mode: bool = True) -> ConditionReport:
    """(HU,u): u in f(U), u in Y - f(Y) implies f(Y) not within H(U,u); without u_mode H(U) is used."""
    table = f.table
    dom = f.domain
    n = 0
    for U in dom:
        hU = None if u_mode else h_iterated(f, U)
        for u in bits(table[U]):
            h = h_iterated(f, U, u) if u_mode else hU
            for Y in dom:
                n += 1
                if Y >> u & 1 and not table[Y] >> u & 1 and table[Y] & ~h == 0:
                    return ConditionReport("HU,u" if u_mode else "HU", False, (U, Y, 1 << u), n)
    return ConditionReport("HU,u" if u_mode else "HU", True, None, n)


def check_cum_alpha(f: ChoiceFunction, alpha: int, transitive: bool = False) -> ConditionReport:
    """Check the cumulativity ladder condition of rank ``alpha`` (0 to 4).

    Premise: for every b <= alpha, f(X_b) is within U together with the
    earlier X_g.  Conclusion: (intersection of all X_g) & f(U) <= f(X_alpha),
    or X_alpha & f(U) <= f(X_alpha) in the transitive variant.
    """
    if not 0 <= alpha <= 4:
        raise InputError("alpha must be between 0 and 4")
    name = f"mu-Cumt{alpha}" if transitive else f"mu-Cum{alpha}"
    table = f.table
    dom = f.domain
    count = 0
    for U in dom:
        fU = table[U]

        # depth-first over admissible prefixes; acc = U | earlier X, inter = meet of X
        def walk(seq, acc, inter):
            nonlocal count
            if len(seq) == alpha + 1:
                count += 1
                last = seq[-1]
                lhs = (last if transitive else inter) & fU
                if lhs & ~table[last]:
                    return (U,) + seq
                return None
            for X in dom:
                if table[X] & ~acc == 0:
                    w = walk(seq + (X,), acc | X, inter & X)
                    if w:
                        return w
            return None

        w = walk((), U, -1)
        if w:
            return ConditionReport(name, False, w, count)
    return ConditionReport(name, True, None, count)


def check_mwor_consequence(f: ChoiceFunction) -> ConditionReport:
    for pre in ("mu-wOR", "mu-subset"):
        r = check_mu_condition(f, pre)
        if not r.holds:
            raise ContractError(f"premise {MU_CONDITIONS[pre].symbol} fails at {r.counterexample}")
    table = f.table
    dset = set(table)
    for x in f.domain:
        for y in f.domain:
            u = x | y
            if u in dset and table[u] & ~(table[x] | table[y] | (x & y)):
                return ConditionReport("mwor-consequence", False, (x, y))
    return ConditionReport("mwor-consequence", True)


def st_tree_exists(f: ChoiceFunction, U: int, u: int, depth: int = 4) -> bool:
    """Experimental: is there a tree for (u, U) obeying the successor clauses up to ``depth`` levels?

    Nodes are pairs (x, X) with x in f(X).  For a node (x, X) every domain
    set Z with x in Z - f(Z) needs a successor (z, Z), and every Z with
    x in f(Z) needs one as soon as some successor's point lies in
    Z - f(Z).  Successor points must avoid H(X', x') for the node itself
    and all of its ancestors.
    """
    table = f.table
    dom = f.domain
    if not table[U] >> u & 1:
        raise ContractError("u must be in f(U)")
    hcache: dict[tuple[int, int], int] = {}

    def H(X, x):
        key = (X, x)
        if key not in hcache:
            hcache[key] = h_iterated(f, X, x)
        return hcache[key]

    def exists(x, X, path, d):
        if d == 0:
            return True
        path = path + ((x, X),)
        forbidden = 0
        for px, pX in path:
            forbidden |= H(pX, px)

        def candidates(Z):
            return [z for z in bits(table[Z] & ~forbidden)]

        first = [Z for Z in dom if Z >> x & 1 and not table[Z] >> x & 1]
        second = [Z for Z in dom if table[Z] >> x & 1]

        def solve(assigned: dict[int, int], pending: list[int]) -> bool:
            if pending:
                Z = pending[0]
                for z in candidates(Z):
                    new = dict(assigned)
                    new[Z] = z
                    if solve(new, pending[1:]):
                        return True
                return False
            triggered = [Z for Z in second if Z not in assigned
                         and any(Z >> p & 1 and not table[Z] >> p & 1 for p in assigned.values())]
            if triggered:
                return solve(assigned, triggered)
            return all(exists(z, Z, path, d - 1) for Z, z in assigned.items())

        return solve({}, first)

    return exists(u, U, (), depth)


def check_st(f: ChoiceFunction, depth: int = 4) -> ConditionReport:
    for U in f.domain:
        for u in bits(f.table[U]):
            if not st_tree_exists(f, U, u, depth):
                return ConditionReport("mu-ST", False, (U, 1 << u), detail=f"depth {depth}")
    return ConditionReport("mu-ST", True, detail=f"depth {depth}")


# ---------------------------------------------------------------------------
# implication rows between conditions

@dataclass(frozen=True)
class Row:
    id: str
    hypotheses: tuple[str, ...]
    conclusions: tuple[str, ...]
    closures: tuple[str, ...] = ()
    positive: bool = True
    # conclusions are checked as "hypotheses => all conclusions"; an
    # equivalence row also checks the converse
    iff: bool = False


MU_BASE_ROWS: dict[str, Row] = {r.id: r for r in [
    Row("1.1", ("mu-PR", "mu-subset"), ("mu-PR'",), ("cap",)),
    Row("1.2", ("mu-PR'",), ("mu-PR",)),
    Row("2.1", ("mu-PR", "mu-subset"), ("mu-OR",)),
    Row("2.2", ("mu-OR", "mu-subset"), ("mu-PR",), ("minus",)),
    Row("2.3", ("mu-PR", "mu-subset"), ("mu-wOR",)),
    Row("2.4", ("mu-wOR", "mu-subset"), ("mu-PR",), ("minus",)),
    Row("3", ("mu-PR",), ("mu-CUT",)),
    Row("4", ("mu-subset", "mu-subset-supset", "mu-CUM", "mu-RatM"), ("mu-PR",), ("cap",), positive=False),
    Row("5.1", ("mu-CM", "mu-subset"), ("mu-ResM",), ("cap",)),
    Row("5.2", ("mu-ResM",), ("mu-CM",)),
    Row("6", ("mu-CM", "mu-CUT"), ("mu-CUM",), iff=True),
    Row("7", ("mu-subset", "mu-subset-supset"), ("mu-CUM",)),
    Row("8", ("mu-subset", "mu-CUM"), ("mu-subset-supset",), ("cap",)),
    Row("9", ("mu-subset", "mu-CUM"), ("mu-subset-supset",), positive=False),
    Row("10", ("mu-RatM", "mu-PR"), ("mu-=",)),
    Row("11", ("mu-=",), ("mu-PR",)),
    Row("12.1", ("mu-=", "mu-subset"), ("mu-='",), ("cap",)),
    Row("12.2", ("mu-='",), ("mu-=",)),
    Row("13", ("mu-subset", "mu-="), ("mu-cup",), ("cup",)),
    Row("14", ("mu-subset", "mu-empty", "mu-="), ("mu-par", "mu-cup'", "mu-CUM"), ("cup",)),
    Row("15", ("mu-subset", "mu-par"), ("mu-=",), ("cup", "minus")),
    Row("16", ("mu-par", "mu-in", "mu-PR", "mu-subset"), ("mu-=",), ("cup", "singletons")),
    Row("17", ("mu-CUM", "mu-="), ("mu-in",), ("cup", "singletons")),
    Row("18", ("mu-CUM", "mu-=", "mu-subset"), ("mu-par",), ("cup",)),
]}


@dataclass
class RowReport:
    row: str
    positive: bool
    holds: bool
    instances: int = 0
    matching: int = 0
    counterexamples: list = field(default_factory=list)

    def __bool__(self):
        return self.holds


def _domains(n: int, closures: Sequence[str], max_sets: int | None):
    sets = list(subsets((1 << n) - 1))
    for mask in range(1 << len(sets)):
        dom = [sets[i] for i in bits(mask)]
        if max_sets is not None and len(dom) > max_sets:
            continue
        if any(closure_failure(dom, k) is not None for k in closures):
            continue
        yield dom


def enumerate_instances(n: int, closures: Sequence[str] = (), require_subset: bool = True,
                        max_sets: int | None = None):
    """Yield ``(domain, table)`` for every choice function on a universe of ``n`` points."""
    U = (1 << n) - 1
    for dom in _domains(n, closures, max_sets):
        options = [list(subsets(x if require_subset else U)) for x in dom]
        for combo in product(*options):
            yield dom, dict(zip(dom, combo))


def _row_violation(row: Row, table, U, memo) -> bool:
    def h(key):
        if key not in memo:
            memo[key] = holds(table, U, key)
        return memo[key]

    if row.iff:
        lhs = all(h(k) for k in row.hypotheses)
        rhs = all(h(k) for k in row.conclusions)
        return lhs != rhs
    if not all(h(k) for k in row.hypotheses):
        return False
    return not all(h(k) for k in row.conclusions)


def verify_mu_base_row(row_id: str, bound: int = 3, max_sets: int | None = None,
                       free_values_bound: int = 2, limit: int | None = 20) -> RowReport:
    """Exhaustively test one implication row on universes of 1..``bound`` points.

    Choice functions with values outside their argument are only enumerated
    when the row does not assume ``f(X) <= X``, and then only on universes of
    at most ``free_values_bound`` points.  For a negative row the report
    lists counterexamples (up to ``limit``) and ``holds`` means one exists.
    """
    if row_id not in MU_BASE_ROWS:
        raise InputError(f"unknown row {row_id!r}")
    if bound > 4:
        raise InputError("bound must be at most 4")
    row = MU_BASE_ROWS[row_id]
    rep = RowReport(row_id, row.positive, True)
    needs_free = "mu-subset" not in row.hypotheses
    for n in range(1, bound + 1):
        U = (1 << n) - 1
        modes = [True]
        if needs_free and n <= free_values_bound:
            modes = [False]  # the free enumeration already includes f(X) <= X
        for sub_only in modes:
            for dom, table in enumerate_instances(n, row.closures, sub_only, max_sets):
                rep.instances += 1
                memo: dict[str, bool] = {}
                if row.positive:
                    if _row_violation(row, table, U, memo):
                        rep.holds = False
                        if limit is None or len(rep.counterexamples) < limit:
                            rep.counterexamples.append(ChoiceFunction(tuple("abcd"[:n]), table))
                else:
                    if all(holds(table, U, k) for k in row.hypotheses):
                        rep.matching += 1
                        if not all(holds(table, U, k) for k in row.conclusions):
                            if limit is None or len(rep.counterexamples) < limit:
                                rep.counterexamples.append(ChoiceFunction(tuple("abcd"[:n]), table))
    if not row.positive:
        rep.holds = bool(rep.counterexamples)
    return rep


def isomorphic(f: ChoiceFunction, g: ChoiceFunction) -> bool:
    """Equal up to a bijective renaming of the universe (only points used by the domain count)."""
    from itertools import permutations

    def used(h):
        u = 0
        for x, y in h.table.items():
            u |= x | y
        return u

    uf, ug = used(f), used(g)
    if popcount(uf) != popcount(ug) or len(f.table) != len(g.table):
        return False
    pf, pg = list(bits(uf)), list(bits(ug))

    def image(m, perm):
        out = 0
        for i in bits(m):
            out |= 1 << perm[i]
        return out

    for p in permutations(pg):
        perm = dict(zip(pf, p))
        if all(image(x, perm) in g.table and g.table[image(x, perm)] == image(y, perm)
               for x, y in f.table.items()):
            return True
    return False
