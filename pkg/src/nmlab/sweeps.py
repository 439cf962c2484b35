"""Exhaustive soundness sweeps over small preferential structures.

Three sweeps cover structures on at most four elements with at most two
copies each:

* every attainable choice function, reached through attacker profiles;
* every ranked cycle-free structure, enumerated as strict weak orders on
  the copies;
* every smooth structure with at most five copies in total, enumerated
  relation by relation, plus a seeded sample with eight copies.

The first sweep rests on one observation: a copy is minimal in X exactly
when no element of X has a copy attacking it, so the choice function only
sees, for every copy, the set of elements that attack it.  Any such
"attacker profile" is realised by some structure, so ranging over profiles
ranges over the choice functions of all structures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, permutations

import numpy as np

from .conditions import holds
from .sequents import SequentSet, is_closed
from .sets import subsets
from .structures import PrefStructure


@dataclass
class SweepResult:
    name: str
    structures: int = 0
    functions: int = 0
    violations: dict = field(default_factory=dict)
    witness: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def line(self) -> str:
        bad = ", ".join(f"{k}={v}" for k, v in self.violations.items())
        return f"{self.name}: {self.structures} structures, {self.functions} functions, violations: {bad}"


def copy_patterns(max_elements: int = 4, max_copies: int = 2, max_nodes: int | None = None):
    """Copy counts per element, one pattern per multiset (element names
    are interchangeable for every condition checked here)."""
    for n in range(1, max_elements + 1):
        for counts in combinations_with_replacement(range(max_copies, 0, -1), n):
            if max_nodes is None or sum(counts) <= max_nodes:
                yield counts


def _pr_cum_masks(n: int):
    sets = list(range(1 << n))
    pr = [(x, y) for y in sets for x in sets if x & y == x]
    return sets, pr


def _check_tables(mu: np.ndarray, n: int, which: tuple) -> dict:
    """Vectorised (mu-subset), (mu-PR) and (mu-CUM) on rows of mu tables."""
    sets, pr = _pr_cum_masks(n)
    out = {}
    if "mu-subset" in which:
        bad = np.zeros(len(mu), dtype=bool)
        for x in sets:
            bad |= (mu[:, x] & ~np.uint8(x)) != 0
        out["mu-subset"] = bad
    if "mu-PR" in which:
        bad = np.zeros(len(mu), dtype=bool)
        for x, y in pr:
            bad |= (mu[:, y] & np.uint8(x) & ~mu[:, x]) != 0
        out["mu-PR"] = bad
    if "mu-CUM" in which:
        bad = np.zeros(len(mu), dtype=bool)
        for x, y in pr:
            # f(Y) <= X <= Y  =>  f(X) = f(Y)
            pre = (mu[:, y] & ~np.uint8(x)) == 0
            bad |= pre & (mu[:, x] != mu[:, y])
        out["mu-CUM"] = bad
    return out


def _member_vectors(n: int, x: int, copies: int) -> list[int]:
    """Bit X of a vector says element x is chosen from X."""
    U = (1 << n) - 1

    def single(A):
        return sum(1 << X for X in range(1 << n) if X >> x & 1 and not A & X)

    singles = [single(A) for A in subsets(U)]
    if copies == 1:
        return sorted(set(singles))
    return sorted({a | b for a in singles for b in singles})


def _multisets(k: int, c: int) -> int:
    from math import comb
    return comb(k + c - 1, c)


def general_sweep(max_elements: int = 4, max_copies: int = 2) -> SweepResult:
    res = SweepResult("general")
    for n in range(1, max_elements + 1):
        # with two copies allowed every one-copy profile is reachable too
        vecs = [_member_vectors(n, x, max_copies) for x in range(n)]
        # attacker profiles covered: one attacker set per copy, copies unordered
        per = sum(_multisets(1 << n, c) for c in range(1, max_copies + 1))
        res.structures += per ** n
        tabs = []
        for x in range(n):
            t = np.array([[v >> X & 1 for X in range(1 << n)] for v in vecs[x]], dtype=np.uint8)
            tabs.append(t << np.uint8(x))
        # outer "sum" over elements, chunked on the first one
        rest = tabs[1:]
        for row in tabs[0]:
            acc = row[None, :]
            for t in rest:
                acc = (acc[:, None, :] | t[None, :, :]).reshape(-1, 1 << n)
            res.functions += len(acc)
            for k, bad in _check_tables(acc, n, ("mu-subset", "mu-PR")).items():
                cnt = int(bad.sum())
                res.violations[k] = res.violations.get(k, 0) + cnt
                if cnt and k not in res.witness:
                    res.witness[k] = acc[bad][0].tolist()
    return res


def _set_partitions(m: int):
    """Restricted growth strings: block index of each item."""
    def rec(prefix, top):
        if len(prefix) == m:
            yield tuple(prefix)
            return
        for b in range(top + 2):
            prefix.append(b)
            yield from rec(prefix, max(top, b))
            prefix.pop()
    yield from rec([], -1)


def weak_orders(m: int):
    """Rank vectors of all strict weak orders on m items."""
    for rgs in _set_partitions(m):
        for perm in permutations(range(max(rgs) + 1)):
            yield tuple(perm[b] for b in rgs)


RANKED_CONDITIONS = ("mu-subset", "mu-PR", "mu-=", "mu-par", "mu-cup", "mu-in", "mu-RatM")


def ranked_sweep(max_elements: int = 4, max_copies: int = 2) -> SweepResult:
    res = SweepResult("ranked")
    for counts in copy_patterns(max_elements, max_copies):
        n = len(counts)
        owner = [e for e, c in enumerate(counts) for _ in range(c)]
        m = len(owner)
        seen: dict = {}
        for ranks in weak_orders(m):
            res.structures += 1
            key = []
            for e in range(n):
                key.append(min(r for r, o in zip(ranks, owner) if o == e))
            dense = {v: i for i, v in enumerate(sorted(set(key)))}
            key = tuple(dense[v] for v in key)
            if key not in seen:
                seen[key] = ranks
        U = (1 << n) - 1
        for key, ranks in seen.items():
            nodes = []
            count = [0] * n
            for o in owner:
                nodes.append((o, count[o]))
                count[o] += 1
            arrows = [(nodes[i], nodes[j]) for i in range(m) for j in range(m) if ranks[i] < ranks[j]]
            s = PrefStructure.build(tuple(range(n)), nodes, arrows)
            table = s.mu_table()
            res.functions += 1
            for c in RANKED_CONDITIONS:
                if not holds(table, U, c):
                    res.violations[c] = res.violations.get(c, 0) + 1
                    res.witness.setdefault(c, (counts, ranks))
                else:
                    res.violations.setdefault(c, 0)
    return res


def _relation_tables(owner: list[int], n: int, rel: np.ndarray):
    """Mu tables and smoothness flags for relations given as bit arrays.

    Bit ``i * m + j`` of a relation means copy i attacks copy j.
    """
    m = len(owner)
    one = np.uint64(1)
    att = []
    for j in range(m):
        a = np.zeros(len(rel), dtype=np.uint64)
        for i in range(m):
            a |= ((rel >> np.uint64(i * m + j)) & one) << np.uint64(i)
        att.append(a)
    mu = np.zeros((len(rel), 1 << n), dtype=np.uint8)
    smooth = np.ones(len(rel), dtype=bool)
    zero = np.uint64(0)
    for X in range(1 << n):
        NX = np.uint64(sum(1 << j for j in range(m) if X >> owner[j] & 1))
        inside = [j for j in range(m) if X >> owner[j] & 1]
        free = {j: (att[j] & NX) == zero for j in inside}
        M = np.zeros(len(rel), dtype=np.uint64)
        for j in inside:
            M |= free[j].astype(np.uint64) << np.uint64(j)
            mu[:, X] |= free[j].astype(np.uint8) << np.uint8(owner[j])
        for j in inside:
            smooth &= free[j] | ((att[j] & M) != zero)
    return mu, smooth


def smooth_sweep(max_elements: int = 4, max_copies: int = 2, max_nodes: int = 5,
                 sample: int = 200_000, seed: int = 0, chunk: int = 1 << 20) -> SweepResult:
    res = SweepResult("smooth")
    which = ("mu-subset", "mu-PR", "mu-CUM")

    def run(owner, n, rel):
        mu, smooth = _relation_tables(owner, n, rel)
        res.structures += len(rel)
        sm = mu[smooth]
        res.functions += len(sm)
        for k, bad in _check_tables(sm, n, which).items():
            cnt = int(bad.sum())
            res.violations[k] = res.violations.get(k, 0) + cnt
            if cnt and k not in res.witness:
                res.witness[k] = (tuple(owner), int(rel[smooth][bad][0]))

    for counts in copy_patterns(max_elements, max_copies, max_nodes):
        owner = [e for e, c in enumerate(counts) for _ in range(c)]
        total = 1 << (len(owner) ** 2)
        for start in range(0, total, chunk):
            rel = np.arange(start, min(total, start + chunk), dtype=np.uint64)
            run(owner, len(counts), rel)
    if sample:
        rng = np.random.default_rng(seed)
        owner = [e for e in range(max_elements) for _ in range(max_copies)]
        m = len(owner)
        done = 0
        while done < sample:
            k = min(chunk, sample - done)
            dens = rng.uniform(0.0, 0.4, size=k)
            bitsarr = rng.random((k, m * m)) < dens[:, None]
            rel = (bitsarr.astype(np.uint64) << np.arange(m * m, dtype=np.uint64)).sum(axis=1, dtype=np.uint64)
            run(owner, max_elements, rel)
            done += k
    return res


def plausibility_sweep(n_atoms: int = 3, max_nodes: int = 4) -> SweepResult:
    """Is every relation read off a structure with at most ``max_nodes``
    copies closed under inclusion, right monotony and cautious cut?"""
    res = SweepResult("plausibility")
    models = 1 << n_atoms
    profiles = set()
    for k in range(1, max_nodes + 1):
        rel = np.arange(1 << (k * k), dtype=np.uint64)
        one = np.uint64(1)
        att = []
        for j in range(k):
            a = np.zeros(len(rel), dtype=np.uint64)
            for i in range(k):
                a |= ((rel >> np.uint64(i * k + j)) & one) << np.uint64(i)
            att.append(a)
        for labels in combinations_with_replacement(range(models), k):
            prof = np.zeros(len(rel), dtype=np.uint64)
            for X in range(models):
                inside = [j for j in range(k) if labels[j] & X == X]
                NX = np.uint64(sum(1 << j for j in inside))
                chosen = np.zeros(len(rel), dtype=np.uint64)
                for j in inside:
                    free = (att[j] & NX) == np.uint64(0)
                    chosen |= free.astype(np.uint64) << np.uint64(labels[j])
                prof |= chosen << np.uint64(X * models)
            res.structures += len(rel)
            profiles.update(np.unique(prof).tolist())
    atoms = tuple(chr(ord("a") + i) for i in range(n_atoms))
    bad = 0
    for p in sorted(profiles):
        rows = []
        for X in range(models):
            chosen = [mdl for mdl in range(models) if p >> (X * models + mdl) & 1]
            rows.append(sum(1 << Y for Y in range(models) if all(c & Y for c in chosen)))
        rep = is_closed(SequentSet(atoms, tuple(rows)), ["PlI", "PlRM", "PlCC"])
        if not rep.holds:
            bad += 1
            res.witness.setdefault("closed", p)
    res.functions = len(profiles)
    res.violations["closed"] = bad
    return res


def structure_from_relation(owner: list[int], rel: int) -> PrefStructure:
    """The structure a relation bitmask stands for."""
    m = len(owner)
    n = max(owner) + 1
    count = [0] * n
    nodes = []
    for o in owner:
        nodes.append((o, count[o]))
        count[o] += 1
    arrows = [(nodes[i], nodes[j]) for i in range(m) for j in range(m) if rel >> (i * m + j) & 1]
    return PrefStructure.build(tuple(range(n)), nodes, arrows)
