"""Acceptance criteria, one PASS/FAIL line each.

Run directly (``python3 tests/test_acceptance.py``) for the summary lines,
or through pytest.  All checks are discrete, so the tolerance is exact
everywhere; runtime limits are pinned next to the checks that have one.
"""

from __future__ import annotations

import random
import sys
import time

from nmlab import catalog
from nmlab.choice import all_choice_functions
from nmlab.circuits import circuit_run
from nmlab.conditions import MU_BASE_ROWS, check_cum_alpha, check_mu_condition, verify_mu_base_row
from nmlab.ibrs import check_essential_smooth, check_total_smooth, higher_mu
from nmlab.inheritance import Path, path_valid
from nmlab.logic import Language
from nmlab.representation import SYNTHESIZERS
from nmlab.revision import (REVISION_SUITE, check_agm, check_loop, distance_revision, hamming,
                            random_distance, ambiguous_distance_demo)
from nmlab.sequents import close, six_atom_example
from nmlab.size import check_size_condition, independence_em_systems, level_system, verify_size_mu_row
from nmlab.errors import ConditionError
from nmlab.structures import is_ranked, is_smooth, is_transitive
from nmlab.sweeps import general_sweep, plausibility_sweep, ranked_sweep, smooth_sweep

EXACT = "exact (discrete)"
LINES: list[str] = []


def report(num: int, title: str, ok: bool, detail: str, limit: float | None = None, elapsed: float | None = None):
    timing = ""
    if limit is not None:
        timing = f"; runtime {elapsed:.1f}s < {limit:.0f}s"
        ok = ok and elapsed < limit
    line = f"{'PASS' if ok else 'FAIL'} [{num:2d}] {title}: {detail}; tolerance {EXACT}{timing}"
    LINES.append(line)
    print(line)
    assert ok, line


def test_01_soundness_sweep():
    t = time.perf_counter()
    runs = [general_sweep(), ranked_sweep(), smooth_sweep(max_nodes=5, sample=200_000, seed=0)]
    elapsed = time.perf_counter() - t
    ok = all(r.ok for r in runs)
    detail = " | ".join(r.line() for r in runs)
    report(1, "soundness sweep", ok, detail, limit=300, elapsed=elapsed)


PRECONDITIONS = {
    "general": ("mu-subset", "mu-PR"),
    "transitive": ("mu-subset", "mu-PR"),
    "smooth": ("mu-subset", "mu-PR", "mu-CUM"),
    "smooth-transitive": ("mu-subset", "mu-PR", "mu-CUM"),
    "ranked": ("mu-subset", "mu-empty", "mu-="),
}


def test_02_representation_round_trips():
    t = time.perf_counter()
    fs = list(all_choice_functions(3))
    counts = {}
    bad = 0
    for kind, build in SYNTHESIZERS.items():
        n = 0
        for f in fs:
            if not all(check_mu_condition(f, c).holds for c in PRECONDITIONS[kind]):
                continue
            n += 1
            s = build(f)
            ok = s.mu_table(f.domain) == f.table
            if "transitive" in kind:
                ok = ok and is_transitive(s).holds
            if kind.startswith("smooth") or kind == "ranked":
                ok = ok and is_smooth(s, f.domain).holds
            if kind == "ranked":
                ok = ok and is_ranked(s).holds
            bad += not ok
        counts[kind] = n
    elapsed = time.perf_counter() - t
    detail = ", ".join(f"{k}={v}" for k, v in counts.items()) + f" functions, {bad} failures"
    report(2, "representation round trips over 3 elements", bad == 0 and all(counts.values()), detail,
           limit=600, elapsed=elapsed)


def test_03_named_counterexamples():
    checks = []
    f = catalog.cumulative_not_subsup()
    checks.append(("cumulative without (μ⊆⊇)",
                   check_mu_condition(f, "mu-subset").holds and check_mu_condition(f, "mu-CUM").holds
                   and not check_mu_condition(f, "mu-subset-supset").holds))
    f = catalog.pr_failure()
    r = check_mu_condition(f, "mu-PR")
    others = all(check_mu_condition(f, c).holds for c in ("mu-subset", "mu-subset-supset", "mu-CUM", "mu-RatM"))
    checks.append(("(μPR) fails at (U,{a,b})", others and not r.holds and r.counterexample == (0b111, 0b011)))
    try:
        SYNTHESIZERS["ranked"](catalog.empty_pair())
        blocked = False
    except ConditionError as exc:
        blocked = exc.report.name == "mu-empty" and exc.report.counterexample == (0b11,)
    f = catalog.empty_pair()
    conds = all(check_mu_condition(f, c).holds for c in ("mu-subset", "mu-PR", "mu-=", "mu-cup", "mu-in"))
    checks.append(("(μ∅) blocks ranked synthesis", blocked and conds))
    first, _ = independence_em_systems()
    emf = check_size_condition(first, "eMF")
    checks.append(("(eMI) holds, (eMF)(1) fails with {z}",
                   check_size_condition(first, "eMI").holds and not emf.holds and emf.counterexample[-1] == 0b100))
    for n in (2, 3):
        s = level_system(n)
        checks.append((f"level {n} not {n + 1}", check_size_condition(s, f"I_{n}").holds
                       and not check_size_condition(s, f"I_{n + 1}").holds))
    for k in (1, 2):
        f = catalog.ladder(k)
        below = all(check_cum_alpha(f, b, transitive=True).holds for b in range(k))
        checks.append((f"ladder κ={k}", below and not check_cum_alpha(f, k).holds))
    ok = all(c for _, c in checks)
    report(3, "named counterexamples", ok, ", ".join(f"{n}: {'ok' if c else 'no'}" for n, c in checks))


def test_04_mu_base_rows():
    t = time.perf_counter()
    pos = [r for r, row in MU_BASE_ROWS.items() if row.positive]
    failures = {}
    instances = 0
    for r in pos:
        rep = verify_mu_base_row(r, bound=3)
        instances += rep.instances
        if not rep.holds:
            failures[r] = len(rep.counterexamples)
    elapsed = time.perf_counter() - t
    report(4, "implication rows at size <= 3", not failures,
           f"{len(pos)} rows, {instances} instances, counterexamples {failures or 0}", limit=300, elapsed=elapsed)


def test_05_agm_from_hamming():
    op2 = distance_revision(hamming(Language(["p", "q"])))
    two = [check_agm(op2, k) for k in REVISION_SUITE]
    op3 = distance_revision(hamming(Language(["p", "q", "r"])))
    three = [check_agm(op3, k, sample=10_000, seed=0) for k in REVISION_SUITE]
    ok = all(r.holds for r in two + three)
    detail = (f"2 vars exhaustive {sum(r.checked for r in two)} instances, "
              f"3 vars sampled {sum(r.checked for r in three)} instances, postulates {','.join(REVISION_SUITE)}")
    report(5, "revision postulates from Hamming distance", ok, detail)


def test_06_loop():
    rng = random.Random(0)
    bad = 0
    for _ in range(500):
        d = random_distance(rng, rng.randint(2, 4))
        if not check_loop(d, max_len=6).holds:
            bad += 1
    report(6, "loop condition on 500 random distances", bad == 0, f"{bad} violations, chains up to length 6")


def test_07_ambiguous_distances():
    w = ambiguous_distance_demo()
    ok = (w.entries == 225 and w.indistinguishable and w.order_constraints_hold
          and w.d_xy_vs_ab[0] != w.d_xy_vs_ab[1])
    report(7, "two distance configurations give one operator", ok,
           f"{w.equal}/{w.entries} set pairs equal, order constraints {w.order_constraints_hold}")


CIRCUIT_1 = ["TFFFFFFF", "TFFFFFTT", "TFTFTTTT", "TFTFTTFF", "TFFFTFFF",
             "TFFFFFFT", "TFFFTFTT", "TFTFTTFT", "TFFFTFFF"]
CIRCUIT_2 = ["TFFFFFFF", "TFFFFFTT", "TFFFTTTT", "TFTFTTFF", "TFTFTFFF",
             "TFFFTFFT", "TFFFTFFT"]


def _rows(run):
    return ["".join("T" if v else "F" for v in r) for r in run.rows]


def test_08_circuits():
    t = time.perf_counter()
    r1 = circuit_run(catalog.feedback_circuit(1), 9)
    r2 = circuit_run(catalog.feedback_circuit(2), 7)
    elapsed = time.perf_counter() - t
    ok = (_rows(r1) == CIRCUIT_1 and _rows(r2) == CIRCUIT_2
          and (r1.status, r1.period, r1.start) == ("oscillating", 4, 5)
          and (r2.status, r2.start) == ("stable", 6))
    report(8, "gate circuit tables", ok, f"circuit 1: {r1.summary()}; circuit 2: {r2.summary()}",
           limit=1, elapsed=elapsed)


def test_09_higher_mu():
    g = catalog.attacked_shortcut()
    mu_ok = higher_mu(g, "abc") == frozenset("a") and higher_mu(g, "ac") == frozenset("ac")
    c = catalog.copy_chain()
    split = check_essential_smooth(c, "abc").holds and not check_total_smooth(c, "abc").holds
    t1 = check_total_smooth(catalog.attacked_chain(False), "abc").holds
    t2 = check_total_smooth(catalog.attacked_chain(True), "abc").holds
    ok = mu_ok and split and not t1 and t2
    report(9, "higher-level arrows", ok,
           f"mu values {mu_ok}, essential but not total {split}, attacked chain {t1}/{t2}")


def test_10_plausibility():
    t = time.perf_counter()
    cl = close(six_atom_example())
    elapsed = time.perf_counter() - t
    excluded = (["a"], ["e"]) not in cl
    sweep = plausibility_sweep(n_atoms=3, max_nodes=4)
    report(10, "plausibility closure", excluded and sweep.ok,
           f"{len(cl)} sequents, a|~e excluded {excluded}; {sweep.line()}", limit=60, elapsed=elapsed)


def test_11_size_rows():
    t = time.perf_counter()
    reps = [verify_size_mu_row(r, bound=3) for r in range(1, 8)]
    elapsed = time.perf_counter() - t
    ok = all(r.holds for r in reps)
    detail = ", ".join(f"row {r.row}: {len(r.forward_failures)}/{len(r.backward_failures)}" for r in reps)
    report(11, "size and choice correspondence", ok, f"failures forward/backward {detail}",
           limit=300, elapsed=elapsed)


def test_12_inheritance():
    nixon = catalog.diamond()
    pos = path_valid(nixon, Path(("a", "b", "d"), ("+", "+")))
    neg = path_valid(nixon, Path(("a", "c", "d"), ("+", "-")))
    tw = catalog.penguin()
    not_d = path_valid(tw, Path(("a", "c", "d"), ("+", "-")))
    via_b = path_valid(tw, Path(("a", "b", "d"), ("+", "+")))
    ok = not pos.valid and not neg.valid and not_d.valid and not via_b.valid
    report(12, "inheritance goldens", ok,
           f"diamond +/-: {pos.valid}/{neg.valid}; penguin a-/>d {not_d.valid}, a->b->d {via_b.valid}")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
