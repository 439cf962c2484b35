"""Two-valued gate circuits with per-gate delays.

Row 1 holds the initial values.  A gate with delay ``d`` takes at time
``t`` the value of its expression over row ``t - d``; before that row
exists it keeps its initial value.  Inputs are held constant.

Text format::

    input In1 = T
    input In2 = F
    A1 = In1 & Out1 @ 2
    Out1 = ~A3
    init A3 = F

Columns follow declaration order.  Points without an ``init`` line start
false.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping

from .errors import InputError
from .logic import Formula, parse_formula, variables

_BOOL = {"T": True, "F": False, "1": True, "0": False, "true": True, "false": False}


@dataclass(frozen=True)
class Gate:
    name: str
    expr: Formula
    delay: int = 1


@dataclass(frozen=True)
class Circuit:
    names: tuple
    inputs: Mapping[str, bool]
    gates: Mapping[str, Gate]
    initial: Mapping[str, bool] = field(default_factory=dict)

    def __post_init__(self):
        known = set(self.names)
        if set(self.inputs) & set(self.gates):
            raise InputError("a point is both an input and a gate")
        if set(self.inputs) | set(self.gates) != known:
            missing = known - set(self.inputs) - set(self.gates)
            raise InputError(f"points without a definition: {sorted(missing)}")
        for g in self.gates.values():
            if g.delay < 1:
                raise InputError(f"gate {g.name}: delay must be at least 1")
            unknown = variables(g.expr) - known
            if unknown:
                raise InputError(f"gate {g.name} reads undefined points {sorted(unknown)}")

    @property
    def max_delay(self) -> int:
        return max((g.delay for g in self.gates.values()), default=1)

    def first_row(self) -> tuple:
        return tuple(self.inputs[n] if n in self.inputs else self.initial.get(n, False)
                     for n in self.names)

    def with_inputs(self, values: Mapping[str, bool]) -> "Circuit":
        return Circuit(self.names, {**self.inputs, **values}, self.gates, self.initial)

    def with_initial(self, values: Mapping[str, bool]) -> "Circuit":
        return Circuit(self.names, self.inputs, self.gates, {**self.initial, **values})


_GATE = re.compile(r"(\w+)\s*=\s*(.+?)\s*(?:@\s*(\d+))?$")
_SET = re.compile(r"(input|init)\s+(\w+)\s*=\s*(\w+)$")


def parse_circuit(text: str) -> Circuit:
    names: list[str] = []
    inputs: dict[str, bool] = {}
    gates: dict[str, Gate] = {}
    initial: dict[str, bool] = {}
    for raw in re.split(r"[;\n]", text):
        line = raw.split("%")[0].split("#")[0].strip()
        if not line:
            continue
        if m := _SET.match(line):
            kind, name, val = m.groups()
            if val not in _BOOL:
                raise InputError(f"truth value expected, got {val!r}")
            if kind == "input":
                inputs[name] = _BOOL[val]
                if name not in names:
                    names.append(name)
            else:
                initial[name] = _BOOL[val]
        elif m := _GATE.match(line):
            name, expr, delay = m.groups()
            if name in gates:
                raise InputError(f"gate {name} defined twice")
            gates[name] = Gate(name, parse_formula(expr), int(delay or 1))
            if name not in names:
                names.append(name)
        else:
            raise InputError(f"cannot parse circuit line {line!r}")
    stray = set(initial) - set(names)
    if stray:
        raise InputError(f"init for undefined points {sorted(stray)}")
    return Circuit(tuple(names), inputs, gates, initial)


def _eval(f: Formula, env: Mapping[str, bool]) -> bool:
    kind = f[0]
    if kind == "var":
        return env[f[1]]
    if kind == "true":
        return True
    if kind == "false":
        return False
    if kind == "not":
        return not _eval(f[1], env)
    a, b = _eval(f[1], env), _eval(f[2], env)
    if kind == "and":
        return a and b
    if kind == "or":
        return a or b
    if kind == "imp":
        return (not a) or b
    return a == b


def circuit_step(c: Circuit, history: list[tuple]) -> tuple:
    """The row following ``history`` (oldest first, nonempty)."""
    if not history:
        return c.first_row()
    t = len(history) + 1
    first = c.first_row()
    envs: dict[int, dict] = {}
    row = []
    for k, n in enumerate(c.names):
        if n in c.inputs:
            row.append(c.inputs[n])
            continue
        g = c.gates[n]
        src = t - g.delay
        if src < 1:
            row.append(first[k])
            continue
        if src not in envs:
            envs[src] = dict(zip(c.names, history[src - 1]))
        row.append(_eval(g.expr, envs[src]))
    return tuple(row)


@dataclass(frozen=True)
class CircuitRun:
    names: tuple
    rows: tuple
    status: str             # "stable", "oscillating" or "undecided"
    start: int | None = None
    period: int | None = None

    def table(self) -> str:
        width = [max(2, len(n)) for n in self.names]
        head = "    " + " ".join(n.rjust(w) for n, w in zip(self.names, width))
        out = [head]
        for t, r in enumerate(self.rows, 1):
            out.append(f"{t:>3}:" + " ".join(("T" if v else "F").rjust(w) for v, w in zip(r, width)))
        return "\n".join(out)

    def summary(self) -> str:
        if self.status == "stable":
            return f"stable from step {self.start}"
        if self.status == "oscillating":
            return f"oscillating with period {self.period} from step {self.start}"
        return "undecided"


def _simulate(c: Circuit, n: int) -> list[tuple]:
    rows: list[tuple] = []
    while len(rows) < n:
        rows.append(circuit_step(c, rows))
    return rows


def circuit_run(c: Circuit, steps: int) -> CircuitRun:
    """Simulate ``steps`` rows and classify the behaviour.

    The full state at time t is the window of the last ``max_delay`` rows,
    so classification looks ``max_delay`` rows past the table.  The first
    repeated window fixes a period, which is then shrunk to the least one
    and its start moved back as far as the rows allow.
    """
    if steps < 1:
        raise InputError("steps must be at least 1")
    d = c.max_delay
    rows = _simulate(c, steps + d)
    seen: dict[tuple, int] = {}
    hit = None
    for t in range(d, steps + d + 1):
        w = tuple(rows[t - d:t])
        if w in seen:
            hit = (seen[w], t)
            break
        seen[w] = t
    if hit is None:
        return CircuitRun(c.names, tuple(rows[:steps]), "undecided")
    i, j = hit
    p = j - i
    ext = _simulate(c, j + 3 * p + d)
    start = i - d + 1

    def periodic(q, s):
        return all(ext[t] == ext[t + q] for t in range(s - 1, s - 1 + p + q))

    q = min(q for q in range(1, p + 1) if p % q == 0 and periodic(q, start))
    while start > 1 and ext[start - 2] == ext[start - 2 + q]:
        start -= 1
    status = "stable" if q == 1 else "oscillating"
    return CircuitRun(c.names, tuple(rows[:steps]), status, start, None if q == 1 else q)


def settled_outputs(c: Circuit, outputs: Iterable[str], vary: Iterable[str], steps: int = 64):
    """Values the outputs settle on for every initial choice of ``vary``.

    Returns the common settled values, or None when some choice leaves an
    output oscillating or the choices disagree.
    """
    outputs = list(outputs)
    vary = list(vary)
    idx = [c.names.index(o) for o in outputs]
    common = None
    for vals in product((False, True), repeat=len(vary)):
        run = circuit_run(c.with_initial(dict(zip(vary, vals))), steps)
        if run.status == "undecided":
            return None
        ext = _simulate(c.with_initial(dict(zip(vary, vals))), run.start + (run.period or 1))
        cyc = ext[run.start - 1:]
        settled = {tuple(r[k] for k in idx) for r in cyc}
        if len(settled) != 1:
            return None
        val = settled.pop()
        if common is None:
            common = val
        elif common != val:
            return None
    return dict(zip(outputs, common))


FLIP_FLOP = """\
input In1 = T
input In2 = F
A1 = In1 & Out1 @ {and_delay}
A2 = In2 & Out2 @ {and_delay}
A3 = A1 | Out2
A4 = A2 | Out1
Out1 = ~A3
Out2 = ~A4
"""


def flip_flop(and_delay: int = 1) -> Circuit:
    """The symmetric feedback flip-flop with In1 held true."""
    return parse_circuit(FLIP_FLOP.format(and_delay=and_delay))
