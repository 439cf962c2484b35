"""Defeasible inheritance nets and path validity.

A net has direct links ``x -> y`` and ``x -/> y``.  A potential path is a
chain of positive links optionally closed by one negative link.  Validity
is decided upward: a compound path is valid when its initial segment is,
it is not cut off by a more specific contradicting link, and every
competing path into the same endpoint is itself cut off.  Cut-offs only
hit at the end of a path: the contradicting link must enter the endpoint
directly.

Text format, one link per line or separated by ``;``::

    a -> b
    c -/> d
    node e
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from graphlib import CycleError, TopologicalSorter
from typing import Iterable

from .errors import ContractError, InputError


@dataclass(frozen=True)
class Path:
    nodes: tuple
    signs: tuple        # one "+" or "-" per link

    def __post_init__(self):
        if self.nodes and len(self.signs) != len(self.nodes) - 1:
            raise InputError("a path needs one sign per link")

    @property
    def source(self):
        return self.nodes[0]

    @property
    def target(self):
        return self.nodes[-1]

    @property
    def potential(self) -> bool:
        return "-" not in self.signs[:-1]

    @property
    def positive(self) -> bool:
        return bool(self.signs) and self.signs[-1] == "+"

    def __len__(self):
        return len(self.signs)

    def __add__(self, other: "Path") -> "Path":
        if not self.nodes:
            return other
        if not other.nodes:
            return self
        if self.target != other.source:
            raise InputError("paths do not meet")
        return Path(self.nodes + other.nodes[1:], self.signs + other.signs)

    def prefix(self, k: int) -> "Path":
        return Path(self.nodes[:k + 1], self.signs[:k])

    def subpaths(self) -> list["Path"]:
        n = len(self.signs)
        return [Path(self.nodes[i:j + 1], self.signs[i:j]) for i in range(n) for j in range(i + 1, n + 1)]

    def __str__(self):
        if not self.signs:
            return str(self.nodes[0]) if self.nodes else "()"
        out = str(self.nodes[0])
        for s, n in zip(self.signs, self.nodes[1:]):
            out += (" -> " if s == "+" else " -/> ") + str(n)
        return out


@dataclass(frozen=True)
class InheritanceNet:
    points: tuple
    links: frozenset        # (x, y, sign)

    def __post_init__(self):
        pts = set(self.points)
        pairs = {}
        for x, y, s in self.links:
            if x not in pts or y not in pts:
                raise InputError(f"link {x} {s} {y} uses an unknown point")
            if s not in "+-":
                raise InputError("link signs are + or -")
            if x == y:
                raise InputError(f"self link at {x}")
            if pairs.setdefault((x, y), s) != s:
                raise InputError(f"hard contradiction between {x} and {y}")
        ts = TopologicalSorter({p: set() for p in self.points})
        for x, y, _ in self.links:
            ts.add(y, x)
        try:
            order = tuple(ts.static_order())
        except CycleError as exc:
            raise InputError(f"net has a cycle through {exc.args[1]}") from None
        object.__setattr__(self, "_sign", pairs)
        object.__setattr__(self, "_order", order)

    def sign(self, x, y) -> str | None:
        return self._sign.get((x, y))

    def out(self, x) -> list[tuple]:
        return sorted((y, s) for (a, y), s in self._sign.items() if a == x)

    def into(self, y, sign: str) -> list:
        return sorted(a for (a, b), s in self._sign.items() if b == y and s == sign)

    def with_points(self, extra: Iterable) -> "InheritanceNet":
        return InheritanceNet(self.points + tuple(p for p in extra if p not in self.points), self.links)

    def to_text(self) -> str:
        lines = [f"{x} {'->' if s == '+' else '-/>'} {y}" for x, y, s in sorted(self.links)]
        linked = {x for x, _, _ in self.links} | {y for _, y, _ in self.links}
        lines += [f"node {p}" for p in self.points if p not in linked]
        return "\n".join(lines) + "\n"


_LINK = re.compile(r"(\w+)\s*(->|-/>|!->)\s*(\w+)$")


def parse_net(text: str) -> InheritanceNet:
    points: list = []
    links = set()

    def add(p):
        if p not in points:
            points.append(p)

    for raw in re.split(r"[;\n]", text):
        line = raw.split("%")[0].split("#")[0].strip()
        if not line:
            continue
        if line.startswith("node "):
            for p in line[5:].replace(",", " ").split():
                add(p)
            continue
        m = _LINK.match(line)
        if not m:
            raise InputError(f"cannot parse link {line!r}")
        add(m[1])
        add(m[3])
        links.add((m[1], m[3], "+" if m[2] == "->" else "-"))
    return InheritanceNet(tuple(points), frozenset(links))


def net(links: Iterable[tuple], points: Iterable = ()) -> InheritanceNet:
    """Build from ``(x, y)`` or ``(x, y, sign)`` tuples."""
    pts: list = list(points)
    out = set()
    for link in links:
        x, y, s = (*link, "+")[:3]
        for p in (x, y):
            if p not in pts:
                pts.append(p)
        out.add((x, y, s))
    return InheritanceNet(tuple(pts), frozenset(out))


def generalized_paths(n: InheritanceNet, x, y) -> list[Path]:
    """All nonempty chains of links from x to y, in depth-first order."""
    if x not in n.points or y not in n.points:
        raise InputError("unknown endpoint")
    found = []

    def walk(nodes, signs):
        here = nodes[-1]
        if here == y and signs:
            found.append(Path(tuple(nodes), tuple(signs)))
            return
        for nxt, s in n.out(here):
            walk(nodes + [nxt], signs + [s])

    walk([x], [])
    return found


def potential_paths(n: InheritanceNet, x, y) -> list[Path]:
    return [p for p in generalized_paths(n, x, y) if p.potential]


@dataclass(frozen=True)
class Preclusion:
    """A competing path ``tau`` closed by the link ``v -> y`` of opposite sign,
    cut off through ``z`` with ``rho: x ... z`` and ``rho2: z ... v``
    (both empty when ``z`` is the source)."""
    v: object
    tau: Path
    z: object
    rho: Path
    rho2: Path


@dataclass(frozen=True)
class PathVerdict:
    source: object
    target: object
    polarity: str
    valid: bool
    path: Path
    evidence: tuple     # valid: per link, tuple of Preclusion; invalid: failure record
    reason: str = ""


class _Engine:
    def __init__(self, n: InheritanceNet):
        self.n = n
        self.path_to = lru_cache(maxsize=None)(self._path_to)
        self.step = lru_cache(maxsize=None)(self._step)

    def _path_to(self, x, v) -> Path | None:
        """Some valid positive path from x to v, or None."""
        n = self.n
        if n.sign(x, v) == "+":
            return Path((x, v), ("+",))
        for u in n.into(v, "+"):
            if u == x:
                continue
            p = self.path_to(x, u)
            if p is not None and self.step(x, u, v, "+")[0]:
                return p + Path((u, v), ("+",))
        return None

    def _step(self, x, u, y, sign):
        """Is a valid path x ... u extended by ``u sign y`` still valid?

        Returns ``(ok, evidence)``; evidence is the preclusions on success
        and the failure record otherwise.
        """
        n = self.n
        other = "-" if sign == "+" else "+"
        # more specific contradicting link
        for v in n.into(y, other):
            tau = Path((x,), ()) if v == x else self.path_to(x, v)
            if tau is None:
                continue
            tau2 = self.path_to(v, u)
            if tau2 is not None:
                return False, ("precluded", v, tau, tau2)
        pre = []
        for v in n.into(y, other):
            tau = Path((x,), ()) if v == x else self.path_to(x, v)
            if tau is None:
                continue
            hit = None
            for z in n.into(y, sign):
                if z == x:
                    hit = Preclusion(v, tau, z, Path((x,), ()), Path((x,), ()))
                    break
                rho = self.path_to(x, z)
                rho2 = self.path_to(z, v) if rho is not None else None
                if rho2 is not None:
                    hit = Preclusion(v, tau, z, rho, rho2)
                    break
            if hit is None:
                return False, ("unanswered", v, tau)
            pre.append(hit)
        return True, tuple(pre)


def path_valid(n: InheritanceNet, sigma: Path) -> PathVerdict:
    if not sigma.signs or not sigma.potential:
        raise ContractError(f"{sigma} is not a nonempty potential path")
    for a, b, s in zip(sigma.nodes, sigma.nodes[1:], sigma.signs):
        if n.sign(a, b) != s:
            raise ContractError(f"{sigma} uses a link not in the net")
    eng = _Engine(n)
    x = sigma.source
    pol = sigma.signs[-1]
    evidence = [()]
    for k in range(1, len(sigma)):
        u, y, s = sigma.nodes[k], sigma.nodes[k + 1], sigma.signs[k]
        ok, ev = eng.step(x, u, y, s)
        if not ok:
            kind = ev[0]
            reason = (f"{sigma.prefix(k + 1)} is cut off by {ev[1]} {'-/>' if s == '+' else '->'} {y}"
                      if kind == "precluded" else
                      f"competing path {ev[2]} into {y} via {ev[1]} is not cut off")
            return PathVerdict(x, sigma.target, pol, False, sigma, (k,) + ev, reason)
        evidence.append(ev)
    return PathVerdict(x, sigma.target, pol, True, sigma, tuple(evidence))


def holds(n: InheritanceNet, x, y, polarity: str = "+") -> bool:
    """Is there a valid potential path from x to y ending with ``polarity``?"""
    return any(path_valid(n, p).valid for p in potential_paths(n, x, y) if p.signs[-1] == polarity)


def _explicit_valid(n: InheritanceNet, p: Path) -> bool:
    return not p.signs or path_valid(n, p).valid


def replay(n: InheritanceNet, verdict: PathVerdict) -> bool:
    """Re-derive the verdict from its evidence alone.

    Every path named in the evidence is re-validated on its own, and the
    list of answered competitors is checked to be complete.
    """
    sigma = verdict.path
    x = sigma.source
    if not verdict.valid:
        k, kind, v = verdict.evidence[:3]
        u, y, s = sigma.nodes[k], sigma.nodes[k + 1], sigma.signs[k]
        other = "-" if s == "+" else "+"
        if n.sign(v, y) != other or not path_valid(n, sigma.prefix(k)).valid:
            return False
        tau = verdict.evidence[3]
        if tau.source != x or tau.target != v or not _explicit_valid(n, tau):
            return False
        if kind == "precluded":
            tau2 = verdict.evidence[4]
            return tau2.source == v and tau2.target == u and _explicit_valid(n, tau2)
        for z in n.into(y, s):
            if z == x:
                return False
            if any(path_valid(n, r).valid and any(path_valid(n, r2).valid for r2 in potential_paths(n, z, v)
                                                   if r2.positive)
                   for r in potential_paths(n, x, z) if r.positive):
                return False
        return True
    for k in range(1, len(sigma)):
        u, y, s = sigma.nodes[k], sigma.nodes[k + 1], sigma.signs[k]
        other = "-" if s == "+" else "+"
        answered = set()
        for pc in verdict.evidence[k]:
            if n.sign(pc.v, y) != other or n.sign(pc.z, y) != s:
                return False
            if not (_explicit_valid(n, pc.tau) and pc.tau.nodes[0] == x and pc.tau.nodes[-1] == pc.v):
                return False
            if pc.z != x and not (_explicit_valid(n, pc.rho) and _explicit_valid(n, pc.rho2)
                                  and pc.rho.target == pc.z and pc.rho2.source == pc.z
                                  and pc.rho2.target == pc.v):
                return False
            answered.add(pc.v)
        for v in n.into(y, other):
            reach = v == x or any(path_valid(n, p).valid for p in potential_paths(n, x, v) if p.positive)
            if reach and v not in answered:
                return False
    return True
