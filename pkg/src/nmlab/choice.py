"""Abstract choice functions over a finite universe.

A choice function maps each set of its domain to a subset of the
universe.  Sets are bitmasks over ``elements``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import ClosureError, InputError
from .sets import bits, canonical_order, fmt, full, parse_braced, subsets


@dataclass(frozen=True)
class ChoiceFunction:
    elements: tuple
    table: Mapping[int, int]

    def __post_init__(self):
        u = full(len(self.elements))
        for x, y in self.table.items():
            if x & ~u or y & ~u:
                raise InputError("choice function mentions elements outside the universe")
        object.__setattr__(self, "table", dict(self.table))

    def __hash__(self):
        return hash((self.elements, tuple(sorted(self.table.items()))))

    def __call__(self, x: int) -> int:
        return self.table[x]

    def __contains__(self, x: int) -> bool:
        return x in self.table

    @property
    def universe(self) -> int:
        return full(len(self.elements))

    @property
    def domain(self) -> list[int]:
        """Domain sets in canonical order."""
        return canonical_order(self.table)

    def names(self, mask: int) -> str:
        return fmt(mask, [str(e) for e in self.elements])

    def restrict(self, domain: Iterable[int]) -> "ChoiceFunction":
        return ChoiceFunction(self.elements, {x: self.table[x] for x in domain})

    def to_text(self) -> str:
        dom = self.domain
        parts = ["elements: " + ",".join(str(e) for e in self.elements),
                 "domain: " + ",".join(self.names(x) for x in dom)]
        parts += [f"f{self.names(x)}={self.names(self.table[x])}" for x in dom]
        return ";\n".join(parts) + "\n"

    @staticmethod
    def identity(elements: Sequence, domain: Iterable[int] | None = None) -> "ChoiceFunction":
        elements = tuple(elements)
        dom = subsets(full(len(elements))) if domain is None else domain
        return ChoiceFunction(elements, {x: x for x in dom})

    @staticmethod
    def from_structure(s, domain: Iterable[int] | None = None) -> "ChoiceFunction":
        return ChoiceFunction(s.elements, s.mu_table(domain))

    @staticmethod
    def from_names(elements: Sequence, mapping: Mapping[Iterable, Iterable]) -> "ChoiceFunction":
        elements = tuple(elements)
        index = {e: k for k, e in enumerate(elements)}

        def m(xs):
            try:
                return sum(1 << index[x] for x in set(xs))
            except KeyError as exc:
                raise InputError(f"unknown element {exc.args[0]!r}") from None

        return ChoiceFunction(elements, {m(x): m(y) for x, y in mapping.items()})


_SET = r"\{[^}]*\}"


def parse_choice(text: str) -> ChoiceFunction:
    """Parse ``elements: a,b,c; domain: {a,b},{a,b,c}; f{a,b}={b}; ...``.

    ``elements`` is optional (defaults to order of first appearance) and so
    is ``domain`` (defaults to the sets given an ``f`` value).  Every
    domain set needs an ``f`` value.
    """
    items = [p.strip() for p in re.split(r"[;\n]", text)]
    items = [p for p in items if p and not p.startswith("%")]
    elements: list[str] | None = None
    domain_txt: list[str] | None = None
    values: list[tuple[str, str]] = []
    for item in items:
        if item.startswith("elements:"):
            elements = [e.strip() for e in item[len("elements:"):].split(",") if e.strip()]
        elif item.startswith("domain:"):
            domain_txt = re.findall(_SET, item)
        else:
            m = re.fullmatch(rf"f\s*({_SET})\s*=\s*({_SET})", item)
            if not m:
                raise InputError(f"cannot parse {item!r}")
            values.append((m.group(1), m.group(2)))
    if elements is None:
        seen: list[str] = []
        for s in (domain_txt or []) + [x for pair in values for x in pair]:
            for e in s.strip("{}").split(","):
                e = e.strip()
                if e and e not in seen:
                    seen.append(e)
        elements = seen
    index = {e: k for k, e in enumerate(elements)}
    table = {}
    for x, y in values:
        xm = parse_braced(x, index)
        if xm in table:
            raise InputError(f"duplicate value for {x}")
        table[xm] = parse_braced(y, index)
    if domain_txt is not None:
        dom = [parse_braced(d, index) for d in domain_txt]
        missing = [d for d in dom if d not in table]
        if missing:
            raise InputError("no value given for domain set " + fmt(missing[0], elements))
        extra = set(table) - set(dom)
        if extra:
            raise InputError("value given for a set outside the domain: " + fmt(min(extra), elements))
    return ChoiceFunction(tuple(elements), table)


def closure_failure(domain: Iterable[int], kind: str) -> tuple | None:
    """First witness that ``domain`` is not closed under ``kind``.

    ``kind`` is one of ``"cap"``, ``"cup"``, ``"minus"``, ``"singletons"``.
    Set difference closure is only required where the result is nonempty.
    """
    dom = canonical_order(domain)
    dset = set(dom)
    if kind == "singletons":
        u = 0
        for x in dom:
            u |= x
        for i in bits(u):
            if 1 << i not in dset:
                return (1 << i,)
        return None
    for a in dom:
        for b in dom:
            if kind == "cap":
                r = a & b
            elif kind == "cup":
                r = a | b
            elif kind == "minus":
                r = a & ~b
                if not r:
                    continue
            else:
                raise InputError(f"unknown closure kind {kind!r}")
            if r not in dset:
                return (a, b)
    return None


def require_closure(domain: Iterable[int], kinds: Iterable[str], names: Sequence | None = None) -> None:
    label = {"cap": "intersections", "cup": "unions", "minus": "set differences",
             "singletons": "singletons"}
    dom = list(domain)
    for kind in kinds:
        w = closure_failure(dom, kind)
        if w is not None:
            shown = w if names is None else tuple(fmt(m, names) for m in w)
            raise ClosureError(f"domain is not closed under {label[kind]}: witness {shown}")


def all_choice_functions(n: int, domain: Sequence[int] | None = None, nonempty: bool = False):
    """Every f with f(X) a subset of X on ``domain`` (default: the full power set).

    With ``nonempty`` the empty value is excluded for nonempty X.
    """
    dom = list(subsets(full(n))) if domain is None else list(domain)
    options = []
    for x in dom:
        opts = [y for y in subsets(x) if not (nonempty and x and not y)]
        options.append(opts)
    from itertools import product

    elements = tuple("abcdefgh"[:n])
    for combo in product(*options):
        yield ChoiceFunction(elements, dict(zip(dom, combo)))
