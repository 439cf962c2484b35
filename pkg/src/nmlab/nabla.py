"""First-order formulas with the "almost all" quantifier over finite models.

Syntax extends the propositional grammar with unary atoms ``P(x)``,
equality ``x = y`` and the binders ``forall x. φ``, ``exists x. φ``,
``nabla x. φ`` and the restricted ``nabla x. φ : ψ``.  A binder's body
extends as far right as possible; parenthesize to stop it.

A model has named elements, unary predicates as bitmasks, and a weak
filter for the whole domain or, for the restricted quantifier, for every
subset that comes up during evaluation.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ContractError, InputError
from .sets import bits, full, subsets

# formulas are tuples:
#   ("pred", P, x) ("eq", x, y) ("true",) ("false",) ("not", f) ("and"/"or"/"imp"/"iff", f, g)
#   ("forall"/"exists"/"nabla", x, f) ("nabla:", x, f, g)
NTRUE = ("true",)
NFALSE = ("false",)

_TOKEN = re.compile(r"\s*(<->|->|[A-Za-z_][A-Za-z0-9_']*|[()~&|!.:=,]|\S)")
_BINDERS = ("forall", "exists", "nabla")


def _tokens(text: str) -> list[str]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise InputError(f"cannot tokenize {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want=None):
        tok = self.peek()
        if tok is None or (want is not None and tok != want):
            raise InputError(f"expected {want or 'more input'}, found {tok!r}")
        self.i += 1
        return tok

    def parse(self):
        f = self.iff()
        if self.peek() is not None:
            raise InputError(f"unexpected {self.peek()!r}")
        return f

    def iff(self):
        left = self.imp()
        if self.peek() == "<->":
            self.take()
            return ("iff", left, self.iff())
        return left

    def imp(self):
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return ("imp", left, self.imp())
        return left

    def disj(self):
        left = self.conj()
        while self.peek() == "|":
            self.take()
            left = ("or", left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.peek() == "&":
            self.take()
            left = ("and", left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok in ("~", "!"):
            self.take()
            return ("not", self.unary())
        if tok in _BINDERS:
            self.take()
            var = self.take()
            self.take(".")
            if tok == "nabla":
                body = self.restricted_body()
                if self.peek() == ":":
                    self.take()
                    return ("nabla:", var, body, self.iff())
                return ("nabla", var, body)
            return (tok, var, self.iff())
        return self.atom()

    def restricted_body(self):
        # the part before ':' in a restricted quantifier
        return self.iff()

    def atom(self):
        tok = self.take()
        if tok == "(":
            f = self.iff()
            self.take(")")
            return f
        if tok in ("T", "true", "1"):
            return NTRUE
        if tok in ("F", "false", "0"):
            return NFALSE
        if self.peek() == "(":
            self.take("(")
            var = self.take()
            self.take(")")
            return ("pred", tok, var)
        if self.peek() == "=":
            self.take("=")
            return ("eq", tok, self.take())
        raise InputError(f"unexpected {tok!r}")


def parse_nabla(text: str):
    return _Parser(text).parse()


def format_nabla(f) -> str:
    op = f[0]
    if op == "pred":
        return f"{f[1]}({f[2]})"
    if op == "eq":
        return f"{f[1]} = {f[2]}"
    if op == "true":
        return "T"
    if op == "false":
        return "F"
    if op == "not":
        return "~" + _wrap(f[1])
    if op in ("and", "or", "imp", "iff"):
        sym = {"and": "&", "or": "|", "imp": "->", "iff": "<->"}[op]
        return f"{_wrap(f[1])} {sym} {_wrap(f[2])}"
    if op == "nabla:":
        return f"nabla {f[1]}. {_wrap(f[2])} : {_wrap(f[3])}"
    return f"{op} {f[1]}. {_wrap(f[2])}"


def _wrap(f) -> str:
    s = format_nabla(f)
    return s if f[0] in ("pred", "eq", "true", "false", "not") else f"({s})"


def free_variables(f) -> set[str]:
    op = f[0]
    if op == "pred":
        return {f[2]}
    if op == "eq":
        return {f[1], f[2]}
    if op in ("true", "false"):
        return set()
    if op == "not":
        return free_variables(f[1])
    if op in ("and", "or", "imp", "iff"):
        return free_variables(f[1]) | free_variables(f[2])
    if op == "nabla:":
        return (free_variables(f[2]) | free_variables(f[3])) - {f[1]}
    return free_variables(f[2]) - {f[1]}


def depth(f) -> int:
    op = f[0]
    if op in ("pred", "eq", "true", "false"):
        return 0
    if op == "not":
        return depth(f[1])
    if op in ("and", "or", "imp", "iff"):
        return max(depth(f[1]), depth(f[2]))
    if op == "nabla:":
        return 1 + max(depth(f[2]), depth(f[3]))
    return 1 + depth(f[2])


# ---------------------------------------------------------------------------

def is_weak_filter(base: int, family: Iterable[int]) -> bool:
    fam = set(family)
    if base not in fam:
        return False
    if any(A & ~base for A in fam):
        return False
    for A in fam:
        for B in subsets(base):
            if A & ~B == 0 and B not in fam:
                return False
    return all(A & B for A in fam for B in fam)


@dataclass
class NablaModel:
    elements: tuple[str, ...]
    predicates: dict[str, int]
    systems: dict[int, tuple[int, ...]] = field(default_factory=dict)

    @property
    def top(self) -> int:
        return full(len(self.elements))

    def filter_for(self, base: int) -> tuple[int, ...]:
        if base not in self.systems:
            raise ContractError(f"no weak filter given for {{{','.join(self.elements[i] for i in bits(base))}}}")
        return self.systems[base]

    def check(self) -> list[int]:
        """Base sets whose family is not a weak filter (the empty base set is exempt)."""
        return [b for b, fam in self.systems.items() if b and not is_weak_filter(b, fam)]


def _extension(m: NablaModel, f, var: str, env: dict[str, int]) -> int:
    out = 0
    for a in range(len(m.elements)):
        if _eval(m, f, {**env, var: a}):
            out |= 1 << a
    return out


def _eval(m: NablaModel, f, env: dict[str, int]) -> bool:
    op = f[0]
    if op == "pred":
        if f[1] not in m.predicates:
            raise InputError(f"unknown predicate {f[1]!r}")
        if f[2] not in env:
            raise InputError(f"free variable {f[2]!r}")
        return bool(m.predicates[f[1]] >> env[f[2]] & 1)
    if op == "eq":
        if f[1] not in env or f[2] not in env:
            raise InputError("free variable in equality")
        return env[f[1]] == env[f[2]]
    if op == "true":
        return True
    if op == "false":
        return False
    if op == "not":
        return not _eval(m, f[1], env)
    if op == "and":
        return _eval(m, f[1], env) and _eval(m, f[2], env)
    if op == "or":
        return _eval(m, f[1], env) or _eval(m, f[2], env)
    if op == "imp":
        return (not _eval(m, f[1], env)) or _eval(m, f[2], env)
    if op == "iff":
        return _eval(m, f[1], env) == _eval(m, f[2], env)
    if op == "forall":
        return _extension(m, f[2], f[1], env) == m.top
    if op == "exists":
        return _extension(m, f[2], f[1], env) != 0
    if op == "nabla":
        ext = _extension(m, f[2], f[1], env)
        return any(A & ~ext == 0 for A in m.filter_for(m.top))
    if op == "nabla:":
        base = _extension(m, f[2], f[1], env)
        ext = _extension(m, f[3], f[1], env)
        return any(A & ~ext == 0 for A in m.filter_for(base))
    raise InputError(f"unknown connective {op!r}")


def eval_nabla(m: NablaModel, f, max_depth: int = 3) -> bool:
    if isinstance(f, str):
        f = parse_nabla(f)
    if free_variables(f):
        raise InputError(f"formula has free variables {sorted(free_variables(f))}")
    if depth(f) > max_depth:
        raise InputError(f"quantifier depth {depth(f)} exceeds {max_depth}")
    return _eval(m, f, {})


# ---------------------------------------------------------------------------

def random_weak_filter(rng: random.Random, base: int, tries: int = 4) -> tuple[int, ...]:
    """Upward closure of pairwise intersecting random generators (always including ``base``)."""
    gens = [base]
    if base:
        pool = [s for s in subsets(base) if s]
        for _ in range(rng.randint(0, tries)):
            g = rng.choice(pool)
            if all(g & h for h in gens):
                gens.append(g)
    fam = {B for B in subsets(base) if any(g & ~B == 0 for g in gens)}
    return tuple(sorted(fam))


def random_model(rng: random.Random, n: int, system: bool = False) -> NablaModel:
    """Predicates S0..S{2^n - 1}, S_i true exactly on the subset with mask i."""
    elements = tuple(chr(ord("a") + i) for i in range(n))
    preds = {f"S{i}": i for i in range(1 << n)}
    top = full(n)
    if system:
        systems = {b: random_weak_filter(rng, b) for b in range(1 << n)}
    else:
        systems = {top: random_weak_filter(rng, top)}
    return NablaModel(elements, preds, systems)


def _P(i: int, var: str = "x"):
    return ("pred", f"S{i}", var)


def _all(v, f):
    return ("forall", v, f)


def _ex(v, f):
    return ("exists", v, f)


def plain_axiom_instances(n: int):
    """(name, formula) for every instance of the plain axioms with one-place
    formulas ranging over all extensions."""
    N = 1 << n
    for i in range(N):
        for j in range(N):
            yield "1", ("imp", ("and", ("nabla", "x", _P(i)), _all("x", ("imp", _P(i), _P(j)))),
                        ("nabla", "x", _P(j)))
    for i in range(N):
        yield "2", ("imp", ("nabla", "x", _P(i)), ("not", ("nabla", "x", ("not", _P(i)))))
        yield "3a", ("imp", _all("x", _P(i)), ("nabla", "x", _P(i)))
        yield "3b", ("imp", ("nabla", "x", _P(i)), _ex("x", _P(i)))
        yield "4", ("iff", ("nabla", "x", _P(i, "x")), ("nabla", "y", _P(i, "y")))


def system_axiom_instances(n: int):
    N = 1 << n
    xx = ("eq", "x", "x")
    for i in range(N):
        yield "1a", ("iff", ("nabla", "x", _P(i)), ("nabla:", "x", xx, _P(i)))
    for s in range(N):
        for t in range(N):
            for p in range(N):
                yield "1b", ("imp", ("and", _all("x", ("iff", _P(s), _P(t))), ("nabla:", "x", _P(s), _P(p))),
                             ("nabla:", "x", _P(t), _P(p)))
                yield "2", ("imp", ("and", ("nabla:", "x", _P(s), _P(t)),
                                    _all("x", ("imp", ("and", _P(s), _P(t)), _P(p)))),
                            ("nabla:", "x", _P(s), _P(p)))
    for i in range(N):
        for j in range(N):
            yield "3", ("imp", ("and", _ex("x", _P(i)), ("nabla:", "x", _P(i), _P(j))),
                        ("not", ("nabla:", "x", _P(i), ("not", _P(j)))))
            yield "4a", ("imp", _all("x", ("imp", _P(i), _P(j))), ("nabla:", "x", _P(i), _P(j)))
            yield "4b", ("imp", ("nabla:", "x", _P(i), _P(j)),
                         ("imp", _ex("x", _P(i)), _ex("x", ("and", _P(i), _P(j)))))
            yield "5", ("iff", ("nabla:", "x", _P(i), _P(j)), ("nabla:", "y", _P(i, "y"), _P(j, "y")))


@dataclass
class AxiomReport:
    axioms: str
    models: int
    instances: int
    violations: list[tuple[str, str]]

    @property
    def holds(self) -> bool:
        return not self.violations


def nabla_axiom_soundness(axioms: str = "plain", trials: int = 200, n: int = 4, seed: int = 0) -> AxiomReport:
    """Evaluate every axiom instance in ``trials`` seeded random models."""
    if axioms not in ("plain", "system"):
        raise InputError("axioms must be 'plain' or 'system'")
    rng = random.Random(seed)
    system = axioms == "system"
    instances = list((plain_axiom_instances if not system else system_axiom_instances)(n))
    rep = AxiomReport(axioms, trials, 0, [])
    for _ in range(trials):
        m = random_model(rng, n, system)
        for name, f in instances:
            rep.instances += 1
            if not _eval(m, f, {}):
                rep.violations.append((name, format_nabla(f)))
    return rep


def model_from_sets(elements: Sequence[str], predicates: dict[str, Iterable[str]],
                    systems: dict[Iterable[str], Iterable[Iterable[str]]]) -> NablaModel:
    """Build a model from element names rather than masks."""
    idx = {e: i for i, e in enumerate(elements)}

    def mask(names):
        out = 0
        for nm in names:
            out |= 1 << idx[nm]
        return out

    preds = {p: mask(v) for p, v in predicates.items()}
    sy = {mask(base): tuple(sorted(mask(A) for A in fam)) for base, fam in systems.items()}
    return NablaModel(tuple(elements), preds, sy)
