"""Command-line entry point.

    nmlab check mu --cond mu-PR f.cf
    nmlab check cum-alpha --alpha 1 f.cf
    nmlab represent smooth f.cf --verify
    nmlab inherit net.txt --query a d -
    nmlab circuit c.ckt --steps 12
    nmlab revise "p&q" "~p" --distance hamming
    nmlab sequent close start.seq --rules PlI,PlRM,PlCLM,PlCC

Exit codes: 0 pass, 1 a checked property fails, 2 bad input, 3 budget
exceeded.  Every report starts with the tool version, the seed and a
digest of the inputs, and contains nothing else that varies between runs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .choice import parse_choice
from .circuits import circuit_run, parse_circuit
from .conditions import MU_CONDITIONS, ConditionReport, check_cum_alpha, check_mu_condition
from .errors import ConditionError, ContractError, InputError, NMError, ResourceError
from .ibrs import check_essential_smooth, check_total_smooth, higher_mu, parse_ibrs
from .inheritance import holds as net_holds
from .inheritance import parse_net, path_valid, potential_paths
from .logic import Language, format_formula, parse_formula, variables
from .representation import DEFAULT_BUDGET, SYNTHESIZERS
from .revision import (REVISION_SUITE, check_agm, check_loop, distance_revision, hamming,
                       parse_distance, revise_theories)
from .rules import SYSTEM_P, check_logical_rule, choice_from_structure_over
from .sequents import PL, close_with_stages, derives, parse_sequents, scott_close
from .sets import fmt, subsets
from .size import check_size_condition, parse_size_system
from .structures import PrefStructure, is_ranked, is_smooth, parse_structure

SCHEMA = "nmlab-report/1"


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    bound: int | None = None
    seed: int = 0
    fmt: str = "text"


@dataclass
class Report:
    config: RunConfig
    digest: str
    ok: bool = True
    results: list = field(default_factory=list)
    lines: list = field(default_factory=list)
    body: str | None = None

    def add(self, rep: ConditionReport, names=None):
        self.ok &= rep.holds
        self.results.append(_report_json(rep, names))
        self.lines.append(rep.describe(names))

    def render(self) -> str:
        cfg = self.config
        if cfg.fmt == "json":
            doc = {"schema": SCHEMA, "tool": "nmlab", "version": __version__, "command": cfg.command,
                   "seed": cfg.seed, "bound": cfg.bound, "input_digest": self.digest, "ok": self.ok,
                   "results": self.results}
            if self.body is not None:
                doc["output"] = self.body
            return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
        if cfg.fmt == "dot" and self.body is not None:
            return self.body
        head = f"# nmlab {__version__} {cfg.command} seed={cfg.seed} input=sha256:{self.digest[:16]}"
        out = [head, *self.lines]
        if self.body is not None:
            out.append(self.body.rstrip("\n"))
        return "\n".join(out) + "\n"


def _names(mask, names):
    return [str(names[i]) for i in range(len(names)) if mask >> i & 1]


def _report_json(rep: ConditionReport, names=None) -> dict:
    cx = None
    if rep.counterexample is not None:
        cx = [(_names(c, names) if names is not None and isinstance(c, int) else
               c if isinstance(c, (int, str)) else str(c)) for c in rep.counterexample]
    return {"name": rep.name, "holds": rep.holds, "counterexample": cx, "checked": rep.checked,
            "detail": rep.detail}


def _digest(texts) -> str:
    h = hashlib.sha256()
    for t in texts:
        h.update(t.encode())
        h.update(b"\0")
    return h.hexdigest()


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _located(path: str, parse, text: str):
    try:
        return parse(text)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def _split(value: str | None) -> list[str]:
    return [v.strip() for v in (value or "").split(",") if v.strip()]


# commands -------------------------------------------------------------------

def cmd_check(args, cfg: RunConfig, texts: list) -> Report:
    kind = args.kind
    path = args.input
    text = _read(path) if path else ""
    texts.append(text)
    rep = Report(cfg, _digest(texts))
    conds = _split(args.cond)
    if kind == "mu":
        f = _located(path, parse_choice, text)
        for c in conds or ["mu-subset", "mu-PR"]:
            rep.add(check_mu_condition(f, c), f.elements)
    elif kind == "cum-alpha":
        f = _located(path, parse_choice, text)
        rep.add(check_cum_alpha(f, args.alpha, args.transitive), f.elements)
    elif kind == "rule":
        if not args.vars:
            raise InputError("check rule needs --vars")
        lang = Language(_split(args.vars))
        s = _located(path, parse_structure, text)
        try:
            s = PrefStructure(tuple(int(e) for e in s.elements), s.nodes, s.arrows)
        except ValueError:
            raise InputError(f"{path}: elements must be valuation indices 0..{lang.size - 1}") from None
        if any(not 0 <= e < lang.size for e in s.elements):
            raise InputError(f"{path}: elements must be valuation indices 0..{lang.size - 1}")
        f = choice_from_structure_over(lang, s)
        for r in _split(args.rules) or list(SYSTEM_P):
            res = check_logical_rule(f, lang, r, sample=args.bound, seed=cfg.seed)
            rep.add(res)
    elif kind == "size":
        s = _located(path, parse_size_system, text)
        if not conds:
            raise InputError("check size needs --cond")
        for c in conds:
            rep.add(check_size_condition(s, c), s.elements)
    elif kind in ("agm", "loop"):
        if path:
            d = _located(path, parse_distance, text)
        elif args.vars:
            d = hamming(Language(_split(args.vars)))
        else:
            raise InputError(f"check {kind} needs a distance file or --vars for the Hamming distance")
        if kind == "agm":
            op = distance_revision(d)
            for c in conds or list(REVISION_SUITE):
                rep.add(check_agm(op, c, sample=args.sample, seed=cfg.seed), d.names)
        else:
            rep.add(check_loop(d, max_len=args.bound or 6), d.names)
    elif kind in ("smooth", "ranked"):
        s = _located(path, parse_structure, text)
        chk = is_smooth(s, subsets(s.universe)) if kind == "smooth" else is_ranked(s)
        wit = None
        if chk.witness is not None:
            if kind == "smooth":
                X, k = chk.witness
                wit = (fmt(X, [str(e) for e in s.elements]), s.node_name(k))
            else:
                wit = tuple(s.node_name(k) for k in chk.witness)
        rep.add(ConditionReport(kind, chk.holds, wit))
    elif kind == "ibrs":
        g = _located(path, parse_ibrs, text)
        X = _split(args.set) if args.set else list(g.points)
        rep.lines.append("mu = {" + ",".join(sorted(higher_mu(g, X))) + "}")
        rep.add(check_essential_smooth(g, X))
        rep.add(check_total_smooth(g, X))
        if cfg.fmt == "dot":
            rep.body = g.to_dot()
    else:  # pragma: no cover - argparse restricts the choices
        raise InputError(f"unknown check {kind!r}")
    return rep


def cmd_represent(args, cfg: RunConfig, texts: list) -> Report:
    text = _read(args.input)
    texts.append(text)
    f = _located(args.input, parse_choice, text)
    rep = Report(cfg, _digest(texts))
    build = SYNTHESIZERS[args.kind]
    kwargs = {"verify": args.verify}
    if args.kind != "ranked":
        kwargs["budget"] = args.bound or DEFAULT_BUDGET
    s = build(f, **kwargs)
    rep.lines.append(f"{args.kind} structure: {len(s.nodes)} nodes, {len(s.arrows)} arrows"
                     + (", round trip verified" if args.verify else ""))
    rep.body = s.to_dot() if cfg.fmt == "dot" else s.to_text()
    if args.output:
        Path(args.output).write_text(s.to_text())
    return rep


def cmd_inherit(args, cfg: RunConfig, texts: list) -> Report:
    text = _read(args.input)
    texts.append(text)
    n = _located(args.input, parse_net, text)
    rep = Report(cfg, _digest(texts))
    x, y, pol = args.query
    pol = {"+": "+", "-": "-", "pos": "+", "neg": "-"}.get(pol)
    if pol is None:
        raise InputError("polarity must be + or -")
    if x not in n.points or y not in n.points:
        raise InputError(f"{args.input}: unknown point in query")
    ok = net_holds(n, x, y, pol)
    rep.ok = ok
    rep.lines.append(f"{x} {'->' if pol == '+' else '-/>'} {y}: {'valid' if ok else 'invalid'}")
    for p in potential_paths(n, x, y):
        if p.signs[-1] != pol:
            continue
        v = path_valid(n, p)
        rep.lines.append(f"  {p}: {'valid' if v.valid else 'invalid'}" + (f" ({v.reason})" if v.reason else ""))
        rep.results.append({"path": str(p), "valid": v.valid, "reason": v.reason})
    rep.results.insert(0, {"query": [x, y, pol], "holds": ok})
    return rep


def cmd_circuit(args, cfg: RunConfig, texts: list) -> Report:
    text = _read(args.input)
    texts.append(text)
    c = _located(args.input, parse_circuit, text)
    rep = Report(cfg, _digest(texts))
    run = circuit_run(c, args.steps)
    rep.lines.append(run.table())
    rep.lines.append(run.summary())
    rep.results.append({"names": list(run.names), "rows": [["T" if v else "F" for v in r] for r in run.rows],
                        "status": run.status, "start": run.start, "period": run.period})
    return rep


def cmd_revise(args, cfg: RunConfig, texts: list) -> Report:
    texts += [args.theory, args.new]
    t = [parse_formula(p) for p in args.theory.split(";") if p.strip()]
    t2 = [parse_formula(p) for p in args.new.split(";") if p.strip()]
    if args.distance == "hamming":
        names = set()
        for f in t + t2:
            names |= variables(f)
        lang = Language(sorted(names))
        d = hamming(lang)
    else:
        dtext = _read(args.distance)
        texts.append(dtext)
        d = _located(args.distance, parse_distance, dtext)
        if args.vars is None:
            raise InputError("a distance file needs --vars naming the variables in valuation order")
        lang = Language(_split(args.vars))
        if d.n != lang.size:
            raise InputError(f"{args.distance}: {d.n} points but {lang.size} valuations")
    rep = Report(cfg, _digest(texts))
    out = revise_theories(t, t2, lang, d)
    rep.lines.append("; ".join(format_formula(f) for f in sorted(out)))
    rep.results.append({"revised": [format_formula(f) for f in sorted(out)]})
    return rep


def cmd_sequent(args, cfg: RunConfig, texts: list) -> Report:
    text = _read(args.input)
    texts.append(text)
    s = _located(args.input, parse_sequents, text)
    rep = Report(cfg, _digest(texts))
    rules = _split(args.rules) or list(PL)
    if args.action == "close":
        if args.scott:
            out = scott_close(s, rules)
        else:
            out = close_with_stages(s, rules).result
        rep.lines.append(f"closure under {','.join(rules)}: {len(out)} sequents")
        rep.results.append({"rules": rules, "size": len(out)})
        rep.body = out.to_text()
    else:
        if not args.goal:
            raise InputError("sequent derive needs --goal 'X |~ Y'")
        left, sep, right = args.goal.partition("|~")
        if not sep:
            raise InputError("goal must look like 'X |~ Y'")
        goal = (left.replace(",", " ").split(), right.replace(",", " ").split())
        ok, trace = derives(s, rules, goal, nonempty=args.scott)
        rep.ok = ok
        rep.lines.append(f"{args.goal.strip()}: {'derivable' if ok else 'not derivable'}")
        for st in trace:
            prem = ", ".join(s.show(*p) for p in st.premises)
            rep.lines.append(f"  {s.show(*st.sequent)}    [{st.rule}{': ' + prem if prem else ''}]")
        rep.results.append({"goal": args.goal.strip(), "derivable": ok,
                            "trace": [{"sequent": s.show(*st.sequent), "rule": st.rule,
                                       "premises": [s.show(*p) for p in st.premises]} for st in trace]})
    return rep


# parser -------------------------------------------------------------------

CHECK_KINDS = ("mu", "rule", "size", "agm", "loop", "smooth", "ranked", "cum-alpha", "ibrs")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks (default 0)")
    common.add_argument("--bound", type=int, default=None, help="size bound: node budget, sample size or chain length")
    common.add_argument("--format", choices=("text", "json", "dot"), default="text", dest="fmt")

    p = argparse.ArgumentParser(prog="nmlab", description="Checkers for preferential and related semantics.")
    p.add_argument("--version", action="version", version=f"nmlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="check conditions on an input")
    c.add_argument("kind", choices=CHECK_KINDS)
    c.add_argument("input", nargs="?")
    c.add_argument("--cond", help="comma separated condition names")
    c.add_argument("--rules", help="comma separated rule names")
    c.add_argument("--alpha", type=int, default=0)
    c.add_argument("--transitive", action="store_true")
    c.add_argument("--vars", help="comma separated variable names")
    c.add_argument("--sample", type=int, default=None)
    c.add_argument("--set", help="comma separated points (ibrs)")

    r = sub.add_parser("represent", parents=[common], help="build a structure for a choice function")
    r.add_argument("kind", choices=tuple(SYNTHESIZERS))
    r.add_argument("input")
    r.add_argument("--verify", action="store_true", help="check the round trip before writing")
    r.add_argument("-o", "--output")

    i = sub.add_parser("inherit", parents=[common], help="path validity in an inheritance net")
    i.add_argument("input")
    i.add_argument("--query", nargs=3, metavar=("X", "Y", "SIGN"), required=True)

    k = sub.add_parser("circuit", parents=[common], help="simulate a gate circuit")
    k.add_argument("input")
    k.add_argument("--steps", type=int, default=12)

    v = sub.add_parser("revise", parents=[common], help="distance based revision of theories")
    v.add_argument("theory")
    v.add_argument("new")
    v.add_argument("--distance", default="hamming", help="'hamming' or a distance file")
    v.add_argument("--vars")

    s = sub.add_parser("sequent", parents=[common], help="closure and derivations of sequent sets")
    s.add_argument("action", choices=("close", "derive"))
    s.add_argument("input")
    s.add_argument("--rules")
    s.add_argument("--goal")
    s.add_argument("--scott", action="store_true", help="nonempty sides only")
    return p


COMMANDS = {"check": cmd_check, "represent": cmd_represent, "inherit": cmd_inherit,
            "circuit": cmd_circuit, "revise": cmd_revise, "sequent": cmd_sequent}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    # an optional input given after the flags
    if extra and len(extra) == 1 and getattr(args, "input", "") is None and not extra[0].startswith("-"):
        args.input = extra[0]
    elif extra:
        parser.error("unrecognized arguments: " + " ".join(extra))
    name = args.command + (f" {args.kind}" if hasattr(args, "kind") else "")
    if args.command == "sequent":
        name += f" {args.action}"
    cfg = RunConfig(name, [v for v in (getattr(args, "input", None),) if v], args.bound, args.seed, args.fmt)
    texts: list = []
    try:
        rep = COMMANDS[args.command](args, cfg, texts)
    except ConditionError as exc:
        rep = Report(cfg, _digest(texts), ok=False)
        cond = exc.report
        if cond is not None:
            sym = MU_CONDITIONS[cond.name].symbol if cond.name in MU_CONDITIONS else cond.name
            where = ", ".join(str(c) for c in cond.counterexample or ())
            if args.command == "represent":
                f = parse_choice(texts[-1])
                where = ", ".join(f.names(c) if isinstance(c, int) else str(c) for c in cond.counterexample or ())
                rep.results.append(_report_json(cond, f.elements))
            rep.lines.append(f"{sym} fails on {where}")
        else:
            rep.lines.append(str(exc))
        out.write(rep.render())
        return 1
    except ResourceError as exc:
        err.write(f"nmlab: budget exceeded: {exc}\n")
        return 3
    except InputError as exc:
        err.write(f"nmlab: {exc}\n")
        return 2
    except ContractError as exc:
        err.write(f"nmlab: {exc}\n")
        return 1
    except NMError as exc:  # pragma: no cover
        err.write(f"nmlab: {exc}\n")
        return 1
    out.write(rep.render())
    return 0 if rep.ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
