"""Command line: validate, run, test, enumerate, prob and accept.

Exit codes: 0 ok, 1 domain-negative (invalid machine, protocol error),
2 usage or input errors, 3 a resource cap was hit.  Verdicts are data and
never change the exit code.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import zoo
from .arena import (DumbInterrogator, ProtocolError, SearchCapExceeded, Tester, comm_tester,
                    diagonal_tester, evaluate, judge, pi_tester, run_test, time_diagonal_tester)
from .config import Config, load_config
from .core import Side, validate as validate_desc
from .dsl import ParseError, _parse, load_runnable
from .encoding import EncodingTooLong, encode
from .enumerators import RunnableItem, UniversalEnum, pair_of, time_limited_enum, zoo_first_enum
from .memclass import MemoryBounds, SizeCapExceeded, explore_classes
from .oracle import BoundedPi
from .prob import ProbInterrogator, RandomSP, monte_carlo
from .vm import RunBudget


class UsageError(Exception):
    pass


def _dump(obj, out) -> None:
    out.write(json.dumps(obj, sort_keys=True, indent=1) + "\n")


def _line(obj, out) -> None:
    out.write(json.dumps(obj, sort_keys=True) + "\n")


def _subject(path: str, cfg: Config) -> RunnableItem:
    item = load_runnable(zoo.resolve(path))
    return RunnableItem(item.desc, item.time_limit, RunBudget(cfg.budget))


def _universe() -> list:
    return [e.load() for e in zoo.entries(role="subject")]


def build_tester(spec: str, cfg: Config, seed: int) -> tuple[Tester, int]:
    """The tester named by ``spec`` and the step cap to run it with."""
    kind, _, arg = spec.partition(":")
    if kind == "dumb" and arg:
        p = _subject(arg, cfg).participant()
        return Tester(DumbInterrogator(p), p), cfg.step_cap
    if spec == "diag:time":
        return time_diagonal_tester(), cfg.step_cap
    if kind == "diag" and arg.startswith("mem:"):
        from .memclass import memory_class_enum
        try:
            s, d, w = (int(x) for x in arg[4:].split(","))
        except ValueError:
            raise UsageError(f"expected diag:mem:s,d,w, got {spec!r}") from None
        res = memory_class_enum(s, d, w, cfg.alphabet, cfg.mem_max_classes)
        return diagonal_tester(res.Egen), max(cfg.step_cap, res.N)
    if spec in ("pi", "comm"):
        pi = BoundedPi.closed(_universe(), cfg.pi_certify_limit, cfg.pi_budget)
        if spec == "pi":
            return pi_tester(pi), min(cfg.step_cap, len(pi.universe))
        return comm_tester(pi, cfg.comm_search_cap), cfg.step_cap
    if kind == "prob":
        try:
            m, p0 = arg.split(",")
            m, p0 = int(m), float(p0)
        except ValueError:
            raise UsageError(f"expected prob:m,p0, got {spec!r}") from None
        name = f"prob(m={m},p0={p0},seed={seed})"
        return Tester(ProbInterrogator(m), RandomSP(p0, seed), name=name), cfg.prob_step_cap
    raise UsageError(f"unknown tester spec {spec!r}")


def cmd_validate(args, cfg: Config, out) -> int:
    try:
        text = zoo.resolve(args.path).read_text(encoding="utf-8")
        desc, _ = _parse(text)
        violations = [str(v) for v in validate_desc(desc)]
    except ParseError as exc:
        if exc.rule is None:
            raise
        violations = [str(exc)]
    _dump({"path": args.path, "ok": not violations, "violations": violations,
           "config_hash": cfg.hash}, out)
    return 1 if violations else 0


def cmd_run(args, cfg: Config, out) -> int:
    item = load_runnable(zoo.resolve(args.path))
    budget = args.budget or cfg.budget
    item = RunnableItem(item.desc, item.time_limit, RunBudget(budget))
    session = item.session()
    outcomes, result = [], None
    for i, q in enumerate(args.q or [""], 1):
        if any(c not in cfg.alphabet.bsymbols for c in q):
            raise UsageError(f"question {q!r} is not a word over {cfg.alphabet.bsymbols}")
        a = session.ask(q)
        if a is None:
            outcomes.append({"index": i, "question": q, "diverged": True, "cycles": session.cycles})
            result = f"DivergedAt({i})"
            break
        outcomes.append({"index": i, "question": q, "answer": a, "cycles": session.cycles})
    _dump({"machine": item.label, "budget": budget, "outcomes": outcomes,
           "result": result or "answered", "config_hash": cfg.hash}, out)
    return 0


def cmd_test(args, cfg: Config, out) -> int:
    seed = cfg.seed if args.seed is None else args.seed
    tester, cap = build_tester(args.tester, cfg, seed)
    cap = args.step_cap or cap
    subject = _subject(args.subject, cfg).participant()
    meta = {"budgets": {"per_question": cfg.budget}, "seed": seed}
    sides = [Side.LEFT, Side.RIGHT] if args.both or args.orientation is None \
        else [Side(args.orientation)]
    transcripts = [run_test(tester, subject, s, cap, meta) for s in sides]
    report = {"version": 1, "config_hash": cfg.hash, "tester_id": tester.id,
              "subject_id": subject.name, "tester_types": list(tester.types)}
    if len(transcripts) == 2:
        verdict = evaluate(*transcripts)
        report["transcripts"] = [t.to_json(verdict) for t in transcripts]
        report["verdict"] = verdict.to_json()
    else:
        t = transcripts[0]
        j = t.to_json()
        v = judge(t)
        j["verdict_ordinary"] = {"failed": v.failed_ordinary, "reason": v.reason}
        j["verdict_strict"] = {"failed": v.failed_strict, "reason": v.reason}
        report["transcripts"] = [j]
    text = json.dumps(report, sort_keys=True, indent=1) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def cmd_enumerate(args, cfg: Config, out) -> int:
    kind = args.kind
    if kind == "mem":
        if None in (args.s, args.d, args.w):
            raise UsageError("--kind mem needs --s, --d and --w")
        bounds = MemoryBounds(args.s, args.d, args.w)
        leaves = list(explore_classes(bounds, cfg.alphabet, cfg.mem_max_classes))
        survivors = sum(leaf.survived for leaf in leaves)
        _line({"kind": "mem", "s": args.s, "d": args.d, "w": args.w, "N": len(leaves),
               "survivors": survivors, "config_hash": cfg.hash}, out)
        shown = leaves if args.N is None else leaves[:args.N]
        for leaf in shown:
            _line({"index": leaf.index, "encoding": encode(leaf.machine(cfg.alphabet)),
                   "classification": "accept" if leaf.survived else "reject",
                   "reason": leaf.verdict, "question": leaf.question}, out)
        return 0
    if args.N is None or args.N < 1:
        raise UsageError("-N must be a positive integer")
    _line({"kind": kind, "N": args.N, "config_hash": cfg.hash}, out)
    if kind == "universal":
        E = UniversalEnum(cfg.alphabet)
    elif kind == "zoo-first":
        E = zoo_first_enum()
    elif kind == "time":
        base = zoo_first_enum() if args.base == "zoo-first" else UniversalEnum(cfg.alphabet)
        E = time_limited_enum(base)
    else:
        raise UsageError(f"unknown kind {kind!r}")
    for n in range(1, args.N + 1):
        item = E(n)
        row = {"index": n, "encoding": item.encoding, "name": item.desc.name or None}
        if kind == "time":
            row["pair"] = list(pair_of(n))
            row["time_limit"] = item.time_limit
        _line(row, out)
    return 0


def cmd_prob(args, cfg: Config, out) -> int:
    item = _subject(args.subject, cfg)
    seed = cfg.seed if args.seed is None else args.seed
    res = monte_carlo(item.participant(), args.m, args.p0, args.trials, seed,
                      engine=args.engine, step_cap=args.step_cap or cfg.prob_step_cap)
    report = res.to_json()
    report["config_hash"] = cfg.hash
    _dump(report, out)
    return 0


def cmd_accept(args, cfg: Config, out) -> int:
    from .acceptance import CRITERIA, run_criterion
    numbers = args.criterion or sorted(CRITERIA)
    results = [run_criterion(n, cfg) for n in numbers]
    for r in results:
        print(r.line(), file=sys.stderr)
    _dump({"config_hash": cfg.hash,
           "criteria": [{"number": r.number, "title": r.title, "passed": r.passed,
                         "checked": r.checked, "failures": [str(f) for f in r.failures]}
                        for r in results]}, out)
    return 0


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="turingtest", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="JSON config file (default: $TURINGTEST_CONFIG)")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", help="check a machine file")
    p.add_argument("path")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("run", help="pose questions to a machine")
    p.add_argument("path")
    p.add_argument("--q", action="append", help="a question (repeatable; default one empty question)")
    p.add_argument("--budget", type=int, help="cycles per question")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("test", help="run a left/right test")
    p.add_argument("--tester", required=True,
                   help="dumb:<file>, diag:time, diag:mem:s,d,w, pi, comm or prob:m,p0")
    p.add_argument("--subject", required=True)
    p.add_argument("--orientation", choices=["left", "right"])
    p.add_argument("--both", action="store_true", help="run both orientations (the default)")
    p.add_argument("--step-cap", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_test)

    p = sub.add_parser("enumerate", help="dump an enumeration as JSON lines")
    p.add_argument("--kind", required=True, choices=["universal", "zoo-first", "time", "mem"])
    p.add_argument("-N", type=int)
    p.add_argument("--base", choices=["universal", "zoo-first"], default="universal")
    p.add_argument("--s", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--w", type=int)
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("prob", help="Monte-Carlo estimate of a pass probability")
    p.add_argument("--subject", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p0", type=float, required=True)
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int)
    p.add_argument("--engine", choices=["fast", "exact"], default="fast")
    p.add_argument("--step-cap", type=int)
    p.set_defaults(fn=cmd_prob)

    p = sub.add_parser("accept", help="run acceptance scenarios and report pass/fail")
    p.add_argument("--criterion", type=int, action="append", choices=range(1, 11),
                   help="criterion number (repeatable; default all)")
    p.set_defaults(fn=cmd_accept)
    return ap


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config)
        return args.fn(args, cfg, out)
    except (SizeCapExceeded, SearchCapExceeded, EncodingTooLong) as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 3
    except ProtocolError as exc:
        print(f"protocol error: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
