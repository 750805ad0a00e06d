"""Command-line driver: translate, check, bmc, stats.

Exit codes: 0 success, 1 parse/validation error, 2 nonlinear clause,
3 unsupported sort or logic, 4 oracle discrepancy, 5 budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import List, Optional, Tuple

from . import oracle
from .errors import (
    BudgetExceeded,
    HornError,
    NonlinearClause,
    UnsupportedLogic,
    UnsupportedSort,
    line_col,
)
from .horn import HornSystem, load_system
from .oracle import Domain, check_equivalence
from .randsys import random_script, seeds_for
from .translate import TransitionSystem, drop_conjunct, simplify_inline, translate_system
from .vmt import emit_bmc, emit_vmt

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NONLINEAR = 2
EXIT_UNSUPPORTED = 3
EXIT_DISCREPANCY = 4
EXIT_BUDGET = 5


@dataclass
class RunConfig:
    command: str
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    inline_simplify: bool = False
    domain: Domain = Domain()
    max_depth: int = 8
    k: int = 0
    random: int = 0
    seed: int = 0
    max_facts: int = oracle.DEFAULT_MAX_FACTS
    max_states: int = oracle.DEFAULT_MAX_STATES
    query: Optional[str] = None
    drop: Optional[Tuple[str, int, int]] = None

    def __post_init__(self):
        if self.max_depth < 0:
            raise ValueError("depth must be non-negative")
        if self.k < 0:
            raise ValueError("k must be non-negative")


class _Abort(Exception):
    def __init__(self, code: int):
        self.code = code


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write(cfg: RunConfig, text: str) -> None:
    if cfg.output_path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _error(msg: str, where: str = "") -> None:
    print(f"error: {where}{msg}", file=sys.stderr)


def _exit_code(exc: HornError) -> int:
    if isinstance(exc, NonlinearClause):
        return EXIT_NONLINEAR
    if isinstance(exc, (UnsupportedSort, UnsupportedLogic)):
        return EXIT_UNSUPPORTED
    if isinstance(exc, BudgetExceeded):
        return EXIT_BUDGET
    return EXIT_INPUT


def _load(cfg: RunConfig, label: Optional[str] = None, source=None) -> HornSystem:
    label = label or ("<stdin>" if cfg.input_path == "-" else cfg.input_path)
    if source is None:
        try:
            source = _read(cfg.input_path)
        except OSError as exc:
            _error(f"{exc.strerror}", f"{label}: ")
            raise _Abort(EXIT_INPUT)
    try:
        return load_system(source, cfg.query)
    except HornError as exc:
        if exc.span is not None:
            line, col = line_col(source, exc.span[0])
            where = f"{label}:{line}:{col}: "
        else:
            where = f"{label}: "
        _error(exc.message, where)
        raise _Abort(_exit_code(exc))
    except KeyError as exc:
        _error(f"unknown query relation {exc.args[0]}", f"{label}: ")
        raise _Abort(EXIT_INPUT)


def _translate(cfg: RunConfig, system: HornSystem) -> TransitionSystem:
    ts = translate_system(system)
    if cfg.drop is not None:
        part, clause, index = cfg.drop
        ts = drop_conjunct(ts, clause, part, index)
    if cfg.inline_simplify:
        ts = simplify_inline(ts)
    return ts


def cmd_translate(cfg: RunConfig) -> int:
    ts = _translate(cfg, _load(cfg))
    _write(cfg, emit_vmt(ts))
    return EXIT_OK


def cmd_bmc(cfg: RunConfig) -> int:
    ts = _translate(cfg, _load(cfg))
    _write(cfg, emit_bmc(ts, cfg.k))
    return EXIT_OK


def stats_lines(system: HornSystem, ts: TransitionSystem) -> List[str]:
    counts = [
        ("relations", len(system.relations)),
        ("sum_arity", sum(r.arity for r in system.relations)),
        ("clauses", len(system.clauses)),
        ("state_vars", len(ts.state_vars)),
        ("inputs", len(ts.input_vars)),
        ("disjuncts", len(ts.disjuncts)),
    ]
    return [f"{k}={v}" for k, v in counts]


def cmd_stats(cfg: RunConfig) -> int:
    system = _load(cfg)
    ts = translate_system(system)
    _write(cfg, "\n".join(stats_lines(system, ts)) + "\n")
    return EXIT_OK


def _check_one(cfg: RunConfig, system: HornSystem, out: List[str], label: str) -> bool:
    ts = _translate(cfg, system)
    try:
        report = check_equivalence(
            system, ts, cfg.domain, cfg.max_depth, max_facts=cfg.max_facts, max_states=cfg.max_states
        )
    except BudgetExceeded as exc:
        _error(exc.message, f"{label}: ")
        raise _Abort(EXIT_BUDGET)
    if cfg.random:
        status = "ok" if report.ok else "FAILED"
        out.append(f"system {label} facts={len(report.facts)} states={report.states} {status}")
        if not report.ok:
            out.extend("  " + line for line in report.summary_lines() if not line.endswith(" ok"))
    else:
        out.extend(report.summary_lines())
    if not report.ok:
        _error(report.to_text().rstrip("\n").replace("\n", "; "), f"{label}: ")
    return report.ok


def cmd_check(cfg: RunConfig) -> int:
    out: List[str] = []
    ok = True
    if cfg.random:
        for seed in seeds_for(cfg.random, cfg.seed):
            label = f"seed={seed}"
            system = _load(cfg, label, random_script(seed))
            ok &= _check_one(cfg, system, out, label)
    else:
        ok = _check_one(cfg, _load(cfg), out, cfg.input_path)
    _write(cfg, "\n".join(out) + ("\n" if out else ""))
    return EXIT_OK if ok else EXIT_DISCREPANCY


COMMANDS = {
    "translate": cmd_translate,
    "check": cmd_check,
    "bmc": cmd_bmc,
    "stats": cmd_stats,
}


def _domain(text: str) -> Domain:
    try:
        return Domain.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _drop(text: str) -> Tuple[str, int, int]:
    try:
        part, clause, index = text.split(":")
        return part, int(clause), int(index)
    except ValueError:
        raise argparse.ArgumentTypeError("expected PART:CLAUSE:INDEX")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hornvmt", description="Translate linear Horn clauses (SMT-LIB HORN) to VMT.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_input=True):
        if needs_input:
            sp.add_argument("input", help="SMT-LIB HORN file, or - for stdin")
        sp.add_argument("-o", dest="output", metavar="PATH", help="output file (default: stdout)")
        sp.add_argument("--query", metavar="NAME", help="use this declared 0-ary relation as the query")

    t = sub.add_parser("translate", help="emit a VMT transition system")
    common(t)
    t.add_argument("--simplify", action="store_true", help="inline inputs bound to place variables")
    t.add_argument("--drop-conjunct", type=_drop, help=argparse.SUPPRESS)

    c = sub.add_parser("check", help="compare Horn derivation with transition-system reachability")
    c.add_argument("input", nargs="?", help="SMT-LIB HORN file, or - for stdin")
    common(c, needs_input=False)
    c.add_argument("--simplify", action="store_true")
    c.add_argument("--domain", type=_domain, default=Domain(), metavar="LO:HI", help="integer domain (default -8:8)")
    c.add_argument("--depth", type=_nonneg, default=8, metavar="N", help="derivation depth / step bound (default 8)")
    c.add_argument("--random", type=_nonneg, default=0, metavar="N", help="check N generated systems instead of a file")
    c.add_argument("--seed", type=int, default=0, metavar="S")
    c.add_argument("--max-facts", type=_nonneg, default=oracle.DEFAULT_MAX_FACTS)
    c.add_argument("--max-states", type=_nonneg, default=oracle.DEFAULT_MAX_STATES)
    c.add_argument("--drop-conjunct", type=_drop, help=argparse.SUPPRESS)

    b = sub.add_parser("bmc", help="emit a k-step BMC unrolling as plain SMT-LIB")
    common(b)
    b.add_argument("--k", type=_nonneg, required=True, metavar="N")
    b.add_argument("--simplify", action="store_true")

    s = sub.add_parser("stats", help="print size counts as key=value lines")
    common(s)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        input_path=getattr(ns, "input", None),
        output_path=ns.output,
        inline_simplify=getattr(ns, "simplify", False),
        domain=getattr(ns, "domain", Domain()),
        max_depth=getattr(ns, "depth", 8),
        k=getattr(ns, "k", 0),
        random=getattr(ns, "random", 0),
        seed=getattr(ns, "seed", 0),
        max_facts=getattr(ns, "max_facts", oracle.DEFAULT_MAX_FACTS),
        max_states=getattr(ns, "max_states", oracle.DEFAULT_MAX_STATES),
        query=ns.query,
        drop=getattr(ns, "drop_conjunct", None),
    )


def main(argv: Optional[List[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    if cfg.command == "check" and not cfg.random and cfg.input_path is None:
        _error("check needs an input file or --random N")
        return EXIT_INPUT
    try:
        return COMMANDS[cfg.command](cfg)
    except _Abort as exc:
        return exc.code
    except (HornError, ValueError, IndexError) as exc:
        _error(str(exc))
        return _exit_code(exc) if isinstance(exc, HornError) else EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
