"""VMT rendering and k-step BMC unrolling scripts."""

from __future__ import annotations

from typing import List

from .errors import InvalidK
from .terms import (
    Sort,
    Term,
    conjuncts,
    quote_symbol,
    to_smt,
)
from .translate import TransitionSystem, uses_nonlinear_mul


def _check_names(ts: TransitionSystem) -> None:
    names = [v.name for v in ts.state_vars] + [v.next_name for v in ts.state_vars]
    names += [y.name for y in ts.input_vars]
    if len(set(names)) != len(names):
        seen, dup = set(), []
        for n in names:
            if n in seen:
                dup.append(n)
            seen.add(n)
        raise ValueError(f"mangled variable names collide: {', '.join(sorted(set(dup)))}")


def _multiline(op: str, items: List[str], indent: str) -> str:
    if not items:
        return "true" if op == "and" else "false"
    if len(items) == 1:
        return items[0]
    inner = "".join(f"\n{indent}  {it}" for it in items)
    return f"({op}{inner})"


def render_disjunct(d, rename=None) -> str:
    return _conj_text(d.formula, rename)


def _conj_text(t: Term, rename=None) -> str:
    cs = conjuncts(t)
    if not cs:
        return "true"
    if len(cs) == 1:
        return to_smt(cs[0], rename)
    return "(and " + " ".join(to_smt(c, rename) for c in cs) + ")"


def emit_vmt(ts: TransitionSystem) -> str:
    _check_names(ts)
    lines: List[str] = []
    for v in ts.state_vars:
        lines.append(f"(declare-fun {quote_symbol(v.name)} () {v.sort})")
    for v in ts.state_vars:
        lines.append(f"(declare-fun {quote_symbol(v.next_name)} () {v.sort})")
    for y in ts.input_vars:
        lines.append(f"(declare-fun {quote_symbol(y.name)} () {y.sort})")
    for i, v in enumerate(ts.state_vars):
        lines.append(
            f"(define-fun .sv{i} () {v.sort} (! {quote_symbol(v.name)} :next {quote_symbol(v.next_name)}))"
        )
    lines.append(f"(define-fun .init () Bool (! {_conj_text(ts.init)} :init true))")
    trans = _multiline("or", [render_disjunct(d) for d in ts.disjuncts], "  ")
    lines.append(f"(define-fun .trans () Bool (!\n  {trans}\n  :trans true))")
    lines.append(f"(define-fun .prop () Bool (! {to_smt(ts.prop)} :invar-property 0))")
    return "\n".join(lines) + "\n"


def bmc_logic(ts: TransitionSystem) -> str:
    if any(v.sort is Sort.BOOL and not v.is_flag for v in ts.state_vars):
        return "ALL"
    if any(uses_nonlinear_mul(d.formula) for d in ts.disjuncts):
        return "ALL"
    return "QF_LIA"


def _at(name: str, t: int) -> str:
    return quote_symbol(f"{name}@{t}")


def emit_bmc(ts: TransitionSystem, k: int) -> str:
    """Unroll ``k`` steps: I(X0) and T(X_t, Y_t, X_t+1) for t < k, and not P(X_k)."""
    if k < 0:
        raise InvalidK(f"step count must be non-negative, got {k}")
    _check_names(ts)
    lines = [f"(set-logic {bmc_logic(ts)})"]
    for t in range(k + 1):
        for v in ts.state_vars:
            lines.append(f"(declare-fun {_at(v.name, t)} () {v.sort})")
    for t in range(k):
        for y in ts.input_vars:
            lines.append(f"(declare-fun {_at(y.name, t)} () {y.sort})")

    cur = [f"({quote_symbol(v.name)} {v.sort})" for v in ts.state_vars]
    nxt = [f"({quote_symbol(v.next_name)} {v.sort})" for v in ts.state_vars]
    inp = [f"({quote_symbol(y.name)} {y.sort})" for y in ts.input_vars]
    lines.append(f"(define-fun .init ({' '.join(cur)}) Bool {_conj_text(ts.init)})")
    trans = _multiline("or", [render_disjunct(d) for d in ts.disjuncts], "  ")
    lines.append(f"(define-fun .trans ({' '.join(cur + inp + nxt)}) Bool\n  {trans})")
    lines.append(f"(define-fun .prop ({' '.join(cur)}) Bool {to_smt(ts.prop)})")

    def args(names, t):
        return " ".join(_at(n, t) for n in names)

    xs = [v.name for v in ts.state_vars]
    ys = [y.name for y in ts.input_vars]

    def call(fn, *parts):
        body = " ".join(p for p in parts if p)
        return f"({fn} {body})" if body else fn

    lines.append(f"(assert {call('.init', args(xs, 0))})")
    for t in range(k):
        lines.append(f"(assert {call('.trans', args(xs, t), args(ys, t), args(xs, t + 1))})")
    lines.append(f"(assert (not {call('.prop', args(xs, k))}))")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"

