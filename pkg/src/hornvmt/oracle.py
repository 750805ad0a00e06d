"""Finite-domain executable semantics for Horn systems and transition systems.

Two independent engines:

* :func:`derive` computes Horn facts bottom-up (semi-naive, depth bounded),
  working on the clauses directly.
* :func:`reach` explores the translated transition system breadth-first,
  evaluating the disjunct formulas on concrete states.

:func:`check_equivalence` compares the two: a fact R(t) is derivable within n
steps exactly when a state with R's flag set and R's places equal to t is
reachable within n transitions, and the minimal depths coincide.

Integers range over a bounded :class:`Domain`. An instantiation that would
produce an out-of-domain value is pruned by both engines alike, so the
comparison is exact on the finite slice even though it under-approximates the
unbounded semantics.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .errors import BudgetExceeded, UnassignedVariable, UnsetRead
from .horn import HornClause, HornSystem
from .terms import (
    App,
    BoolLit,
    BoundVar,
    InputRef,
    IntLit,
    Op,
    PrimedRef,
    Relation,
    RelAtom,
    Sort,
    StateRef,
    StateVar,
    Term,
    conjuncts,
    walk,
)
from .translate import TransitionDisjunct, TransitionSystem

DEFAULT_MAX_FACTS = 200_000
DEFAULT_MAX_STATES = 1_000_000


class _Unset:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "unset"

    def __reduce__(self):
        return (_Unset, ())


UNSET = _Unset()


@dataclass(frozen=True)
class Domain:
    int_lo: int = -8
    int_hi: int = 8
    cap: int = field(default=64, compare=False)

    def __post_init__(self):
        if self.int_lo > self.int_hi:
            raise ValueError(f"empty domain [{self.int_lo}, {self.int_hi}]")
        if self.size > self.cap:
            raise ValueError(f"domain size {self.size} exceeds cap {self.cap}")

    @property
    def size(self) -> int:
        return self.int_hi - self.int_lo + 1

    def values(self, sort: Sort) -> Tuple:
        if sort is Sort.BOOL:
            return (False, True)
        return tuple(range(self.int_lo, self.int_hi + 1))

    def contains(self, v) -> bool:
        if isinstance(v, bool):
            return True
        return self.int_lo <= v <= self.int_hi

    @classmethod
    def parse(cls, text: str, cap: int = 64) -> "Domain":
        lo, sep, hi = text.rpartition(":")
        if not sep:
            raise ValueError(f"expected LO:HI, got {text!r}")
        return cls(int(lo), int(hi), cap)

    def __str__(self) -> str:
        return f"[{self.int_lo}, {self.int_hi}]"


# ---------------------------------------------------------------- evaluation

def eval_ground(t: Term, env: Mapping[Term, object]):
    """Evaluate ``t`` under ``env``, which maps variable nodes to values.

    Reading a variable bound to UNSET raises UnsetRead. ``and``/``or``/``=>``
    short-circuit left to right and ``ite`` only evaluates the taken branch.
    """
    if isinstance(t, App):
        return _EVAL[t.op](t.args, env)
    if isinstance(t, (IntLit, BoolLit)):
        return t.value
    if isinstance(t, RelAtom):
        raise TypeError("cannot evaluate a relation atom")
    try:
        v = env[t]
    except KeyError:
        raise UnassignedVariable(f"no value for {t}") from None
    if v is UNSET:
        raise UnsetRead(f"read of unset variable {t}")
    return v


def _fold_and(args, env):
    for a in args:
        if not eval_ground(a, env):
            return False
    return True


def _fold_or(args, env):
    for a in args:
        if eval_ground(a, env):
            return True
    return False


def _implies(args, env):
    # right associative: a => b => c is a => (b => c)
    for a in args[:-1]:
        if not eval_ground(a, env):
            return True
    return bool(eval_ground(args[-1], env))


def _chain(cmp):
    def f(args, env):
        vals = [eval_ground(a, env) for a in args]
        return all(cmp(x, y) for x, y in zip(vals, vals[1:]))

    return f


def _distinct(args, env):
    vals = [eval_ground(a, env) for a in args]
    return len(set(vals)) == len(vals)


def _add(args, env):
    return sum(eval_ground(a, env) for a in args)


def _sub(args, env):
    v = eval_ground(args[0], env)
    for a in args[1:]:
        v -= eval_ground(a, env)
    return v


def _mul(args, env):
    v = 1
    for a in args:
        v *= eval_ground(a, env)
    return v


def _ite(args, env):
    return eval_ground(args[1] if eval_ground(args[0], env) else args[2], env)


_EVAL = {
    Op.ADD: _add,
    Op.SUB: _sub,
    Op.NEG: lambda args, env: -eval_ground(args[0], env),
    Op.MUL: _mul,
    Op.LT: _chain(lambda x, y: x < y),
    Op.LE: _chain(lambda x, y: x <= y),
    Op.GT: _chain(lambda x, y: x > y),
    Op.GE: _chain(lambda x, y: x >= y),
    Op.EQ: _chain(lambda x, y: x == y),
    Op.DISTINCT: _distinct,
    Op.AND: _fold_and,
    Op.OR: _fold_or,
    Op.NOT: lambda args, env: not eval_ground(args[0], env),
    Op.IMPLIES: _implies,
    Op.ITE: _ite,
}


# ---------------------------------------------------------------- derivation

@dataclass(frozen=True)
class Fact:
    relation: Relation
    tuple: Tuple
    depth: int

    def __str__(self) -> str:
        return f"{format_fact(self.relation, self.tuple)}@{self.depth}"


FactKey = Tuple[Relation, Tuple]


class _ClausePlan:
    """Enumeration plan for one clause: which variables come from the body fact."""

    def __init__(self, clause: HornClause):
        self.clause = clause
        body = clause.body_atom
        self.body = body
        self.head = clause.head
        self.bind: List[Tuple[int, BoundVar]] = []
        self.check: List[Tuple[int, Term]] = []
        bound = set()
        if body is not None:
            for pos, arg in enumerate(body.args):
                if isinstance(arg, BoundVar):
                    self.bind.append((pos, arg))
                    bound.add(arg)
                else:
                    self.check.append((pos, arg))
        used = set()
        for t in [clause.constraint] + list(self.head.args) + ([] if body is None else list(body.args)):
            used |= {n for n in walk(t) if isinstance(n, BoundVar)}
        self.free = sorted(used - bound, key=lambda v: v.name)

    def fire(self, dom: Domain, tup: Optional[Tuple]) -> Iterator[Tuple]:
        env: Dict[Term, object] = {}
        for pos, var in self.bind:
            val = tup[pos]
            if var in env and env[var] != val:
                return
            env[var] = val
        choices = [dom.values(v.sort) for v in self.free]
        for combo in itertools.product(*choices):
            for var, val in zip(self.free, combo):
                env[var] = val
            if any(eval_ground(arg, env) != tup[pos] for pos, arg in self.check):
                continue
            if not eval_ground(self.clause.constraint, env):
                continue
            out = tuple(eval_ground(a, env) for a in self.head.args)
            if all(dom.contains(v) for v in out):
                yield out


def derive(
    system: HornSystem,
    dom: Domain,
    max_depth: int,
    max_facts: int = DEFAULT_MAX_FACTS,
) -> Dict[FactKey, int]:
    """Facts derivable with at most ``max_depth`` rule applications.

    Returns a mapping ``(relation, tuple) -> minimal derivation depth``.
    """
    plans = [_ClausePlan(c) for c in system.clauses]
    by_body: Dict[Relation, List[_ClausePlan]] = defaultdict(list)
    for p in plans:
        if p.body is not None:
            by_body[p.body.relation].append(p)

    facts: Dict[FactKey, int] = {}
    delta: List[FactKey] = []

    def add(key, depth):
        if key not in facts:
            facts[key] = depth
            delta.append(key)
            if len(facts) > max_facts:
                raise BudgetExceeded(f"more than {max_facts} facts")

    if max_depth >= 1:
        for p in plans:
            if p.body is None:
                for out in p.fire(dom, None):
                    add((p.head.relation, out), 1)
    for depth in range(2, max_depth + 1):
        frontier, delta = delta, []
        for rel, tup in frontier:
            for p in by_body.get(rel, ()):
                for out in p.fire(dom, tup):
                    add((p.head.relation, out), depth)
        if not delta:
            break
    return facts


def derive_facts(system: HornSystem, dom: Domain, max_depth: int, **kw) -> List[Fact]:
    return [Fact(r, t, d) for (r, t), d in sorted(derive(system, dom, max_depth, **kw).items(), key=_fact_order)]


# ---------------------------------------------------------------- reachability

@dataclass(frozen=True)
class ConcreteState:
    flags: Tuple[bool, ...]
    places: Tuple[object, ...]

    def values(self) -> Tuple:
        return self.flags + self.places


@dataclass(frozen=True)
class Violation:
    kind: str  # "monotonicity" | "write-before-read"
    clause: int
    step: int
    detail: str

    def __str__(self) -> str:
        return f"violation {self.kind} clause={self.clause} step={self.step} {self.detail}"


@dataclass
class ReachResult:
    ts: TransitionSystem
    depths: Dict[Tuple, int]
    violations: List[Violation]
    transitions: int = 0

    def states(self) -> Dict[ConcreteState, int]:
        nf = sum(1 for v in self.ts.state_vars if v.is_flag)
        return {ConcreteState(s[:nf], s[nf:]): d for s, d in self.depths.items()}

    def facts(self) -> Dict[FactKey, int]:
        out: Dict[FactKey, int] = {}
        layout = [(r, self.ts.flag(r).ordinal, [p.ordinal for p in self.ts.places(r)]) for r in self.ts.relations]
        for s, d in self.depths.items():
            for rel, fo, pos in layout:
                if s[fo]:
                    key = (rel, tuple(s[i] for i in pos))
                    if d < out.get(key, d + 1):
                        out[key] = d
        return out

    def value(self, state: Tuple, var: StateVar):
        return state[var.ordinal]


class _DisjunctRunner:
    """Successor computation for one disjunct over concrete states."""

    def __init__(self, d: TransitionDisjunct, dom: Domain):
        self.clause = d.source_clause
        self.dom = dom
        self.copies: List[Tuple[int, int]] = []
        core: List[Term] = []
        for c in conjuncts(d.formula):
            pair = _copy_pair(c)
            if pair is not None:
                self.copies.append(pair)
            else:
                core.append(c)
        self.core = core
        self.core_leaves = [
            sorted({n for n in walk(c) if isinstance(n, (InputRef, PrimedRef))}, key=str) for c in core
        ]
        self.reads = sorted({n.var.ordinal for c in core for n in walk(c) if isinstance(n, StateRef)})
        self.read_refs = {}
        for c in core:
            for n in walk(c):
                if isinstance(n, StateRef):
                    self.read_refs[n.var.ordinal] = n
        core_primed = {n.var.ordinal for c in core for n in walk(c) if isinstance(n, PrimedRef)}
        targets = core_primed | {v for v, _ in self.copies}
        self.free_primed: List[Tuple[int, Sort]] = []
        self.targets = targets
        self.cache: Dict[Tuple, List[Tuple[Tuple[int, object], ...]]] = {}

    def set_free(self, state_vars: Sequence[StateVar]):
        self.free_primed = [(v.ordinal, v.sort) for v in state_vars if v.ordinal not in self.targets]

    def successors(self, s: Tuple) -> Iterator[Tuple]:
        key = tuple(s[i] for i in self.reads)
        sols = self.cache.get(key)
        if sols is None:
            env = {self.read_refs[i]: s[i] for i in self.reads}
            sols = [
                tuple(sorted((n.var.ordinal, v) for n, v in e.items() if isinstance(n, PrimedRef)))
                for e in self._solve(0, env)
            ]
            self.cache[key] = sols
        for sol in sols:
            nxt = list(s)
            assigned = set()
            for o, v in sol:
                nxt[o] = v
                assigned.add(o)
            ok = True
            for v, w in self.copies:
                if v in assigned:
                    if nxt[v] != s[w]:
                        ok = False
                        break
                else:
                    nxt[v] = s[w]
                    assigned.add(v)
            if not ok:
                continue
            if not self.free_primed:
                yield tuple(nxt)
                continue
            choices = [self.dom.values(sort) for _, sort in self.free_primed]
            for combo in itertools.product(*choices):
                for (o, _), val in zip(self.free_primed, combo):
                    nxt[o] = val
                yield tuple(nxt)

    def _solve(self, i: int, env: Dict[Term, object]) -> Iterator[Dict[Term, object]]:
        if i == len(self.core):
            yield dict(env)
            return
        c = self.core[i]
        todo = [n for n in self.core_leaves[i] if n not in env]
        if not todo:
            if eval_ground(c, env):
                yield from self._solve(i + 1, env)
            return
        if len(todo) == 1:
            prop = self._propagate(c, todo[0], env)
            if prop is not None:
                ok, val = prop
                if ok:
                    env[todo[0]] = val
                    yield from self._solve(i + 1, env)
                    del env[todo[0]]
                return
        choices = [self.dom.values(n.sort) for n in todo]
        for combo in itertools.product(*choices):
            env.update(zip(todo, combo))
            if eval_ground(c, env):
                yield from self._solve(i + 1, env)
        for n in todo:
            del env[n]

    def _propagate(self, c: Term, leaf: Term, env) -> Optional[Tuple[bool, object]]:
        """Value forced on ``leaf`` by ``c``: (in-domain?, value), or None if not a definition."""
        if c == leaf and leaf.sort is Sort.BOOL:
            return True, True
        if isinstance(c, App) and c.op is Op.NOT and c.args[0] == leaf:
            return True, False
        if isinstance(c, App) and c.op is Op.EQ and len(c.args) == 2:
            a, b = c.args
            if a == leaf and leaf not in _leaves(b):
                other = b
            elif b == leaf and leaf not in _leaves(a):
                other = a
            else:
                return None
            if isinstance(other, StateRef):
                val = env[other]  # raw copy; may be UNSET
            else:
                val = eval_ground(other, env)
            if val is UNSET or self.dom.contains(val):
                return True, val
            return False, None
        return None


def _leaves(t: Term) -> set:
    return {n for n in walk(t) if isinstance(n, (InputRef, PrimedRef, StateRef))}


def _copy_pair(c: Term) -> Optional[Tuple[int, int]]:
    if isinstance(c, App) and c.op is Op.EQ and len(c.args) == 2:
        a, b = c.args
        if isinstance(a, PrimedRef) and isinstance(b, StateRef):
            return a.var.ordinal, b.var.ordinal
        if isinstance(b, PrimedRef) and isinstance(a, StateRef):
            return b.var.ordinal, a.var.ordinal
    return None


def initial_state(ts: TransitionSystem) -> Tuple:
    return tuple(False if v.is_flag else UNSET for v in ts.state_vars)


def reach(
    ts: TransitionSystem,
    dom: Domain,
    max_steps: int,
    max_states: int = DEFAULT_MAX_STATES,
    max_violations: int = 50,
) -> ReachResult:
    """Breadth-first exploration from the canonical initial state.

    The initial state has every flag false and every place UNSET. Reading an
    UNSET place raises UnsetRead. Flag monotonicity and write-before-read are
    checked on every explored transition and reported as violations.
    """
    xs = ts.state_vars
    init = initial_state(ts)
    env0 = {StateRef(v): init[v.ordinal] for v in xs if v.is_flag}
    if not eval_ground(ts.init, env0):
        raise ValueError("canonical initial state does not satisfy the initial formula")

    runners = [_DisjunctRunner(d, dom) for d in ts.disjuncts]
    for r in runners:
        r.set_free(xs)
    flag_idx = [v.ordinal for v in xs if v.is_flag]
    place_groups = [(ts.flag(rel).ordinal, [p.ordinal for p in ts.places(rel)]) for rel in ts.relations]

    depths: Dict[Tuple, int] = {init: 0}
    violations: List[Violation] = []
    frontier = [init]
    transitions = 0
    for step in range(1, max_steps + 1):
        nxt_frontier = []
        for s in frontier:
            for r in runners:
                for t in r.successors(s):
                    transitions += 1
                    if len(violations) < max_violations:
                        for i in flag_idx:
                            if s[i] and not t[i]:
                                violations.append(
                                    Violation("monotonicity", r.clause, step, f"{xs[i].name} turned false")
                                )
                        for fo, pos in place_groups:
                            if t[fo] and any(t[p] is UNSET for p in pos):
                                violations.append(
                                    Violation("write-before-read", r.clause, step, f"{xs[fo].name} set with unset places")
                                )
                    if t not in depths:
                        depths[t] = step
                        nxt_frontier.append(t)
                        if len(depths) > max_states:
                            raise BudgetExceeded(f"more than {max_states} states")
        frontier = nxt_frontier
        if not frontier:
            break
    return ReachResult(ts, depths, violations, transitions)


# ---------------------------------------------------------------- equivalence

def _value_key(v):
    if v is UNSET:
        return (0, 0)
    if isinstance(v, bool):
        return (1, int(v))
    return (2, v)


def _fact_order(item):
    (rel, tup), _ = item
    return (rel.index, rel.name, tuple(_value_key(v) for v in tup))


def format_value(v) -> str:
    if v is UNSET:
        return "?"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def format_fact(rel: Relation, tup: Tuple) -> str:
    return f"{rel.name}({','.join(format_value(v) for v in tup)})"


@dataclass(frozen=True)
class FactLine:
    relation: Relation
    tuple: Tuple
    derive_depth: Optional[int]
    reach_depth: Optional[int]

    @property
    def status(self) -> str:
        if self.derive_depth is None:
            return "only-reach"
        if self.reach_depth is None:
            return "only-derive"
        if self.derive_depth != self.reach_depth:
            return "depth-mismatch"
        return "ok"

    def __str__(self) -> str:
        d = "-" if self.derive_depth is None else self.derive_depth
        r = "-" if self.reach_depth is None else self.reach_depth
        return f"fact {format_fact(self.relation, self.tuple)} derive={d} reach={r} {self.status}"


@dataclass
class EquivalenceReport:
    domain: Domain
    depth: int
    facts: List[FactLine]
    violations: List[Violation]
    error: Optional[str] = None
    states: int = 0

    @property
    def discrepancies(self) -> List[FactLine]:
        return [f for f in self.facts if f.status != "ok"]

    @property
    def ok(self) -> bool:
        return self.error is None and not self.violations and not self.discrepancies

    def summary_lines(self) -> List[str]:
        lines = [str(f) for f in self.facts]
        lines += [str(v) for v in self.violations]
        if self.error:
            lines.append(f"error {self.error}")
        return lines

    def to_text(self) -> str:
        head = (
            f"equivalence {'OK' if self.ok else 'FAILED'}: {len(self.facts)} facts, "
            f"{len(self.discrepancies)} discrepancies, {len(self.violations)} violations, "
            f"{self.states} states, domain {self.domain}, depth {self.depth}"
        )
        body = [head]
        if self.error:
            body.append(f"  error: {self.error}")
        for f in self.discrepancies:
            body.append(f"  counterexample: {f}")
        for v in self.violations:
            body.append(f"  {v}")
        return "\n".join(body) + "\n"


def check_equivalence(
    system: HornSystem,
    ts: TransitionSystem,
    dom: Domain,
    n: int,
    max_facts: int = DEFAULT_MAX_FACTS,
    max_states: int = DEFAULT_MAX_STATES,
) -> EquivalenceReport:
    """Compare derivable facts with reachable flag/place configurations.

    Budget overruns propagate as BudgetExceeded; everything else that goes
    wrong is report content.
    """
    derived = derive(system, dom, n, max_facts=max_facts)
    try:
        result = reach(ts, dom, n, max_states=max_states)
    except UnsetRead as exc:
        return EquivalenceReport(
            dom, n, [FactLine(r, t, d, None) for (r, t), d in sorted(derived.items(), key=_fact_order)],
            [], f"unset-read: {exc.message}",
        )
    reached = result.facts()
    keys = set(derived) | set(reached)
    lines = [
        FactLine(rel, tup, derived.get((rel, tup)), reached.get((rel, tup)))
        for (rel, tup), _ in sorted(((k, 0) for k in keys), key=_fact_order)
    ]
    return EquivalenceReport(dom, n, lines, list(result.violations), None, len(result.depths))
