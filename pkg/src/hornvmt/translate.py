"""Linear Horn systems to symbolic transition systems.

Every relation R gets a Boolean flag (``R`` has been derived) and one place
variable per argument position holding the most recently derived tuple. Each
clause becomes one transition disjunct; quantified variables become per-clause
primary inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .horn import HornClause, HornSystem
from .terms import (
    App,
    BoundVar,
    InputRef,
    InputVar,
    IntLit,
    Op,
    PrimedRef,
    Relation,
    RelAtom,
    StateRef,
    StateVar,
    Term,
    conj,
    conjuncts,
    disj,
    eq,
    neg,
    substitute,
    transform,
    walk,
)


@dataclass(frozen=True)
class TransitionDisjunct:
    source_clause: int
    guard: Term
    update: Term
    frame: Term

    @property
    def formula(self) -> Term:
        return conj([self.guard, self.update, self.frame])


@dataclass(frozen=True)
class TransitionSystem:
    state_vars: Tuple[StateVar, ...]
    input_vars: Tuple[InputVar, ...]
    init: Term
    disjuncts: Tuple[TransitionDisjunct, ...]
    prop: Term
    query: Relation

    @property
    def trans(self) -> Term:
        return disj(d.formula for d in self.disjuncts)

    def flag(self, rel: Relation) -> StateVar:
        return self._index()[(rel, 0)]

    def place(self, rel: Relation, i: int) -> StateVar:
        return self._index()[(rel, i)]

    def places(self, rel: Relation) -> Tuple[StateVar, ...]:
        return tuple(self.place(rel, i) for i in range(1, rel.arity + 1))

    def vars_of(self, rel: Relation) -> Tuple[StateVar, ...]:
        return (self.flag(rel),) + self.places(rel)

    @property
    def relations(self) -> Tuple[Relation, ...]:
        return tuple(v.relation for v in self.state_vars if v.is_flag)

    def _index(self) -> Dict[Tuple[Relation, int], StateVar]:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {(v.relation, v.place): v for v in self.state_vars}
            object.__setattr__(self, "_idx", idx)
        return idx


def build_state_vars(system: HornSystem) -> Tuple[Tuple[StateVar, ...], Tuple[InputVar, ...]]:
    xs: List[StateVar] = []
    for r in system.relations:
        xs.append(StateVar(r, 0, len(xs)))
    for r in system.relations:
        for i in range(1, r.arity + 1):
            xs.append(StateVar(r, i, len(xs)))
    ys = tuple(InputVar(c.id, name, sort) for c in system.clauses for name, sort in c.qvars)
    return tuple(xs), ys


class _Mapper:
    """The clause-local syntactic mapping from Horn terms to state/input terms."""

    def __init__(self, index: Dict[Tuple[Relation, int], StateVar], clause: HornClause):
        self.index = index
        self.inputs = {BoundVar(n, s): InputRef(InputVar(clause.id, n, s)) for n, s in clause.qvars}

    def term(self, t: Term) -> Term:
        return transform(t, self._leaf)

    def _leaf(self, t: Term) -> Optional[Term]:
        if isinstance(t, BoundVar):
            return self.inputs[t]
        if isinstance(t, RelAtom):
            return self.atom(t)
        return None

    def atom(self, a: RelAtom) -> Term:
        parts = [StateRef(self.index[(a.relation, 0)])]
        for i, arg in enumerate(a.args, start=1):
            parts.append(eq(StateRef(self.index[(a.relation, i)]), self.term(arg)))
        return conj(parts)


def translate_term(t: Term, clause: HornClause, state_vars: Sequence[StateVar]) -> Term:
    index = {(v.relation, v.place): v for v in state_vars}
    return _Mapper(index, clause).term(t)


def prime(t: Term) -> Term:
    def step(n):
        if isinstance(n, PrimedRef):
            raise ValueError("term is already primed")
        if isinstance(n, StateRef):
            return PrimedRef(n.var)
        return None

    return transform(t, step)


def preserve(vars_: Iterable[StateVar]) -> Term:
    ordered = sorted(vars_, key=lambda v: v.ordinal)
    return conj(eq(PrimedRef(v), StateRef(v)) for v in ordered)


def head_vars(head: RelAtom, state_vars: Sequence[StateVar]) -> List[StateVar]:
    return [v for v in state_vars if v.relation == head.relation]


def translate_clause(clause: HornClause, state_vars: Sequence[StateVar]) -> TransitionDisjunct:
    index = {(v.relation, v.place): v for v in state_vars}
    m = _Mapper(index, clause)
    body = clause.body_atom
    guard = conj(([m.atom(body)] if body is not None else []) + [m.term(clause.constraint)])
    head = clause.head
    if not isinstance(head, RelAtom):
        raise TypeError(f"clause {clause.id}: head is not a relation atom; normalize the query first")
    update = prime(m.atom(head))
    written = set(head_vars(head, state_vars))
    frame = preserve(v for v in state_vars if v not in written)
    return TransitionDisjunct(clause.id, guard, update, frame)


def translate_system(system: HornSystem) -> TransitionSystem:
    if system.query is None:
        raise ValueError("system has no query relation; normalize it first")
    xs, ys = build_state_vars(system)
    init = conj(neg(StateRef(v)) for v in xs if v.is_flag)
    disjuncts = tuple(translate_clause(c, xs) for c in system.clauses)
    query_flag = next(v for v in xs if v.is_flag and v.relation == system.query)
    return TransitionSystem(xs, ys, init, disjuncts, neg(StateRef(query_flag)), system.query)


# ---------------------------------------------------------------- inlining

def _input_binding(c: Term) -> Optional[Tuple[InputRef, StateRef]]:
    if isinstance(c, App) and c.op is Op.EQ and len(c.args) == 2:
        a, b = c.args
        if isinstance(a, StateRef) and isinstance(b, InputRef):
            return b, a
        if isinstance(b, StateRef) and isinstance(a, InputRef):
            return a, b
    return None


def inline_disjunct(d: TransitionDisjunct) -> TransitionDisjunct:
    """Replace inputs bound by ``place = input`` guard equalities with the place."""
    mapping: Dict[Term, Term] = {}
    kept: List[Term] = []
    for c in conjuncts(d.guard):
        c = substitute(c, mapping)
        bound = _input_binding(c)
        if bound is not None and bound[0] not in mapping:
            mapping[bound[0]] = bound[1]
            continue
        if isinstance(c, App) and c.op is Op.EQ and len(c.args) == 2 and c.args[0] == c.args[1]:
            continue
        kept.append(c)
    guard = conj(substitute(c, mapping) for c in kept)
    return replace(d, guard=guard, update=substitute(d.update, mapping))


def simplify_inline(ts: TransitionSystem) -> TransitionSystem:
    return replace(ts, disjuncts=tuple(inline_disjunct(d) for d in ts.disjuncts))


# ---------------------------------------------------------------- mutation hook

def drop_conjunct(ts: TransitionSystem, clause_id: int, part: str, index: int) -> TransitionSystem:
    """Remove the ``index``-th top-level conjunct of one disjunct's guard/update/frame.

    Used to check that the oracles notice a corrupted translation.
    """
    if part not in ("guard", "update", "frame"):
        raise ValueError(f"unknown disjunct part {part!r}")
    out = []
    for d in ts.disjuncts:
        if d.source_clause == clause_id:
            cs = list(conjuncts(getattr(d, part)))
            if not 0 <= index < len(cs):
                raise IndexError(f"disjunct {clause_id} {part} has {len(cs)} conjuncts")
            del cs[index]
            d = replace(d, **{part: conj(cs)})
        out.append(d)
    return replace(ts, disjuncts=tuple(out))


def primed_occurrences(d: TransitionDisjunct) -> Dict[StateVar, int]:
    counts: Dict[StateVar, int] = {}
    for part in (d.update, d.frame):
        for n in walk(part):
            if isinstance(n, PrimedRef):
                counts[n.var] = counts.get(n.var, 0) + 1
    return counts


def uses_nonlinear_mul(t: Term) -> bool:
    for n in walk(t):
        if isinstance(n, App) and n.op is Op.MUL:
            if sum(not isinstance(a, IntLit) for a in n.args) > 1:
                return True
    return False

