"""Linear Horn clauses: clausification, linearity, query normalization, validation."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple, Union

from .errors import (
    HeadNotAtomOrFalse,
    NonlinearClause,
    RelationAtomUnderNonConjunctiveContext,
    ValidationError,
)
from .smtlib import Assertion, RawScript, load_script
from .terms import (
    FALSE,
    TRUE,
    App,
    BoundVar,
    Op,
    Relation,
    RelAtom,
    Sort,
    Term,
    conj,
    contains_relatom,
    free_bound_vars,
    to_smt,
    walk,
)

Span = Tuple[int, int]


class _QueryFalse:
    """Head marker for query clauses (``body => false``) before normalization."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "QueryFalse"

    def __reduce__(self):
        return (_QueryFalse, ())


QUERY_FALSE = _QueryFalse()
Head = Union[RelAtom, _QueryFalse]


@dataclass(frozen=True)
class HornClause:
    id: int
    qvars: Tuple[Tuple[str, Sort], ...]
    body_atoms: Tuple[RelAtom, ...]
    constraint: Term
    head: Head
    span: Span = field(default=(0, 0), compare=False)

    @property
    def body_atom(self) -> Optional[RelAtom]:
        if len(self.body_atoms) > 1:
            raise NonlinearClause(self.id, len(self.body_atoms), self.span)
        return self.body_atoms[0] if self.body_atoms else None

    @property
    def is_fact(self) -> bool:
        return not self.body_atoms

    @property
    def is_query(self) -> bool:
        return self.head is QUERY_FALSE

    def __str__(self) -> str:
        body = [to_smt(a) for a in self.body_atoms]
        if self.constraint != TRUE or not body:
            body.append(to_smt(self.constraint))
        head = "false" if self.is_query else to_smt(self.head)
        q = " ".join(f"({n} {s})" for n, s in self.qvars)
        text = " & ".join(body) + " => " + head
        return f"forall ({q}). {text}" if q else text


@dataclass(frozen=True)
class HornSystem:
    relations: Tuple[Relation, ...]
    clauses: Tuple[HornClause, ...]
    query: Optional[Relation] = None

    def relation(self, name: str) -> Relation:
        for r in self.relations:
            if r.name == name:
                return r
        raise KeyError(name)


# ---------------------------------------------------------------- clausify

def _flatten_and(t: Term) -> List[Term]:
    if isinstance(t, App) and t.op is Op.AND:
        out = []
        for a in t.args:
            out.extend(_flatten_and(a))
        return out
    return [t]


def clausify(asserted: Union[Assertion, Term], clause_id: int = 0) -> HornClause:
    """Split an assertion into body relation atoms, interpreted constraint and head.

    A plain Term is treated as having no quantified variables. Nothing is
    checked about linearity here.
    """
    if isinstance(asserted, Assertion):
        qvars, t, span = asserted.qvars, asserted.body, asserted.span
    else:
        qvars, t, span = (), asserted, (0, 0)

    if isinstance(t, App) and t.op is Op.IMPLIES:
        body_parts = list(t.args[:-1])
        head_term = t.args[-1]
    elif isinstance(t, App) and t.op is Op.NOT and contains_relatom(t.args[0]):
        # (not body) with relation atoms in body reads as body => false
        body_parts, head_term = [t.args[0]], FALSE
    else:
        body_parts, head_term = [], t

    atoms: List[RelAtom] = []
    interpreted: List[Term] = []
    for part in body_parts:
        for c in _flatten_and(part):
            if isinstance(c, RelAtom):
                atoms.append(c)
            elif contains_relatom(c):
                raise RelationAtomUnderNonConjunctiveContext(
                    f"relation atom under a non-conjunctive connective: {to_smt(c)}", span
                )
            else:
                interpreted.append(c)

    if isinstance(head_term, RelAtom):
        head: Head = head_term
    elif head_term == FALSE:
        head = QUERY_FALSE
    elif contains_relatom(head_term):
        raise RelationAtomUnderNonConjunctiveContext(
            f"head must be a single relation atom or false, got {to_smt(head_term)}", span
        )
    else:
        raise HeadNotAtomOrFalse(
            f"interpreted head {to_smt(head_term)} is not supported (expected a relation atom or false)", span
        )
    return HornClause(clause_id, tuple(qvars), tuple(atoms), conj(interpreted), head, span)


def check_linear(clause: HornClause) -> None:
    if len(clause.body_atoms) > 1:
        raise NonlinearClause(clause.id, len(clause.body_atoms), clause.span)


def fresh_query_name(taken) -> str:
    taken = set(taken)
    name, k = "q.U", 0
    while name in taken:
        k += 1
        name = f"q.U.{k}"
    return name


def normalize_query(system: HornSystem, query_name: Optional[str] = None) -> HornSystem:
    """Retarget every ``=> false`` head to a 0-ary query relation.

    With ``query_name`` a declared 0-ary relation is used as the query instead
    of a fresh one. Applying this to an already normalized system is a no-op.
    """
    has_false = any(c.is_query for c in system.clauses)
    if system.query is not None and not has_false:
        return system
    if query_name is not None:
        u = system.relation(query_name)
        if u.arity != 0:
            raise ValidationError([Diagnostic(f"query relation {query_name} must be 0-ary", None, None)])
        relations = system.relations
    else:
        u = Relation(fresh_query_name(r.name for r in system.relations), (), len(system.relations))
        relations = system.relations + (u,)
    head = RelAtom(u, ())
    clauses = tuple(replace(c, head=head) if c.is_query else c for c in system.clauses)
    return HornSystem(relations, clauses, u)


# ---------------------------------------------------------------- validate

@dataclass(frozen=True)
class Diagnostic:
    message: str
    clause_id: Optional[int]
    span: Optional[Span]

    def __str__(self) -> str:
        where = f"clause {self.clause_id}: " if self.clause_id is not None else ""
        return where + self.message


def diagnose(system: HornSystem) -> List[Diagnostic]:
    diags: List[Diagnostic] = []
    rels = set(system.relations)
    names = [r.name for r in system.relations]
    if len(set(names)) != len(names):
        diags.append(Diagnostic("relation names are not unique", None, None))
    if [r.index for r in system.relations] != list(range(len(system.relations))):
        diags.append(Diagnostic("relation indices are not dense", None, None))
    if system.query is None:
        diags.append(Diagnostic("no query relation (normalize_query not applied)", None, None))
    else:
        if system.query.arity != 0:
            diags.append(Diagnostic(f"query relation {system.query.name} is not 0-ary", None, None))
        if system.query not in rels:
            diags.append(Diagnostic(f"query relation {system.query.name} is not declared", None, None))

    for pos, c in enumerate(system.clauses):
        def bad(msg):
            diags.append(Diagnostic(msg, c.id, c.span))

        if c.id != pos:
            bad(f"clause id {c.id} does not match position {pos}")
        if len(c.body_atoms) > 1:
            bad(f"nonlinear body with {len(c.body_atoms)} relation atoms")
        if not isinstance(c.head, RelAtom):
            bad("head is not a relation atom")
        if c.constraint.sort is not Sort.BOOL:
            bad("constraint is not Bool")
        if contains_relatom(c.constraint):
            bad("constraint mentions a relation atom")
        atoms = list(c.body_atoms) + ([c.head] if isinstance(c.head, RelAtom) else [])
        for a in atoms:
            if a.relation not in rels:
                bad(f"undeclared relation {a.relation.name}")
            for arg in a.args:
                if contains_relatom(arg):
                    bad(f"nested relation atom in arguments of {a.relation.name}")
        scope = {BoundVar(n, s) for n, s in c.qvars}
        if len(scope) != len(c.qvars):
            bad("duplicate quantified variable")
        used = set(free_bound_vars(c.constraint))
        for a in atoms:
            for arg in a.args:
                used |= free_bound_vars(arg)
        for v in sorted(used - scope, key=lambda v: v.name):
            bad(f"variable {v.name} is not quantified")
        terms = [c.constraint] + [arg for a in atoms for arg in a.args]
        for t in terms:
            for n in walk(t):
                if n.sort not in (Sort.BOOL, Sort.INT):
                    bad(f"unsupported sort {n.sort}")
    return diags


def validate(system: HornSystem) -> HornSystem:
    diags = diagnose(system)
    if diags:
        raise ValidationError(diags)
    return system


# ---------------------------------------------------------------- pipeline

def system_from_script(script: RawScript, query_name: Optional[str] = None) -> HornSystem:
    clauses = tuple(clausify(a, i) for i, a in enumerate(script.asserts))
    for c in clauses:
        check_linear(c)
    system = HornSystem(tuple(script.relations), clauses)
    return validate(normalize_query(system, query_name))


def load_system(source, query_name: Optional[str] = None) -> HornSystem:
    return system_from_script(load_script(source), query_name)


def system_size(system: HornSystem) -> dict:
    return {
        "relations": len(system.relations),
        "sum_arity": sum(r.arity for r in system.relations),
        "clauses": len(system.clauses),
    }

