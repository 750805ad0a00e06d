"""Sorted first-order terms over Bool and Int.

Terms are immutable and hashable. Constructors check operator signatures, so a
term that exists is sort-correct; ``sort`` is computed once at construction.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, Optional, Sequence, Tuple, Union

from .errors import ArityMismatch, SortMismatch


class Sort(enum.Enum):
    BOOL = "Bool"
    INT = "Int"

    def __str__(self) -> str:
        return self.value


class Op(enum.Enum):
    ADD = "+"
    SUB = "-"
    NEG = "neg"
    MUL = "*"
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    EQ = "="
    DISTINCT = "distinct"
    AND = "and"
    OR = "or"
    NOT = "not"
    IMPLIES = "=>"
    ITE = "ite"

    @property
    def smt(self) -> str:
        return "-" if self is Op.NEG else self.value


ARITH_OPS = (Op.ADD, Op.SUB, Op.MUL)
COMPARISONS = (Op.LT, Op.LE, Op.GT, Op.GE)
LOGICAL_NARY = (Op.AND, Op.OR, Op.IMPLIES)


def op_result_sort(op: Op, args: Sequence["Term"], span=None) -> Sort:
    """Check ``args`` against the signature of ``op`` and return the result sort."""
    sorts = [a.sort for a in args]
    n = len(args)

    def need(cond, msg, exc=SortMismatch):
        if not cond:
            raise exc(f"{op.smt}: {msg}", span)

    if op in ARITH_OPS:
        need(n >= 2, f"expects at least 2 arguments, got {n}", ArityMismatch)
        need(all(s is Sort.INT for s in sorts), "expects Int arguments")
        return Sort.INT
    if op is Op.NEG:
        need(n == 1, f"expects 1 argument, got {n}", ArityMismatch)
        need(sorts[0] is Sort.INT, "expects an Int argument")
        return Sort.INT
    if op in COMPARISONS:
        need(n >= 2, f"expects at least 2 arguments, got {n}", ArityMismatch)
        need(all(s is Sort.INT for s in sorts), "expects Int arguments")
        return Sort.BOOL
    if op in (Op.EQ, Op.DISTINCT):
        need(n >= 2, f"expects at least 2 arguments, got {n}", ArityMismatch)
        need(len(set(sorts)) == 1, "arguments must share a sort")
        return Sort.BOOL
    if op in LOGICAL_NARY:
        need(n >= (2 if op is Op.IMPLIES else 1), f"too few arguments ({n})", ArityMismatch)
        need(all(s is Sort.BOOL for s in sorts), "expects Bool arguments")
        return Sort.BOOL
    if op is Op.NOT:
        need(n == 1, f"expects 1 argument, got {n}", ArityMismatch)
        need(sorts[0] is Sort.BOOL, "expects a Bool argument")
        return Sort.BOOL
    if op is Op.ITE:
        need(n == 3, f"expects 3 arguments, got {n}", ArityMismatch)
        need(sorts[0] is Sort.BOOL, "condition must be Bool")
        need(sorts[1] is sorts[2], "branches must share a sort")
        return sorts[1]
    raise AssertionError(op)


@dataclass(frozen=True)
class Relation:
    name: str
    param_sorts: Tuple[Sort, ...]
    index: int = 0

    @property
    def arity(self) -> int:
        return len(self.param_sorts)

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"


@dataclass(frozen=True)
class StateVar:
    """A relation flag (``place == 0``) or the ``place``-th place of ``relation``."""

    relation: Relation
    place: int = 0
    ordinal: int = field(default=0, compare=False)

    @property
    def is_flag(self) -> bool:
        return self.place == 0

    @property
    def sort(self) -> Sort:
        return Sort.BOOL if self.place == 0 else self.relation.param_sorts[self.place - 1]

    @property
    def name(self) -> str:
        if self.is_flag:
            return f"flag.{self.relation.name}"
        return f"place.{self.relation.name}.{self.place}"

    @property
    def next_name(self) -> str:
        return self.name + ".next"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class InputVar:
    clause_id: int
    var_name: str
    sort: Sort

    @property
    def name(self) -> str:
        return f"in.{self.clause_id}.{self.var_name}"

    def __str__(self) -> str:
        return self.name


class Term:
    sort: Sort

    def children(self) -> Tuple["Term", ...]:
        return ()

    def __str__(self) -> str:
        return to_smt(self)


@dataclass(frozen=True, eq=True)
class BoolLit(Term):
    value: bool

    @property
    def sort(self) -> Sort:
        return Sort.BOOL


@dataclass(frozen=True, eq=True)
class IntLit(Term):
    value: int

    @property
    def sort(self) -> Sort:
        return Sort.INT


@dataclass(frozen=True, eq=True)
class BoundVar(Term):
    name: str
    var_sort: Sort

    @property
    def sort(self) -> Sort:
        return self.var_sort


@dataclass(frozen=True, eq=True)
class StateRef(Term):
    var: StateVar

    @property
    def sort(self) -> Sort:
        return self.var.sort


@dataclass(frozen=True, eq=True)
class PrimedRef(Term):
    var: StateVar

    @property
    def sort(self) -> Sort:
        return self.var.sort


@dataclass(frozen=True, eq=True)
class InputRef(Term):
    var: InputVar

    @property
    def sort(self) -> Sort:
        return self.var.sort


@dataclass(frozen=True, eq=True)
class App(Term):
    op: Op
    args: Tuple[Term, ...]
    sort: Sort = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        object.__setattr__(self, "sort", op_result_sort(self.op, self.args))

    def children(self):
        return self.args


@dataclass(frozen=True, eq=True)
class RelAtom(Term):
    relation: Relation
    args: Tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) != self.relation.arity:
            raise ArityMismatch(
                f"{self.relation.name} expects {self.relation.arity} arguments, got {len(self.args)}"
            )
        for i, (a, s) in enumerate(zip(self.args, self.relation.param_sorts)):
            if a.sort is not s:
                raise SortMismatch(f"{self.relation.name}: place {i + 1} expects {s}, got {a.sort}")

    @property
    def sort(self) -> Sort:
        return Sort.BOOL

    def children(self):
        return self.args


Leaf = Union[BoundVar, StateRef, PrimedRef, InputRef]
VAR_NODES = (BoundVar, StateRef, PrimedRef, InputRef)
TRUE = BoolLit(True)
FALSE = BoolLit(False)


# ---------------------------------------------------------------- builders

def conj(terms: Iterable[Term]) -> Term:
    """Flattened conjunction; drops ``true`` and collapses to a literal or single term."""
    out = []
    for t in terms:
        if isinstance(t, App) and t.op is Op.AND:
            out.extend(conjuncts(t))
        elif t == TRUE:
            continue
        else:
            out.append(t)
    if not out:
        return TRUE
    if len(out) == 1:
        return out[0]
    return App(Op.AND, tuple(out))


def disj(terms: Iterable[Term]) -> Term:
    out = [t for t in terms if t != FALSE]
    if not out:
        return FALSE
    if len(out) == 1:
        return out[0]
    return App(Op.OR, tuple(out))


def conjuncts(t: Term) -> Tuple[Term, ...]:
    """Top-level conjuncts of ``t`` with nested ``and`` flattened; ``true`` has none."""
    if t == TRUE:
        return ()
    if isinstance(t, App) and t.op is Op.AND:
        out = []
        for a in t.args:
            out.extend(conjuncts(a))
        return tuple(out)
    return (t,)


def neg(t: Term) -> Term:
    return App(Op.NOT, (t,))


def eq(a: Term, b: Term) -> Term:
    return App(Op.EQ, (a, b))


# ---------------------------------------------------------------- traversal

def walk(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        cur = stack.pop()
        yield cur
        stack.extend(reversed(cur.children()))


def free_leaves(t: Term) -> set:
    return {n for n in walk(t) if isinstance(n, VAR_NODES)}


def free_bound_vars(t: Term) -> set:
    return {n for n in walk(t) if isinstance(n, BoundVar)}


def contains_relatom(t: Term) -> bool:
    return any(isinstance(n, RelAtom) for n in walk(t))


def transform(t: Term, fn: Callable[[Term], Optional[Term]]) -> Term:
    """Bottom-up rewrite: ``fn`` returns a replacement or None to keep the node."""
    repl = fn(t)
    if repl is not None:
        return repl
    if isinstance(t, App):
        args = tuple(transform(a, fn) for a in t.args)
        return t if args == t.args else App(t.op, args)
    if isinstance(t, RelAtom):
        args = tuple(transform(a, fn) for a in t.args)
        return t if args == t.args else RelAtom(t.relation, args)
    return t


def substitute(t: Term, mapping: Dict[Term, Term]) -> Term:
    if not mapping:
        return t
    return transform(t, mapping.get)


def infer_sort(t: Term) -> Sort:
    """Recompute the sort of ``t`` structurally, ignoring cached values."""
    if isinstance(t, App):
        return op_result_sort(t.op, [_SortProbe(infer_sort(a)) for a in t.args])
    if isinstance(t, RelAtom):
        for a, s in zip(t.args, t.relation.param_sorts):
            if infer_sort(a) is not s:
                raise SortMismatch(f"bad argument sort in {t.relation.name}")
        return Sort.BOOL
    return t.sort


@dataclass(frozen=True)
class _SortProbe:
    sort: Sort


# ---------------------------------------------------------------- printing

_SIMPLE = re.compile(r"^[A-Za-z~!@$%^&*_\-+=<>.?/][A-Za-z0-9~!@$%^&*_\-+=<>.?/]*$")
_RESERVED = frozenset(
    "_ ! as let exists forall match par BINARY DECIMAL HEXADECIMAL NUMERAL STRING".split()
)


def quote_symbol(name: str) -> str:
    if _SIMPLE.match(name) and name not in _RESERVED:
        return name
    if "|" in name or "\\" in name:
        raise ValueError(f"symbol {name!r} cannot be quoted")
    return f"|{name}|"


def int_literal(v: int) -> str:
    return str(v) if v >= 0 else f"(- {-v})"


def to_smt(t: Term, rename: Optional[Callable[[Term], Optional[str]]] = None) -> str:
    """Render ``t`` as SMT-LIB text. ``rename`` may override leaf names."""
    parts = []
    _emit(t, rename, parts)
    return "".join(parts)


def _emit(t, rename, out):
    if rename is not None and isinstance(t, VAR_NODES):
        name = rename(t)
        if name is not None:
            out.append(name)
            return
    if isinstance(t, BoolLit):
        out.append("true" if t.value else "false")
    elif isinstance(t, IntLit):
        out.append(int_literal(t.value))
    elif isinstance(t, BoundVar):
        out.append(quote_symbol(t.name))
    elif isinstance(t, StateRef):
        out.append(quote_symbol(t.var.name))
    elif isinstance(t, PrimedRef):
        out.append(quote_symbol(t.var.next_name))
    elif isinstance(t, InputRef):
        out.append(quote_symbol(t.var.name))
    elif isinstance(t, (App, RelAtom)):
        head = t.op.smt if isinstance(t, App) else quote_symbol(t.relation.name)
        if not t.args:
            out.append(head)
            return
        out.append("(" + head)
        for a in t.args:
            out.append(" ")
            _emit(a, rename, out)
        out.append(")")
    else:
        raise TypeError(f"not a term: {t!r}")
