"""SMT-LIB HORN scripts: commands, declarations and sorted term parsing."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    ArityMismatch,
    DuplicateRelation,
    NestedQuantifier,
    SortMismatch,
    TermError,
    UnexpectedEOF,
    UnknownIdentifier,
    UnsupportedCommand,
    UnsupportedLogic,
    UnsupportedSort,
)
from .sexpr import Atom, SExpr, SList, Tok, read
from .terms import (
    FALSE,
    TRUE,
    App,
    BoundVar,
    IntLit,
    Op,
    Relation,
    RelAtom,
    Sort,
    Term,
)

_OPS = {
    "+": Op.ADD,
    "*": Op.MUL,
    "<": Op.LT,
    "<=": Op.LE,
    ">": Op.GT,
    ">=": Op.GE,
    "=": Op.EQ,
    "distinct": Op.DISTINCT,
    "and": Op.AND,
    "or": Op.OR,
    "not": Op.NOT,
    "=>": Op.IMPLIES,
    "ite": Op.ITE,
}
_SORTS = {"Bool": Sort.BOOL, "Int": Sort.INT}


@dataclass(frozen=True)
class Assertion:
    """An asserted formula with its outermost universal prefix peeled off."""

    qvars: Tuple[Tuple[str, Sort], ...]
    body: Term
    span: Tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass
class RawScript:
    logic: Optional[str] = None
    relations: List[Relation] = field(default_factory=list)
    asserts: List[Assertion] = field(default_factory=list)
    check_sat: bool = False

    def relation(self, name: str) -> Relation:
        for r in self.relations:
            if r.name == name:
                return r
        raise KeyError(name)


def symbol_name(e: SExpr) -> str:
    if not isinstance(e, Atom) or e.kind is not Tok.SYMBOL:
        raise UnknownIdentifier(f"expected a symbol, got {e}", e.span)
    t = e.text
    return t[1:-1] if t.startswith("|") else t


def parse_sort(e: SExpr) -> Sort:
    if isinstance(e, Atom) and e.text in _SORTS:
        return _SORTS[e.text]
    raise UnsupportedSort(f"unsupported sort {e} (only Bool and Int are supported)", e.span)


def parse_script(forest: Sequence[SExpr]) -> RawScript:
    script = RawScript()
    by_name: Dict[str, Relation] = {}
    for cmd in forest:
        if not isinstance(cmd, SList) or not cmd.children or not isinstance(cmd[0], Atom):
            raise UnsupportedCommand(f"expected a command, got {cmd}", cmd.span)
        name = cmd[0].text
        if name == "set-logic":
            _expect_len(cmd, 2)
            logic = cmd[1].text if isinstance(cmd[1], Atom) else str(cmd[1])
            if logic != "HORN":
                raise UnsupportedLogic(f"unsupported logic {logic} (expected HORN)", cmd[1].span)
            script.logic = logic
        elif name == "declare-fun":
            _expect_len(cmd, 4)
            rname = symbol_name(cmd[1])
            if not isinstance(cmd[2], SList):
                raise UnsupportedCommand("declare-fun expects a parameter sort list", cmd[2].span)
            ret = parse_sort(cmd[3])
            if ret is not Sort.BOOL:
                raise UnsupportedSort(
                    f"declare-fun {rname}: return sort {cmd[3]} is not Bool (uninterpreted functions are not supported)",
                    cmd[3].span,
                )
            if rname in by_name:
                raise DuplicateRelation(f"relation {rname} declared twice", cmd[1].span)
            rel = Relation(rname, tuple(parse_sort(s) for s in cmd[2]), len(script.relations))
            by_name[rname] = rel
            script.relations.append(rel)
        elif name == "assert":
            _expect_len(cmd, 2)
            script.asserts.append(parse_assertion(cmd[1], by_name))
        elif name == "check-sat":
            script.check_sat = True
        elif name in ("set-info", "set-option", "exit"):
            pass
        else:
            raise UnsupportedCommand(f"unsupported command {name}", cmd.span)
    return script


def load_script(source: Union[str, bytes]) -> RawScript:
    return parse_script(read(source))


def _expect_len(cmd: SList, n: int):
    if len(cmd) != n:
        if len(cmd) < n:
            raise UnexpectedEOF(f"{cmd[0].text}: expected {n - 1} arguments, got {len(cmd) - 1}", cmd.span)
        raise UnsupportedCommand(f"{cmd[0].text}: expected {n - 1} arguments, got {len(cmd) - 1}", cmd.span)


def _parse_binders(e: SExpr) -> List[Tuple[str, Sort]]:
    if not isinstance(e, SList) or not e.children:
        raise TermError("expected a non-empty binder list", e.span)
    out = []
    for b in e:
        if not isinstance(b, SList) or len(b) != 2:
            raise TermError(f"malformed binder {b}", b.span)
        out.append((symbol_name(b[0]), parse_sort(b[1])))
    return out


def _strip_named(e: SExpr) -> SExpr:
    # (! t :named n ...) -> t
    while isinstance(e, SList) and len(e) >= 2 and isinstance(e[0], Atom) and e[0].text == "!":
        e = e[1]
    return e


def parse_assertion(e: SExpr, relations: Mapping[str, Relation]) -> Assertion:
    """Peel ``forall`` prefixes; ``(not (exists vs body))`` becomes ``body => false``."""
    span = e.span
    qvars: List[Tuple[str, Sort]] = []
    e = _strip_named(e)
    while isinstance(e, SList) and len(e) == 3 and isinstance(e[0], Atom) and e[0].text == "forall":
        qvars.extend(_parse_binders(e[1]))
        e = _strip_named(e[2])
    if (
        isinstance(e, SList)
        and len(e) == 2
        and isinstance(e[0], Atom)
        and e[0].text == "not"
    ):
        inner = _strip_named(e[1])
        if isinstance(inner, SList) and len(inner) == 3 and isinstance(inner[0], Atom) and inner[0].text == "exists":
            qvars.extend(_parse_binders(inner[1]))
            body = parse_term(inner[2], _scope(qvars, span), relations)
            return Assertion(tuple(qvars), App(Op.IMPLIES, (body, FALSE)), span)
    body = parse_term(e, _scope(qvars, span), relations)
    return Assertion(tuple(qvars), body, span)


def _scope(qvars, span) -> Dict[str, Sort]:
    scope: Dict[str, Sort] = {}
    for name, sort in qvars:
        if name in scope:
            raise TermError(f"variable {name} bound twice", span)
        scope[name] = sort
    return scope


def parse_term(e: SExpr, scope: Mapping[str, Sort], relations: Mapping[str, Relation]) -> Term:
    """Parse ``e`` into a sort-checked Term.

    ``scope`` maps bound variable names to sorts; ``let`` bindings are
    substituted eagerly. Relation applications become RelAtom wherever they
    occur; clausification decides whether their position is legal.
    """
    return _Parser(relations).term(e, {n: BoundVar(n, s) for n, s in scope.items()})


class _Parser:
    def __init__(self, relations: Mapping[str, Relation]):
        self.relations = relations

    def term(self, e: SExpr, env: Dict[str, Term]) -> Term:
        if isinstance(e, Atom):
            return self.atom(e, env)
        if not e.children:
            raise TermError("empty application", e.span)
        head = e[0]
        if isinstance(head, SList):
            raise TermError(f"unsupported application head {head}", head.span)
        h = head.text
        if h == "!":
            return self.term(e[1], env)
        if h in ("forall", "exists"):
            raise NestedQuantifier(f"quantifier {h} not allowed here", e.span)
        if h == "let":
            return self.let(e, env)
        args = [self.term(a, env) for a in e.children[1:]]
        try:
            return self.apply(h, args, e, env)
        except (SortMismatch, ArityMismatch) as exc:
            if exc.span is None:
                exc.span = e.span
            raise

    def atom(self, e: Atom, env) -> Term:
        if e.kind is Tok.NUMERAL:
            return IntLit(int(e.text))
        if e.kind is not Tok.SYMBOL:
            raise TermError(f"unsupported literal {e.text}", e.span)
        if e.text == "true":
            return TRUE
        if e.text == "false":
            return FALSE
        name = symbol_name(e)
        if name in env:
            return env[name]
        if name in self.relations:
            rel = self.relations[name]
            if rel.arity:
                raise ArityMismatch(f"{name} expects {rel.arity} arguments, got 0", e.span)
            return RelAtom(rel, ())
        raise UnknownIdentifier(f"unknown identifier {name}", e.span)

    def let(self, e: SList, env) -> Term:
        if len(e) != 3 or not isinstance(e[1], SList):
            raise TermError("malformed let", e.span)
        inner = dict(env)
        for b in e[1]:
            if not isinstance(b, SList) or len(b) != 2:
                raise TermError(f"malformed let binding {b}", b.span)
            # parallel let: bound terms see the outer environment
            inner[symbol_name(b[0])] = self.term(b[1], env)
        return self.term(e[2], inner)

    def apply(self, h: str, args: List[Term], e: SList, env) -> Term:
        if h == "-":
            if len(args) == 1:
                a = args[0]
                if isinstance(a, IntLit) and isinstance(e[1], Atom) and e[1].kind is Tok.NUMERAL:
                    return IntLit(-a.value)
                return App(Op.NEG, (a,))
            return App(Op.SUB, tuple(args))
        if h in _OPS:
            op = _OPS[h]
            if op is Op.EQ and len(args) > 2:
                # chainable: (= a b c) is (and (= a b) (= b c))
                return App(Op.AND, tuple(App(Op.EQ, (x, y)) for x, y in zip(args, args[1:])))
            if op in (Op.AND, Op.OR) and len(args) == 0:
                return TRUE if op is Op.AND else FALSE
            if op in (Op.AND, Op.OR) and len(args) == 1:
                return App(op, tuple(args)) if args[0].sort is not Sort.BOOL else args[0]
            return App(op, tuple(args))
        name = h[1:-1] if h.startswith("|") else h
        if name in self.relations:
            rel = self.relations[name]
            if len(args) != rel.arity:
                raise ArityMismatch(f"{name} expects {rel.arity} arguments, got {len(args)}", e.span)
            return RelAtom(rel, tuple(args))
        raise UnknownIdentifier(f"unknown function {name}", e[0].span)

