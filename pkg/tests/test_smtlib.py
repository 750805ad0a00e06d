import pytest
from hypothesis import given, settings, strategies as st

from hornvmt.errors import (
    ArityMismatch,
    DuplicateRelation,
    NestedQuantifier,
    SortMismatch,
    UnknownIdentifier,
    UnsupportedCommand,
    UnsupportedLogic,
    UnsupportedSort,
)
from hornvmt.sexpr import read, read_one
from hornvmt.smtlib import load_script, parse_script, parse_term
from hornvmt.terms import (
    App,
    BoolLit,
    BoundVar,
    IntLit,
    Op,
    Relation,
    RelAtom,
    Sort,
    TRUE,
    infer_sort,
    walk,
)

X = BoundVar("x", Sort.INT)
L = Relation("L", (Sort.INT,), 0)
RELS = {"L": L}


def term(text, scope=None, rels=RELS):
    return parse_term(read_one(text), scope or {"x": Sort.INT}, rels)


def test_script_minimal():
    s = parse_script(read("(set-logic HORN)(declare-fun L (Int) Bool)(assert true)(check-sat)"))
    assert s.logic == "HORN"
    assert [(r.name, r.arity) for r in s.relations] == [("L", 1)]
    assert [a.body for a in s.asserts] == [TRUE]
    assert s.check_sat


def test_declaration_becomes_relation():
    s = load_script("(set-logic HORN)(declare-fun M (Int) Bool)")
    assert s.relation("M") == Relation("M", (Sort.INT,), 0)


def test_relation_indices_are_dense():
    s = load_script("(set-logic HORN)(declare-fun A () Bool)(declare-fun B (Int Bool) Bool)")
    assert [r.index for r in s.relations] == [0, 1]
    assert s.relation("B").param_sorts == (Sort.INT, Sort.BOOL)


def test_ignored_commands():
    s = load_script('(set-info :status sat)(set-option :x 1)(set-logic HORN)(exit)')
    assert (s.logic, s.relations, s.asserts, s.check_sat) == ("HORN", [], [], False)


@pytest.mark.parametrize(
    "src, exc",
    [
        ("(set-logic HORN)(declare-fun f (Int) Int)", UnsupportedSort),
        ("(set-logic HORN)(declare-fun A ((Array Int Int)) Bool)", UnsupportedSort),
        ("(set-logic ALL)", UnsupportedLogic),
        ("(set-logic HORN)(push 1)", UnsupportedCommand),
        ("(set-logic HORN)(define-fun f () Int 1)", UnsupportedCommand),
        ("(set-logic HORN)(declare-fun A () Bool)(declare-fun A () Bool)", DuplicateRelation),
    ],
)
def test_script_errors(src, exc):
    with pytest.raises(exc) as e:
        load_script(src)
    assert e.value.span is not None


def test_term_less_than():
    t = term("(< x 5)")
    assert t == App(Op.LT, (X, IntLit(5)))
    assert t.sort is Sort.BOOL


def test_term_plus():
    t = term("(+ x 3)")
    assert t == App(Op.ADD, (X, IntLit(3)))
    assert t.sort is Sort.INT


def test_term_unknown_identifier():
    with pytest.raises(UnknownIdentifier) as e:
        term("(L q)")
    assert e.value.span == (3, 4)


def test_negative_literal_and_negation():
    assert term("(- 7)") == IntLit(-7)
    assert term("(- x)") == App(Op.NEG, (X,))
    assert term("(- x 1)") == App(Op.SUB, (X, IntLit(1)))


def test_big_numerals_are_exact():
    assert term("123456789012345678901234567890") == IntLit(123456789012345678901234567890)


def test_relation_application_is_relatom():
    assert term("(L (+ x 3))") == RelAtom(L, (App(Op.ADD, (X, IntLit(3))),))


def test_let_is_substituted():
    assert term("(let ((y (+ x 1))) (< y y))") == App(Op.LT, (App(Op.ADD, (X, IntLit(1))),) * 2)


def test_let_is_parallel():
    t = term("(let ((x 1) (y x)) (= x y))")
    assert t == App(Op.EQ, (IntLit(1), X))


def test_named_annotation_is_stripped():
    assert term("(! (< x 5) :named a)") == App(Op.LT, (X, IntLit(5)))


def test_chainable_equality():
    t = term("(= x 1 2)")
    assert t == App(Op.AND, (App(Op.EQ, (X, IntLit(1))), App(Op.EQ, (IntLit(1), IntLit(2)))))


@pytest.mark.parametrize(
    "text, exc",
    [
        ("(< x true)", SortMismatch),
        ("(not x)", SortMismatch),
        ("(ite x 1 2)", SortMismatch),
        ("(L x x)", ArityMismatch),
        ("(not true false)", ArityMismatch),
        ("(forall ((y Int)) (< y x))", NestedQuantifier),
        ("(f x)", UnknownIdentifier),
    ],
)
def test_term_errors(text, exc):
    with pytest.raises(exc):
        term(text)


def test_forall_peeled_and_not_exists_is_query():
    s = load_script(
        "(set-logic HORN)(declare-fun L (Int) Bool)"
        "(assert (forall ((x Int)) (=> (L x) (L (+ x 1)))))"
        "(assert (not (exists ((x Int)) (and (L x) (> x 3)))))"
    )
    a0, a1 = s.asserts
    assert a0.qvars == (("x", Sort.INT),)
    assert a1.qvars == (("x", Sort.INT),)
    assert a1.body.op is Op.IMPLIES and a1.body.args[-1] == BoolLit(False)


# randomized parses: sort soundness and fragment closure

INT_OPS = ["+", "-", "*"]
CMP_OPS = ["<", "<=", ">", ">=", "="]


def int_terms():
    leaf = st.sampled_from(["x", "y", "0", "7", "(- 3)"])
    return st.recursive(
        leaf,
        lambda k: st.one_of(
            st.tuples(st.sampled_from(INT_OPS), k, k).map(lambda t: f"({t[0]} {t[1]} {t[2]})"),
            st.tuples(bool_terms_base(k), k, k).map(lambda t: f"(ite {t[0]} {t[1]} {t[2]})"),
        ),
        max_leaves=8,
    )


def bool_terms_base(ints):
    return st.tuples(st.sampled_from(CMP_OPS), ints, ints).map(lambda t: f"({t[0]} {t[1]} {t[2]})")


def bool_terms():
    ints = int_terms()
    leaf = st.one_of(st.sampled_from(["b", "true", "false"]), bool_terms_base(ints), ints.map(lambda i: f"(L {i})"))
    return st.recursive(
        leaf,
        lambda k: st.one_of(
            st.lists(k, min_size=1, max_size=3).map(lambda xs: f"(and {' '.join(xs)})"),
            st.lists(k, min_size=2, max_size=3).map(lambda xs: f"(or {' '.join(xs)})"),
            k.map(lambda a: f"(not {a})"),
            st.tuples(k, k).map(lambda t: f"(=> {t[0]} {t[1]})"),
            st.tuples(k, k).map(lambda t: f"(distinct {t[0]} {t[1]})"),
        ),
        max_leaves=10,
    )


SCOPE = {"x": Sort.INT, "y": Sort.INT, "b": Sort.BOOL}
ALLOWED = (BoolLit, IntLit, BoundVar, App, RelAtom)


@settings(max_examples=200, deadline=None)
@given(st.one_of(bool_terms(), int_terms()))
def test_sort_soundness_and_fragment_closure(text):
    t = parse_term(read_one(text), SCOPE, RELS)
    for n in walk(t):
        assert isinstance(n, ALLOWED)
        assert n.sort in (Sort.BOOL, Sort.INT)
        assert infer_sort(n) is n.sort
        if isinstance(n, App):
            assert isinstance(n.op, Op)
