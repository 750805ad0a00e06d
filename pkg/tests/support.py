"""Test-only helpers that do not go through the package's own evaluator."""

import functools
import itertools

import numpy as np

from hornvmt.terms import App, BoolLit, InputRef, IntLit, Op, PrimedRef, Sort, StateRef, walk


def leaves(*terms):
    out = set()
    for t in terms:
        out |= {n for n in walk(t) if isinstance(n, (StateRef, PrimedRef, InputRef))}
    return sorted(out, key=str)


def grid(variables, lo, hi):
    """One broadcastable numpy axis per variable covering its whole domain."""
    n = len(variables)
    axes = {}
    for i, v in enumerate(variables):
        vals = np.array([False, True]) if v.sort is Sort.BOOL else np.arange(lo, hi + 1, dtype=np.int64)
        shape = [1] * n
        shape[i] = len(vals)
        axes[v] = vals.reshape(shape)
    return axes


def _all(xs):
    return functools.reduce(np.logical_and, xs)


def _any(xs):
    return functools.reduce(np.logical_or, xs)


def vec_eval(t, axes):
    if isinstance(t, BoolLit):
        return np.bool_(t.value)
    if isinstance(t, IntLit):
        return np.int64(t.value)
    if isinstance(t, (StateRef, PrimedRef, InputRef)):
        return axes[t]
    assert isinstance(t, App), t
    a = [vec_eval(x, axes) for x in t.args]
    op = t.op
    if op is Op.ADD:
        return sum(a[1:], a[0])
    if op is Op.SUB:
        r = a[0]
        for x in a[1:]:
            r = r - x
        return r
    if op is Op.NEG:
        return -a[0]
    if op is Op.MUL:
        r = a[0]
        for x in a[1:]:
            r = r * x
        return r
    pairs = list(zip(a, a[1:]))
    if op is Op.LT:
        return _all([x < y for x, y in pairs])
    if op is Op.LE:
        return _all([x <= y for x, y in pairs])
    if op is Op.GT:
        return _all([x > y for x, y in pairs])
    if op is Op.GE:
        return _all([x >= y for x, y in pairs])
    if op is Op.EQ:
        return _all([x == y for x, y in pairs])
    if op is Op.DISTINCT:
        return _all([x != y for x, y in itertools.combinations(a, 2)])
    if op is Op.AND:
        return _all(a)
    if op is Op.OR:
        return _any(a)
    if op is Op.NOT:
        return np.logical_not(a[0])
    if op is Op.IMPLIES:
        r = a[-1]
        for x in reversed(a[:-1]):
            r = np.logical_or(np.logical_not(x), r)
        return r
    if op is Op.ITE:
        return np.where(a[0], a[1], a[2])
    raise AssertionError(op)


def equivalent_on_grid(f, g, lo, hi):
    """True iff f and g agree on every assignment of their variables over [lo, hi]."""
    vs = leaves(f, g)
    axes = grid(vs, lo, hi)
    shape = tuple(max(axes[v].shape[i] for v in vs) for i in range(len(vs)))
    a = np.broadcast_to(vec_eval(f, axes), shape)
    b = np.broadcast_to(vec_eval(g, axes), shape)
    return bool(np.array_equal(a, b))


def reference_disjuncts(ts):
    """The five worked-example disjuncts written out by hand over ts's variables."""
    from hornvmt.terms import conj, eq, neg

    rel = {r.name: r for r in ts.relations}
    fE, fL, fM, fU = (ts.flag(rel[n]) for n in ("E", "L", "M", "q.U"))
    pL, pM = ts.place(rel["L"], 1), ts.place(rel["M"], 1)
    X = [fE, fL, fM, fU, pL, pM]

    def cur(v):
        return StateRef(v)

    def nxt(v):
        return PrimedRef(v)

    def keep(*changed):
        return [eq(nxt(v), cur(v)) for v in X if v not in changed]

    five, seven = IntLit(5), IntLit(7)
    return [
        conj([nxt(fE)] + keep(fE)),
        conj([cur(fE), nxt(fL), eq(nxt(pL), IntLit(0))] + keep(fL, pL)),
        conj([cur(fL), App(Op.LT, (cur(pL), five)), nxt(fL), eq(nxt(pL), App(Op.ADD, (cur(pL), IntLit(3))))] + keep(fL, pL)),
        conj([cur(fL), neg(App(Op.LT, (cur(pL), five))), nxt(fM), eq(nxt(pM), cur(pL))] + keep(fM, pM)),
        conj([cur(fM), neg(App(Op.LT, (cur(pM), seven))), nxt(fU)] + keep(fU)),
    ]
