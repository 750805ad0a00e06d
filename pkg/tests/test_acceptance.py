"""Acceptance criteria, one test per criterion, each with its runtime bound.

The terminal summary prints a PASS/FAIL line for every test in this file.
"""

import time

import pytest

from hornvmt.horn import load_system
from hornvmt.oracle import Domain, check_equivalence, reach
from hornvmt.randsys import random_script, seeds_for
from hornvmt.sexpr import read
from hornvmt.terms import StateRef, conj, conjuncts, neg
from hornvmt.translate import drop_conjunct, simplify_inline, translate_system
from hornvmt.vmt import emit_bmc, emit_vmt
from support import equivalent_on_grid, reference_disjuncts

pytestmark = pytest.mark.acceptance

SUITE_SEED = 7
SUITE_SIZE = 200


@pytest.fixture(scope="module")
def suite():
    return [(seed, load_system(random_script(seed))) for seed in seeds_for(SUITE_SIZE, SUITE_SEED)]


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def report(n, ok, detail):
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")


def test_criterion_1_worked_example_reachability(loop_source):
    with Timer() as t:
        ts = translate_system(load_system(loop_source))
        r = reach(ts, Domain(0, 16), 10)
    rel = {x.name: x for x in ts.relations}
    fL, pL = ts.flag(rel["L"]).ordinal, ts.place(rel["L"], 1).ordinal
    fM, pM = ts.flag(rel["M"]).ordinal, ts.place(rel["M"], 1).ordinal
    fU = ts.flag(ts.query).ordinal
    l_values = {s[pL] for s in r.depths if s[fL]}
    m_values = {s[pM] for s in r.depths if s[fM]}
    u_states = [s for s in r.depths if s[fU]]
    report(1, l_values == {0, 3, 6} and m_values == {6} and not u_states and t.elapsed < 1.0,
           f"L={sorted(l_values)} M={sorted(m_values)} U-states={len(u_states)} {t.elapsed:.3f}s")
    assert l_values == {0, 3, 6}
    assert m_values == {6}
    assert u_states == []
    assert t.elapsed < 1.0


def test_criterion_2_worked_example_structure(loop_source):
    with Timer() as t:
        ts = translate_system(load_system(loop_source))
        rel = {x.name: x for x in ts.relations}
        flags = [ts.flag(rel[n]) for n in ("E", "L", "M", "q.U")]
        places = [ts.place(rel["L"], 1), ts.place(rel["M"], 1)]
        structure_ok = (
            len(ts.disjuncts) == 5
            and list(ts.state_vars) == flags + places
            and ts.init == conj(neg(StateRef(f)) for f in flags)
            and len(conjuncts(ts.init)) == 4
            and ts.prop == neg(StateRef(flags[3]))
        )
        inlined = simplify_inline(ts)
        equivalent = [
            equivalent_on_grid(d.formula, want, 0, 16)
            for d, want in zip(inlined.disjuncts, reference_disjuncts(ts))
        ]
    ok = structure_ok and all(equivalent) and t.elapsed < 1.0
    report(2, ok, f"structure={structure_ok} equivalent={equivalent} {t.elapsed:.3f}s")
    assert structure_ok
    assert all(equivalent)
    assert t.elapsed < 1.0


def test_criterion_3_theorem_suite(suite):
    bad = []
    facts = 0
    with Timer() as t:
        for seed, system in suite:
            rep = check_equivalence(system, translate_system(system), Domain(-8, 8), 8)
            facts += len(rep.facts)
            if not rep.ok:
                bad.append((seed, rep.to_text()))
    ok = not bad and t.elapsed < 60.0
    report(3, ok, f"systems={len(suite)} facts={facts} failing={len(bad)} {t.elapsed:.2f}s")
    assert bad == []
    assert facts > len(suite)
    assert t.elapsed < 60.0


def test_criterion_4_output_size_is_linear(loop_source, suite):
    def units(s):
        return len(s.clauses) + sum(r.arity for r in s.relations)

    with Timer() as t:
        ref = load_system(loop_source)
        per_unit = len(emit_vmt(translate_system(ref)).encode()) / units(ref)
        exact, over = [], []
        for seed, s in suite:
            ts = translate_system(s)
            if len(ts.state_vars) != len(s.relations) + sum(r.arity for r in s.relations):
                exact.append(seed)
            if len(ts.disjuncts) != len(s.clauses):
                exact.append(seed)
            size = len(emit_vmt(ts).encode())
            if size > 2 * per_unit * units(s):
                over.append((seed, size, units(s)))
    ok = not exact and not over and t.elapsed < 10.0
    report(4, ok, f"per-unit={per_unit:.1f}B size-mismatch={len(exact)} over-bound={len(over)} {t.elapsed:.2f}s")
    assert exact == []
    assert over == []
    assert t.elapsed < 10.0


def _mutations(ts):
    """Every single frame conjunct, plus the flag conjunct, of every disjunct."""
    for d in ts.disjuncts:
        for i in range(len(conjuncts(d.frame))):
            yield d.source_clause, "frame", i
        guard = conjuncts(d.guard)
        if guard and isinstance(guard[0], StateRef) and guard[0].var.is_flag:
            yield d.source_clause, "guard", 0
        else:
            # facts have no body flag; their only flag conjunct is the head's
            yield d.source_clause, "update", 0


def test_criterion_5_mutation_sensitivity(loop_system, loop_ts):
    missed = []
    total = 0
    with Timer() as t:
        for clause, part, index in _mutations(loop_ts):
            total += 1
            bad = drop_conjunct(loop_ts, clause, part, index)
            if check_equivalence(loop_system, bad, Domain(0, 16), 10).ok:
                missed.append(f"{part}:{clause}:{index}")
    ok = not missed and t.elapsed < 5.0
    report(5, ok, f"mutations={total} missed={missed} {t.elapsed:.2f}s")
    assert missed == []
    assert t.elapsed < 5.0


def test_criterion_6_format_round_trips(loop_ts, suite):
    failures = []
    with Timer() as t:
        systems = [loop_ts, simplify_inline(loop_ts)] + [translate_system(s) for _, s in suite[:25]]
        for ts in systems:
            docs = [emit_vmt] + [lambda x, k=k: emit_bmc(x, k) for k in (0, 1, 3)]
            for emit in docs:
                a, b = emit(ts), emit(ts)
                try:
                    read(a)
                except Exception as exc:
                    failures.append(str(exc))
                if a != b:
                    failures.append("non-deterministic emission")
    ok = not failures and t.elapsed < 1.0
    report(6, ok, f"documents={4 * len(systems)} failures={len(failures)} {t.elapsed:.3f}s")
    assert failures == []
    assert t.elapsed < 1.0
