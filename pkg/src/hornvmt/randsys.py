"""Seeded random linear Horn systems, rendered as SMT-LIB HORN scripts.

The shapes are kept small enough for exhaustive finite-domain checking: at
most four relations (plus the query), arity at most two, at most six clauses,
integer coefficients in [-3, 3].
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .horn import HornSystem, load_system

@dataclass(frozen=True)
class GenParams:
    max_relations: int = 4
    max_arity: int = 2
    max_clauses: int = 6
    coeff_lo: int = -3
    coeff_hi: int = 3
    const_lo: int = -4
    const_hi: int = 4
    bool_place_prob: float = 0.1
    query_prob: float = 0.15
    extra_var_prob: float = 0.3
    loop_prob: float = 0.5


def _lit(v: int) -> str:
    return str(v) if v >= 0 else f"(- {-v})"


class _Gen:
    def __init__(self, rng: random.Random, p: GenParams):
        self.rng = rng
        self.p = p

    def coeff(self) -> int:
        return self.rng.choice([c for c in range(self.p.coeff_lo, self.p.coeff_hi + 1) if c != 0])

    def const(self) -> int:
        return self.rng.randint(self.p.const_lo, self.p.const_hi)

    def affine(self, ints: Sequence[str], allow_const: bool = True) -> str:
        """c*v + k over one variable, occasionally two, or a constant."""
        r = self.rng
        if not ints or (allow_const and r.random() < 0.15):
            return _lit(self.const())
        terms = []
        for v in r.sample(list(ints), k=1 if len(ints) == 1 or r.random() < 0.8 else 2):
            c = self.coeff() if r.random() < 0.2 else 1
            terms.append(v if c == 1 else f"(* {_lit(c)} {v})")
        k = self.const() if r.random() < 0.6 else 0
        if k:
            terms.append(_lit(k))
        return terms[0] if len(terms) == 1 else f"(+ {' '.join(terms)})"

    def comparison(self, ints: Sequence[str]) -> str:
        op = self.rng.choice(["<", "<=", ">", ">=", "=", "distinct"])
        return f"({op} {self.affine(ints, allow_const=False)} {_lit(self.const())})"

    def bool_expr(self, ints: Sequence[str], bools: Sequence[str]) -> str:
        r = self.rng
        roll = r.random()
        if bools and roll < 0.4:
            b = r.choice(list(bools))
            return b if r.random() < 0.5 else f"(not {b})"
        if ints:
            return self.comparison(ints)
        return r.choice(["true", "false"])


def random_script(seed: int, params: GenParams = GenParams()) -> str:
    rng = random.Random(seed)
    g = _Gen(rng, params)
    n_rel = rng.randint(1, params.max_relations)
    rels: List[Tuple[str, Tuple[str, ...]]] = []
    for i in range(n_rel):
        arity = rng.choice([0] + [a for a in range(1, params.max_arity + 1) for _ in range(2)])
        sorts = tuple("Bool" if rng.random() < params.bool_place_prob else "Int" for _ in range(arity))
        rels.append((f"R{i}", sorts))

    lines = ["(set-logic HORN)"]
    for name, sorts in rels:
        lines.append(f"(declare-fun {name} ({' '.join(sorts)}) Bool)")

    n_clauses = rng.randint(max(1, params.max_clauses // 2), params.max_clauses)
    produced: List[Tuple[str, Tuple[str, ...]]] = []
    for j in range(n_clauses):
        fact = j == 0 or rng.random() < 0.2
        qvars: List[Tuple[str, str]] = []
        body_parts: List[str] = []
        body_vars: List[Tuple[str, str]] = []
        if not fact:
            # mostly read relations some earlier clause can produce
            pool = produced if produced and rng.random() < 0.85 else rels
            bname, bsorts = rng.choice(pool)
            args = []
            for i, s in enumerate(bsorts):
                same = [v for v, vs in qvars if vs == s]
                if same and rng.random() < 0.1:
                    args.append(rng.choice(same))
                    body_vars.append((args[-1], s))
                    continue
                v = f"x{i}"
                body_vars.append((v, s))
                qvars.append((v, s))
                if s == "Int" and rng.random() < 0.1:
                    args.append(f"(+ {v} {_lit(g.const())})")
                else:
                    args.append(v)
            body_parts.append(f"({bname} {' '.join(args)})" if args else bname)
        ints = [v for v, s in qvars if s == "Int"]
        bools = [v for v, s in qvars if s == "Bool"]

        if rng.random() < params.extra_var_prob or (fact and rng.random() < 0.5):
            qvars.append(("z", "Int"))
            if ints and rng.random() < 0.6:
                body_parts.append(f"(= z {g.affine(ints)})")
            else:
                lo = g.const()
                body_parts.append(f"(<= {_lit(lo)} z {_lit(lo + rng.randint(0, 5))})")
            ints = ints + ["z"]
        n_extra = rng.choice([0, 0, 0, 1]) if fact else rng.choice([0, 0, 1, 1, 2])
        for _ in range(n_extra if ints or bools else 0):
            body_parts.append(g.bool_expr(ints, bools))

        if j > 0 and rng.random() < params.query_prob:
            head = "false"
        elif not fact and bsorts and rng.random() < params.loop_prob:
            # self-loop stepping each Int place by a small offset
            hargs = []
            for v, s in body_vars:
                if s == "Int":
                    k = rng.choice([-3, -2, -1, 1, 2, 3])
                    hargs.append(f"(+ {v} {_lit(k)})")
                    if rng.random() < 0.5:
                        bound = rng.randint(0, 6) * (1 if k > 0 else -1)
                        body_parts.append(f"({'<' if k > 0 else '>'} {v} {_lit(bound)})")
                else:
                    hargs.append(rng.choice([v, f"(not {v})"]))
            head = f"({bname} {' '.join(hargs)})"
        else:
            hname, hsorts = rng.choice(rels)
            if (hname, hsorts) not in produced:
                produced.append((hname, hsorts))
            hargs = [g.affine(ints) if s == "Int" else g.bool_expr(ints, bools) for s in hsorts]
            head = f"({hname} {' '.join(hargs)})" if hargs else hname

        if not body_parts:
            body = "true"
        elif len(body_parts) == 1:
            body = body_parts[0]
        else:
            body = f"(and {' '.join(body_parts)})"
        formula = f"(=> {body} {head})"
        if qvars:
            binders = " ".join(f"({v} {s})" for v, s in qvars)
            formula = f"(forall ({binders}) {formula})"
        lines.append(f"(assert {formula})")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def random_system(seed: int, params: GenParams = GenParams()) -> HornSystem:
    return load_system(random_script(seed, params))


def random_suite(count: int, seed: int = 0, params: GenParams = GenParams()) -> List[Tuple[int, str]]:
    """``count`` (seed, script) pairs; the per-system seeds derive from ``seed``."""
    rng = random.Random(seed)
    return [(s, random_script(s, params)) for s in (rng.randrange(2**31) for _ in range(count))]


def seeds_for(count: int, seed: int = 0) -> List[int]:
    rng = random.Random(seed)
    return [rng.randrange(2**31) for _ in range(count)]

