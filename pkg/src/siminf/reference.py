"""A second, deliberately naive semantics used to cross-check the fast paths.

Sentences are grounded against a structure: every quantifier is unrolled into
a finite conjunction or disjunction over the domain, and constants are
replaced by the elements they denote.  The resulting variable-free formula is
then evaluated bottom-up.  Nothing here shares code with ``model.satisfies``
or the entailment enumerator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from . import syntax as S
from .model import FiniteStructure

__all__ = ["ground", "evaluate", "truth", "naive_structures", "naive_countermodel", "TraceRow", "trace"]


# ground formulas are nested tuples:
#   ("atom", rel, (e1, ..., en)) | ("eq", e1, e2) | ("not", g)
#   ("and", [g...]) | ("or", [g...]) | ("true",) | ("false",)

def _term(t, structure, env):
    if isinstance(t, S.Var):
        return env[t.name]
    return structure.constants[t.name]


def ground(f: S.Formula, structure: FiniteStructure, env: dict | None = None):
    env = env or {}
    if isinstance(f, S.Atom):
        return ("atom", f.rel, tuple(_term(t, structure, env) for t in f.args))
    if isinstance(f, S.Eq):
        return ("eq", _term(f.left, structure, env), _term(f.right, structure, env))
    if isinstance(f, S.Not):
        return ("not", ground(f.body, structure, env))
    if isinstance(f, S.And):
        return ("and", [ground(f.left, structure, env), ground(f.right, structure, env)])
    if isinstance(f, S.Or):
        return ("or", [ground(f.left, structure, env), ground(f.right, structure, env)])
    if isinstance(f, S.Implies):
        return ("or", [("not", ground(f.left, structure, env)), ground(f.right, structure, env)])
    if isinstance(f, S.Iff):
        l, r = ground(f.left, structure, env), ground(f.right, structure, env)
        return ("or", [("and", [l, r]), ("and", [("not", l), ("not", r)])])
    if isinstance(f, (S.Forall, S.Exists)):
        parts = [ground(f.body, structure, {**env, f.var: e}) for e in structure.domain]
        return ("and" if isinstance(f, S.Forall) else "or", parts)
    raise TypeError(f)


def evaluate(g, structure: FiniteStructure) -> bool:
    tag = g[0]
    if tag == "atom":
        return g[2] in structure.relations[g[1]]
    if tag == "eq":
        return g[1] == g[2]
    if tag == "not":
        return not evaluate(g[1], structure)
    if tag == "and":
        result = True
        for part in g[1]:
            result = evaluate(part, structure) and result
        return result
    if tag == "or":
        result = False
        for part in g[1]:
            result = evaluate(part, structure) or result
        return result
    raise ValueError(g)


def truth(structure: FiniteStructure, f: S.Formula) -> bool:
    """Truth of sentence ``f``; sentences using uninterpreted symbols are false."""
    sig = structure.signature
    for sub in S.subformulas(f):
        if isinstance(sub, S.Atom):
            if sig.get(sub.rel) != S.Symbol(sub.rel, len(sub.args)):
                return False
            terms = sub.args
        elif isinstance(sub, S.Eq):
            terms = (sub.left, sub.right)
        else:
            continue
        for t in terms:
            if isinstance(t, S.Const) and sig.get(t.name) != S.Symbol(t.name, 0):
                return False
    return evaluate(ground(f, structure), structure)


def naive_structures(sig: S.Signature, k: int):
    """Every structure over ``sig`` with domain size 1..k, no pruning."""
    consts = [s for s in sig if s.arity == 0]
    rels = [s for s in sig if s.arity > 0]
    for n in range(1, k + 1):
        dom = [f"d{i}" for i in range(n)]
        rel_choices = []
        for r in rels:
            tuples = list(itertools.product(dom, repeat=r.arity))
            rel_choices.append([
                [t for t, bit in zip(tuples, bits) if bit]
                for bits in itertools.product((0, 1), repeat=len(tuples))
            ])
        for cvals in itertools.product(dom, repeat=len(consts)):
            for rvals in itertools.product(*rel_choices):
                yield FiniteStructure(
                    sig, dom,
                    {c.name: v for c, v in zip(consts, cvals)},
                    {r.name: v for r, v in zip(rels, rvals)},
                )


def naive_countermodel(theory: Sequence[S.Formula], f: S.Formula, k: int) -> FiniteStructure | None:
    sig = S.Signature(sym for phi in (*theory, f) for sym in S.symbols_of(phi))
    for structure in naive_structures(sig, k):
        if all(truth(structure, phi) for phi in theory) and not truth(structure, f):
            return structure
    return None


@dataclass(frozen=True)
class TraceRow:
    step: int
    in_language: bool
    value: bool
    grounded: str


def _show(g) -> str:
    tag = g[0]
    if tag == "atom":
        return f"{g[1]}({','.join(g[2])})"
    if tag == "eq":
        return f"{g[1]}={g[2]}"
    if tag == "not":
        return "~" + _show(g[1])
    joiner = " & " if tag == "and" else " | "
    return "(" + joiner.join(_show(p) for p in g[1]) + ")"


def trace(structures: Sequence[FiniteStructure], f: S.Formula) -> list[TraceRow]:
    """Step-by-step truth of ``f`` along a sequence of structures (1-based)."""
    rows = []
    for i, structure in enumerate(structures, start=1):
        in_language = S.symbols_of(f) <= structure.signature
        if in_language:
            g = ground(f, structure)
            rows.append(TraceRow(i, True, evaluate(g, structure), _show(g)))
        else:
            rows.append(TraceRow(i, False, False, "(uninterpreted symbols)"))
    return rows
