"""Bounded semantic entailment by exhaustive search over small structures.

``T |= f`` is undecidable in general, so we look for a countermodel (a
structure satisfying every sentence of ``T`` and falsifying ``f``) among all
structures with domain size 1..k over the symbols of ``T`` and ``f``.  A
countermodel refutes entailment outright; failing to find one only shows
entailment up to the bound.

Enumeration order is fixed: domain size ascending, then constants (sorted by
name) in lexicographic order of their values, then relations (those of ``f``
first, each group sorted by name) with extensions ordered by bitmask over the
lexicographically ordered tuples.  The first countermodel in that order is
returned.  Two optimisations never change the answer or the witness:

* constants are pinned to canonical elements (restricted growth strings), and
* search backtracks as soon as a sentence whose symbols are all assigned has
  the wrong truth value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .model import FiniteStructure
from .syntax import (
    And, Atom, Const, Eq, Exists, Forall, Formula, Iff, Implies, Not, Or,
    Signature, symbols_of,
)

__all__ = [
    "DEFAULT_BOUND", "DEFAULT_BUDGET", "BudgetExceeded", "EntailmentVerdict",
    "entails_bounded", "is_tautology_bounded", "is_contradiction_bounded",
    "consequence_for_relevancy", "enumeration_size", "search_signature",
]

DEFAULT_BOUND = 3
DEFAULT_BUDGET = 50_000_000

ENTAILED = "entailed_up_to_bound"
COUNTERMODEL = "countermodel_found"


class BudgetExceeded(RuntimeError):
    def __init__(self, size: int, budget: int, bound: int):
        self.size = size
        self.budget = budget
        self.bound = bound
        super().__init__(
            f"enumerating structures up to size {bound} needs {size} candidates, "
            f"over the budget of {budget}")


@dataclass(frozen=True)
class EntailmentVerdict:
    outcome: str
    bound: int
    witness: FiniteStructure | None = None

    @property
    def entailed(self) -> bool:
        return self.outcome == ENTAILED

    def __bool__(self):
        return self.entailed


def search_signature(theory: Sequence[Formula], f: Formula) -> Signature:
    """Symbols to interpret, in enumeration order."""
    goal = symbols_of(f)
    every = Signature(sym for phi in (*theory, f) for sym in symbols_of(phi))
    consts = sorted(every.constants)
    goal_rels = sorted(goal.relations)
    other_rels = sorted(s for s in every.relations if s not in goal)
    return Signature([*consts, *goal_rels, *other_rels])


def enumeration_size(sig: Signature, k: int) -> int:
    """Number of structures over ``sig`` with domain size 1..k (unpruned)."""
    total = 0
    for n in range(1, k + 1):
        count = n ** len(sig.constants)
        for rel in sig.relations:
            count <<= n ** rel.arity
        total += count
    return total


# --- compiled evaluation ------------------------------------------------------
# Formulas are turned into closures over a shared interpretation dict so the
# inner loop does no isinstance dispatch.

def _compile_term(t, interp) -> Callable:
    if isinstance(t, Const):
        name = t.name
        return lambda env: interp[name]
    name = t.name
    return lambda env: env[name]


def _compile(f: Formula, interp: dict) -> Callable[[dict], bool]:
    if isinstance(f, Atom):
        getters = [_compile_term(t, interp) for t in f.args]
        rel = f.rel
        if len(getters) == 1:
            g0 = getters[0]
            return lambda env: (g0(env),) in interp[rel]
        if len(getters) == 2:
            g0, g1 = getters
            return lambda env: (g0(env), g1(env)) in interp[rel]
        return lambda env: tuple(g(env) for g in getters) in interp[rel]
    if isinstance(f, Eq):
        left = _compile_term(f.left, interp)
        right = _compile_term(f.right, interp)
        return lambda env: left(env) == right(env)
    if isinstance(f, Not):
        body = _compile(f.body, interp)
        return lambda env: not body(env)
    if isinstance(f, And):
        l, r = _compile(f.left, interp), _compile(f.right, interp)
        return lambda env: l(env) and r(env)
    if isinstance(f, Or):
        l, r = _compile(f.left, interp), _compile(f.right, interp)
        return lambda env: l(env) or r(env)
    if isinstance(f, Implies):
        l, r = _compile(f.left, interp), _compile(f.right, interp)
        return lambda env: (not l(env)) or r(env)
    if isinstance(f, Iff):
        l, r = _compile(f.left, interp), _compile(f.right, interp)
        return lambda env: l(env) == r(env)
    if isinstance(f, (Forall, Exists)):
        body = _compile(f.body, interp)
        var = f.var
        want = isinstance(f, Exists)

        def quant(env):
            saved = env.get(var, _MISSING)
            try:
                for e in interp["__domain__"]:
                    env[var] = e
                    if body(env) == want:
                        return want
                return not want
            finally:
                if saved is _MISSING:
                    env.pop(var, None)
                else:
                    env[var] = saved
        return quant
    raise TypeError(f"not a formula: {f!r}")


_MISSING = object()


def _subsets(tuples: list[tuple]) -> list[frozenset]:
    """All subsets of ``tuples`` ordered by bitmask (bit i <-> tuples[i])."""
    out = []
    for mask in range(1 << len(tuples)):
        out.append(frozenset(t for i, t in enumerate(tuples) if mask >> i & 1))
    return out


def _constant_choices(count: int, n: int, prune: bool):
    if not prune:
        yield from itertools.product(range(n), repeat=count)
        return

    def rec(prefix, top):
        if len(prefix) == count:
            yield tuple(prefix)
            return
        for e in range(min(n, top + 2)):
            prefix.append(e)
            yield from rec(prefix, max(top, e))
            prefix.pop()

    yield from rec([], -1)


def find_countermodel(theory: Sequence[Formula], f: Formula, k: int, *,
                      budget: int = DEFAULT_BUDGET, prune: bool = True) -> FiniteStructure | None:
    """First structure (in canonical order) modelling ``theory`` and falsifying ``f``."""
    if k < 1:
        raise ValueError("bound must be at least 1")
    sig = search_signature(theory, f)
    size = enumeration_size(sig, k)
    if size > budget:
        raise BudgetExceeded(size, budget, k)

    consts = [s.name for s in sig.constants]
    rels = list(sig.relations)
    slots = consts + [r.name for r in rels]
    interp: dict = {}

    # (sentence, required truth value) keyed by the last slot it depends on;
    # -1 means no symbols at all, checked once the domain is fixed.
    checks: dict[int, list] = {}
    for phi, want in [*((phi, True) for phi in theory), (f, False)]:
        names = {s.name for s in symbols_of(phi)}
        last = max((slots.index(n) for n in names), default=-1)
        checks.setdefault(last, []).append((_compile(phi, interp), want))

    def ok(slot: int) -> bool:
        for fn, want in checks.get(slot, ()):
            if fn({}) != want:
                return False
        return True

    for n in range(1, k + 1):
        interp.clear()
        interp["__domain__"] = range(n)
        if not ok(-1):
            continue
        extensions = [_subsets(list(itertools.product(range(n), repeat=r.arity))) for r in rels]

        def relations_from(i: int) -> bool:
            if i == len(rels):
                return True
            slot = len(consts) + i
            for ext in extensions[i]:
                interp[rels[i].name] = ext
                if ok(slot) and relations_from(i + 1):
                    return True
            return False

        for choice in _constant_choices(len(consts), n, prune):
            for j, name in enumerate(consts):
                interp[name] = choice[j]
            if not all(ok(j) for j in range(len(consts))):
                continue
            if relations_from(0):
                return _witness(sig, n, interp)
    return None


def _witness(sig: Signature, n: int, interp: dict) -> FiniteStructure:
    ids = [f"e{i}" for i in range(n)]
    return FiniteStructure(
        sig, ids,
        {s.name: ids[interp[s.name]] for s in sig.constants},
        {s.name: [tuple(ids[e] for e in t) for t in interp[s.name]] for s in sig.relations},
    )


def entails_bounded(theory: Iterable[Formula], f: Formula, k: int = DEFAULT_BOUND, *,
                    budget: int = DEFAULT_BUDGET, prune: bool = True) -> EntailmentVerdict:
    """Does every structure of size <= k that models ``theory`` satisfy ``f``?"""
    witness = find_countermodel(tuple(theory), f, k, budget=budget, prune=prune)
    if witness is None:
        return EntailmentVerdict(ENTAILED, k)
    return EntailmentVerdict(COUNTERMODEL, k, witness)


def is_tautology_bounded(f: Formula, k: int = DEFAULT_BOUND, *, budget: int = DEFAULT_BUDGET) -> bool:
    return entails_bounded((), f, k, budget=budget).entailed


def is_contradiction_bounded(f: Formula, k: int = DEFAULT_BOUND, *, budget: int = DEFAULT_BUDGET) -> bool:
    return is_tautology_bounded(Not(f), k, budget=budget)


def consequence_for_relevancy(theory: Iterable[Formula], sig: Signature, f: Formula,
                              k: int = DEFAULT_BOUND, *, budget: int = DEFAULT_BUDGET) -> bool:
    """Bounded ``theory |= f``, but never for sentences outside ``sig``.

    Under plain semantics every theory entails every tautology whatever its
    symbols.  Here a sentence using symbols the database has not interpreted
    is not a consequence, so a tautology about a fresh constant can still
    count as a relevant premise.
    """
    if not symbols_of(f) <= sig:
        return False
    return entails_bounded(theory, f, k, budget=budget).entailed

