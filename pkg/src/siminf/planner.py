"""Breadth-first search for short updates that make a sentence true.

Every structural operation costs one step, and coherency ``2/(m+1)`` only
falls as ``m`` grows, so the fewest-step update is also the most coherent.
Fresh elements are the only source of unbounded branching; ``max_fresh``
caps how many a plan may introduce in total.

Candidate operations from a database are generated in a fixed order:
insertions before deletions, symbols in signature order (symbols the target
needs but the database lacks come last), payload tuples in lexicographic
order of element position (existing elements in domain order, then fresh
ones).  BFS keeps the first path found to each state, so the returned plan is
the first minimal one in that order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .entailment import DEFAULT_BOUND, DEFAULT_BUDGET, is_contradiction_bounded
from .metrics import Deduction, coherency, informativity_deduction, produced_results, relevancy
from .model import Database, holds
from .syntax import Formula, Signature, free_variables, symbols_of
from .updates import DeletionSpec, InsertionSpec, Update, UpdateError, apply_op

__all__ = [
    "PlanBounds", "Plan", "ImpossibleTarget", "plan_coherent_update",
    "changes_required", "candidate_ops", "RankEntry", "Ranking", "rank_deductions",
]


class ImpossibleTarget(ValueError):
    """The target has no model up to the entailment bound, so no update reaches it."""


@dataclass(frozen=True)
class PlanBounds:
    max_steps: int = 3
    max_fresh: int = 2
    max_branch: int = 100_000
    k: int = DEFAULT_BOUND
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.max_steps < 0:
            raise ValueError("max_steps must be non-negative")
        if self.max_fresh < 0:
            raise ValueError("max_fresh must be non-negative")
        if self.max_branch < 1 or self.k < 1:
            raise ValueError("max_branch and k must be positive")


@dataclass(frozen=True)
class Plan:
    update: Update
    coherency: Fraction
    steps_used: int

    @property
    def ops(self) -> tuple:
        return self.update.ops


def _fresh_names(domain: Sequence[str], count: int) -> list[str]:
    names = []
    i = 1
    taken = set(domain)
    while len(names) < count:
        name = f"n{i}"
        if name not in taken:
            names.append(name)
        i += 1
    return names


def _tuples(existing: Sequence[str], fresh: Sequence[str], arity: int, quotient: bool) -> Iterator[tuple]:
    pool = list(existing) + list(fresh)
    fresh_set = set(fresh)
    for t in itertools.product(pool, repeat=arity):
        if quotient:
            # fresh ids must appear in order of first use: n1 before n2, ...
            used = []
            for e in t:
                if e in fresh_set and e not in used:
                    used.append(e)
            if used != list(fresh[:len(used)]):
                continue
        yield t


def candidate_ops(db: Database, extra: Signature, fresh_left: int,
                  quotient: bool = True) -> Iterator[tuple]:
    """Yield ``(op, fresh_count)`` for every structurally plausible step from ``db``.

    ``extra`` holds symbols that insertions may introduce.  Operations are not
    validated against the theory here.
    """
    s = db.structure
    domain = s.domain
    fresh = _fresh_names(domain, fresh_left)
    sig = s.signature | extra
    for sym in sig:
        if sym.arity == 0:
            current = s.constants.get(sym.name)
            pool = list(domain) + fresh[:1] if quotient else list(domain) + fresh
            for e in pool:
                if e == current:
                    continue
                is_new = e in fresh
                yield InsertionSpec(sym, (e,), {e} if is_new else ()), int(is_new)
        else:
            ext = s.relations.get(sym.name, frozenset())
            for t in _tuples(domain, fresh, sym.arity, quotient):
                if t in ext:
                    continue
                new = {e for e in t if e in fresh}
                yield InsertionSpec(sym, t, new), len(new)
    order = {e: i for i, e in enumerate(domain)}
    for sym in s.signature:
        if sym.arity == 0:
            current = s.constants[sym.name]
            for e in domain:
                if e == current:
                    continue
                yield DeletionSpec(sym, (e,)), 0
                yield DeletionSpec(sym, (e,), {current}), 0
        else:
            for t in sorted(s.relations[sym.name], key=lambda t: [order[e] for e in t]):
                parts = sorted(set(t), key=order.__getitem__)
                for size in range(len(parts) + 1):
                    for drop in itertools.combinations(parts, size):
                        yield DeletionSpec(sym, t, drop), 0


def plan_coherent_update(d: Database, f: Formula, bounds: PlanBounds = PlanBounds(), *,
                         quotient: bool = True) -> Plan | None:
    """Fewest-step update of ``d`` whose last database satisfies ``f``.

    Returns ``None`` when no such update exists within ``bounds``.  Raises
    :class:`ImpossibleTarget` when ``f`` has no model of size up to
    ``bounds.k`` at all.
    """
    if free_variables(f):
        raise ValueError(f"target {f} has free variables")
    if is_contradiction_bounded(f, bounds.k, budget=bounds.budget):
        raise ImpossibleTarget(f"{f} has no model with at most {bounds.k} elements")
    start = Update((d,))
    if holds(d.structure, f):
        return Plan(start, Fraction(1), 0)
    extra = Signature(sym for sym in symbols_of(f) if sym.name not in d.signature)
    frontier = [(start, 0)]
    seen = {(d.structure.key(), 0)}
    for _ in range(bounds.max_steps):
        next_frontier = []
        for upd, used in frontier:
            tail = upd.final
            candidates = candidate_ops(tail, extra, bounds.max_fresh - used, quotient)
            for op, n_fresh in itertools.islice(candidates, bounds.max_branch):
                try:
                    db = apply_op(tail, op)
                except UpdateError:
                    continue
                key = (db.structure.key(), used + n_fresh)
                if key in seen:
                    continue
                seen.add(key)
                grown = Update((*upd.databases, db), (*upd.ops, op))
                if holds(db.structure, f):
                    h = coherency(grown, f)
                    # minimal plans first satisfy the target at their last step
                    assert h == Fraction(2, len(grown) + 1), (h, len(grown))
                    return Plan(grown, h, len(grown) - 1)
                next_frontier.append((grown, used + n_fresh))
        frontier = next_frontier
        if not frontier:
            break
    return None


def changes_required(d: Database, f: Formula, bounds: PlanBounds = PlanBounds()) -> int | None:
    plan = plan_coherent_update(d, f, bounds)
    return None if plan is None else plan.steps_used


@dataclass(frozen=True)
class RankEntry:
    deduction: Deduction
    plan: Plan | None
    informativity: Fraction = Fraction(0)
    relevancy: Fraction = Fraction(0)
    results: int = 0
    flags: tuple = ()
    error: str | None = None

    @property
    def steps(self) -> int | None:
        return None if self.plan is None else self.plan.steps_used


@dataclass(frozen=True)
class Ranking:
    entries: tuple = ()
    skipped: tuple = field(default=())

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def rank_deductions(d: Database, candidates: Sequence[Deduction], bounds: PlanBounds = PlanBounds()) -> Ranking:
    """Order deductions by informativity on their own best update.

    Ties go to fewer steps, then more produced results, then the text of the
    deduction.
    """
    ranked = []
    skipped = []
    for ded in candidates:
        try:
            plan = plan_coherent_update(d, ded.conclusion, bounds)
        except (ImpossibleTarget, ValueError) as e:
            skipped.append(RankEntry(ded, None, error=str(e)))
            continue
        if plan is None:
            skipped.append(RankEntry(ded, None, error="no coherent update within bounds"))
            continue
        r = relevancy(plan.update, ded, bounds.k, budget=bounds.budget)
        i = informativity_deduction(plan.update, ded, bounds.k, budget=bounds.budget)
        results = len(produced_results(plan.update, ded, bounds.k, budget=bounds.budget)) if r else 0
        flags = ("uninformative",) if not i else ()
        ranked.append(RankEntry(ded, plan, i, r, results, flags))
    ranked.sort(key=lambda e: (-e.informativity, e.steps, -e.results, str(e.deduction)))
    return Ranking(tuple(ranked), tuple(skipped))
