"""Coherency, relevancy and semantic informativity of deductions.

All values are exact :class:`fractions.Fraction` objects in [0, 1].

Coherency of ``f`` with an update D1..Dn is 0 unless the last structure
satisfies ``f``; otherwise, with ``m`` the first (1-based) step at which
``f`` holds, it is ``m / (1 + 2 + ... + m) = 2 / (m + 1)``.  A sentence that
uses symbols a step does not interpret is false at that step.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .entailment import DEFAULT_BOUND, DEFAULT_BUDGET, consequence_for_relevancy
from .model import Database, holds
from .syntax import Formula, Implies, conjoin, symbols_of
from .updates import Update

__all__ = [
    "Deduction", "MetricReport", "first_true_index", "coherency",
    "relevant_premises", "relevancy", "informativity_deduction",
    "informativity_proposition", "is_new", "produced_results", "measure",
    "fraction_json",
]

ZERO = Fraction(0)


@dataclass(frozen=True)
class Deduction:
    """Premises ``Γ`` and conclusion ``φ``, written ``Γ{φ}``.

    Premises form a set; duplicates are dropped, first occurrence wins.
    """

    premises: tuple
    conclusion: Formula

    def __post_init__(self):
        seen = []
        for p in self.premises:
            if p not in seen:
                seen.append(p)
        object.__setattr__(self, "premises", tuple(seen))

    @classmethod
    def of(cls, conclusion: Formula, *premises: Formula) -> "Deduction":
        return cls(premises, conclusion)

    def conditional(self) -> Formula:
        """``(p1 & ... & pn) -> φ``, or just ``φ`` without premises."""
        antecedent = conjoin(self.premises)
        return self.conclusion if antecedent is None else Implies(antecedent, self.conclusion)

    def __str__(self):
        if not self.premises:
            return f"|- {self.conclusion}"
        return "; ".join(map(str, self.premises)) + " |- " + str(self.conclusion)


def first_true_index(u: Update, f: Formula) -> int | None:
    for i, s in enumerate(u.structures, start=1):
        if holds(s, f):
            return i
    return None


def coherency(u: Update, f: Formula) -> Fraction:
    if not holds(u.final.structure, f):
        return ZERO
    m = first_true_index(u, f)
    return Fraction(m, m * (m + 1) // 2)


def relevant_premises(u: Update, d: Deduction, k: int = DEFAULT_BOUND, *,
                      budget: int = DEFAULT_BUDGET) -> tuple | None:
    """Premises true at the end of ``u`` that the theory does not entail.

    ``None`` when ``u`` is incoherent with the conclusion, where the set is
    undefined.  Consequence is judged over the base database's signature.
    """
    final = u.final.structure
    if not holds(final, d.conclusion):
        return None
    base_sig = u.base.signature
    return tuple(
        p for p in d.premises
        if holds(final, p) and not consequence_for_relevancy(u.theory, base_sig, p, k, budget=budget)
    )


def relevancy(u: Update, d: Deduction, k: int = DEFAULT_BOUND, *, budget: int = DEFAULT_BUDGET) -> Fraction:
    if not d.premises:
        return ZERO
    relevant = relevant_premises(u, d, k, budget=budget)
    if relevant is None:
        return ZERO
    return Fraction(len(relevant), len(d.premises))


def informativity_deduction(u: Update, d: Deduction, k: int = DEFAULT_BOUND, *,
                            budget: int = DEFAULT_BUDGET) -> Fraction:
    h = coherency(u, d.conclusion)
    if not h:
        return ZERO
    return relevancy(u, d, k, budget=budget) * h


def informativity_proposition(u: Update, f: Formula, k: int = DEFAULT_BOUND, *,
                              budget: int = DEFAULT_BUDGET) -> Fraction:
    return informativity_deduction(u, Deduction((f,), f), k, budget=budget)


def is_new(db: Database, f: Formula, k: int = DEFAULT_BOUND, *, budget: int = DEFAULT_BUDGET) -> bool:
    """Not false in the structure, and not a consequence of the theory.

    A sentence outside the database's language is never false in it.
    """
    in_language = symbols_of(f) <= db.signature
    if in_language and not holds(db.structure, f):
        return False
    return not consequence_for_relevancy(db.theory, db.signature, f, k, budget=budget)


def produced_results(u: Update, d: Deduction, k: int = DEFAULT_BOUND, *,
                     budget: int = DEFAULT_BUDGET) -> tuple:
    relevant = relevant_premises(u, d, k, budget=budget)
    if not relevant:
        raise ValueError("results are only defined for deductions with non-null relevancy")
    if is_new(u.base, d.conclusion, k, budget=budget) and d.conclusion not in relevant:
        return (*relevant, d.conclusion)
    return relevant


@dataclass(frozen=True)
class MetricReport:
    coherent: bool
    m_index: int | None
    coherency: Fraction
    relevancy: Fraction
    informativity: Fraction
    relevant_premises: tuple | None
    bound: int


def measure(u: Update, d: Deduction, k: int = DEFAULT_BOUND, *, budget: int = DEFAULT_BUDGET) -> MetricReport:
    """H, R and I of ``d`` along ``u`` in one pass."""
    h = coherency(u, d.conclusion)
    relevant = relevant_premises(u, d, k, budget=budget)
    if relevant is None or not d.premises:
        r = ZERO
    else:
        r = Fraction(len(relevant), len(d.premises))
    return MetricReport(
        coherent=bool(h),
        m_index=first_true_index(u, d.conclusion) if h else None,
        coherency=h,
        relevancy=r,
        informativity=r * h,
        relevant_premises=relevant,
        bound=k,
    )


def fraction_json(value: Fraction) -> dict:
    return {"num": value.numerator, "den": value.denominator, "decimal": round(float(value), 6)}

