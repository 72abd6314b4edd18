"""Semantic informativity of deductions over finite first-order databases."""

from .syntax import (
    Symbol, Signature, Formula, Atom, Eq, Not, And, Or, Implies, Iff, Forall, Exists,
    Var, Const, FormulaError, ParseError, parse_formula, parse_signature,
    free_variables, is_sentence, symbols_of,
)
from .model import (
    FiniteStructure, Database, satisfies, holds, check_correctness,
    parse_database, load_database, format_database,
)
from .entailment import (
    BudgetExceeded, EntailmentVerdict, find_countermodel, entails_bounded,
    is_tautology_bounded, is_contradiction_bounded, consequence_for_relevancy,
)
from .updates import (
    InsertionSpec, DeletionSpec, Update, UpdateError, StepError, TheoryViolation,
    apply_op, build_update, is_coherent_with, parse_script, format_script,
)
from .metrics import (
    Deduction, coherency, relevancy, relevant_premises, informativity_deduction,
    informativity_proposition, is_new, produced_results, measure,
)
from .planner import (
    PlanBounds, Plan, ImpossibleTarget, plan_coherent_update, changes_required, rank_deductions,
)

__version__ = "0.1.0"
