"""
Planning the fewest changes
===========================

Fewer steps means higher coherency, so a breadth-first search over single
operations finds the most coherent update for a target sentence.  Ranking
deductions then compares their informativity on those updates.
"""

from siminf import casebook
from siminf.metrics import Deduction
from siminf.planner import ImpossibleTarget, PlanBounds, plan_coherent_update, rank_deductions
from siminf.updates import format_script

f = casebook.sentence
d1 = casebook.city_database()
bounds = PlanBounds(max_steps=2, max_fresh=1)

for text in ["C(s)", "E(b)", "exists x. (C(x) & E(x))", "forall x. E(x)", "C(s) & ~C(s)"]:
    try:
        plan = plan_coherent_update(d1, f(text), bounds)
    except ImpossibleTarget as e:
        print(f"{text}: impossible ({e})")
        continue
    if plan is None:
        print(f"{text}: nothing within {bounds.max_steps} steps")
    else:
        script = format_script(plan.ops).strip().replace("\n", "; ") or "(no change)"
        print(f"{text}: {plan.steps_used} step(s), H = {plan.coherency}  {script}")

candidates = [
    Deduction((f("E(a)"),), f("exists x. E(x)")),
    Deduction((f("forall x. (C(x) -> ~E(x))"), f("C(b)")), f("~E(b)")),
    Deduction((), f("E(a) -> exists x. E(x)")),
]
for pos, entry in enumerate(rank_deductions(d1, candidates, bounds), start=1):
    print(f"{pos}. I = {entry.informativity}, steps = {entry.steps}, results = {entry.results}: {entry.deduction}")
