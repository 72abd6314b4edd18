"""
Coherency, relevancy and informativity
======================================

Coherency rewards sentences that become true early in an update.  Relevancy
counts premises that hold at the end but do not follow from the theory.
Informativity is their product.
"""

from siminf import casebook
from siminf.metrics import Deduction, coherency, informativity_proposition, measure
from siminf.reference import trace

f = casebook.sentence
street = casebook.street_update()     # D1 -> insert b = e_a
five = casebook.five_step_update()    # b names the street, then a new element

for text in ["E(b)", "C(s)", "E(b) | ~E(b)", "C(s) & ~C(s)"]:
    print(f"H[street]({text}) = {coherency(street, f(text))}")

streets = Deduction((f("forall x. (C(x) -> ~E(x))"), f("C(b)")), f("~E(b)"))
rep = measure(five, streets)
print(f"{streets}: H = {rep.coherency}, R = {rep.relevancy}, I = {rep.informativity}")
print("relevant premises:", ", ".join(map(str, rep.relevant_premises)))

# a tautology in the base language says nothing new; one about b is another matter
for text in ["E(a) -> exists x. E(x)", "(forall x. (C(x) -> ~E(x)) & C(b)) -> ~E(b)"]:
    print(f"I[five]({text}) = {informativity_proposition(five, f(text))}")

# where ~E(b) first becomes true, step by step
for row in trace(five.structures, f("~E(b)")):
    print(f"  D{row.step}: {row.value}  {row.grounded}")
