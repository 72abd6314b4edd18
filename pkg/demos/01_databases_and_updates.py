"""
Databases and structural updates
================================

A database is a finite structure plus a theory that is true in it.  Updates
change one symbol at a time, and every step must keep the theory true.
"""

from siminf import casebook
from siminf.model import check_correctness, format_database
from siminf.updates import StepError, build_update, parse_script

# two cities and a street; every city has a street, everything is a city or a street
d1 = casebook.city_database()
print(format_database(d1))
print("correct:", check_correctness(d1)[0])

# name the street "b" and then add a second street
u = build_update(d1, parse_script("insert b = e_a\ninsert E (e_b*)\n"))
for i, d in enumerate(u.databases, start=1):
    print(f"D{i}: domain {' '.join(d.domain)}")

# pointing b at a brand new element would leave it neither a city nor a street
try:
    build_update(d1, parse_script("insert b = e_b*\n"))
except StepError as e:
    print("rejected:", e)

# the theory also says C(s), so s cannot be moved onto the street
try:
    build_update(d1, parse_script("delete s -> e_a\n"))
except StepError as e:
    print("rejected:", e)

# structural rules still apply without the theory check: e_s cannot go while H mentions it
unchecked = build_update(d1, parse_script("delete s -> e_a\n"), check_theory=False)
try:
    build_update(unchecked.final, parse_script("delete C (e_s) drop e_s\n"), check_theory=False)
except StepError as e:
    print("rejected:", e)
