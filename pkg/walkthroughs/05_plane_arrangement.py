"""
Eight planes over O
===================

Multiple lines and points of the branch arrangement of the double octic,
and whether its combinatorics survive reduction modulo pi.
"""

from __future__ import annotations

from cyarith.arrangement import admissible_double_octic, incidence, parse_arrangement, reduction_compare, verify_points
from cyarith.hodge_ledger import fixture_text
from cyarith.ring_tower import OO, QuadInt

arr = parse_arrangement(fixture_text("cvs_octic.txt"), OO)
for k in range(len(arr)):
    print(f"plane {k}:", arr.form_str(k))

rep = incidence(arr)
print(rep.counts())
for pt in rep.points_of(4):
    print("fourfold", tuple(str(c) for c in pt.coords), "on", sorted(pt.planes))
print("admissible:", admissible_double_octic(rep))

# (1, 1, (A-2)/A, 1) is fourfold; with the fraction inverted it is not
A = QuadInt(0, 1)
print("multiplicities:", verify_points(arr, [(A, A, A - 2, A), (A - 2, A - 2, A, A - 2)]))

print("same incidence mod pi:", bool(reduction_compare(arr, 5)))
