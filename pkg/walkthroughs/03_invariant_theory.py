"""
Invariants of a diagonal mu_5 action
====================================

mu_5 acts on P^3 by weights (1, 2, 3, 4) and on P^4 by (0, 1, 2, 3, 4).
"""

from __future__ import annotations

from cyarith.invariant_theory import (
    DiagonalAction,
    fixed_points,
    format_monomial,
    freeness_check,
    generated_check,
    invariant_monomials,
    molien,
)
from cyarith.multipoly import parse_poly

a = DiagonalAction(5, (1, 2, 3, 4))
names = ["X1", "X2", "X3", "X4"]

# counted two independent ways; a disagreement would raise
print("Molien series:", molien(a, 10))

for n in (2, 3, 4):
    print(f"degree {n}:", ", ".join(format_monomial(e, names) for e in invariant_monomials(a, n)))

# every invariant of degree 6..12 is a product of invariants of degree <= 5
print("missing in 6..12:", sum(len(generated_check(a, n, 5)) for n in range(6, 13)))
print("degree 5 from degree <= 4 misses:", [format_monomial(e, names) for e in generated_check(a, 5, 4)])

# quintic threefolds: 26 invariant quintic monomials, five isolated fixed points
q = DiagonalAction(5, (0, 1, 2, 3, 4))
print("invariant quintics:", molien(q, 5)[5])
print("fixed points:", fixed_points(q))
print("Fermat quintic free:", bool(freeness_check(parse_poly("x0^5+x1^5+x2^5+x3^5+x4^5", 5), q)))
print("x0^5 + x0 x1^3 x2 misses:", freeness_check(parse_poly("x0^5+x0*x1^3*x2", 5), q).violations)
