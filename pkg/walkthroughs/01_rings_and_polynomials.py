"""
Exact rings and sparse polynomials
==================================

The quadratic order O = Z[A]/(A^2+A-1), reduction modulo pi = 2A+1,
and polynomial literals over each ring.
"""

from __future__ import annotations

from cyarith.multipoly import parse_poly, power_coeff
from cyarith.ring_tower import GF, OO, PI, DualElem, DualNumbers, QuadInt, reduce_mod_pi, root_lift

# A satisfies A^2 + A - 1 = 0, and pi^2 = 5
A = QuadInt(0, 1)
print("A^2 =", A * A)
print("pi^2 =", PI * PI)

# O/pi is F_5 with A -> 2
x = QuadInt(85, 60)
print(x, "mod pi ->", reduce_mod_pi(x))

# polynomials over O accept A, B and implicit multiplication
f = parse_poly("(x - t)(x + A z)", 4, OO, names=("x", "y", "z", "t"))
print("f =", f.format(("x", "y", "z", "t")))

# coefficient of a single monomial in a large power, without expanding it
g = parse_poly("x0 + x1 + x2", 3)
print("[x0^3 x1^3 x2^3] (x0+x1+x2)^9 =", power_coeff(g, 9, (3, 3, 3)))

# a root of x^2 + x - 1 in F_5[eps]/eps^2 that does not lift one step further
R = DualNumbers(GF(5), 2)
r = DualElem([2, 1], R)
print("lifts of 2 + eps:", set(root_lift([-1, 1, 1], r)) or "none (obstructed)")

# over O[eps]/eps^2 the root A has only the trivial lift, eps-coefficient 0
lifts = root_lift([-1, 1, 1], DualElem([A], DualNumbers(OO, 1)))
print("lifts of A:", [str(v) for v in lifts])
