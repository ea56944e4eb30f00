"""
Formal group logarithms and heights
===================================

beta_m is the coefficient of (X0...XN)^(m-1) in F^(m-1).  The betas give
the logarithm of the formal group; its height is read off [p](tau).
"""

from __future__ import annotations

from cyarith.arrangement import parse_arrangement
from cyarith.formal_group import LogSeries, height, law_from_log
from cyarith.hodge_ledger import fixture_text
from cyarith.multipoly import SparsePoly, parse_poly
from cyarith.ring_tower import OO
from cyarith.stienstra import DoubleCoverInput, HypersurfaceInput, beta, beta_double, log_series, ordinary_test

cubic = HypersurfaceInput(parse_poly("x0^3 + x1^3 + x2^3", 3))
print("betas of the Fermat cubic:", [beta(cubic, m) for m in range(1, 8)])

# p = 2 mod 3: supersingular, height 2.  p = 1 mod 3: ordinary.
print("height at 2:", height(log_series(cubic, 9), 2, 3))
print("ordinary at 7:", bool(ordinary_test(cubic, 7)))

# reference laws
print("multiplicative:", height(LogSeries.multiplicative(10), 3, 2))
print("additive:", height(LogSeries.additive(10), 3, 2))
law = law_from_log(LogSeries.multiplicative(4))
print("law coefficients:", {k: str(v) for k, v in sorted(law.coeffs.items())})

# the octic double solid: product of eight planes over O
arr = parse_arrangement(fixture_text("cvs_octic.txt"), OO)
W = SparsePoly.constant(1, 4, OO)
unit = [tuple(int(i == j) for j in range(4)) for i in range(4)]
for form in arr.forms:
    W = W * SparsePoly(4, OO, dict(zip(unit, form)))
b5 = beta_double(DoubleCoverInput(W), 5)
print("beta_5 of the double octic:", b5)
print("ordinary mod pi:", bool(ordinary_test(DoubleCoverInput(W), 5)))
