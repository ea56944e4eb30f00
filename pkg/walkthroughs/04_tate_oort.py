"""
The order-p group scheme x^p = S x
==================================

The law a + b + t a b comes from multiplying matrices (1 0; x 1+tx).
Every axiom is checked as a polynomial identity modulo S t and x^p - S x.
"""

from __future__ import annotations

from cyarith.tate_oort import verify_axioms

for p in (2, 3, 5, 7):
    rep = verify_axioms(p)
    print(f"p = {p}:", "all pass" if rep.passed else "FAIL")

# the full report for p = 5, including the inverse series
print("\n".join(verify_axioms(5).lines()))
