"""Independent reference implementations used by the tests."""

from __future__ import annotations

import random
from itertools import product

from cyarith.multipoly import SparsePoly
from cyarith.ring_tower import GF


def dense_mul(f: dict, g: dict, add, mul, zero) -> dict:
    """Schoolbook product of {exponent tuple: coeff} dicts."""
    out: dict = {}
    for (ea, ca), (eb, cb) in product(f.items(), g.items()):
        e = tuple(x + y for x, y in zip(ea, eb))
        out[e] = add(out.get(e, zero), mul(ca, cb))
    return {e: c for e, c in out.items() if c}


def dense_pow(f: dict, m: int, nvars: int, one, zero) -> dict:
    out = {(0,) * nvars: one}
    for _ in range(m):
        out = dense_mul(out, f, lambda a, b: a + b, lambda a, b: a * b, zero)
    return out


def count_projective_points(F: SparsePoly, p: int) -> int:
    """Points of a plane curve over F_p, one normalized representative each."""
    k = GF(p)
    reps = [(1, y, z) for y in range(p) for z in range(p)] + [(0, 1, z) for z in range(p)] + [(0, 0, 1)]
    return sum(1 for pt in reps if not F.evaluate([k(c) for c in pt]))


def random_cubic(rng: random.Random, p: int) -> SparsePoly:
    terms = {}
    for e in product(range(4), repeat=3):
        if sum(e) == 3:
            terms[e] = rng.randrange(p)
    return SparsePoly(3, GF(p), terms)


def is_smooth_plane_curve(F: SparsePoly, p: int) -> bool:
    """Smooth over the algebraic closure: the singular ideal is irrelevant."""
    import sympy

    x, y, z = sympy.symbols("x y z")
    gens = (x, y, z)

    def to_sympy(g: SparsePoly):
        return sum(int(c) * x ** e[0] * y ** e[1] * z ** e[2] for e, c in g.terms()) if g else sympy.Integer(0)

    eqs = [to_sympy(F)] + [to_sympy(F.partial(i)) for i in range(3)]
    eqs = [q for q in eqs if q != 0]
    if not eqs:
        return False
    G = sympy.groebner(eqs, *gens, modulus=p, order="grevlex")
    leads = [sympy.Poly(g, *gens).monoms(order="grevlex")[0] for g in G.exprs]
    # V(I) is empty in P^2 iff every variable has a pure power among the leading monomials.
    return all(any(m[i] > 0 and sum(m) == m[i] for m in leads) for i in range(3))
