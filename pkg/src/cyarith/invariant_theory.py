"""Diagonal cyclic actions on projective space.

A :class:`DiagonalAction` of ``mu_d`` sends ``X_i -> zeta^(w_i) X_i``.  A
monomial ``X^e`` is invariant iff ``sum e_i w_i = 0 (mod d)``.  Everything in
this module is exact integer combinatorics; the Molien series is computed
twice (lattice counting and cyclotomic averaging) and the two must agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Sequence

from .errors import CrossCheckError, PreconditionError, RuleRefused
from .multipoly import SparsePoly, _order_key

__all__ = [
    "DiagonalAction",
    "molien",
    "molien_by_counting",
    "molien_by_cyclotomic",
    "cyclotomic_poly",
    "invariant_monomials",
    "factorize",
    "generated_check",
    "fixed_points",
    "FreenessResult",
    "freeness_check",
    "format_monomial",
]


@dataclass(frozen=True)
class DiagonalAction:
    d: int
    weights: tuple[int, ...]

    def __init__(self, d: int, weights: Sequence[int]):
        if d < 1:
            raise PreconditionError(f"group order must be >= 1, got {d}")
        if len(weights) == 0:
            raise PreconditionError("need at least one weight")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "weights", tuple(w % d for w in weights))

    @property
    def nvars(self) -> int:
        return len(self.weights)

    def weight(self, e: Sequence[int]) -> int:
        return sum(k * w for k, w in zip(e, self.weights)) % self.d

    def is_invariant(self, e: Sequence[int]) -> bool:
        return self.weight(e) == 0


def molien_by_counting(a: DiagonalAction, n_max: int) -> list[int]:
    """Count invariant monomials degree by degree.

    ``table[n][r]`` is the number of degree-n monomials of weight r in the
    variables seen so far; adding a variable is a prefix-sum along n.
    """
    d = a.d
    table = [[0] * d for _ in range(n_max + 1)]
    table[0][0] = 1
    for w in a.weights:
        for n in range(1, n_max + 1):
            prev = table[n - 1]
            row = table[n]
            for r in range(d):
                row[(r + w) % d] += prev[r]
    return [row[0] for row in table]


@lru_cache(maxsize=None)
def cyclotomic_poly(d: int) -> tuple[int, ...]:
    """Coefficients of the d-th cyclotomic polynomial, constant term first."""
    num = [-1] + [0] * (d - 1) + [1]  # x^d - 1
    for k in range(1, d):
        if d % k == 0:
            num = _exact_divide(num, list(cyclotomic_poly(k)))
    return tuple(num)


def _exact_divide(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        q[i] = c
        for j, b in enumerate(den):
            num[i + j] -= c * b
    if any(num):
        raise CrossCheckError("cyclotomic division left a remainder")
    return q


class _Cyclotomic:
    """Z[zeta_d] as integer vectors of length phi(d) (reduced mod Phi_d)."""

    def __init__(self, d: int):
        self.d = d
        self.phi = cyclotomic_poly(d)
        self.deg = len(self.phi) - 1

    def power(self, k: int) -> list[int]:
        v = [0] * self.deg
        v[0] = 1
        for _ in range(k % self.d):
            v = self.times_zeta(v)
        return v

    def times_zeta(self, v: list[int]) -> list[int]:
        top = v[-1]
        out = [0] + v[:-1]
        if top:
            for i in range(self.deg):
                out[i] -= top * self.phi[i]
        return out

    def mul(self, u: list[int], v: list[int]) -> list[int]:
        prod = [0] * (2 * self.deg - 1)
        for i, x in enumerate(u):
            if x:
                for j, y in enumerate(v):
                    prod[i + j] += x * y
        for k in range(len(prod) - 1, self.deg - 1, -1):
            c = prod[k]
            if c:
                for i in range(self.deg + 1):
                    prod[k - self.deg + i] -= c * self.phi[i]
        return prod[: self.deg]


def molien_by_cyclotomic(a: DiagonalAction, n_max: int) -> list[int]:
    """``(1/d) sum_j prod_i (1 - zeta^(j w_i) x)^(-1)`` expanded over Z[zeta_d].

    Each factor is inverted by the recurrence ``S[n] = S_prev[n] + a S[n-1]``.
    The sum over j must land in Z (only the constant basis coordinate
    survives) and be divisible by d.
    """
    Z = _Cyclotomic(a.d)
    zero = [0] * Z.deg
    total = [list(zero) for _ in range(n_max + 1)]
    for j in range(a.d):
        series = [list(zero) for _ in range(n_max + 1)]
        series[0][0] = 1
        for w in a.weights:
            root = Z.power(j * w)
            for n in range(1, n_max + 1):
                carry = Z.mul(root, series[n - 1])
                series[n] = [s + c for s, c in zip(series[n], carry)]
        for n in range(n_max + 1):
            total[n] = [t + s for t, s in zip(total[n], series[n])]
    out = []
    for n, v in enumerate(total):
        if any(v[1:]):
            raise CrossCheckError(f"cyclotomic Molien sum not rational in degree {n}: {v}")
        if v[0] % a.d:
            raise CrossCheckError(f"cyclotomic Molien sum {v[0]} not divisible by {a.d} in degree {n}")
        out.append(v[0] // a.d)
    return out


def molien(a: DiagonalAction, n_max: int) -> list[int]:
    """Dimensions ``c_0 .. c_{n_max}`` of the invariant ring, cross-checked."""
    if n_max < 0:
        raise PreconditionError("n_max must be non-negative")
    counted = molien_by_counting(a, n_max)
    averaged = molien_by_cyclotomic(a, n_max)
    if counted != averaged:
        raise CrossCheckError(f"Molien mismatch: counting {counted} vs cyclotomic {averaged}")
    return counted


def _monomials(nvars: int, degree: int):
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        yield tuple(e)


def invariant_monomials(a: DiagonalAction, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of the invariant monomials of ``degree``, graded-lex."""
    if degree < 0:
        raise PreconditionError("degree must be non-negative")
    found = [e for e in _monomials(a.nvars, degree) if a.is_invariant(e)]
    return sorted(found, key=_order_key)


def factorize(a: DiagonalAction, e: Sequence[int], gen_degree_max: int) -> list[tuple[int, ...]] | None:
    """Split ``X^e`` into invariant monomials of degree <= ``gen_degree_max``.

    Returns the factors, or None if no such factorization exists.
    """
    e = tuple(e)
    if not a.is_invariant(e):
        return None
    # Every invariant divisor has an invariant cofactor, so it is enough to
    # peel off one small invariant divisor and recurse on the rest.
    small = [g for n in range(1, gen_degree_max + 1) for g in invariant_monomials(a, n)]

    @lru_cache(maxsize=None)
    def split(rest: tuple[int, ...]):
        if sum(rest) == 0:
            return ()
        if sum(rest) <= gen_degree_max:
            return (rest,)
        for g in small:
            if all(x <= y for x, y in zip(g, rest)):
                tail = split(tuple(y - x for x, y in zip(g, rest)))
                if tail is not None:
                    return (g,) + tail
        return None

    out = split(e)
    return None if out is None else list(out)


def generated_check(a: DiagonalAction, degree: int, gen_degree_max: int) -> list[tuple[int, ...]]:
    """Invariant monomials of ``degree`` that are not products of lower-degree invariants."""
    if not degree > gen_degree_max >= 1:
        raise PreconditionError(f"need degree > gen_degree_max >= 1, got {degree}, {gen_degree_max}")
    return [e for e in invariant_monomials(a, degree) if factorize(a, e, gen_degree_max) is None]


def fixed_points(a: DiagonalAction) -> list[tuple[int, ...]]:
    """Fixed locus as coordinate subspaces, one per weight class.

    Each entry lists the coordinate indices spanning the subspace; a
    singleton is an isolated coordinate point.
    """
    classes: dict[int, list[int]] = {}
    for i, w in enumerate(a.weights):
        classes.setdefault(w, []).append(i)
    return sorted(tuple(v) for v in classes.values())


@dataclass(frozen=True)
class FreenessResult:
    free: bool
    violations: tuple[int, ...]  # indices i with f(e_i) = 0

    def __bool__(self):
        return self.free


def freeness_check(f: SparsePoly, a: DiagonalAction) -> FreenessResult:
    """Does ``f = 0`` avoid every fixed point of the action?

    ``f`` must be invariant (every monomial of weight 0) and the fixed locus
    must consist of isolated points; otherwise a point evaluation would not
    decide freeness and the check refuses.
    """
    if f.nvars != a.nvars:
        raise PreconditionError(f"polynomial has {f.nvars} variables, action has {a.nvars}")
    bad = [e for e, _ in f.terms() if not a.is_invariant(e)]
    if bad:
        raise PreconditionError(f"f is not invariant: monomial {format_monomial(bad[0])} has weight {a.weight(bad[0])}")
    components = fixed_points(a)
    if any(len(c) > 1 for c in components):
        raise RuleRefused("fixed locus is not a finite set of points; freeness by evaluation is unsupported")
    deg = f.total_degree()
    violations = []
    for (i,) in components:
        point = [0] * a.nvars
        point[i] = 1
        value = f.evaluate(point)
        if not value:
            violations.append(i)
        pure = tuple(deg if j == i else 0 for j in range(a.nvars))
        if bool(value) != bool(f.coeff(pure)):
            raise CrossCheckError(f"evaluation at e_{i} disagrees with the pure-power coefficient")
    return FreenessResult(not violations, tuple(violations))


def format_monomial(e: Sequence[int], names: Sequence[str] | None = None, start: int = 0) -> str:
    """``(0, 2, 0, 1)`` -> ``"X1^2*X3"``; ``start`` shifts the default names."""
    if names is None:
        names = [f"X{i + start}" for i in range(len(e))]
    parts = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k]
    return "*".join(parts) or "1"
