"""The order-p group scheme ``V(x^p = S x)`` inside the matrices ``(1 0; x 1+tx)``.

Everything lives in ``F_p[S, t, x1, x2, x3]`` modulo ``S t`` and
``x_i^p - S x_i``.  Those relations are a monomial and binomials with
disjoint leading terms, so rewriting ``x_i^p -> S x_i`` and then killing any
monomial divisible by ``S t`` gives a normal form; an identity holds in the
quotient exactly when the difference normalizes to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CrossCheckError, PreconditionError
from .multipoly import SparsePoly
from .ring_tower import GF, is_prime

__all__ = ["TOContext", "TOReport", "verify_axioms"]

S, T, X1, X2, X3 = range(5)
NAMES = ("S", "t", "x1", "x2", "x3")


class TOContext:
    def __init__(self, p: int):
        if not is_prime(p):
            raise PreconditionError(f"{p} is not prime")
        self.p = p
        self.ring = GF(p)

    def var(self, i: int) -> SparsePoly:
        return SparsePoly.variable(i, 5, self.ring)

    def const(self, c) -> SparsePoly:
        return SparsePoly.constant(c, 5, self.ring)

    def reduce(self, f: SparsePoly) -> SparsePoly:
        """Normal form modulo ``(S t, x_i^p - S x_i)``."""
        p = self.p
        out: dict[tuple[int, ...], object] = {}
        for e, c in f.terms():
            e = list(e)
            for i in (X1, X2, X3):
                if e[i] >= p:
                    # x^k = x^(k-(p-1)) * x^(p-1) ... applied until k < p
                    steps = (e[i] - 1) // (p - 1)
                    e[i] -= steps * (p - 1)
                    e[S] += steps
            if e[S] and e[T]:
                continue
            key = tuple(e)
            out[key] = out.get(key, self.ring.zero) + c
        return SparsePoly(5, self.ring, out)

    def law(self, a: SparsePoly, b: SparsePoly) -> SparsePoly:
        """``a + b + t a b``: lower-left entry of the matrix product."""
        return self.reduce(a + b + self.var(T) * a * b)

    def inverse(self, a: SparsePoly) -> SparsePoly:
        """``-a / (1 + t a)`` as the truncated series ``-a sum_{k<p} (-t a)^k``."""
        u = -(self.var(T) * a)
        total = self.const(0)
        term = self.const(1)
        for _ in range(self.p):
            total = total + term
            term = self.reduce(term * u)
        return self.reduce(-(a * total))

    def power(self, a: SparsePoly, k: int) -> SparsePoly:
        out = self.const(1)
        for _ in range(k):
            out = self.reduce(out * a)
        return out

    def on_scheme(self, a: SparsePoly) -> SparsePoly:
        """Residue of the defining equation ``a^p - S a``."""
        return self.reduce(self.power(a, self.p) - self.var(S) * a)


@dataclass
class TOReport:
    p: int
    residues: dict[str, SparsePoly] = field(default_factory=dict)
    notes: dict[str, str] = field(default_factory=dict)

    @property
    def results(self) -> dict[str, bool]:
        return {k: not r for k, r in self.residues.items()}

    @property
    def passed(self) -> bool:
        return all(self.results.values())

    def lines(self) -> list[str]:
        out = []
        for name, r in self.residues.items():
            status = "pass" if not r else "FAIL residue " + r.format(NAMES)
            note = f" ({self.notes[name]})" if name in self.notes else ""
            out.append(f"{name}: {status}{note}")
        return out


def _matrix_mul(A, B):
    return [[A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2)] for i in range(2)]


def verify_axioms(p: int, strict: bool = True) -> TOReport:
    """Check the group axioms, closure and the three specializations symbolically.

    Each check records a residue that must normalize to zero.  With
    ``strict`` a non-zero residue raises :class:`CrossCheckError`.
    """
    ctx = TOContext(p)
    t, s = ctx.var(T), ctx.var(S)
    x1, x2, x3 = ctx.var(X1), ctx.var(X2), ctx.var(X3)
    one, zero = ctx.const(1), ctx.const(0)
    rep = TOReport(p)
    R = rep.residues

    def mat(x):
        return [[one, zero], [x, one + t * x]]

    prod = _matrix_mul(mat(x1), mat(x2))
    target = mat(ctx.law(x1, x2))
    R["matrix_form"] = sum(
        (ctx.reduce(prod[i][j] - target[i][j]) for i in range(2) for j in range(2)), zero
    )
    R["associativity"] = ctx.reduce(ctx.law(ctx.law(x1, x2), x3) - ctx.law(x1, ctx.law(x2, x3)))
    R["commutativity"] = ctx.reduce(ctx.law(x1, x2) - ctx.law(x2, x1))
    R["identity"] = ctx.reduce(ctx.law(x1, zero) - x1) + ctx.reduce(ctx.law(zero, x1) - x1)
    y = ctx.inverse(x1)
    R["inverse"] = ctx.law(x1, y)
    R["inverse_on_scheme"] = ctx.on_scheme(y)
    rep.notes["inverse"] = "y = " + y.format(NAMES)
    R["closure"] = ctx.on_scheme(ctx.law(x1, x2))

    # t invertible: lambda = 1 + t x is multiplicative and lambda^p = 1.
    lam = lambda x: one + t * x  # noqa: E731
    R["mu_p_homomorphism"] = ctx.reduce(lam(x1) * lam(x2) - lam(ctx.law(x1, x2)))
    R["mu_p_order"] = ctx.reduce(ctx.power(lam(x1), p) - one)

    # S = 1, t = 0: x^p = x, additive law, the p roots in F_p form Z/p.
    fp = ctx.ring
    roots = [a for a in range(p) if fp(a) ** p == fp(a)]
    closed = len(roots) == p and all((a + b) % p in roots for a in roots for b in roots)
    etale_law = ctx.law(x1, x2).substitute({S: 1, T: 0})
    R["z_mod_p"] = ctx.reduce(etale_law - x1 - x2) + (zero if closed else one)
    rep.notes["z_mod_p"] = f"{len(roots)} points of x^p = x over F_{p}"

    # S = t = 0: additive law on x^p = 0.
    alpha_law = ctx.law(x1, x2).substitute({S: 0, T: 0})
    alpha_closure = ctx.on_scheme(x1 + x2).substitute({S: 0, T: 0})
    R["alpha_p"] = ctx.reduce(alpha_law - x1 - x2) + alpha_closure

    if strict and not rep.passed:
        bad = [k for k, ok in rep.results.items() if not ok]
        raise CrossCheckError(f"Tate-Oort axioms fail for p={p}: {', '.join(bad)}")
    return rep
