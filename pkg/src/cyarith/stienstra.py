"""Logarithm coefficients of the Artin-Mazur formal group.

For a hypersurface ``F = 0`` of degree N+1 in P^N the logarithm has
``beta_m = [ (X_0 ... X_N)^(m-1) ] F^(m-1)``.  For a double cover of P^n
branched along ``W = 0`` (degree 2(n+1)) only the prime coefficient is
supported: ``beta_p = [ (X_0 ... X_n)^(p-1) ] W^((p-1)/2)``.  Both are diagonal
coefficients of a power, extracted with the pruned power routines of
:mod:`cyarith.multipoly`.

Values are returned in the coefficient ring of the input; reduction to F_p
is the separate step :func:`ordinary_test`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError
from .formal_group import LogSeries
from .multipoly import SparsePoly, power_coeff
from .ring_tower import FpElem, is_prime, reducer

__all__ = [
    "HypersurfaceInput",
    "DoubleCoverInput",
    "OrdinaryVerdict",
    "beta",
    "beta_double",
    "ordinary_test",
    "log_series",
    "double_cover_log",
]


@dataclass(frozen=True)
class HypersurfaceInput:
    """Hypersurface ``F = 0`` in P^N with ``deg F = N + 1``."""

    F: SparsePoly

    def __post_init__(self):
        N = self.F.nvars - 1
        if N < 1:
            raise PreconditionError("need at least two homogeneous coordinates")
        d = self.F.homogeneous_degree()
        if d != N + 1:
            raise PreconditionError(
                f"F must be homogeneous of degree {N + 1} in {N + 1} variables (got degree {d})"
            )

    @property
    def N(self) -> int:
        return self.F.nvars - 1


@dataclass(frozen=True)
class DoubleCoverInput:
    """Double cover of P^n branched along ``W = 0`` with ``deg W = 2(n + 1)``."""

    W: SparsePoly

    def __post_init__(self):
        n = self.W.nvars - 1
        d = self.W.homogeneous_degree()
        if n < 1 or d != 2 * (n + 1):
            raise PreconditionError(
                f"W must be homogeneous of degree {2 * (n + 1)} in {n + 1} variables (got degree {d})"
            )

    @property
    def n(self) -> int:
        return self.W.nvars - 1


def beta(h: HypersurfaceInput, m: int):
    """``beta_m``: coefficient of ``(X_0 ... X_N)^(m-1)`` in ``F^(m-1)``."""
    if m < 1:
        raise PreconditionError("m must be positive")
    k = m - 1
    return power_coeff(h.F, k, (k,) * h.F.nvars)


def beta_double(d: DoubleCoverInput, p: int):
    """``beta_p`` of a double cover: ``[(X_0...X_n)^(p-1)] W^((p-1)/2)``."""
    if p == 2 or not is_prime(p):
        raise PreconditionError(f"beta_double needs an odd prime, got {p}")
    return power_coeff(d.W, (p - 1) // 2, (p - 1,) * d.W.nvars)


@dataclass(frozen=True)
class OrdinaryVerdict:
    ordinary: bool
    witness: FpElem  # beta_p reduced mod (a prime above) p
    value: object  # beta_p in the input ring, before reduction

    def __bool__(self):
        return self.ordinary


def ordinary_test(inp: HypersurfaceInput | DoubleCoverInput, p: int, root: int | None = None) -> OrdinaryVerdict:
    """Frobenius on the tangent space is multiplication by ``beta_p mod p``.

    ``root`` picks the prime above ``p`` when the coefficients live in O.
    """
    if isinstance(inp, DoubleCoverInput):
        value = beta_double(inp, p)
        ring = inp.W.ring
    else:
        if not is_prime(p):
            raise PreconditionError(f"{p} is not prime")
        value = beta(inp, p)
        ring = inp.F.ring
    witness = reducer(ring, p, root)(value)
    return OrdinaryVerdict(bool(witness), witness, value)


def log_series(h: HypersurfaceInput, T: int) -> LogSeries:
    """The logarithm through ``beta_1 .. beta_T`` (coefficients over Z)."""
    if h.F.ring.characteristic:
        raise PreconditionError("logarithms need characteristic-zero coefficients")
    return LogSeries([beta(h, m) for m in range(1, T + 1)])


def double_cover_log(d: DoubleCoverInput, p: int) -> LogSeries:
    """Partial logarithm of a double cover: ``beta_1 = 1`` and ``beta_p`` only.

    Coefficients at composite indices are left unknown (``None``); no general
    formula for them is assumed.
    """
    betas: list = [None] * p
    betas[0] = 1
    betas[p - 1] = beta_double(d, p)
    return LogSeries(betas)
