"""One-dimensional formal groups given by their logarithm.

A logarithm ``l(tau) = sum_m beta_m tau^m / m`` is stored through its
``beta`` list.  From it we build the law ``F(x, y) = l^-1(l(x) + l(y))`` over
the rationals, the multiplication-by-p series, the height, and the Frobenius
operator on logarithms, ``l(F tau) = sum_n beta_{np} tau^n / n``.

Truncation convention: a series "truncated at T" keeps every coefficient of
total degree ``<= T``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import CrossCheckError, PreconditionError
from .ring_tower import FpElem, is_prime

__all__ = [
    "LogSeries",
    "FGL",
    "HeightResult",
    "series_mul",
    "series_inverse",
    "series_compose",
    "series_reversion",
    "law_from_log",
    "log_from_law",
    "p_series",
    "p_series_from_log",
    "height",
    "frob_on_log",
]


# -- univariate truncated series: lists indexed by degree -------------------------


def series_mul(a: Sequence, b: Sequence, T: int) -> list:
    out = [0] * (T + 1)
    for i, x in enumerate(a[: T + 1]):
        if not x:
            continue
        for j, y in enumerate(b[: T + 1 - i]):
            if y:
                out[i + j] += x * y
    return out


def series_inverse(a: Sequence, T: int) -> list:
    """Multiplicative inverse of a series with invertible constant term."""
    if not a or not a[0]:
        raise ZeroDivisionError("series has no constant term")
    inv0 = Fraction(1) / a[0] if not isinstance(a[0], FpElem) else a[0].inverse()
    out = [inv0] + [0] * T
    for n in range(1, T + 1):
        s = 0
        for k in range(1, min(n, len(a) - 1) + 1):
            if a[k]:
                s += a[k] * out[n - k]
        out[n] = -s * inv0
    return out


def series_compose(f: Sequence, g: Sequence, T: int) -> list:
    """``f(g(tau))`` for ``g`` without constant term."""
    if g and g[0]:
        raise ValueError("inner series must have zero constant term")
    out = [0] * (T + 1)
    for c in reversed(list(f[: T + 1])):
        out = series_mul(out, g, T)
        out[0] += c
    return out


def series_reversion(l: Sequence, T: int) -> list:
    """Compositional inverse of ``l = tau + O(tau^2)`` by Lagrange inversion.

    ``[tau^n] l^-1 = (1/n) [tau^(n-1)] (tau / l(tau))^n``.
    """
    if len(l) < 2 or l[0] or l[1] != 1:
        raise PreconditionError("reversion needs l = tau + O(tau^2)")
    shifted = [l[k + 1] if k + 1 < len(l) else 0 for k in range(T + 1)]
    h = series_inverse(shifted, T)
    out = [Fraction(0)] * (T + 1)
    power = [Fraction(1)] + [Fraction(0)] * T
    for n in range(1, T + 1):
        power = series_mul(power, h, T)
        out[n] = Fraction(power[n - 1]) / n
    return out


# -- bivariate truncated series: dict (i, j) -> coefficient ----------------------------


def _bi_mul(a: dict, b: dict, T: int) -> dict:
    out: dict = {}
    for (i, j), x in a.items():
        for (k, l), y in b.items():
            if i + j + k + l <= T:
                key = (i + k, j + l)
                out[key] = out.get(key, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _bi_compose(f: Sequence, u: dict, T: int) -> dict:
    """``f(u(x, y))`` for univariate ``f`` and ``u`` without constant term."""
    out: dict = {}
    for c in reversed(list(f[: T + 1])):
        out = _bi_mul(out, u, T)
        if c:
            out[(0, 0)] = out.get((0, 0), 0) + c
    return {k: v for k, v in out.items() if v}


# -- logarithms --------------------------------------------------------------------------


@dataclass(frozen=True)
class LogSeries:
    """Logarithm ``sum_{m <= T} beta_m tau^m / m`` through ``beta_1 .. beta_T``.

    Entries may be ``None`` where a coefficient is not known; operations that
    need a missing coefficient raise ``PreconditionError``.
    """

    betas: tuple

    def __init__(self, betas: Sequence):
        object.__setattr__(self, "betas", tuple(betas))

    @property
    def T(self) -> int:
        return len(self.betas)

    def beta(self, m: int):
        if not 1 <= m <= self.T:
            raise PreconditionError(f"beta_{m} is beyond truncation {self.T}")
        b = self.betas[m - 1]
        if b is None:
            raise PreconditionError(f"beta_{m} is not known for this logarithm")
        return b

    def coefficients(self, T: int | None = None) -> list[Fraction]:
        """``[0, beta_1/1, beta_2/2, ...]`` as rationals, truncated at ``T``."""
        T = self.T if T is None else T
        if T > self.T:
            raise PreconditionError(f"need {T} coefficients, have {self.T}")
        return [Fraction(0)] + [Fraction(self.beta(m)) / m for m in range(1, T + 1)]

    @classmethod
    def multiplicative(cls, T: int) -> LogSeries:
        return cls([1] * T)

    @classmethod
    def additive(cls, T: int) -> LogSeries:
        return cls([1] + [0] * (T - 1))

    def __str__(self):
        return " + ".join(
            f"({b})*t^{m}/{m}" if b is not None else f"?*t^{m}/{m}"
            for m, b in enumerate(self.betas, start=1)
            if b is None or b
        ) or "0"


@dataclass(frozen=True)
class FGL:
    """Bivariate law ``F(x, y) = sum a_ij x^i y^j`` truncated at total degree T."""

    T: int
    coeffs: dict

    def __call__(self, x: Sequence, y: Sequence) -> list:
        """Evaluate ``F(x(tau), y(tau))`` on univariate series."""
        T = self.T
        xp = [[1] + [0] * T]
        yp = [[1] + [0] * T]
        top_i = max((i for i, _ in self.coeffs), default=0)
        top_j = max((j for _, j in self.coeffs), default=0)
        for _ in range(top_i):
            xp.append(series_mul(xp[-1], x, T))
        for _ in range(top_j):
            yp.append(series_mul(yp[-1], y, T))
        out = [0] * (T + 1)
        for (i, j), c in self.coeffs.items():
            term = series_mul(xp[i], yp[j], T)
            for k, v in enumerate(term):
                if v:
                    out[k] += c * v
        return out

    def reduce(self, p: int) -> FGL:
        return FGL(self.T, {k: v for k, v in ((k, _to_fp(v, p)) for k, v in self.coeffs.items()) if v})

    def check_axioms(self) -> dict[str, bool]:
        """Unit, commutativity and associativity up to total degree T."""
        T = self.T
        edge = {(i, j): c for (i, j), c in self.coeffs.items() if i == 0 or j == 0}
        unit = edge == {(1, 0): 1, (0, 1): 1}
        comm = all(self.coeffs.get((j, i), 0) == c for (i, j), c in self.coeffs.items())
        # associativity in three variables: F(F(x, y), z) == F(x, F(y, z))
        xy = {(i, j, 0): c for (i, j), c in self.coeffs.items()}
        yz = {(0, i, j): c for (i, j), c in self.coeffs.items()}
        z = {(0, 0, 1): 1}
        x = {(1, 0, 0): 1}
        left = _tri_law(self.coeffs, xy, z, T)
        right = _tri_law(self.coeffs, x, yz, T)
        return {"unit": unit, "commutative": comm, "associative": left == right}


def _tri_mul(a: dict, b: dict, T: int) -> dict:
    out: dict = {}
    for (i, j, k), x in a.items():
        for (l, m, n), y in b.items():
            if i + j + k + l + m + n <= T:
                key = (i + l, j + m, k + n)
                out[key] = out.get(key, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _tri_law(law: dict, u: dict, v: dict, T: int) -> dict:
    upow = [{(0, 0, 0): 1}]
    vpow = [{(0, 0, 0): 1}]
    top = max((max(i, j) for i, j in law), default=0)
    for _ in range(top):
        upow.append(_tri_mul(upow[-1], u, T))
        vpow.append(_tri_mul(vpow[-1], v, T))
    out: dict = {}
    for (i, j), c in law.items():
        for key, val in _tri_mul(upow[i], vpow[j], T).items():
            out[key] = out.get(key, 0) + c * val
    return {k: v for k, v in out.items() if v}


def _to_fp(x, p: int) -> FpElem:
    if isinstance(x, FpElem):
        return x
    x = Fraction(x)
    if x.denominator % p == 0:
        raise PreconditionError(f"coefficient {x} is not {p}-integral")
    return FpElem(x.numerator * pow(x.denominator, -1, p), p)


def law_from_log(l: LogSeries, T: int | None = None, integral_over: str | int | None = None) -> FGL:
    """``F(x, y) = l^-1(l(x) + l(y))`` over the rationals, truncated at ``T``.

    ``integral_over`` may be ``"Z"`` or a prime ``p`` (meaning Z localized at
    p); if given, a coefficient outside that ring raises ``PreconditionError``.
    """
    T = l.T if T is None else T
    if l.beta(1) != 1:
        raise PreconditionError("logarithm must be normalized with beta_1 = 1")
    lc = l.coefficients(T)
    inv = series_reversion(lc, T)
    u: dict = {}
    for m in range(1, T + 1):
        if lc[m]:
            u[(m, 0)] = lc[m]
            u[(0, m)] = lc[m]
    coeffs = _bi_compose(inv, u, T)
    if integral_over is not None:
        for key, c in coeffs.items():
            c = Fraction(c)
            bad = c.denominator != 1 if integral_over == "Z" else c.denominator % int(integral_over) == 0
            if bad:
                raise PreconditionError(
                    f"coefficient {c} of x^{key[0]} y^{key[1]} is not integral over {integral_over}"
                )
    return FGL(T, coeffs)


def log_from_law(g: FGL) -> LogSeries:
    """Recover the normalized logarithm from the invariant differential.

    ``l'(x) = 1 / (dF/dy)(x, 0)``, hence ``beta_m = [x^(m-1)] l'(x)``.
    """
    T = g.T
    d = [0] * T
    for (i, j), c in g.coeffs.items():
        if j == 1 and i < T:
            d[i] += c
    omega = series_inverse([Fraction(v) if not isinstance(v, FpElem) else v for v in d], T - 1)
    return LogSeries(omega[:T])


# -- multiplication by p and heights ------------------------------------------------------------


def p_series(g: FGL, p: int) -> list[FpElem]:
    """``[p](tau) = F(tau, F(tau, ... ))`` (p-fold), reduced mod p."""
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if g.T < p:
        raise PreconditionError(f"truncation {g.T} is too short to contain tau^{p}")
    tau = [0, 1] + [0] * (g.T - 1)
    s = list(tau)
    for _ in range(p - 1):
        s = g(tau, s)
    return [_to_fp(c, p) for c in s]


def p_series_from_log(l: LogSeries, p: int, T: int | None = None) -> list[FpElem]:
    """``[p](tau) = l^-1(p l(tau))`` reduced mod p (same series, cheaper route)."""
    T = l.T if T is None else T
    lc = l.coefficients(T)
    inv = series_reversion(lc, T)
    s = series_compose(inv, [p * c for c in lc], T)
    return [_to_fp(c, p) for c in s]


@dataclass(frozen=True)
class HeightResult:
    """Exact height ``value`` or, when ``value is None``, at least ``h_max + 1``."""

    value: int | None
    h_max: int
    p: int

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def __str__(self):
        if self.value is None:
            return f">= {self.h_max + 1} (inf candidate)"
        return str(self.value)


def height(l: LogSeries, p: int, h_max: int) -> HeightResult:
    """Smallest ``h <= h_max`` with ``[tau^(p^h)] [p](tau) != 0 mod p``.

    A truncated series can never certify infinite height, so the negative
    answer is reported as ``>= h_max + 1``.
    """
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    need = p**h_max + 1
    if l.T < need:
        raise PreconditionError(f"height up to {h_max} at p={p} needs T >= {need}, have {l.T}")
    s = p_series_from_log(l, p, need)
    first = next((k for k, c in enumerate(s) if c), None)
    if first is not None:
        h, q = 0, 1
        while q < first:
            q *= p
            h += 1
        if q != first:
            raise CrossCheckError(
                f"[{p}](tau) starts at tau^{first}, not a power of {p}: not a formal group mod {p}"
            )
        if h <= h_max:
            return HeightResult(h, h_max, p)
    return HeightResult(None, h_max, p)


def frob_on_log(l: LogSeries, p: int) -> LogSeries:
    """The logarithm of ``F tau``: ``sum_{n <= T/p} beta_{np} tau^n / n``.

    Its linear coefficient is ``beta_p``: Frobenius acts on the tangent space
    as multiplication by ``beta_p``.
    """
    if l.T < p:
        raise PreconditionError(f"truncation {l.T} < p = {p}")
    return LogSeries([l.betas[n * p - 1] for n in range(1, l.T // p + 1)])
