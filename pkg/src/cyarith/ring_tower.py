"""Exact coefficient rings: Z, F_p, the quadratic order O = Z[A]/(A^2+A-1)
and truncated dual-number extensions R[eps]/eps^n.

Integers are plain Python ``int``.  The other rings have small immutable
element classes that interoperate with ``int`` through the usual operators.
Each ring is described by a :class:`Ring` object, which is what
:class:`cyarith.multipoly.SparsePoly` carries around to know its zero, its
one and how to coerce literals.

    >>> A = QuadInt(0, 1)
    >>> A * A + A - 1
    QuadInt(0, 0)
    >>> reduce_mod_pi(QuadInt(85, 60))
    FpElem(0, 5)
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

from .errors import PreconditionError, RingMismatchError

__all__ = [
    "Ring",
    "ZZ",
    "OO",
    "GF",
    "DualNumbers",
    "FpElem",
    "QuadInt",
    "DualElem",
    "PI",
    "ring_of",
    "is_prime",
    "reduce_mod_pi",
    "reducer",
    "root_lift",
    "parse_quadint",
]


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# element classes
# ---------------------------------------------------------------------------


class FpElem:
    """Residue class ``value mod p`` for a prime ``p``."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        if not is_prime(p):
            raise PreconditionError(f"F_p needs a prime modulus, got {p}")
        self.value = value % p
        self.p = p

    def _coerce(self, other) -> FpElem | None:
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise RingMismatchError(f"F_{self.p} vs F_{other.p}")
            return other
        if isinstance(other, int):
            return FpElem(other, self.p)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElem(self.value + o.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElem(self.value - o.value, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElem(o.value - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElem(self.value * o.value, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.value, self.p)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FpElem(pow(self.value, k, self.p), self.p)

    def inverse(self) -> FpElem:
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return FpElem(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __eq__(self, other):
        if isinstance(other, FpElem):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return (self.value - other) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FpElem({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class QuadInt:
    """``a + b*A`` in O = Z[A]/(A^2 + A - 1), so ``A*A == 1 - A``."""

    __slots__ = ("a", "b")

    def __init__(self, a: int = 0, b: int = 0):
        self.a = int(a)
        self.b = int(b)

    @staticmethod
    def _coerce(other) -> QuadInt | None:
        if isinstance(other, QuadInt):
            return other
        if isinstance(other, int):
            return QuadInt(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadInt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadInt(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadInt(o.a - self.a, o.b - self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        bd = self.b * o.b
        return QuadInt(self.a * o.a + bd, self.a * o.b + self.b * o.a - bd)

    __rmul__ = __mul__

    def __neg__(self):
        return QuadInt(-self.a, -self.b)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined in O")
        result, base = QuadInt(1, 0), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> QuadInt:
        """Galois conjugate, swapping A with the other root B = -1 - A."""
        return QuadInt(self.a - self.b, -self.b)

    def norm(self) -> int:
        return self.a * self.a - self.a * self.b - self.b * self.b

    def exact_div(self, other) -> QuadInt:
        """Quotient in O; raises ``ArithmeticError`` if it is not integral."""
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in O")
        num = self * o.conjugate()
        if num.a % n or num.b % n:
            raise ArithmeticError(f"{o} does not divide {self} in O")
        return QuadInt(num.a // n, num.b // n)

    def divides(self, other) -> bool:
        try:
            QuadInt._coerce(other).exact_div(self)
        except ArithmeticError:
            return False
        return True

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b)) if self.b else hash(self.a)

    def __bool__(self):
        return bool(self.a or self.b)

    def __repr__(self):
        return f"QuadInt({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        head = {1: "A", -1: "-A"}.get(self.b, f"{self.b}A")
        if self.a == 0:
            return head
        return f"{head}{self.a:+d}"


PI = QuadInt(1, 2)  # 2A + 1, a square root of 5


class DualElem:
    """``c_0 + c_1 eps + ... + c_{n-1} eps^{n-1}`` in R[eps]/eps^n."""

    __slots__ = ("coeffs", "ring")

    def __init__(self, coeffs: Sequence, ring: DualNumbers):
        coeffs = tuple(ring.base(c) for c in coeffs)
        if len(coeffs) > ring.n:
            if any(coeffs[ring.n:]):
                raise PreconditionError(f"eps^{ring.n} = 0 in {ring.tag}")
            coeffs = coeffs[: ring.n]
        coeffs += (ring.base.zero,) * (ring.n - len(coeffs))
        self.coeffs = coeffs
        self.ring = ring

    def _coerce(self, other) -> DualElem | None:
        if isinstance(other, DualElem):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring.tag} vs {other.ring.tag}")
            return other
        try:
            return DualElem([self.ring.base(other)], self.ring)
        except (TypeError, RingMismatchError):
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DualElem([x + y for x, y in zip(self.coeffs, o.coeffs)], self.ring)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DualElem([x - y for x, y in zip(self.coeffs, o.coeffs)], self.ring)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return DualElem([-x for x in self.coeffs], self.ring)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = self.ring.n
        out = [self.ring.base.zero] * n
        for i, x in enumerate(self.coeffs):
            if not x:
                continue
            for j in range(n - i):
                out[i + j] = out[i + j] + x * o.coeffs[j]
        return DualElem(out, self.ring)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = self.ring.one
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except RingMismatchError:
            return False
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.ring.tag))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"DualElem({list(self.coeffs)!r}, {self.ring.tag})"

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            eps = "" if i == 0 else ("eps" if i == 1 else f"eps^{i}")
            cs = str(c)
            if not eps:
                parts.append(cs)
            elif cs == "1":
                parts.append(eps)
            else:
                parts.append(f"({cs})*{eps}")
        return " + ".join(parts) or "0"


# ---------------------------------------------------------------------------
# ring descriptors
# ---------------------------------------------------------------------------


class Ring:
    """Descriptor for a coefficient ring.

    Calling a ring coerces a Python value into it.  Subclasses set ``tag``,
    ``zero``, ``one`` and the structural flags below.
    """

    tag: str
    is_field = False
    is_domain = True
    characteristic = 0

    def __call__(self, x):
        raise NotImplementedError

    def is_finite(self) -> bool:
        return False

    def elements(self) -> Iterator:
        raise TypeError(f"{self.tag} is infinite")

    def exact_div(self, a, b):
        raise NotImplementedError

    def __repr__(self):
        return self.tag

    def __eq__(self, other):
        return isinstance(other, Ring) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)


class IntegerRing(Ring):
    tag = "Z"
    zero = 0
    one = 1

    def __call__(self, x):
        if isinstance(x, bool) or not isinstance(x, int):
            raise RingMismatchError(f"cannot coerce {x!r} into Z")
        return x

    def exact_div(self, a, b):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError(f"{b} does not divide {a}")
        return q


class PrimeField(Ring):
    is_field = True

    def __init__(self, p: int):
        if not is_prime(p):
            raise PreconditionError(f"F_p needs a prime modulus, got {p}")
        self.p = p
        self.characteristic = p
        self.tag = f"Fp({p})"
        self.zero = FpElem(0, p)
        self.one = FpElem(1, p)

    def __call__(self, x):
        if isinstance(x, FpElem):
            if x.p != self.p:
                raise RingMismatchError(f"element of F_{x.p} is not in F_{self.p}")
            return x
        if isinstance(x, int) and not isinstance(x, bool):
            return FpElem(x, self.p)
        raise RingMismatchError(f"cannot coerce {x!r} into {self.tag}")

    def is_finite(self) -> bool:
        return True

    def elements(self) -> Iterator[FpElem]:
        return (FpElem(v, self.p) for v in range(self.p))

    def exact_div(self, a, b):
        return a / b


class QuadraticOrder(Ring):
    tag = "O"
    zero = QuadInt(0, 0)
    one = QuadInt(1, 0)

    def __call__(self, x):
        if isinstance(x, QuadInt):
            return x
        if isinstance(x, int) and not isinstance(x, bool):
            return QuadInt(x, 0)
        raise RingMismatchError(f"cannot coerce {x!r} into O")

    def exact_div(self, a, b):
        return a.exact_div(b)


class DualNumbers(Ring):
    """R[eps]/eps^n over a base ring; only ``1 <= n <= 4`` is supported."""

    is_domain = False

    def __init__(self, base: Ring, n: int):
        if not 1 <= n <= 4:
            raise PreconditionError(f"dual-number truncation must be 1..4, got {n}")
        self.base = base
        self.n = n
        self.characteristic = base.characteristic
        self.is_field = n == 1 and base.is_field
        self.is_domain = n == 1 and base.is_domain
        self.tag = f"dual({base.tag},{n})"

    @property
    def zero(self) -> DualElem:
        return DualElem([], self)

    @property
    def one(self) -> DualElem:
        return DualElem([self.base.one], self)

    @property
    def eps(self) -> DualElem:
        if self.n == 1:
            return self.zero
        return DualElem([self.base.zero, self.base.one], self)

    def __call__(self, x):
        if isinstance(x, DualElem):
            if x.ring != self:
                raise RingMismatchError(f"{x.ring.tag} vs {self.tag}")
            return x
        return DualElem([self.base(x)], self)

    def is_finite(self) -> bool:
        return self.base.is_finite()

    def elements(self) -> Iterator[DualElem]:
        for cs in itertools.product(list(self.base.elements()), repeat=self.n):
            yield DualElem(cs, self)


ZZ = IntegerRing()
OO = QuadraticOrder()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def ring_of(x) -> Ring:
    """The ring a bare element belongs to."""
    if isinstance(x, bool):
        raise RingMismatchError("booleans are not ring elements")
    if isinstance(x, int):
        return ZZ
    if isinstance(x, FpElem):
        return GF(x.p)
    if isinstance(x, QuadInt):
        return OO
    if isinstance(x, DualElem):
        return x.ring
    raise RingMismatchError(f"{x!r} is not an element of a supported ring")


def parse_quadint(text: str) -> QuadInt:
    """Parse ``"a+b*A"``-style text (also ``"60A+85"``, ``"-A"``, ``"7"``)."""
    from .multipoly import parse_poly

    poly = parse_poly(text, 0, OO)
    return poly.coeff(())


# ---------------------------------------------------------------------------
# reduction maps
# ---------------------------------------------------------------------------


def reduce_mod_pi(x: QuadInt | int) -> FpElem:
    """The ring map O -> O/pi = F_5 with A -> 2 (the double root of x^2+x-1)."""
    x = OO(x)
    return FpElem(x.a + 2 * x.b, 5)


def _roots_x2_x_1(p: int) -> list[int]:
    return [r for r in range(p) if (r * r + r - 1) % p == 0]


def reducer(ring: Ring, p: int, root: int | None = None) -> Callable:
    """Return the reduction map ``ring -> F_p``.

    For ``O`` this needs a prime above ``p``, i.e. a root of x^2+x-1 mod p;
    ``root`` selects it (default: the smallest, which is 2 for p = 5).
    Raises ``PreconditionError`` when no such map exists.
    """
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    F = GF(p)
    if ring == ZZ:
        return lambda x: FpElem(x, p)
    if isinstance(ring, PrimeField):
        if ring.p != p:
            raise PreconditionError(f"no reduction map {ring.tag} -> F_{p}")
        return lambda x: x
    if ring == OO:
        roots = _roots_x2_x_1(p)
        if not roots:
            raise PreconditionError(f"{p} is inert in O; no residue map O -> F_{p}")
        if root is None:
            root = roots[0]
        elif root % p not in roots:
            raise PreconditionError(f"{root} is not a root of x^2+x-1 mod {p}")
        return lambda x: FpElem(x.a + root * x.b, p)
    raise PreconditionError(f"no reduction map {ring.tag} -> {F.tag}")


# ---------------------------------------------------------------------------
# lifting roots through dual-number extensions
# ---------------------------------------------------------------------------


def _horner(coeffs: Sequence, x):
    acc = x.ring.zero if isinstance(x, DualElem) else 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def root_lift(
    f: Sequence,
    r: DualElem,
    where: Callable | None = None,
) -> frozenset[DualElem]:
    """All lifts of a root ``r`` of ``f`` from R[eps]/eps^n to R[eps]/eps^(n+1).

    ``f`` is a coefficient sequence over the base ring R, constant term first.
    The result is the set of ``r + c eps^n`` (as elements of the bigger ring)
    with ``f(r + c eps^n) == 0``; ``where`` optionally restricts ``c``.  An
    empty set means the lift is obstructed.

    Over a finite base every ``c`` is tried.  Over an infinite domain the
    condition is linear in ``c`` (since ``(c eps^n)^2 == 0``) and is solved by
    exact division; an unobstructed lift with a free ``c`` is reported as an
    error because the set is infinite.
    """
    R = r.ring.base
    n = r.ring.n
    coeffs = [R(c) for c in f]
    if _horner(coeffs, r):
        raise PreconditionError(f"{r} is not a root of f in {r.ring.tag}")
    big = DualNumbers(R, n + 1)
    r_up = DualElem(r.coeffs, big)

    def lift(c):
        return r_up + DualElem([R.zero] * n + [c], big)

    if R.is_finite():
        found = []
        for c in R.elements():
            if where is not None and not where(c):
                continue
            x = lift(c)
            if not _horner(coeffs, x):
                found.append(x)
        return frozenset(found)

    # f(r_up + c eps^n) = f(r_up) + f'(r_0) c eps^n
    residue = _horner(coeffs, r_up).coeffs[n]
    deriv = [k * coeffs[k] for k in range(1, len(coeffs))]
    slope = _horner(deriv, r.coeffs[0]) if deriv else R.zero
    if not slope:
        if residue:
            return frozenset()
        raise PreconditionError(
            "every c lifts (f'(r) = 0 and no residue); the lift set is infinite"
        )
    try:
        c = R.exact_div(-residue, slope)
    except ArithmeticError:
        return frozenset()
    if where is not None and not where(c):
        return frozenset()
    x = lift(c)
    assert not _horner(coeffs, x)
    return frozenset([x])
