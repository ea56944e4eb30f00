"""Sparse multivariate polynomials over the rings of :mod:`cyarith.ring_tower`.

A polynomial is a map from exponent vectors to nonzero coefficients.
Internally an exponent vector is packed into one Python int, 17 bits per
variable: 16 value bits plus a guard bit.  Monomial multiplication is then a
single integer addition, overflow shows up as a set guard bit, and the
componentwise test ``u <= cap`` is one subtraction and one mask (a borrow
out of any field clears that field's guard bit).

    >>> f = parse_poly("x0 + x1", 2, ZZ)
    >>> print(f * parse_poly("x0 - x1", 2, ZZ))
    x0^2 - x1^2
    >>> pow_bounded(f, 2, (1, 1)).coeff((1, 1))
    2
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import PolyParseError, PreconditionError, RingMismatchError
from .ring_tower import OO, ZZ, DualNumbers, QuadInt, Ring, ring_of

__all__ = [
    "SparsePoly",
    "mul",
    "pow_bounded",
    "power_coeff",
    "coeff",
    "partial",
    "evaluate",
    "parse_poly",
    "MAX_EXPONENT",
]

_BITS = 17
_VALUE_MASK = (1 << (_BITS - 1)) - 1
MAX_EXPONENT = _VALUE_MASK


def _guard_mask(n: int) -> int:
    g = 1 << (_BITS - 1)
    return sum(g << (_BITS * i) for i in range(n))


def _pack(e: Sequence[int]) -> int:
    u = 0
    for i, k in enumerate(e):
        if k < 0 or k > MAX_EXPONENT:
            raise PreconditionError(f"exponent {k} outside 0..{MAX_EXPONENT}")
        u |= k << (_BITS * i)
    return u


def _unpack(u: int, n: int) -> tuple[int, ...]:
    return tuple((u >> (_BITS * i)) & _VALUE_MASK for i in range(n))


def _order_key(e: tuple[int, ...]):
    # graded lex: total degree ascending, then x0-heavy monomials first
    return (sum(e), tuple(-k for k in e))


class SparsePoly:
    """Polynomial in ``nvars`` variables with coefficients in ``ring``.

    Instances are treated as immutable.  ``terms`` maps exponent tuples to
    coefficients; zero coefficients are dropped.
    """

    __slots__ = ("nvars", "ring", "_terms", "_gm")

    def __init__(self, nvars: int, ring: Ring, terms: Mapping | None = None):
        self.nvars = nvars
        self.ring = ring
        self._gm = _guard_mask(nvars)
        packed = {}
        for e, c in (terms or {}).items():
            if len(e) != nvars:
                raise RingMismatchError(f"exponent {e} has wrong length for {nvars} variables")
            c = ring(c)
            if c:
                u = _pack(e)
                packed[u] = packed[u] + c if u in packed else c
        self._terms = {u: c for u, c in packed.items() if c}

    @classmethod
    def _raw(cls, nvars: int, ring: Ring, packed: dict) -> SparsePoly:
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.ring = ring
        obj._gm = _guard_mask(nvars)
        obj._terms = packed
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, ring: Ring = ZZ) -> SparsePoly:
        return cls._raw(nvars, ring, {})

    @classmethod
    def constant(cls, c, nvars: int, ring: Ring = ZZ) -> SparsePoly:
        c = ring(c)
        return cls._raw(nvars, ring, {0: c} if c else {})

    @classmethod
    def variable(cls, i: int, nvars: int, ring: Ring = ZZ) -> SparsePoly:
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        return cls._raw(nvars, ring, {1 << (_BITS * i): ring.one})

    @classmethod
    def monomial(cls, e: Sequence[int], c=1, ring: Ring = ZZ) -> SparsePoly:
        return cls(len(e), ring, {tuple(e): c})

    # -- inspection ---------------------------------------------------------

    def terms(self) -> list[tuple[tuple[int, ...], object]]:
        """(exponent, coefficient) pairs in canonical graded-lex order."""
        items = [(_unpack(u, self.nvars), c) for u, c in self._terms.items()]
        items.sort(key=lambda t: _order_key(t[0]))
        return items

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], object]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coeff(self, e: Sequence[int]):
        if len(e) != self.nvars:
            raise RingMismatchError(f"exponent {tuple(e)} has wrong length")
        try:
            u = _pack(e)
        except PreconditionError:
            return self.ring.zero
        return self._terms.get(u, self.ring.zero)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(_unpack(u, self.nvars)) for u in self._terms)

    def max_degrees(self) -> tuple[int, ...]:
        """Largest exponent of each variable (0 for the zero polynomial)."""
        out = [0] * self.nvars
        for u in self._terms:
            for i, k in enumerate(_unpack(u, self.nvars)):
                out[i] = max(out[i], k)
        return tuple(out)

    def homogeneous_degree(self) -> int | None:
        """Common degree of all terms, or None if not homogeneous (or zero)."""
        degrees = {sum(_unpack(u, self.nvars)) for u in self._terms}
        return degrees.pop() if len(degrees) == 1 else None

    def map_coefficients(self, fn, ring: Ring) -> SparsePoly:
        """Apply a ring homomorphism ``fn`` to every coefficient."""
        out = {}
        for u, c in self._terms.items():
            v = fn(c)
            if v:
                out[u] = v
        return SparsePoly._raw(self.nvars, ring, out)

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: SparsePoly):
        if other.nvars != self.nvars:
            raise RingMismatchError(f"{self.nvars} vs {other.nvars} variables")
        if other.ring != self.ring:
            raise RingMismatchError(f"coefficient rings {self.ring} vs {other.ring}")

    def _lift(self, other) -> SparsePoly | None:
        if isinstance(other, SparsePoly):
            self._check(other)
            return other
        try:
            return SparsePoly.constant(self.ring(other), self.nvars, self.ring)
        except RingMismatchError:
            return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for u, c in o._terms.items():
            s = out[u] + c if u in out else c
            if s:
                out[u] = s
            else:
                out.pop(u, None)
        return SparsePoly._raw(self.nvars, self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly._raw(self.nvars, self.ring, {u: -c for u, c in self._terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._mul(o, None)

    __rmul__ = __mul__

    def _mul(self, other: SparsePoly, cap: int | None, low: int | None = None) -> SparsePoly:
        gm = self._gm
        capg = None if cap is None else cap | gm
        out: dict = {}
        get = out.get
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        for u, cu in a.items():
            if capg is not None and (capg - u) & gm != gm:
                continue
            for v, cv in b.items():
                w = u + v
                if w & gm:
                    raise OverflowError(f"exponent exceeds {MAX_EXPONENT}")
                if capg is not None and (capg - w) & gm != gm:
                    continue
                if low is not None and ((w | gm) - low) & gm != gm:
                    continue
                prev = get(w)
                out[w] = cu * cv if prev is None else prev + cu * cv
        return SparsePoly._raw(self.nvars, self.ring, {w: c for w, c in out.items() if c})

    def __pow__(self, m: int):
        if m < 0:
            raise ValueError("negative power")
        result = SparsePoly.constant(self.ring.one, self.nvars, self.ring)
        base = self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, SparsePoly):
            return (
                self.nvars == other.nvars
                and self.ring == other.ring
                and self._terms == other._terms
            )
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self == o

    def __hash__(self):
        return hash((self.nvars, self.ring.tag, frozenset(self._terms.items())))

    # -- calculus and evaluation -------------------------------------------

    def partial(self, i: int) -> SparsePoly:
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range")
        shift = _BITS * i
        one = 1 << shift
        out = {}
        for u, c in self._terms.items():
            k = (u >> shift) & _VALUE_MASK
            if k:
                d = c * k
                if d:
                    out[u - one] = d
        return SparsePoly._raw(self.nvars, self.ring, out)

    def evaluate(self, point: Sequence):
        if len(point) != self.nvars:
            raise RingMismatchError(f"point has {len(point)} coordinates, need {self.nvars}")
        powers: dict = {}

        def pw(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = point[i] ** k
            return powers[key]

        acc = None
        for u, c in self._terms.items():
            term = c
            for i, k in enumerate(_unpack(u, self.nvars)):
                if k:
                    term = term * pw(i, k)
            acc = term if acc is None else acc + term
        return self.ring.zero if acc is None else acc

    def substitute(self, values: Mapping[int, object]) -> SparsePoly:
        """Replace variables ``i -> values[i]`` (ring elements or polynomials)."""
        out = SparsePoly.zero(self.nvars, self.ring)
        for e, c in self.terms():
            term = SparsePoly.constant(c, self.nvars, self.ring)
            for i, k in enumerate(e):
                if not k:
                    continue
                if i in values:
                    v = values[i]
                    if not isinstance(v, SparsePoly):
                        v = SparsePoly.constant(v, self.nvars, self.ring)
                    term = term * v**k
                else:
                    term = term * SparsePoly.variable(i, self.nvars, self.ring) ** k
            out = out + term
        return out

    # -- formatting -----------------------------------------------------------

    def format(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"x{i}" for i in range(self.nvars)]
        if not self._terms:
            return "0"
        pieces = []
        for e, c in self.terms():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            cs = str(c)
            neg = cs.startswith("-") and not any(ch in cs[1:] for ch in "+-")
            if neg:
                cs = cs[1:]
            if any(ch in cs for ch in "+-"):
                cs = f"({cs})"
            if mono:
                body = mono if cs == "1" else f"{cs}*{mono}"
            else:
                body = cs
            pieces.append(("-" if neg else "+", body))
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"SparsePoly({self.nvars}, {self.ring.tag}, {self.format()!r})"


# -- module-level operations ---------------------------------------------------


def mul(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    f._check(g)
    return f._mul(g, None)


def coeff(f: SparsePoly, e: Sequence[int]):
    return f.coeff(e)


def partial(f: SparsePoly, i: int) -> SparsePoly:
    return f.partial(i)


def evaluate(f: SparsePoly, point: Sequence):
    return f.evaluate(point)


def pow_bounded(f: SparsePoly, m: int, cap: Sequence[int]) -> SparsePoly:
    """``f**m`` restricted to monomials componentwise ``<= cap``.

    Exponents only grow under multiplication, so a partial product that
    already exceeds ``cap`` can never reach a target below it; such terms are
    dropped at every step of binary powering.  Terms above ``cap`` may or may
    not be present in the result.
    """
    if m < 0:
        raise ValueError("negative power")
    if len(cap) != f.nvars:
        raise RingMismatchError(f"cap {tuple(cap)} has wrong length")
    c = _pack([min(k, MAX_EXPONENT) for k in cap])
    result = SparsePoly.constant(f.ring.one, f.nvars, f.ring)
    base = f._mul(SparsePoly.constant(f.ring.one, f.nvars, f.ring), c)
    while m:
        if m & 1:
            result = result._mul(base, c)
        m >>= 1
        if m:
            base = base._mul(base, c)
    return result


def power_coeff(f: SparsePoly, m: int, e: Sequence[int]):
    """The coefficient of ``x^e`` in ``f**m`` with two-sided pruning.

    Multiplies by ``f`` one factor at a time.  After ``k`` factors a partial
    monomial ``u`` is kept only if ``u <= e`` and the remaining ``m - k``
    factors can still make up the difference, i.e.
    ``e - u <= (m - k) * maxdeg(f)`` componentwise.
    """
    if len(e) != f.nvars:
        raise RingMismatchError(f"exponent {tuple(e)} has wrong length")
    if m == 0:
        return f.ring.one if not any(e) else f.ring.zero
    top = f.max_degrees()
    cap = _pack(e)
    state = SparsePoly.constant(f.ring.one, f.nvars, f.ring)
    for k in range(1, m + 1):
        rest = m - k
        low = [max(0, ei - rest * ti) for ei, ti in zip(e, top)]
        state = state._mul(f, cap, _pack(low))
        if not state:
            return f.ring.zero
    return state.coeff(e)


# -- parsing ---------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


def parse_poly(
    text: str,
    nvars: int,
    ring: Ring = ZZ,
    names: Sequence[str] | Mapping[str, int] | None = None,
) -> SparsePoly:
    """Parse a polynomial literal such as ``"3*x0^2*x1 - x3"``.

    Variables default to ``x0 .. x{nvars-1}``; ``names`` overrides them (a
    sequence, or a mapping name -> index for aliases).  Over ``O`` the
    identifiers ``A`` and ``B`` denote the two roots of x^2+x-1; over a
    dual-number ring ``eps`` is the infinitesimal.  Juxtaposition multiplies,
    so ``60A+85`` and ``(x-t)(x+t)`` are accepted.  ``**`` is an alias for
    ``^``.
    """
    if names is None:
        index = {f"x{i}": i for i in range(nvars)}
    elif isinstance(names, Mapping):
        index = dict(names)
    else:
        index = {name: i for i, name in enumerate(names)}
    consts: dict = {}
    if ring == OO:
        consts = {"A": QuadInt(0, 1), "B": QuadInt(-1, -1)}
    elif isinstance(ring, DualNumbers):
        consts = {"eps": ring.eps}
        if ring.base == OO:
            consts.update({"A": ring(QuadInt(0, 1)), "B": ring(QuadInt(-1, -1))})

    tokens = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        if not m or m.end() == pos:
            rest = stripped[pos:]
            raise PolyParseError("unexpected character", text, pos + len(rest) - len(rest.lstrip()))
        start = m.start(m.lastindex)
        kind = ("num", "id", "op")[m.lastindex - 1]
        tokens.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(("end", "", len(stripped)))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def const(c) -> SparsePoly:
        return SparsePoly.constant(c, nvars, ring)

    def expr() -> SparsePoly:
        acc = None
        while True:
            kind, val, at = peek()
            sign = 1
            if kind == "op" and val in "+-":
                take()
                sign = -1 if val == "-" else 1
            elif acc is not None:
                break
            t = term()
            t = -t if sign < 0 else t
            acc = t if acc is None else acc + t
            kind, val, at = peek()
            if not (kind == "op" and val in "+-"):
                break
        return acc

    def term() -> SparsePoly:
        acc = power()
        while True:
            kind, val, at = peek()
            if kind == "op" and val == "*":
                take()
                acc = acc * power()
            elif kind in ("num", "id") or (kind == "op" and val == "("):
                acc = acc * power()
            else:
                return acc

    def power() -> SparsePoly:
        base = atom()
        kind, val, at = peek()
        if kind == "op" and val in ("^", "**"):
            take()
            kind, val, at = take()
            if kind != "num":
                raise PolyParseError("expected an integer exponent", text, at)
            return base ** int(val)
        return base

    def atom() -> SparsePoly:
        kind, val, at = take()
        if kind == "num":
            return const(ring(int(val)))
        if kind == "id":
            if val in index:
                k = index[val]
                if not 0 <= k < nvars:
                    raise PolyParseError(f"variable {val} out of range", text, at)
                return SparsePoly.variable(k, nvars, ring)
            if val in consts:
                return const(consts[val])
            raise PolyParseError(f"unknown identifier {val!r}", text, at)
        if kind == "op" and val == "(":
            inner = expr()
            kind2, val2, at2 = take()
            if val2 != ")":
                raise PolyParseError("expected ')'", text, at2)
            return inner
        if kind == "op" and val == "-":
            return -atom()
        raise PolyParseError(f"unexpected {'end of input' if kind == 'end' else repr(val)}", text, at)

    if tokens[0][0] == "end":
        raise PolyParseError("empty polynomial literal", text, 0)
    result = expr()
    kind, val, at = peek()
    if kind != "end":
        raise PolyParseError(f"unexpected {val!r}", text, at)
    return result
