"""Plane arrangements in P^3: multiple lines, k-fold points, reduction.

Planes are linear forms ``a x + b y + c z + d t`` stored as 4-tuples over an
integral domain from :mod:`cyarith.ring_tower`.  All rank decisions use
fraction-free elimination, so nothing ever leaves the ring.

Strata are keyed by the set of planes containing them.  Two distinct lines
(or points) always have different incident-plane sets, so this key is
independent of which pair or triple of planes happened to cut them out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb, gcd
from typing import Sequence

from .errors import CrossCheckError, DegenerateReductionError, PreconditionError
from .multipoly import SparsePoly, parse_poly
from .ring_tower import GF, OO, ZZ, QuadInt, Ring, reducer

__all__ = [
    "Arrangement",
    "Point",
    "IncidenceReport",
    "ComparisonResult",
    "rank",
    "incidence",
    "verify_points",
    "reduction_compare",
    "admissible_double_octic",
    "parse_arrangement",
    "COORDS",
]

COORDS = ("x", "y", "z", "t")


def rank(rows: Sequence[Sequence], ring: Ring) -> int:
    """Rank by Bareiss elimination; every division is exact in a domain."""
    M = [list(r) for r in rows]
    if not M:
        return 0
    ncols = len(M[0])
    r, prev = 0, ring.one
    for c in range(ncols):
        pivot = next((i for i in range(r, len(M)) if M[i][c]), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        for i in range(r + 1, len(M)):
            for j in range(c + 1, ncols):
                M[i][j] = ring.exact_div(M[r][c] * M[i][j] - M[i][c] * M[r][j], prev)
            M[i][c] = ring.zero
        prev = M[r][c]
        r += 1
        if r == len(M):
            break
    return r


def _det3(m) -> object:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _kernel_point(rows) -> tuple:
    """Common zero of three independent forms: signed 3x3 minors."""
    out = []
    for j in range(4):
        minor = [[r[k] for k in range(4) if k != j] for r in rows]
        d = _det3(minor)
        out.append(d if j % 2 == 0 else -d)
    return tuple(out)


def _dot(form, point):
    acc = form[0] * point[0]
    for a, b in zip(form[1:], point[1:]):
        acc = acc + a * b
    return acc


def _canonical(v: tuple, ring: Ring) -> tuple:
    """Scale a vector to a deterministic representative.

    Over a field the first nonzero entry becomes 1.  Over Z and O we divide
    by the integer content and make the first nonzero integer component
    positive; O has infinitely many units, so this is only a convenient
    representative, not a canonical one (identity of strata never relies on
    it).
    """
    first = next((x for x in v if x), None)
    if first is None:
        return v
    if ring.is_field:
        inv = ring.one / first
        return tuple(x * inv for x in v)
    if ring == ZZ:
        g = 0
        for x in v:
            g = gcd(g, x)
        g = g if first > 0 else -g
        return tuple(x // g for x in v)
    if ring == OO:
        ints = [c for x in v for c in (x.a, x.b)]
        g = 0
        for c in ints:
            g = gcd(g, c)
        lead = next(c for c in ints if c)
        g = g if lead > 0 else -g
        return tuple(QuadInt(x.a // g, x.b // g) for x in v)
    return v


class Arrangement:
    """A list of pairwise non-proportional planes over a domain."""

    def __init__(self, forms: Sequence[Sequence], ring: Ring):
        if not ring.is_domain:
            raise PreconditionError(f"{ring.tag} has zero divisors; incidence needs a domain")
        self.ring = ring
        self.forms: list[tuple] = []
        for k, f in enumerate(forms):
            if len(f) != 4:
                raise PreconditionError(f"plane {k} has {len(f)} coefficients, expected 4")
            f = tuple(ring(c) for c in f)
            if not any(f):
                raise PreconditionError(f"plane {k} is the zero form")
            self.forms.append(_canonical(f, ring))
        for i, j in combinations(range(len(self.forms)), 2):
            if rank([self.forms[i], self.forms[j]], ring) < 2:
                raise PreconditionError(f"planes {i} and {j} are proportional")

    def __len__(self):
        return len(self.forms)

    @classmethod
    def from_polys(cls, polys: Sequence[SparsePoly]) -> Arrangement:
        if not polys:
            raise PreconditionError("empty arrangement")
        ring = polys[0].ring
        forms = []
        for f in polys:
            if f.nvars != 4 or (f and f.homogeneous_degree() != 1):
                raise PreconditionError(f"not a linear form in x, y, z, t: {f}")
            forms.append([f.coeff(tuple(int(i == j) for j in range(4))) for i in range(4)])
        return cls(forms, ring)

    def form_str(self, k: int) -> str:
        e = [tuple(int(i == j) for j in range(4)) for i in range(4)]
        return SparsePoly(4, self.ring, dict(zip(e, self.forms[k]))).format(COORDS)

    def map(self, fn, ring: Ring) -> list[tuple]:
        return [tuple(fn(c) for c in f) for f in self.forms]


@dataclass(frozen=True)
class Point:
    coords: tuple
    planes: frozenset[int]

    @property
    def multiplicity(self) -> int:
        return len(self.planes)


@dataclass
class IncidenceReport:
    n_planes: int
    lines: dict[frozenset[int], int] = field(default_factory=dict)  # plane set -> multiplicity
    points: list[Point] = field(default_factory=list)

    def lines_of(self, k: int) -> list[frozenset[int]]:
        return sorted((s for s, m in self.lines.items() if m == k), key=sorted)

    def points_of(self, k: int) -> list[Point]:
        return [p for p in self.points if p.multiplicity == k]

    @property
    def double_lines(self):
        return self.lines_of(2)

    @property
    def triple_lines(self):
        return self.lines_of(3)

    def counts(self) -> dict[str, int]:
        out = {
            "planes": self.n_planes,
            "double_lines": len(self.double_lines),
            "triple_lines": len(self.triple_lines),
            "triple_points": len(self.points_of(3)),
            "fourfold_points": len(self.points_of(4)),
            "fivefold_points": len(self.points_of(5)),
        }
        worse_lines = sum(1 for m in self.lines.values() if m >= 4)
        worse_points = sum(1 for p in self.points if p.multiplicity >= 6)
        if worse_lines:
            out["lines_on_4_or_more"] = worse_lines
        if worse_points:
            out["points_of_6_or_more"] = worse_points
        return out

    def strata(self) -> tuple[frozenset, frozenset]:
        """Labeled combinatorics: the line and point plane-sets."""
        return frozenset(self.lines), frozenset(p.planes for p in self.points)

    def to_dict(self) -> dict:
        return {
            "counts": self.counts(),
            "lines": [{"planes": sorted(s), "multiplicity": m} for s, m in sorted(self.lines.items(), key=lambda kv: sorted(kv[0]))],
            "points": [
                {"coords": [str(c) for c in p.coords], "planes": sorted(p.planes), "multiplicity": p.multiplicity}
                for p in self.points
            ],
        }


def incidence(a: Arrangement) -> IncidenceReport:
    """Enumerate every multiple line and every point on three or more planes."""
    R, F, n = a.ring, a.forms, len(a.forms)
    rep = IncidenceReport(n)
    for i, j in combinations(range(n), 2):
        if any(i in s and j in s for s in rep.lines):
            continue
        on = frozenset(k for k in range(n) if k in (i, j) or rank([F[i], F[j], F[k]], R) == 2)
        rep.lines[on] = len(on)
    if sum(comb(m, 2) for m in rep.lines.values()) != comb(n, 2):
        raise CrossCheckError("line strata do not partition the pairs of planes")

    seen: set[frozenset[int]] = set()
    for i, j, k in combinations(range(n), 3):
        rows = [F[i], F[j], F[k]]
        if rank(rows, R) < 3:
            continue
        pt = _kernel_point(rows)
        on = frozenset(m for m in range(n) if not _dot(F[m], pt))
        if on in seen:
            continue
        seen.add(on)
        if rank([F[m] for m in sorted(on)], R) != 3:
            raise CrossCheckError(f"point {pt} does not have rank-3 incidence")
        rep.points.append(Point(_canonical(pt, R), on))
    rep.points.sort(key=lambda p: (-p.multiplicity, sorted(p.planes)))

    for p in rep.points:
        through = sum(comb(m, 2) for s, m in rep.lines.items() if s <= p.planes)
        if through != comb(p.multiplicity, 2):
            raise CrossCheckError(f"pairs through point {sorted(p.planes)} miscounted")
    return rep


def verify_points(a: Arrangement, points: Sequence[Sequence]) -> list[int]:
    """Number of planes through each given point."""
    out = []
    for pt in points:
        pt = tuple(a.ring(c) for c in pt)
        if len(pt) != 4 or not any(pt):
            raise PreconditionError(f"not a point of P^3: {pt}")
        out.append(sum(1 for f in a.forms if not _dot(f, pt)))
    return out


@dataclass(frozen=True)
class ComparisonResult:
    same: bool
    only_before: tuple  # plane sets present only over the original ring
    only_after: tuple  # plane sets present only after reduction

    def __bool__(self):
        return self.same


def reduce_arrangement(a: Arrangement, p: int, root: int | None = None) -> Arrangement:
    """Reduce mod a prime above ``p``; refuses if a plane vanishes or two collide."""
    red = reducer(a.ring, p, root)
    forms = a.map(red, None)
    for k, f in enumerate(forms):
        if not any(f):
            raise DegenerateReductionError(f"plane {k} ({a.form_str(k)}) vanishes mod {p}")
    for i, j in combinations(range(len(forms)), 2):
        if rank([forms[i], forms[j]], GF(p)) < 2:
            raise DegenerateReductionError(
                f"planes {i} ({a.form_str(i)}) and {j} ({a.form_str(j)}) coincide mod {p}"
            )
    return Arrangement(forms, GF(p))


def reduction_compare(a: Arrangement, p: int, root: int | None = None) -> ComparisonResult:
    """Do the strata before and after reduction involve the same plane sets?"""
    before = incidence(a).strata()
    after = incidence(reduce_arrangement(a, p, root)).strata()
    lost = sorted((sorted(s) for part in (0, 1) for s in before[part] - after[part]))
    new = sorted((sorted(s) for part in (0, 1) for s in after[part] - before[part]))
    return ComparisonResult(before == after, tuple(map(tuple, lost)), tuple(map(tuple, new)))


def admissible_double_octic(r: IncidenceReport, plane_count: int | None = 8) -> bool:
    """Only double/triple lines and points of multiplicity at most five."""
    if plane_count is not None and r.n_planes != plane_count:
        return False
    if any(m >= 4 for m in r.lines.values()):
        return False
    return all(p.multiplicity <= 5 for p in r.points)


def parse_arrangement(text: str, ring: Ring = OO) -> Arrangement:
    """One linear form per line in ``x, y, z, t``; ``#`` starts a comment.

    A single line holding a product of linear factors is also accepted.
    """
    polys = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        polys.extend(_split_factors(line, ring))
    return Arrangement.from_polys(polys)


def _split_factors(line: str, ring: Ring) -> list[SparsePoly]:
    parts, depth, start = [], 0, None
    stripped = line.replace(" ", "")
    if stripped.startswith("(") and stripped.endswith(")"):
        for k, ch in enumerate(stripped):
            if ch == "(":
                if depth == 0:
                    start = k + 1
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    parts.append(stripped[start:k])
            elif depth == 0 and ch not in "*":
                parts = []
                break
        if parts:
            return [parse_poly(s, 4, ring, names=COORDS) for s in parts]
    return [parse_poly(line, 4, ring, names=COORDS)]
