"""Bookkeeping for the cohomology of Calabi-Yau threefolds in mixed characteristic.

The objects are small tables of integers; the work is in applying each
deduction rule only under its hypotheses and writing down which rule
produced which number.

Conventions
-----------
* ``HodgeDiamond.grid[p][q] = h^{p,q} = dim H^q(X, Omega^p)``.  Serre duality
  reads ``h^{p,q} = h^{3-p,3-q}``; no Hodge symmetry is assumed.
* ``SSGrid.E[i][j] = dim H^i(X, Omega^j)`` is the E_2 page of the conjugate
  spectral sequence; ``d_2`` goes ``(i, j) -> (i + 2, j - 1)`` and position
  ``(i, j)`` contributes to ``H^(i+j)_dR``.
* A torsion indicator ``t`` of an O-module M is ``dim_k M_tors / pi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

from .errors import CrossCheckError, PreconditionError, RuleRefused
from .ring_tower import is_prime

__all__ = [
    "HodgeDiamond",
    "CohomologyProfile",
    "SSGrid",
    "SSResult",
    "TorsionPlacement",
    "AbelianGroup",
    "Step",
    "Trail",
    "caruso_dim",
    "w2_rule",
    "deligne_illusie_rule",
    "run_conjugate_ss",
    "uct_hodge",
    "euler_char",
    "supersingularity_rule",
    "cyclic_homology",
    "mod_p_betti",
    "betti_from_hodge",
    "TAGS",
]

# Citation tags attached to every derived statement.
TAGS = {
    "input": "input",
    "serre": "Serre duality",
    "hodge": "Hodge decomposition",
    "caruso": "Caruso-Faltings",
    "poincare": "Poincare duality",
    "deligne-illusie": "Deligne-Illusie",
    "w2": "W2-obstruction differential",
    "survival": "conjugate SS survival",
    "uct": "universal coefficients",
    "deformation": "deformation lifting",
    "yobuko": "Yobuko",
    "ekedahl": "Ekedahl",
    "katz-messing": "Katz-Messing",
    "euler": "Euler characteristic",
    "group-homology": "cyclic group homology",
    "serre-ss": "Serre spectral sequence",
    "stienstra": "Stienstra",
}


# ---------------------------------------------------------------------------
# Hodge diamonds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HodgeDiamond:
    """Hodge numbers of a smooth proper threefold (``grid[p][q] = h^{p,q}``)."""

    grid: tuple[tuple[int, ...], ...]
    strict_cy: bool = False

    def __post_init__(self):
        g = tuple(tuple(int(v) for v in row) for row in self.grid)
        object.__setattr__(self, "grid", g)
        if len(g) != 4 or any(len(row) != 4 for row in g):
            raise PreconditionError("a threefold diamond is 4 x 4")
        if any(v < 0 for row in g for v in row):
            raise PreconditionError("Hodge numbers are non-negative")
        for p, q in product(range(4), repeat=2):
            if g[p][q] != g[3 - p][3 - q]:
                raise PreconditionError(
                    f"Serre duality fails: h^{p}{q} = {g[p][q]} but h^{3 - p}{3 - q} = {g[3 - p][3 - q]}"
                )
        if g[0][0] != 1:
            raise PreconditionError("h^00 must be 1 (connected, proper)")
        if self.strict_cy and (g[0][1], g[0][2], g[0][3], g[3][0]) != (0, 0, 1, 1):
            raise PreconditionError("strict Calabi-Yau needs h^01 = h^02 = 0 and h^03 = h^30 = 1")

    @classmethod
    def cy(cls, h11: int, h21: int, h10: int = 0, h20: int = 0) -> HodgeDiamond:
        """Strict Calabi-Yau threefold from its four free Hodge numbers."""
        return cls(
            (
                (1, 0, 0, 1),
                (h10, h11, h21, h20),
                (h20, h21, h11, h10),
                (1, 0, 0, 1),
            ),
            strict_cy=True,
        )

    def __getitem__(self, pq: tuple[int, int]) -> int:
        p, q = pq
        return self.grid[p][q]

    def with_entry(self, p: int, q: int, value: int) -> HodgeDiamond:
        """Copy with ``h^{p,q}`` and its Serre dual set to ``value``."""
        g = [list(r) for r in self.grid]
        g[p][q] = g[3 - p][3 - q] = value
        return HodgeDiamond(tuple(map(tuple, g)), self.strict_cy)

    def column(self, p: int) -> tuple[int, ...]:
        """``dim H^q(Omega^p)`` for ``q = 0..3``."""
        return self.grid[p]

    def rows(self) -> list[list[int]]:
        """The diamond read top to bottom, each row by decreasing p."""
        return [[self.grid[p][n - p] for p in range(min(n, 3), max(0, n - 3) - 1, -1)] for n in range(7)]

    def hodge_sums(self) -> tuple[int, ...]:
        return tuple(sum(self.grid[p][n - p] for p in range(4) if 0 <= n - p <= 3) for n in range(7))

    def format(self) -> str:
        """Centered diamond, one row per total degree."""
        rows = self.rows()
        w = max(len(str(v)) for r in rows for v in r)
        lines = []
        for r in rows:
            cells = [" " * w] * 7
            for m, v in enumerate(r):
                cells[4 - len(r) + 2 * m] = str(v).rjust(w)
            lines.append(" ".join(cells).rstrip())
        return "\n".join(lines)


def euler_char(d: HodgeDiamond) -> int:
    """``sum (-1)^(p+q) h^{p,q}``."""
    return sum((-1) ** (p + q) * d.grid[p][q] for p, q in product(range(4), repeat=2))


def betti_from_hodge(d: HodgeDiamond) -> tuple[int, ...]:
    """Betti numbers of a characteristic-zero fiber via the Hodge decomposition."""
    return d.hodge_sums()


# ---------------------------------------------------------------------------
# Profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CohomologyProfile:
    """Scalar data about a model over a p-adic ring with ramification ``e``.

    ``betti`` are the ranks of the generic fiber; ``mod_p`` the dimensions of
    ``H^i(X_et, F_p)``.  Unknown entries are None.
    """

    name: str
    p: int
    e: int = 1
    betti: tuple | None = None
    mod_p: tuple | None = None
    strict_cy: bool = True
    w2_liftable: bool | None = None
    hdr_degenerate: bool | None = None
    ordinary: bool | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise PreconditionError(f"{self.p} is not prime")
        if self.e < 1:
            raise PreconditionError("ramification degree must be >= 1")
        for label in ("betti", "mod_p"):
            v = getattr(self, label)
            if v is not None:
                v = tuple(v)
                if len(v) != 7 or any(x is not None and x < 0 for x in v):
                    raise PreconditionError(f"{label} needs seven non-negative entries")
                object.__setattr__(self, label, v)
        b, m = self.betti, self.mod_p
        if b is not None:
            for i in range(7):
                if None not in (b[i], b[6 - i]) and b[i] != b[6 - i]:
                    raise PreconditionError(f"Poincare duality fails: b{i} != b{6 - i}")
        if b is not None and m is not None:
            for i in range(7):
                if None not in (b[i], m[i]) and m[i] < b[i]:
                    raise PreconditionError(f"mod-p Betti {m[i]} below rank {b[i]} in degree {i}")
        if self.ordinary and self.w2_liftable is False:
            raise PreconditionError(
                "ordinary (finite height) profile marked non-liftable to W2: finite height forces a W2 lift"
            )


# ---------------------------------------------------------------------------
# Trails
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    claim: str
    tag: str
    detail: str = ""

    def line(self) -> str:
        extra = f"; {self.detail}" if self.detail else ""
        return f"{self.claim}  [{TAGS.get(self.tag, self.tag)}{extra}]"


@dataclass
class Trail:
    steps: list[Step] = field(default_factory=list)

    def add(self, claim: str, tag: str, detail: str = "") -> None:
        self.steps.append(Step(claim, tag, detail))

    def lines(self) -> list[str]:
        return [s.line() for s in self.steps]


def _note(trail: Trail | None, claim: str, tag: str, detail: str = "") -> None:
    if trail is not None:
        trail.add(claim, tag, detail)


# ---------------------------------------------------------------------------
# Rules
# ---------------------------------------------------------------------------


def caruso_dim(profile: CohomologyProfile, i: int, trail: Trail | None = None) -> int:
    """``dim H^i_dR`` of the special fiber equals ``dim H^i(X_et, F_p)`` when ``i e < p - 1``."""
    if not 0 <= i <= 6:
        raise PreconditionError(f"degree {i} out of range 0..6")
    if i * profile.e >= profile.p - 1:
        raise RuleRefused(
            f"Caruso-Faltings needs i*e < p-1; here {i}*{profile.e} = {i * profile.e} >= {profile.p - 1}"
        )
    if profile.mod_p is None or profile.mod_p[i] is None:
        raise PreconditionError(f"dim H^{i}(X, F_{profile.p}) is not known")
    value = profile.mod_p[i]
    _note(
        trail,
        f"H^{i}_dR(special) = {value}",
        "caruso",
        f"i*e = {i * profile.e} < p-1 = {profile.p - 1}, dim H^{i}(X, F_{profile.p}) = {value}",
    )
    return value


Differential = tuple[tuple[int, int], tuple[int, int]]


def w2_rule(profile: CohomologyProfile, trail: Trail | None = None) -> dict[Differential, int]:
    """Non-liftability to W2 forces two nonzero ``d_2`` differentials.

    ``H^1(Omega^1) -> H^3(Omega^0)`` is cup product with the obstruction
    class and is nonzero by Serre duality of the pairing; its dual
    ``H^0(Omega^3) -> H^2(Omega^2)`` is nonzero for the same reason.  Each
    marking records rank at least 1.
    """
    if not profile.strict_cy:
        raise RuleRefused("the W2 rule needs a strict Calabi-Yau profile")
    if profile.w2_liftable is not False:
        raise RuleRefused(f"the W2 rule needs a profile that does not lift to W2 (got {profile.w2_liftable})")
    marks = {((1, 1), (3, 0)): 1, ((0, 3), (2, 2)): 1}
    _note(trail, "d2: H^1(Omega^1) -> H^3(Omega^0) has rank >= 1", "w2", "no W2 lift")
    _note(trail, "d2: H^0(Omega^3) -> H^2(Omega^2) has rank >= 1", "w2", "dual marking")
    return marks


def deligne_illusie_rule(profile: CohomologyProfile, trail: Trail | None = None) -> bool:
    """A W2-liftable variety of dimension < p has a degenerate Hodge-de Rham sequence."""
    if profile.w2_liftable is not True:
        raise RuleRefused("Deligne-Illusie needs a lift to W2")
    if not 3 < profile.p:
        raise RuleRefused(f"Deligne-Illusie needs dim = 3 < p, got p = {profile.p}")
    _note(trail, "Hodge-de Rham spectral sequence degenerates", "deligne-illusie", f"lifts to W2, 3 < p = {profile.p}")
    return True


def supersingularity_rule(profile: CohomologyProfile, trail: Trail | None = None) -> str:
    """Finite height implies a W2 lift; contrapositively, no lift means height infinity."""
    if not profile.strict_cy:
        raise RuleRefused("height is defined here only for strict Calabi-Yau profiles")
    if profile.w2_liftable is not False:
        raise RuleRefused("supersingularity rule needs a profile that does not lift to W2")
    _note(trail, f"{profile.name}: height = infinity (supersingular)", "yobuko", "finite height would give a W2 lift")
    return "supersingular"


@dataclass(frozen=True)
class AbelianGroup:
    rank: int = 0
    torsion: tuple[int, ...] = ()

    @property
    def is_torsion(self) -> bool:
        return self.rank == 0

    def __str__(self):
        parts = ["Z"] * (self.rank > 0) if self.rank <= 1 else [f"Z^{self.rank}"]
        parts += [f"Z/{m}" for m in self.torsion]
        return " + ".join(parts) or "0"


def cyclic_homology(m: int, n: int) -> AbelianGroup:
    """``H_n(Z/m, Z)`` with trivial action: Z, then Z/m in odd degrees, 0 in even."""
    if m < 1 or n < 0:
        raise PreconditionError("need m >= 1 and n >= 0")
    if n == 0:
        return AbelianGroup(1)
    if n % 2 == 1 and m > 1:
        return AbelianGroup(0, (m,))
    return AbelianGroup(0)


def mod_p_betti(betti: Sequence[int], torsion: Sequence[int]) -> tuple[int, ...]:
    """``dim H^i(X, F_p) = b_i + t_i + t_(i+1)`` with ``t_i`` the p-torsion rank of ``H^i(X, Z)``."""
    t = list(torsion) + [0]
    return tuple(b + t[i] + t[i + 1] for i, b in enumerate(betti))


# ---------------------------------------------------------------------------
# Conjugate spectral sequence
# ---------------------------------------------------------------------------


class SSGrid:
    """E_2 page of the conjugate spectral sequence with marked ``d_2`` ranks."""

    def __init__(self, E: Sequence[Sequence[int | None]], marks: Mapping[Differential, int] | None = None):
        if len(E) != 4 or any(len(r) != 4 for r in E):
            raise PreconditionError("E_2 page must be 4 x 4")
        if any(v is not None and v < 0 for r in E for v in r):
            raise PreconditionError("dimensions are non-negative")
        self.E = [list(r) for r in E]
        self.marks: dict[Differential, int] = {}
        for d, r in (marks or {}).items():
            self.mark(d[0], r, d[1])

    @classmethod
    def from_diamond(cls, d: HodgeDiamond, marks=None) -> SSGrid:
        return cls([[d.grid[j][i] for j in range(4)] for i in range(4)], marks)

    @classmethod
    def from_hodge(cls, h: Mapping[tuple[int, int], int | None], marks=None) -> SSGrid:
        """From ``h[(p, q)] = dim H^q(Omega^p)``; missing keys are unknown."""
        return cls([[h.get((j, i)) for j in range(4)] for i in range(4)], marks)

    def mark(self, src: tuple[int, int], rank: int = 1, tgt: tuple[int, int] | None = None) -> None:
        i, j = src
        expected = (i + 2, j - 1)
        if tgt is not None and tuple(tgt) != expected:
            raise PreconditionError(f"d_2 goes {src} -> {expected}, not {tgt}")
        if not (0 <= i <= 3 and 0 <= j <= 3 and 0 <= expected[0] <= 3 and 0 <= expected[1] <= 3):
            raise PreconditionError(f"differential from {src} leaves the page")
        if rank < 1:
            raise PreconditionError("a marking records a nonzero rank")
        for pos in (src, expected):
            v = self.E[pos[0]][pos[1]]
            if v is not None and rank > v:
                raise PreconditionError(f"rank {rank} exceeds dim {v} at {pos}")
        self.marks[(tuple(src), expected)] = rank


@dataclass(frozen=True)
class SSResult:
    dims: tuple  # dim H^n_dR for n = 0..6, None when undetermined
    assumed_zero: tuple  # unmarked d_2 whose source and target may both be nonzero
    degenerate: bool  # no differential was marked nonzero


def run_conjugate_ss(grid: SSGrid) -> SSResult:
    """Subtract marked ranks and sum the surviving entries along total degree.

    A marking is a lower bound; it gives an exact answer only when the rank
    is forced, i.e. equals a known source or target dimension.  Entries
    touched by an unforced marking become unknown.  Unmarked differentials
    are taken to be zero; the ones that could be nonzero are listed.
    """
    E = [list(r) for r in grid.E]
    for (src, tgt), r in grid.marks.items():
        known = [E[a][b] for a, b in (src, tgt) if E[a][b] is not None]
        forced = bool(known) and min(known) == r
        for a, b in (src, tgt):
            if E[a][b] is None:
                continue
            E[a][b] = E[a][b] - r if forced else None
    assumed = []
    for i, j in product(range(2), range(1, 4)):
        src, tgt = (i, j), (i + 2, j - 1)
        if (src, tgt) in grid.marks:
            continue
        if grid.E[i][j] != 0 and grid.E[i + 2][j - 1] != 0:
            assumed.append((src, tgt))
    dims = []
    for n in range(7):
        cells = [E[i][n - i] for i in range(4) if 0 <= n - i <= 3]
        dims.append(None if None in cells else sum(cells))
    return SSResult(tuple(dims), tuple(assumed), not grid.marks)


# ---------------------------------------------------------------------------
# Universal coefficients for Hodge cohomology
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorsionPlacement:
    """Torsion indicators ``t[p][i]`` of ``H^i(X, Omega^p)`` over the integral model."""

    solutions: tuple  # per p: tuple of candidate vectors (t_0, .., t_3)

    @property
    def unique(self) -> bool:
        return all(len(s) == 1 for s in self.solutions)

    @property
    def placement(self) -> frozenset[tuple[int, int]]:
        """``{(i, p)}`` with torsion in ``H^i(Omega^p)``; needs a unique solution."""
        if not self.unique:
            raise PreconditionError("torsion placement is not determined")
        return frozenset((i, p) for p, sols in enumerate(self.solutions) for i, t in enumerate(sols[0]) if t)

    def describe(self) -> list[str]:
        return [f"H^{i}(Omega^{p})" for i, p in sorted(self.placement)]


def _uct_column(r: Sequence[int], s: Sequence[int], h0_torsion_free: bool) -> list[tuple[int, ...]]:
    """Solve ``s_i = r_i + t_i + t_(i+1)`` (``t_4 = 0``) in non-negative integers."""
    out = []
    for t0 in range(0, 1 if h0_torsion_free else s[0] - r[0] + 1):
        t = [t0]
        ok = True
        for i in range(3):
            nxt = s[i] - r[i] - t[i]
            if nxt < 0:
                ok = False
                break
            t.append(nxt)
        if ok and s[3] == r[3] + t[3]:
            out.append(tuple(t))
    return out


def uct_hodge(
    generic: HodgeDiamond,
    special: HodgeDiamond,
    h0_torsion_free: bool = True,
    trail: Trail | None = None,
) -> TorsionPlacement:
    """Locate torsion in the integral Hodge cohomology from the two diamonds.

    For each p, ``0 -> H^i(Omega^p)/pi -> H^i(special, Omega^p) ->
    H^(i+1)(Omega^p)[pi] -> 0`` gives ``s_i = r_i + t_i + t_(i+1)``.  ``H^0`` of
    a locally free sheaf on a flat model is torsion free, so ``t_0 = 0``
    unless ``h0_torsion_free`` is switched off.  Only minimal solutions are
    kept.
    """
    sols = []
    for p in range(4):
        col = _uct_column(generic.column(p), special.column(p), h0_torsion_free)
        if not col:
            raise PreconditionError(f"no torsion assignment fits Omega^{p}: generic {generic.column(p)}, special {special.column(p)}")
        minimal = [t for t in col if not any(u != t and all(a <= b for a, b in zip(u, t)) for u in col)]
        sols.append(tuple(minimal))
    res = TorsionPlacement(tuple(sols))
    if trail is not None and res.unique:
        where = ", ".join(res.describe()) or "nowhere"
        trail.add(f"torsion in the integral Hodge cohomology: {where}", "uct")
    return res


# ---------------------------------------------------------------------------
# Scenarios
# ---------------------------------------------------------------------------

_HODGE_KEYS = ("h10", "h20", "h11", "h21")
_nullable_int = {"type": ["integer", "null"], "minimum": 0}

SCENARIO_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["name", "p", "strict_cy", "w2_liftable", "special_hodge", "sources"],
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "p": {"type": "integer", "minimum": 2},
        "e": {"type": "integer", "minimum": 1},
        "strict_cy": {"type": "boolean"},
        "w2_liftable": {"type": ["boolean", "null"]},
        "generic_hodge": {
            "type": "object",
            "additionalProperties": False,
            "properties": {k: {"type": "integer", "minimum": 0} for k in _HODGE_KEYS},
            "required": list(_HODGE_KEYS),
        },
        "special_hodge": {
            "type": "object",
            "additionalProperties": False,
            "properties": {k: _nullable_int for k in _HODGE_KEYS},
        },
        "mod_p_betti": {"type": "array", "items": _nullable_int, "minItems": 7, "maxItems": 7},
        "cyclic_cover": {
            "type": "object",
            "additionalProperties": False,
            "required": ["order"],
            "properties": {"order": {"type": "integer", "minimum": 2}},
        },
        "deformation_obstruction": {
            "type": "object",
            "additionalProperties": False,
            "required": ["poly", "root", "residue"],
            "properties": {
                "poly": {"type": "string"},
                "root": {"type": "string"},
                "residue": {"type": "integer"},
            },
        },
        "ekedahl": {
            "type": "object",
            "additionalProperties": False,
            "required": ["h2_rank"],
            "properties": {"h2_rank": {"type": "integer", "minimum": 0}},
        },
        "beta_check": {
            "type": "object",
            "additionalProperties": False,
            "required": ["fixture"],
            "properties": {"fixture": {"type": "string"}},
        },
        "sources": {"type": "object", "additionalProperties": {"type": "string"}},
    },
}


@dataclass
class Derivation:
    """Everything a scenario produced, in the order it was derived."""

    name: str
    trail: Trail = field(default_factory=Trail)
    facts: dict = field(default_factory=dict)

    def lines(self) -> list[str]:
        return self.trail.lines()

    def to_dict(self) -> dict:
        return {"scenario": self.name, "facts": self.facts, "trail": self.lines()}


def _cy_hodge_sums(h: Mapping[str, int | None]) -> list[tuple[dict[str, int], int]]:
    """``H^n_dR = sum h^{p,q}`` for a strict CY, as (coefficients, constant) per degree."""
    return [
        ({}, 1),
        ({"h10": 1}, 0),
        ({"h20": 1, "h11": 1}, 0),
        ({"h21": 2}, 2),
        ({"h20": 1, "h11": 1}, 0),
        ({"h10": 1}, 0),
        ({}, 1),
    ]


def _special_entries(h: Mapping[str, int | None]) -> dict[tuple[int, int], int | None]:
    """``(p, q) -> h^{p,q}`` of a strict CY with possibly unknown free entries."""
    get = h.get
    grid = {
        (0, 0): 1, (0, 1): 0, (0, 2): 0, (0, 3): 1,
        (1, 0): get("h10"), (1, 1): get("h11"), (1, 2): get("h21"), (1, 3): get("h20"),
        (2, 0): get("h20"), (2, 1): get("h21"), (2, 2): get("h11"), (2, 3): get("h10"),
        (3, 0): 1, (3, 1): 0, (3, 2): 0, (3, 3): 1,
    }  # fmt: skip
    return grid


def _deformation_blocks_torsion(block: Mapping, trail: Trail) -> bool:
    """Check that the first-order deformation does not lift over O[eps]/eps^2."""
    from .multipoly import parse_poly
    from .ring_tower import OO, DualNumbers, DualElem, parse_quadint, root_lift, reduce_mod_pi

    f = parse_poly(block["poly"], 1, OO, names=("x",))
    coeffs = [f.coeff((k,)) for k in range(f.total_degree() + 1)]
    r = DualElem([parse_quadint(block["root"])], DualNumbers(OO, 1))
    want = block["residue"] % 5
    lifts = root_lift(coeffs, r, where=lambda c: reduce_mod_pi(c) == want)
    trail.add(
        f"lifts of the root {block['root']} of {block['poly']} to O[eps]/eps^2 with eps-coefficient = {want} mod pi: "
        f"{len(lifts)}",
        "deformation",
        "computed by root_lift",
    )
    return not lifts


def _solve_uct_unknowns(generic: HodgeDiamond, special: dict[str, int | None], forbid: set[tuple[int, int]]):
    """Values of the unknown special entries compatible with universal coefficients.

    ``forbid`` lists ``(i, p)`` with ``H^i(Omega^p)`` known to be torsion free.
    """
    unknown = [k for k in _HODGE_KEYS if special.get(k) is None]
    bound = sum(v for v in special.values() if v is not None) + sum(generic.grid[1]) + 2
    feasible = []
    for values in product(range(bound), repeat=len(unknown)):
        trial = dict(special)
        trial.update(zip(unknown, values))
        try:
            s = HodgeDiamond.cy(trial["h11"], trial["h21"], trial["h10"], trial["h20"])
            res = uct_hodge(generic, s)
        except PreconditionError:
            continue
        if res.unique and not (res.placement & forbid):
            feasible.append(dict(zip(unknown, values)))
    return unknown, feasible


def derive(scenario: Mapping) -> Derivation:
    """Run every applicable rule on a scenario and record the trail."""
    import jsonschema

    try:
        jsonschema.validate(scenario, SCENARIO_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise PreconditionError(f"scenario rejected: {exc.message}") from None

    name = scenario["name"]
    src = scenario["sources"]
    out = Derivation(name)
    T, facts = out.trail, out.facts
    p, e = scenario["p"], scenario.get("e", 1)

    def source(key: str) -> str:
        return src.get(key, "scenario input")

    T.add(f"{name}: p = {p}, e = {e}, strict CY = {scenario['strict_cy']}", "input", source("base"))
    if scenario["w2_liftable"] is not None:
        T.add(f"lifts to W2: {scenario['w2_liftable']}", "input", source("w2_liftable"))

    # generic fiber
    generic = None
    betti = None
    if "generic_hodge" in scenario:
        g = scenario["generic_hodge"]
        generic = HodgeDiamond.cy(g["h11"], g["h21"], g["h10"], g["h20"])
        T.add(f"generic diamond h11 = {g['h11']}, h21 = {g['h21']}", "input", source("generic_hodge"))
        betti = betti_from_hodge(generic)
        facts["generic_betti"] = list(betti)
        facts["generic_euler"] = euler_char(generic)
        T.add(f"generic Betti numbers {' '.join(map(str, betti))}", "hodge")
        T.add(f"chi(generic) = {facts['generic_euler']}", "euler")

    # mod-p Betti numbers of the generic fiber
    mod_p = list(scenario.get("mod_p_betti", [None] * 7))
    if "mod_p_betti" in scenario:
        T.add(f"dim H^i(X, F_{p}) given: {mod_p}", "input", source("mod_p_betti"))
    if "cyclic_cover" in scenario:
        if betti is None:
            raise PreconditionError("cyclic_cover needs the generic Hodge numbers")
        m = scenario["cyclic_cover"]["order"]
        h2, h3 = cyclic_homology(m, 2), cyclic_homology(m, 3)
        T.add(f"H_1(X, Z) = Z/{m} from pi_1 = Z/{m}", "input", source("cyclic_cover"))
        T.add(f"H_2(Z/{m}, Z) = {h2}, H_3(Z/{m}, Z) = {h3}", "group-homology")
        if not (h3.is_torsion and str(h2) == "0"):
            raise PreconditionError("group homology does not force H_2(X, Z) = Z")
        T.add("d^3 from the torsion group H_3 into Z vanishes, so H_2(X, Z) = Z", "serre-ss")
        t = [0] * 7
        if m % p == 0:
            t[2] = t[5] = 1  # torsion of H_1 sits in H^2 and, dually, H^5
        T.add(f"p-torsion ranks of H^i(X, Z): {t}", "uct", "H^3 torsion = H_2 torsion = 0")
        derived = mod_p_betti(betti, t)
        for i, v in enumerate(derived):
            if mod_p[i] is not None and mod_p[i] != v:
                raise CrossCheckError(f"mod-{p} Betti number in degree {i}: given {mod_p[i]}, derived {v}")
            mod_p[i] = v
        T.add(f"dim H^i(X, F_{p}) = {' '.join(map(str, derived))}", "uct")
    facts["mod_p_betti"] = mod_p

    profile = CohomologyProfile(
        name, p, e, betti=betti, mod_p=tuple(mod_p), strict_cy=scenario["strict_cy"],
        w2_liftable=scenario["w2_liftable"],
    )  # fmt: skip

    # de Rham dimensions from Caruso-Faltings and Poincare duality
    dR: list[int | None] = [None] * 7
    for i in range(7):
        if mod_p[i] is None:
            continue
        try:
            dR[i] = caruso_dim(profile, i, T)
        except RuleRefused as exc:
            T.add(f"H^{i}_dR(special): rule refused", "caruso", str(exc))
    for i in range(7):
        if dR[i] is not None and dR[6 - i] is None:
            dR[6 - i] = dR[i]
            T.add(f"H^{6 - i}_dR(special) = {dR[i]}", "poincare", f"dual to degree {i}")
    facts["caruso_dR"] = list(dR)

    # special fiber Hodge numbers
    special = {k: scenario["special_hodge"].get(k) for k in _HODGE_KEYS}
    known = {k: v for k, v in special.items() if v is not None}
    if known:
        T.add("special fiber " + ", ".join(f"{k} = {v}" for k, v in known.items()), "input", source("special_hodge"))

    marks = None
    degenerate = False
    if scenario["w2_liftable"] is False and scenario["strict_cy"]:
        marks = w2_rule(profile, T)
        supersingularity_rule(profile, T)
        facts["height"] = "infinity"
    elif scenario["w2_liftable"]:
        try:
            degenerate = deligne_illusie_rule(profile, T)
        except RuleRefused as exc:
            T.add("Hodge-de Rham degeneration not available", "deligne-illusie", str(exc))

    if degenerate:
        _solve_from_degeneration(special, dR, T)

    if scenario["strict_cy"] and special["h10"] is None and dR[1] == 0:
        special["h10"] = 0
        T.add("h10 = 0: H^0(Omega^1) survives to E_inf since H^2(O) = 0, and H^1_dR = 0", "survival")
    survival_h10 = special["h10"]

    if "deformation_obstruction" in scenario and generic is not None:
        if _deformation_blocks_torsion(scenario["deformation_obstruction"], T):
            T.add("H^1(X, Omega^2) is torsion free: torsion there would lift the deformation", "deformation")
            trial = dict(special)
            if survival_h10 is not None:
                trial["h10"] = None  # re-derive independently
            unknown, feasible = _solve_uct_unknowns(generic, trial, {(1, 2)})
            if not feasible:
                raise PreconditionError("no special diamond is compatible with the obstruction")
            for k in unknown:
                values = {f[k] for f in feasible}
                if len(values) == 1:
                    v = values.pop()
                    if special[k] is not None and special[k] != v:
                        raise CrossCheckError(f"{k}: survival argument gives {special[k]}, torsion chase gives {v}")
                    special[k] = v
                    T.add(f"{k} = {v}", "uct", "only value compatible with torsion-free H^1(Omega^2)")

    facts["special_hodge"] = dict(special)
    complete = all(v is not None for v in special.values())
    if complete:
        sd = HodgeDiamond.cy(special["h11"], special["h21"], special["h10"], special["h20"])
        facts["special_diamond"] = sd.rows()
        T.add("special diamond rows " + " / ".join(" ".join(map(str, r)) for r in sd.rows()), "serre")

    # conjugate spectral sequence
    if marks is not None or degenerate:
        grid = SSGrid.from_hodge(_special_entries(special), marks)
        res = run_conjugate_ss(grid)
        for i, v in enumerate(res.dims):
            if v is not None and dR[i] is not None and v != dR[i]:
                raise CrossCheckError(f"H^{i}_dR: spectral sequence gives {v}, Caruso-Faltings gives {dR[i]}")
            if dR[i] is None:
                dR[i] = v
        shown = " ".join("?" if v is None else str(v) for v in dR)
        T.add(f"H^*_dR(special) = {shown}", "w2" if marks else "deligne-illusie", "E_inf antidiagonal sums")
        facts["dR"] = list(dR)
        facts["conjugate_ss_degenerate"] = res.degenerate

        if scenario["strict_cy"] and dR[3] == 0:
            T.add("H^3_crys = 0 since H^3_dR = 0", "uct")
            T.add("b3 = 0", "katz-messing", "crystalline and l-adic Betti numbers agree")
            facts["b3"] = 0

    if "ekedahl" in scenario:
        if marks is None:
            raise RuleRefused("the torsion exponent argument needs the W2 markings")
        T.add("Hodge-de Rham degenerates at E_1 exactly when n > 0", "input", source("ekedahl"))
        T.add("conjugate SS does not degenerate at E_2 (marked differentials), so neither does Hodge-de Rham", "w2")
        facts["ekedahl_n"] = 0
        r = scenario["ekedahl"]["h2_rank"]
        facts["crystalline"] = [1, 0, r, 0, r, 0, 1]
        T.add(f"n = 0: H^*_crys = W, 0, W^{r}, 0, W^{r}, 0, W (torsion free)", "ekedahl")

    if complete and generic is not None:
        sd = HodgeDiamond.cy(special["h11"], special["h21"], special["h10"], special["h20"])
        placement = uct_hodge(generic, sd, trail=T)
        if placement.unique:
            facts["torsion"] = placement.describe()

    if betti is not None and all(v is not None for v in dR):
        alt_dr = sum((-1) ** i * v for i, v in enumerate(dR))
        alt_b = sum((-1) ** i * v for i, v in enumerate(betti))
        if alt_dr != alt_b:
            raise CrossCheckError(f"alternating de Rham sum {alt_dr} != alternating Betti sum {alt_b}")
        facts["alternating_sum"] = alt_dr
        T.add(f"alternating sum of H^*_dR = {alt_dr} = alternating Betti sum", "euler")

    if "beta_check" in scenario:
        _beta_check(scenario["beta_check"], p, T, facts)
    return out


def _solve_from_degeneration(special: dict[str, int | None], dR: list[int | None], T: Trail) -> None:
    """Fill unknown Hodge numbers from ``H^n_dR = sum_{p+q=n} h^{p,q}``."""
    changed = True
    while changed:
        changed = False
        for n, (coeffs, const) in enumerate(_cy_hodge_sums(special)):
            if dR[n] is None:
                continue
            unknown = [k for k in coeffs if special[k] is None]
            rest = const + sum(c * special[k] for k, c in coeffs.items() if special[k] is not None)
            if not unknown:
                if rest != dR[n]:
                    raise PreconditionError(f"H^{n}_dR = {dR[n]} but the Hodge numbers sum to {rest}")
                continue
            if len(unknown) == 1:
                k = unknown[0]
                q, r = divmod(dR[n] - rest, coeffs[k])
                if r or q < 0:
                    raise PreconditionError(f"degree {n}: no non-negative {k} solves {dR[n]} = {rest} + {coeffs[k]}*{k}")
                special[k] = q
                T.add(f"{k} = {q}", "deligne-illusie", f"H^{n}_dR = {dR[n]} is the sum of the Hodge numbers")
                changed = True


def fixture_text(name: str) -> str:
    """Contents of a file shipped in ``cyarith/fixtures``."""
    from importlib import resources

    path = resources.files("cyarith").joinpath("fixtures", name)
    if not path.is_file():
        raise PreconditionError(f"no bundled fixture named {name!r}")
    return path.read_text()


def _beta_check(block: Mapping, p: int, T: Trail, facts: dict) -> None:
    from .arrangement import parse_arrangement
    from .multipoly import SparsePoly
    from .ring_tower import reducer
    from .stienstra import DoubleCoverInput, ordinary_test

    text = fixture_text(block["fixture"])
    arr = parse_arrangement(text)
    W = SparsePoly.constant(1, 4, arr.ring)
    for f in arr.forms:
        e = [tuple(int(i == j) for j in range(4)) for i in range(4)]
        W = W * SparsePoly(4, arr.ring, dict(zip(e, f)))
    verdict = ordinary_test(DoubleCoverInput(W), p)
    facts["beta_p"] = str(verdict.value)
    T.add(
        f"beta_{p} = {verdict.value}, reduction {verdict.witness}: {'ordinary' if verdict else 'not ordinary'}",
        "stienstra",
        "consistent with height > 1" if not verdict else "CONTRADICTS supersingularity",
    )
    if verdict and facts.get("height") == "infinity":
        raise CrossCheckError("beta_p is a unit but the profile was derived supersingular")
