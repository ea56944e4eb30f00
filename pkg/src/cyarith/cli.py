"""Command-line front end: one subcommand per operation.

Every invocation is turned into a :class:`Scenario`, validated against a
JSON schema, and handed to :func:`dispatch`.  Exit codes: 0 success,
2 malformed input, 3 a rule refused to fire, 4 an internal cross-check failed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import jsonschema

from . import __version__
from .arrangement import COORDS, incidence, parse_arrangement, reduction_compare, verify_points
from .errors import CrossCheckError, CyArithError, DegenerateReductionError, PreconditionError, RuleRefused
from .formal_group import LogSeries, frob_on_log, height
from .hodge_ledger import derive, fixture_text
from .invariant_theory import (
    DiagonalAction,
    fixed_points,
    format_monomial,
    freeness_check,
    generated_check,
    invariant_monomials,
    molien,
)
from .multipoly import SparsePoly, parse_poly
from .ring_tower import GF, OO, ZZ, DualElem, DualNumbers, PrimeField, Ring, reduce_mod_pi, root_lift
from .stienstra import DoubleCoverInput, HypersurfaceInput, beta, beta_double, log_series, ordinary_test
from .tate_oort import verify_axioms

SCHEMA_VERSION = 1

EXIT_OK, EXIT_MALFORMED, EXIT_REFUSED, EXIT_CROSSCHECK = 0, 2, 3, 4

SUBCOMMANDS = (
    "beta", "beta-double", "ordinary", "height", "frob-log", "molien", "invariants", "generated",
    "fixed-points", "freeness", "tate-oort", "arrangement", "reduce-compare", "hodge", "root-lift",
)  # fmt: skip

SCENARIO_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["subcommand", "ring", "payload", "format"],
    "properties": {
        "subcommand": {"enum": list(SUBCOMMANDS)},
        "ring": {"type": "string", "pattern": r"^(Z|O|O-mod-pi|Fp\(\d+\)|dual\((Z|O|Fp\(\d+\)),\s*[1-4]\))$"},
        "payload": {"type": "object"},
        "format": {"enum": ["text", "json"]},
    },
}


@dataclass(frozen=True)
class Scenario:
    subcommand: str
    ring: str = "Z"
    payload: dict = field(default_factory=dict)
    format: str = "text"

    def as_dict(self) -> dict:
        return {"subcommand": self.subcommand, "ring": self.ring, "payload": self.payload, "format": self.format}


@dataclass
class Report:
    lines: list[str]
    data: dict

    def render(self, fmt: str, subcommand: str) -> str:
        if fmt == "json":
            doc = {"schema_version": SCHEMA_VERSION, "subcommand": subcommand, "result": self.data}
            return json.dumps(doc, indent=2, sort_keys=True)
        return "\n".join(self.lines)


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------


def parse_ring(tag: str) -> Ring:
    """``Z``, ``O``, ``O-mod-pi`` (= F_5 via A -> 2), ``Fp(p)``, ``dual(R, n)``."""
    tag = tag.strip()
    if tag == "Z":
        return ZZ
    if tag == "O":
        return OO
    if tag == "O-mod-pi":
        return GF(5)
    m = re.fullmatch(r"Fp\((\d+)\)", tag)
    if m:
        return GF(int(m.group(1)))
    m = re.fullmatch(r"dual\((.+),\s*(\d+)\)", tag)
    if m:
        return DualNumbers(parse_ring(m.group(1)), int(m.group(2)))
    raise PreconditionError(f"unknown ring tag {tag!r}")


def _read_input(name: str) -> str:
    """A path on disk, or the name of a bundled fixture (with or without extension)."""
    path = Path(name)
    if path.is_file():
        return path.read_text()
    for candidate in (name, name + ".txt", name + ".json"):
        try:
            return fixture_text(candidate)
        except PreconditionError:
            continue
    raise PreconditionError(f"no file or bundled fixture named {name!r}")


def _poly(text: str, nvars: int, tag: str) -> SparsePoly:
    """Parse over the ring named by ``tag``; ``O-mod-pi`` parses over O and reduces."""
    if tag == "O-mod-pi":
        f = parse_poly(text, nvars, OO)
        return f.map_coefficients(reduce_mod_pi, GF(5))
    return parse_poly(text, nvars, parse_ring(tag))


def _nvars(text: str) -> int:
    found = [int(k) for k in re.findall(r"x(\d+)", text)]
    if not found:
        raise PreconditionError("cannot infer the number of variables; use x0, x1, ... or pass --nvars")
    return max(found) + 1


def _need(payload: dict, *keys: str) -> list:
    missing = [k for k in keys if payload.get(k) is None]
    if missing:
        raise PreconditionError(f"missing required input: {', '.join(missing)}")
    return [payload[k] for k in keys]


def _octic(payload: dict, tag: str) -> SparsePoly:
    """Branch polynomial from ``poly`` or from an arrangement file of linear factors."""
    if payload.get("file"):
        arr = parse_arrangement(_read_input(payload["file"]), parse_ring(tag) if tag != "O-mod-pi" else OO)
        W = SparsePoly.constant(1, 4, arr.ring)
        unit = [tuple(int(i == j) for j in range(4)) for i in range(4)]
        for f in arr.forms:
            W = W * SparsePoly(4, arr.ring, dict(zip(unit, f)))
        return W
    (text,) = _need(payload, "poly")
    return _poly(text, payload.get("nvars") or _nvars(text), tag)


def _action(payload: dict) -> DiagonalAction:
    d, weights = _need(payload, "d", "weights")
    if isinstance(weights, str):
        try:
            weights = [int(w) for w in weights.split(",") if w.strip()]
        except ValueError:
            raise PreconditionError(f"weights must be a comma list of integers, got {weights!r}") from None
    return DiagonalAction(int(d), weights)


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------


def _do_beta(s: Scenario) -> Report:
    text, m = _need(s.payload, "poly", "m")
    h = HypersurfaceInput(_poly(text, s.payload.get("nvars") or _nvars(text), s.ring))
    value = beta(h, int(m))
    return Report([f"beta_{m} = {value}"], {"m": int(m), "beta": str(value)})


def _do_beta_double(s: Scenario) -> Report:
    (p,) = _need(s.payload, "p")
    W = _octic(s.payload, s.ring)
    value = beta_double(DoubleCoverInput(W), int(p))
    data = {"p": int(p), "beta": str(value)}
    line = str(value)
    if W.ring == OO and int(p) == 5:
        red = reduce_mod_pi(value)
        data["mod_pi"] = int(red)
        line += f" (reduces to {int(red)} mod pi)"
    return Report([line], data)


def _do_ordinary(s: Scenario) -> Report:
    (p,) = _need(s.payload, "p")
    p = int(p)
    if s.payload.get("double") or s.payload.get("file"):
        inp = DoubleCoverInput(_octic(s.payload, s.ring))
    else:
        (text,) = _need(s.payload, "poly")
        inp = HypersurfaceInput(_poly(text, s.payload.get("nvars") or _nvars(text), s.ring))
    v = ordinary_test(inp, p, s.payload.get("root"))
    word = "ordinary" if v else "not ordinary"
    return Report(
        [f"{word}: beta_{p} = {v.value}, reduction {v.witness}"],
        {"p": p, "ordinary": v.ordinary, "beta": str(v.value), "reduction": int(v.witness)},
    )


def _log_from_payload(s: Scenario, T: int) -> LogSeries:
    pl = s.payload
    kind = pl.get("log", "poly" if pl.get("poly") else None)
    if kind == "multiplicative":
        return LogSeries.multiplicative(T)
    if kind == "additive":
        return LogSeries.additive(T)
    if kind == "betas":
        (betas,) = _need(pl, "betas")
        if isinstance(betas, str):
            betas = [int(b) for b in betas.split(",")]
        return LogSeries(betas)
    if kind == "poly":
        (text,) = _need(pl, "poly")
        if s.ring != "Z":
            raise PreconditionError("hypersurface logarithms need integer coefficients (ring Z)")
        return log_series(HypersurfaceInput(_poly(text, pl.get("nvars") or _nvars(text), "Z")), T)
    raise PreconditionError("choose a logarithm: log = multiplicative | additive | betas | poly")


def _do_height(s: Scenario) -> Report:
    (p,) = _need(s.payload, "p")
    p = int(p)
    h_max = int(s.payload.get("h_max") or (3 if p <= 3 else 2))
    T = p**h_max + 1
    l = _log_from_payload(s, T)
    res = height(l, p, h_max)
    return Report([f"height at p={p}: {res}"], {"p": p, "h_max": h_max, "height": res.value, "text": str(res)})


def _do_frob_log(s: Scenario) -> Report:
    (p,) = _need(s.payload, "p")
    p = int(p)
    T = int(s.payload.get("T") or 3 * p)
    l = _log_from_payload(s, T)
    fl = frob_on_log(l, p)
    betas = [None if b is None else str(b) for b in fl.betas]
    shown = " ".join("?" if b is None else b for b in betas)
    return Report([f"l(F tau) betas: {shown}", f"linear coefficient beta_{p} = {betas[0]}"], {"p": p, "betas": betas})


def _do_molien(s: Scenario) -> Report:
    a = _action(s.payload)
    n = int(s.payload.get("to", 10))
    c = molien(a, n)
    return Report([" ".join(map(str, c))], {"d": a.d, "weights": list(a.weights), "coefficients": c})


def _names(s: Scenario, a: DiagonalAction) -> list[str]:
    start = int(s.payload.get("start", 0))
    return [f"X{i + start}" for i in range(a.nvars)]


def _do_invariants(s: Scenario) -> Report:
    a = _action(s.payload)
    (deg,) = _need(s.payload, "degree")
    names = _names(s, a)
    mons = [format_monomial(e, names) for e in invariant_monomials(a, int(deg))]
    return Report([", ".join(mons) or "(none)"], {"degree": int(deg), "monomials": mons})


def _do_generated(s: Scenario) -> Report:
    a = _action(s.payload)
    deg, gmax = _need(s.payload, "degree", "gen_max")
    names = _names(s, a)
    lo, hi = (int(deg), int(s.payload.get("degree_to") or deg))
    lines, data = [], {}
    for n in range(lo, hi + 1):
        bad = [format_monomial(e, names) for e in generated_check(a, n, int(gmax))]
        data[str(n)] = bad
        lines.append(f"degree {n}: " + (", ".join(bad) if bad else "all generated"))
    return Report(lines, {"gen_max": int(gmax), "not_generated": data})


def _do_fixed_points(s: Scenario) -> Report:
    a = _action(s.payload)
    names = _names(s, a)
    comps = fixed_points(a)
    lines = []
    for c in comps:
        kind = "point" if len(c) == 1 else f"P^{len(c) - 1}"
        lines.append(f"{kind}: span of {', '.join(names[i] for i in c)}")
    return Report(lines, {"components": [list(c) for c in comps]})


def _do_freeness(s: Scenario) -> Report:
    a = _action(s.payload)
    (text,) = _need(s.payload, "poly")
    f = _poly(text, a.nvars, s.ring)
    res = freeness_check(f, a)
    start = int(s.payload.get("start", 0))
    bad = [f"e{i + start}" for i in res.violations]
    line = "free" if res else "not free: vanishes at " + ", ".join(bad)
    return Report([line], {"free": res.free, "violations": list(res.violations)})


def _do_tate_oort(s: Scenario) -> Report:
    (p,) = _need(s.payload, "p")
    rep = verify_axioms(int(p), strict=False)
    if not rep.passed:
        raise CrossCheckError("; ".join(rep.lines()))
    return Report([f"p = {p}"] + rep.lines(), {"p": int(p), "results": rep.results})


def _do_arrangement(s: Scenario) -> Report:
    (name,) = _need(s.payload, "file")
    arr = parse_arrangement(_read_input(name), parse_ring(s.ring))
    rep = incidence(arr)
    data = rep.to_dict()
    c = rep.counts()
    lines = [f"{k.replace('_', ' ')}: {v}" for k, v in c.items()]
    for pt in rep.points_of(4) + rep.points_of(5):
        coords = ", ".join(str(x) for x in pt.coords)
        lines.append(f"{pt.multiplicity}-fold point ({coords}) on planes {sorted(pt.planes)}")
    if s.payload.get("points"):
        pts = _parse_points(_read_input(s.payload["points"]), arr.ring)
        mult = verify_points(arr, pts)
        data["verified_points"] = mult
        lines.append("listed points, multiplicities: " + " ".join(map(str, mult)))
    return Report(lines, data)


def _parse_points(text: str, ring: Ring) -> list[tuple]:
    pts = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [x for x in re.split(r"[,\s]+", line.strip("() ")) if x]
        if len(parts) != 4:
            raise PreconditionError(f"a point needs four coordinates: {raw!r}")
        pts.append(tuple(parse_poly(x, 0, ring).coeff(()) for x in parts))
    return pts


def _do_reduce_compare(s: Scenario) -> Report:
    name, p = _need(s.payload, "file", "p")
    arr = parse_arrangement(_read_input(name), parse_ring(s.ring))
    res = reduction_compare(arr, int(p), s.payload.get("root"))
    line = "same incidence after reduction" if res else "incidence changes after reduction"
    return Report(
        [line] + [f"lost {x}" for x in res.only_before] + [f"gained {x}" for x in res.only_after],
        {"same": res.same, "only_before": [list(x) for x in res.only_before], "only_after": [list(x) for x in res.only_after]},
    )


def _do_hodge(s: Scenario) -> Report:
    (name,) = _need(s.payload, "scenario")
    try:
        doc = json.loads(_read_input(name))
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"scenario is not valid JSON: {exc}") from None
    d = derive(doc)
    return Report(d.lines(), d.to_dict())


def _do_root_lift(s: Scenario) -> Report:
    text, root = _need(s.payload, "poly", "root")
    R = parse_ring(s.ring)
    if not isinstance(R, DualNumbers):
        raise PreconditionError("root-lift needs a dual-number ring, e.g. dual(Fp(5),2)")
    f = parse_poly(text, 1, R.base, names=("x",))
    coeffs = [f.coeff((k,)) for k in range(f.total_degree() + 1)]
    r = parse_poly(root, 0, R).coeff(())
    where = None
    if s.payload.get("residue") is not None:
        if R.base != OO:
            raise PreconditionError("a residue constraint needs base ring O")
        want = int(s.payload["residue"]) % 5
        where = lambda c: reduce_mod_pi(c) == want  # noqa: E731
    lifts = sorted(root_lift(coeffs, r, where), key=str)
    shown = [str(x) for x in lifts]
    line = f"{len(lifts)} lift(s) to {R.base.tag}[eps]/eps^{R.n + 1}" + (": " + ", ".join(shown) if shown else " (obstructed)")
    return Report([line], {"lifts": shown, "obstructed": not lifts})


HANDLERS: dict[str, Callable[[Scenario], Report]] = {
    "beta": _do_beta,
    "beta-double": _do_beta_double,
    "ordinary": _do_ordinary,
    "height": _do_height,
    "frob-log": _do_frob_log,
    "molien": _do_molien,
    "invariants": _do_invariants,
    "generated": _do_generated,
    "fixed-points": _do_fixed_points,
    "freeness": _do_freeness,
    "tate-oort": _do_tate_oort,
    "arrangement": _do_arrangement,
    "reduce-compare": _do_reduce_compare,
    "hodge": _do_hodge,
    "root-lift": _do_root_lift,
}


# Bundled reproductions: (citation tag, scenario).  Each output line of the
# suite is prefixed with its tag unless the handler already tags its lines.
SUITE: tuple[tuple[str, Scenario], ...] = (
    ("Stienstra", Scenario("beta-double", "O", {"file": "cvs_octic", "p": 5})),
    ("Stienstra", Scenario("height", "Z", {"log": "poly", "poly": "x0^3+x1^3+x2^3", "p": 2, "h_max": 3})),
    ("Molien", Scenario("molien", "Z", {"d": 5, "weights": "1,2,3,4", "to": 7})),
    ("Molien", Scenario("molien", "Z", {"d": 5, "weights": "0,1,2,3,4", "to": 5})),
    ("invariant theory", Scenario("invariants", "Z", {"d": 5, "weights": "1,2,3,4", "degree": 2, "start": 1})),
    ("invariant theory", Scenario("invariants", "Z", {"d": 5, "weights": "1,2,3,4", "degree": 3, "start": 1})),
    ("invariant theory", Scenario("invariants", "Z", {"d": 5, "weights": "1,2,3,4", "degree": 4, "start": 1})),
    ("invariant theory", Scenario("generated", "Z", {"d": 5, "weights": "1,2,3,4", "degree": 6, "degree_to": 12, "gen_max": 5, "start": 1})),
    ("invariant theory", Scenario("freeness", "Z", {"d": 5, "weights": "0,1,2,3,4", "poly": "x0^5+x1^5+x2^5+x3^5+x4^5"})),
    ("Tate-Oort", Scenario("tate-oort", "Z", {"p": 5})),
    ("Cynk-van Straten", Scenario("arrangement", "O", {"file": "cvs_octic", "points": "cvs_points"})),
    ("Cynk-van Straten", Scenario("reduce-compare", "O", {"file": "cvs_octic", "p": 5})),
    ("deformation lifting", Scenario("root-lift", "dual(Fp(5),2)", {"poly": "x^2+x-1", "root": "2+eps"})),
    ("deformation lifting", Scenario("root-lift", "dual(O,1)", {"poly": "x^2+x-1", "root": "A", "residue": 1})),
    ("", Scenario("hodge", "Z", {"scenario": "godeaux"})),
    ("", Scenario("hodge", "Z", {"scenario": "cvs5"})),
    ("", Scenario("hodge", "Z", {"scenario": "cvs3"})),
    ("", Scenario("hodge", "Z", {"scenario": "hirokado"})),
)


def run_suite() -> tuple[str, int]:
    """Run every bundled reproduction; the worst exit code wins."""
    out, worst = [], EXIT_OK
    for tag, sc in SUITE:
        text, code = dispatch(sc)
        worst = max(worst, code)
        out.append(f"## {sc.subcommand} " + " ".join(f"{k}={v}" for k, v in sorted(sc.payload.items())))
        for line in text.splitlines():
            out.append(f"{line}  [{tag}]" if tag else line)
    return "\n".join(out), worst


def dispatch(s: Scenario) -> tuple[str, int]:
    """Validate and run one scenario; returns (output, exit code)."""
    try:
        jsonschema.validate(s.as_dict(), SCENARIO_SCHEMA)
    except jsonschema.ValidationError as exc:
        return f"error: malformed scenario: {exc.message}", EXIT_MALFORMED
    try:
        report = HANDLERS[s.subcommand](s)
    except CrossCheckError as exc:
        return f"internal cross-check failed: {exc}", EXIT_CROSSCHECK
    except (RuleRefused, DegenerateReductionError) as exc:
        return f"refused: {exc}", EXIT_REFUSED
    except (CyArithError, ValueError, TypeError, ArithmeticError) as exc:
        return f"error: {exc}", EXIT_MALFORMED
    return report.render(s.format, s.subcommand), EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

_ARGS = {
    "beta": ["poly", "m", "nvars"],
    "beta-double": ["poly", "file", "p", "nvars"],
    "ordinary": ["poly", "file", "p", "nvars", "root", "double"],
    "height": ["log", "poly", "betas", "p", "h_max", "nvars"],
    "frob-log": ["log", "poly", "betas", "p", "T", "nvars"],
    "molien": ["d", "weights", "to"],
    "invariants": ["d", "weights", "degree", "start"],
    "generated": ["d", "weights", "degree", "degree_to", "gen_max", "start"],
    "fixed-points": ["d", "weights", "start"],
    "freeness": ["d", "weights", "poly", "start"],
    "tate-oort": ["p"],
    "arrangement": ["file", "points"],
    "reduce-compare": ["file", "p", "root"],
    "hodge": ["scenario"],
    "root-lift": ["poly", "root", "residue"],
}

_DEFAULT_RING = {"beta-double": "O", "arrangement": "O", "reduce-compare": "O", "root-lift": "dual(Fp(5),2)"}

_INT_ARGS = {"m", "p", "nvars", "h_max", "T", "d", "to", "degree", "degree_to", "gen_max", "start", "root", "residue"}

_HELP = {
    "poly": "polynomial literal",
    "file": "path or bundled fixture name (e.g. cvs_octic)",
    "points": "file of points to check, one per line",
    "weights": "comma list of weights",
    "log": "multiplicative | additive | betas | poly",
    "betas": "comma list beta_1,..,beta_T",
    "scenario": "bundled scenario name (godeaux, cvs5, cvs3, hirokado) or JSON path",
    "double": "treat the input as a double-cover branch polynomial",
    "root": "root of x^2+x-1 mod p selecting the prime above p; for root-lift the root literal",
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cyarith", description="Exact arithmetic for Calabi-Yau threefolds.")
    ap.add_argument("--version", action="version", version=f"cyarith {__version__}")
    sub = ap.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("suite", help="run the bundled fixture reproductions")
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--ring", default=_DEFAULT_RING.get(name, "Z"), help="Z, O, O-mod-pi, Fp(p), dual(R,n)")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        for arg in _ARGS[name]:
            flag = "--" + arg.replace("_", "-")
            if arg == "double":
                sp.add_argument(flag, action="store_true", help=_HELP[arg])
            elif arg == "root" and name == "root-lift":
                sp.add_argument(flag, help=_HELP[arg])
            elif arg in _INT_ARGS:
                sp.add_argument(flag, type=int, dest=arg)
            else:
                sp.add_argument(flag, dest=arg, help=_HELP.get(arg))
    return ap


def scenario_from_args(ns: argparse.Namespace) -> Scenario:
    payload = {k: getattr(ns, k) for k in _ARGS[ns.subcommand] if getattr(ns, k, None) not in (None, False)}
    return Scenario(ns.subcommand, ns.ring, payload, ns.format)


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    if list(argv[:1]) == ["suite"]:
        out, code = run_suite()
        print(out)
        return code
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    out, code = dispatch(scenario_from_args(ns))
    stream = sys.stdout if code == EXIT_OK else sys.stderr
    print(out, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
