from __future__ import annotations

import random
from itertools import combinations

import pytest

from cyarith.arrangement import (
    Arrangement,
    admissible_double_octic,
    incidence,
    parse_arrangement,
    rank,
    reduce_arrangement,
    reduction_compare,
    verify_points,
)
from cyarith.cli import _parse_points
from cyarith.errors import DegenerateReductionError, PreconditionError
from cyarith.hodge_ledger import fixture_text
from cyarith.ring_tower import GF, OO, ZZ, DualNumbers, QuadInt


def cvs():
    return parse_arrangement(fixture_text("cvs_octic.txt"), OO)


def test_rank_matches_fraction_elimination():
    from fractions import Fraction

    rng = random.Random(3)
    for _ in range(50):
        rows = [[rng.randint(-2, 2) for _ in range(4)] for _ in range(rng.randint(1, 4))]
        M = [[Fraction(x) for x in r] for r in rows]
        r = 0
        for c in range(4):
            piv = next((i for i in range(r, len(M)) if M[i][c]), None)
            if piv is None:
                continue
            M[r], M[piv] = M[piv], M[r]
            for i in range(len(M)):
                if i != r and M[i][c]:
                    f = M[i][c] / M[r][c]
                    M[i] = [a - f * b for a, b in zip(M[i], M[r])]
            r += 1
        assert rank(rows, ZZ) == r


def test_generic_eight_planes():
    rng = random.Random(11)
    while True:
        forms = [[rng.randint(-20, 20) for _ in range(4)] for _ in range(8)]
        if all(rank([forms[i] for i in c], ZZ) == min(len(c), 4) for k in (2, 3, 4) for c in combinations(range(8), k)):
            break
    rep = incidence(Arrangement(forms, ZZ))
    c = rep.counts()
    assert c["double_lines"] == 28 and c["triple_lines"] == 0
    assert c["triple_points"] == 56 and c["fourfold_points"] == 0
    assert admissible_double_octic(rep)


def test_coordinate_planes():
    rep = incidence(parse_arrangement("x\ny\nz\nt", ZZ))
    assert len(rep.double_lines) == 6
    assert len(rep.points_of(3)) == 4


def test_pencil_gives_a_multiple_line():
    rep = incidence(parse_arrangement("x\ny\nx+y\nx-y\nz\nt", ZZ))
    assert rep.lines_of(4) == [frozenset({0, 1, 2, 3})]
    assert not admissible_double_octic(rep, plane_count=None)


def test_six_planes_through_a_point():
    rep = incidence(parse_arrangement("x\ny\nz\nx+y\ny+z\nx+y+z\nt", ZZ))
    assert [p.multiplicity for p in rep.points_of(6)] == [6]
    assert "points_of_6_or_more" in rep.counts()


def test_cvs_octic():
    arr = cvs()
    rep = incidence(arr)
    c = rep.counts()
    assert (c["double_lines"], c["triple_lines"], c["fourfold_points"], c["fivefold_points"]) == (28, 0, 9, 0)
    assert admissible_double_octic(rep)
    assert verify_points(arr, _parse_points(fixture_text("cvs_points.txt"), OO)) == [4] * 9


def test_listed_point_with_inverted_fraction_is_not_fourfold():
    # (1, 1, A/(A-2), 1) cleared of denominators lies on only two planes;
    # the fourfold point there is (1, 1, (A-2)/A, 1) ~ (A, A, A-2, A).
    A = QuadInt(0, 1)
    assert verify_points(cvs(), [(A - 2, A - 2, A, A - 2)]) == [2]
    assert verify_points(cvs(), [(A, A, A - 2, A)]) == [4]


def test_unimodular_change_preserves_combinatorics():
    arr = cvs()
    g = [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, -1], [0, 0, 0, 1]]  # det 1
    moved = [[sum(f[i] * g[i][j] for i in range(4)) for j in range(4)] for f in arr.forms]
    before, after = incidence(arr), incidence(Arrangement(moved, OO))
    assert before.strata() == after.strata()


def test_reduction_mod_pi_preserves_incidence():
    assert reduction_compare(cvs(), 5)


def test_reduction_collision_refused():
    # x - t and x - (1 + pi) t coincide mod pi
    arr = parse_arrangement("x - t\nx - (2 + 2A) t\ny\nz", OO)
    with pytest.raises(DegenerateReductionError):
        reduce_arrangement(arr, 5)


def test_reduction_can_change_strata():
    # over Z these are generic, mod 2 three of them share a line
    arr = parse_arrangement("x\ny\nx+3y\nz\nt\nx+y+z+t", ZZ)
    res = reduction_compare(arr, 2)
    assert not res and res.only_after


def test_input_validation():
    with pytest.raises(PreconditionError):
        parse_arrangement("x\n2x", ZZ)
    with pytest.raises(PreconditionError):
        Arrangement([[0, 0, 0, 0]], ZZ)
    with pytest.raises(PreconditionError):
        verify_points(cvs(), [(0, 0, 0, 0)])
    with pytest.raises(PreconditionError):
        Arrangement([[1, 0, 0, 0]], DualNumbers(GF(5), 2))


def test_product_line_form():
    arr = parse_arrangement("(x-t)(x+t)(y-t)(y+t)", OO)
    assert len(arr) == 4
