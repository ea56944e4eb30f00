from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import dense_mul, dense_pow

from cyarith.errors import PolyParseError, RingMismatchError
from cyarith.multipoly import SparsePoly, parse_poly, pow_bounded, power_coeff
from cyarith.ring_tower import GF, OO, ZZ, QuadInt


@st.composite
def polys(draw, nvars=None, ring=ZZ):
    n = draw(st.integers(1, 6)) if nvars is None else nvars
    exps = st.lists(st.integers(0, 4), min_size=n, max_size=n).filter(lambda e: sum(e) <= 4)
    terms = draw(st.dictionaries(exps.map(tuple), st.integers(-9, 9), max_size=6))
    return SparsePoly(n, ring, {e: ring(c) for e, c in terms.items()})


@settings(max_examples=250, deadline=None)
@given(st.data())
def test_power_matches_dense_oracle(data):
    f = data.draw(polys())
    m = data.draw(st.integers(0, 4))
    dense = dense_pow(dict(f.terms()), m, f.nvars, 1, 0)
    assert dict((f**m).terms()) == dense
    cap = tuple(data.draw(st.lists(st.integers(0, 8), min_size=f.nvars, max_size=f.nvars)))
    within = lambda e: all(x <= y for x, y in zip(e, cap))  # noqa: E731
    got = {e: c for e, c in pow_bounded(f, m, cap).terms() if within(e)}
    assert got == {e: c for e, c in dense.items() if within(e)}
    for e in list(dense)[:5] + [cap]:
        assert power_coeff(f, m, e) == dense.get(tuple(e), 0)


@given(polys(nvars=3), polys(nvars=3))
def test_product_matches_schoolbook(f, g):
    assert dict((f * g).terms()) == dense_mul(dict(f.terms()), dict(g.terms()), lambda a, b: a + b, lambda a, b: a * b, 0)


@given(polys(nvars=3), polys(nvars=3), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_evaluation_is_a_ring_map(f, g, pt):
    assert (f * g).evaluate(pt) == f.evaluate(pt) * g.evaluate(pt)
    assert (f + g).evaluate(pt) == f.evaluate(pt) + g.evaluate(pt)


@given(polys(nvars=3))
def test_format_parse_roundtrip(f):
    assert parse_poly(f.format(), 3) == f


def test_parse_implicit_multiplication_over_o():
    f = parse_poly("(x-t)(x+A z)", 4, OO, names=("x", "y", "z", "t"))
    assert f.coeff((1, 0, 1, 0)) == QuadInt(0, 1)
    assert f.coeff((0, 0, 0, 2)) == 0
    assert f.coeff((1, 0, 0, 1)) == -1


def test_parse_errors_report_position():
    with pytest.raises(PolyParseError) as err:
        parse_poly("x0 + $", 1)
    assert "5" in str(err.value)
    with pytest.raises(PolyParseError):
        parse_poly("x7", 2)


def test_mixing_rings_fails():
    with pytest.raises(RingMismatchError):
        parse_poly("x0", 1, ZZ) + parse_poly("x0", 1, GF(5))


def test_partial_derivative_and_homogeneity():
    f = parse_poly("x0^3 + 2*x0*x1*x2", 3)
    assert f.partial(0) == parse_poly("3*x0^2 + 2*x1*x2", 3)
    assert f.homogeneous_degree() == 3
    assert parse_poly("x0 + 1", 1).homogeneous_degree() is None
