from __future__ import annotations

import pytest

from cyarith.errors import PreconditionError
from cyarith.tate_oort import NAMES, S, T, X1, X2, TOContext, verify_axioms


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_all_axioms_pass(p):
    rep = verify_axioms(p)
    assert rep.passed
    assert {"associativity", "identity", "inverse", "closure"} <= set(rep.results)


def test_report_lines_show_inverse():
    lines = verify_axioms(3).lines()
    assert any(line.startswith("inverse: pass (y = ") for line in lines)


def test_reduce_applies_both_relations():
    ctx = TOContext(5)
    x, s, t = ctx.var(X1), ctx.var(S), ctx.var(T)
    assert ctx.reduce(x**5) == ctx.reduce(s * x)
    assert ctx.reduce(x**9) == ctx.reduce(s * s * x)
    assert not ctx.reduce(s * t * x)


def test_wrong_law_is_caught():
    # a + b + ab ignores t; (a+b+ab)^p - S(a+b+ab) leaves (S^2 - S) ab
    ctx = TOContext(5)
    x1, x2, s = ctx.var(X1), ctx.var(X2), ctx.var(S)
    bad = ctx.reduce(x1 + x2 + x1 * x2)
    residue = ctx.on_scheme(bad)
    assert residue == ctx.reduce(s * s * x1 * x2 - s * x1 * x2)
    assert "S^2*x1*x2" in residue.format(NAMES)


def test_wrong_inverse_is_caught():
    ctx = TOContext(3)
    x1 = ctx.var(X1)
    assert ctx.law(x1, -x1)  # -x is only the inverse when t = 0
    assert not ctx.law(x1, ctx.inverse(x1))


def test_composite_p_rejected():
    with pytest.raises(PreconditionError):
        verify_axioms(4)
