from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cyarith.errors import PreconditionError, RuleRefused
from cyarith.hodge_ledger import (
    TAGS,
    AbelianGroup,
    CohomologyProfile,
    HodgeDiamond,
    SSGrid,
    Trail,
    betti_from_hodge,
    caruso_dim,
    cyclic_homology,
    deligne_illusie_rule,
    derive,
    euler_char,
    fixture_text,
    mod_p_betti,
    run_conjugate_ss,
    supersingularity_rule,
    uct_hodge,
    w2_rule,
)

small = st.integers(0, 120)


@given(small, small)
def test_cy_diamond_invariants(h11, h21):
    d = HodgeDiamond.cy(h11, h21)
    assert all(d[p, q] == d[3 - p, 3 - q] for p in range(4) for q in range(4))
    assert euler_char(d) == 2 * (h11 - h21)
    b = betti_from_hodge(d)
    assert b == (1, 0, h11, 2 * h21 + 2, h11, 0, 1)
    assert sum((-1) ** i * x for i, x in enumerate(b)) == euler_char(d)


@given(small, small)
def test_uct_between_equal_diamonds_finds_no_torsion(h11, h21):
    d = HodgeDiamond.cy(h11, h21)
    assert uct_hodge(d, d).placement == frozenset()


def test_diamond_validation():
    with pytest.raises(PreconditionError):
        HodgeDiamond([[1, 0, 0, 1], [0, 2, 1, 0], [0, 0, 2, 0], [1, 0, 0, 1]], strict_cy=True)
    with pytest.raises(PreconditionError):
        HodgeDiamond.cy(5, 5, h10=-1)
    # h^{0,1} = dim H^1(O) must vanish for a strict CY, h^{1,0} need not
    with pytest.raises(PreconditionError):
        HodgeDiamond([[1, 1, 0, 1], [0, 5, 5, 0], [0, 5, 5, 0], [1, 0, 1, 1]], strict_cy=True)
    assert HodgeDiamond.cy(5, 5, h10=1)[1, 0] == 1


def test_euler_characteristics():
    assert euler_char(HodgeDiamond.cy(1, 101)) == -200
    assert euler_char(HodgeDiamond.cy(1, 21)) == -40


def profile(**kw):
    base = dict(name="X", p=5, e=2, betti=(1, 0, 38, 2, 38, 0, 1), mod_p=(1, 0, 38, 2, 38, 0, 1), w2_liftable=False)
    base.update(kw)
    return CohomologyProfile(**base)


def test_caruso_boundary():
    pr = profile()
    assert caruso_dim(pr, 1) == 0  # 1*2 = 2 < 4
    with pytest.raises(RuleRefused):
        caruso_dim(pr, 2)  # 2*2 = 4 is not < 4
    pr1 = profile(e=1)
    assert caruso_dim(pr1, 3) == 2
    with pytest.raises(RuleRefused):
        caruso_dim(pr1, 4)


def test_profile_rejects_inconsistent_data():
    with pytest.raises(PreconditionError):
        profile(betti=(1, 0, 38, 2, 37, 0, 1))
    with pytest.raises(PreconditionError):
        profile(mod_p=(1, 0, 37, 2, 38, 0, 1))
    with pytest.raises(PreconditionError):
        profile(ordinary=True, w2_liftable=False)
    with pytest.raises(PreconditionError):
        profile(p=6)


def test_rule_hypotheses():
    trail = Trail()
    assert len(w2_rule(profile(), trail)) == 2
    assert all(TAGS["w2"] in line for line in trail.lines())
    with pytest.raises(RuleRefused):
        w2_rule(profile(w2_liftable=True))
    with pytest.raises(RuleRefused):
        deligne_illusie_rule(profile(w2_liftable=True, p=3))
    assert deligne_illusie_rule(profile(w2_liftable=True, p=7))
    assert supersingularity_rule(profile()) == "supersingular"
    with pytest.raises(RuleRefused):
        supersingularity_rule(profile(w2_liftable=None))


def test_cyclic_group_homology():
    assert str(cyclic_homology(5, 0)) == "Z"
    assert str(cyclic_homology(5, 1)) == "Z/5"
    assert str(cyclic_homology(5, 2)) == "0"
    assert cyclic_homology(5, 3) == AbelianGroup(0, (5,))
    assert str(cyclic_homology(1, 3)) == "0"


def test_mod_p_betti_from_torsion():
    # Godeaux-type quotient: Z/5 in H^2 and dually H^5 raises H^1, H^2, H^4, H^5 by one
    assert mod_p_betti((1, 0, 1, 44, 1, 0, 1), (0, 0, 1, 0, 0, 1, 0)) == (1, 1, 2, 44, 2, 1, 1)


def test_conjugate_ss_forced_and_unforced_marks():
    d = HodgeDiamond.cy(39, 1)
    g = SSGrid.from_diamond(d)
    g.mark((1, 1), 1, (3, 0))
    res = run_conjugate_ss(g)
    assert res.dims[2:5] == (38, 3, 39)
    E = [[1, 0, 0, 0], [0, 3, 0, 0], [0, 0, 3, 0], [2, 0, 0, 1]]
    g2 = SSGrid(E)
    g2.mark((1, 1), 1)
    res2 = run_conjugate_ss(g2)
    assert res2.dims[2] is None and res2.dims[3] is None  # rank 1 below both ends: only a lower bound
    assert res2.dims[0] == 1
    with pytest.raises(PreconditionError):
        g.mark((1, 1), 1, (2, 2))


def test_uct_infeasible():
    with pytest.raises(PreconditionError):
        uct_hodge(HodgeDiamond.cy(40, 1), HodgeDiamond.cy(39, 1))


def test_scenarios_carry_tags():
    for name in ("godeaux", "cvs5", "cvs3", "hirokado"):
        d = derive(json.loads(fixture_text(name + ".json")))
        assert d.lines()
        assert all(line.endswith("]") and "  [" in line for line in d.lines())


def test_scenario_schema_rejects_unknown_fields():
    doc = json.loads(fixture_text("cvs5.json"))
    doc["surprise"] = 1
    with pytest.raises(PreconditionError):
        derive(doc)


def test_cvs5_torsion_and_dR():
    f = derive(json.loads(fixture_text("cvs5.json"))).facts
    assert f["dR"] == [1, 0, 38, 2, 38, 0, 1]
    assert f["torsion"] == ["H^2(Omega^1)", "H^2(Omega^2)"]
    assert f["alternating_sum"] == f["generic_euler"] == 76
