from __future__ import annotations

import random

import pytest
from oracles import count_projective_points, is_smooth_plane_curve, random_cubic

from cyarith.cli import _octic
from cyarith.errors import PreconditionError
from cyarith.multipoly import parse_poly
from cyarith.ring_tower import GF, OO, QuadInt, reduce_mod_pi
from cyarith.stienstra import (
    DoubleCoverInput,
    HypersurfaceInput,
    beta,
    beta_double,
    double_cover_log,
    log_series,
    ordinary_test,
)

FERMAT_CUBIC = HypersurfaceInput(parse_poly("x0^3+x1^3+x2^3", 3))
FERMAT_QUINTIC = HypersurfaceInput(parse_poly("x0^5+x1^5+x2^5+x3^5+x4^5", 5))


def test_beta_one_is_one():
    assert beta(FERMAT_CUBIC, 1) == 1
    assert beta(FERMAT_QUINTIC, 1) == 1


def test_fermat_cubic_betas_by_hand():
    # [(x0 x1 x2)^2] (x0^3+x1^3+x2^3)^2 = 0, and [(x0 x1 x2)^3] F^3 = 3! = 6
    assert beta(FERMAT_CUBIC, 3) == 0
    assert beta(FERMAT_CUBIC, 4) == 6


def test_beta_of_dwork_pencil_member():
    # F = x0^3+x1^3+x2^3 - 3 x0 x1 x2: beta_2 = [(x0x1x2)] F = -3
    F = HypersurfaceInput(parse_poly("x0^3+x1^3+x2^3-3*x0*x1*x2", 3))
    assert beta(F, 2) == -3


def test_cvs_octic_beta_5():
    W = _octic({"file": "cvs_octic"}, "O")
    value = beta_double(DoubleCoverInput(W), 5)
    assert value == QuadInt(85, 60)
    assert not reduce_mod_pi(value)
    assert not ordinary_test(DoubleCoverInput(W), 5)


def test_double_cover_needs_degree_2n_plus_2():
    with pytest.raises(PreconditionError):
        DoubleCoverInput(parse_poly("x0^4+x1^4+x2^4+x3^4", 4))
    with pytest.raises(PreconditionError):
        beta_double(DoubleCoverInput(parse_poly("x0^6+x1^6+x2^6", 3)), 2)


def test_hypersurface_needs_calabi_yau_degree():
    with pytest.raises(PreconditionError):
        HypersurfaceInput(parse_poly("x0^4+x1^4+x2^4", 3))


def test_double_cover_log_marks_unknown_coefficients():
    W = _octic({"file": "cvs_octic"}, "O")
    l = double_cover_log(DoubleCoverInput(W), 5)
    assert l.betas[0] == 1 and l.betas[4] == QuadInt(85, 60)
    assert all(b is None for b in l.betas[1:4])
    with pytest.raises(PreconditionError):
        l.beta(2)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_ordinary_test_agrees_with_point_counts(p):
    rng = random.Random(p)
    seen = 0
    while seen < 6:
        F = random_cubic(rng, p)
        if not F or not is_smooth_plane_curve(F, p):
            continue
        seen += 1
        a_p = p + 1 - count_projective_points(F, p)
        v = ordinary_test(HypersurfaceInput(F), p)
        assert v.ordinary == (a_p % p != 0)
        assert v.witness == GF(p)(a_p)


def test_singular_cubic_is_detected_by_oracle():
    assert not is_smooth_plane_curve(parse_poly("x0^2*x2 - x1^3", 3, GF(7)), 7)
    assert is_smooth_plane_curve(parse_poly("x0^3+x1^3+x2^3", 3, GF(7)), 7)


def test_log_series_prefix():
    l = log_series(FERMAT_CUBIC, 4)
    assert l.betas == (1, 0, 0, 6)


def test_octic_over_o_uses_split_prime():
    # 11 splits in O; the two primes above it give conjugate reductions
    W = _octic({"file": "cvs_octic"}, "O")
    v3 = ordinary_test(DoubleCoverInput(W), 11, root=3)
    v7 = ordinary_test(DoubleCoverInput(W), 11, root=7)
    assert v3.value == v7.value
    assert int(v3.witness) == (v3.value.a + 3 * v3.value.b) % 11


def test_parse_over_o_of_octic_file_matches_product():
    W = _octic({"file": "cvs_octic"}, "O")
    assert W.homogeneous_degree() == 8 and W.ring == OO
