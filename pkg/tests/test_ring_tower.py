from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cyarith.errors import PreconditionError, RingMismatchError
from cyarith.ring_tower import (
    GF,
    OO,
    PI,
    DualElem,
    DualNumbers,
    FpElem,
    QuadInt,
    parse_quadint,
    reduce_mod_pi,
    reducer,
    root_lift,
)

ints = st.integers(-50, 50)
quads = st.builds(QuadInt, ints, ints)


def test_defining_relation():
    A = QuadInt(0, 1)
    B = QuadInt(-1, -1)
    assert A * A + A - 1 == 0
    assert B * B + B - 1 == 0
    assert A + B == -1 and A * B == -1
    assert PI * PI == 5
    assert PI == 2 * A + 1


@given(quads, quads, quads)
def test_quadint_is_a_commutative_ring(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert (x * y).norm() == x.norm() * y.norm()


@given(quads, quads)
def test_reduction_mod_pi_is_a_ring_map(x, y):
    assert reduce_mod_pi(x * y) == reduce_mod_pi(x) * reduce_mod_pi(y)
    assert reduce_mod_pi(x + y) == reduce_mod_pi(x) + reduce_mod_pi(y)
    assert not reduce_mod_pi(PI * x)


@given(quads, quads.filter(bool))
def test_exact_division_roundtrip(x, y):
    assert (x * y).exact_div(y) == x


def test_reducer_for_split_primes():
    # 11 splits: x^2+x-1 = (x-3)(x-7) mod 11
    for root in (3, 7):
        red = reducer(OO, 11, root)
        assert red(QuadInt(0, 1)) == FpElem(root, 11)
        assert red(QuadInt(2, 3) * QuadInt(-1, 4)) == red(QuadInt(2, 3)) * red(QuadInt(-1, 4))
    with pytest.raises(PreconditionError):
        reducer(OO, 7)  # inert
    with pytest.raises(PreconditionError):
        reducer(OO, 11, 4)


def test_parse_quadint_forms():
    assert parse_quadint("60A+85") == QuadInt(85, 60)
    assert parse_quadint("2*A+1") == PI
    assert parse_quadint("-A") == QuadInt(0, -1)
    assert parse_quadint("B") == QuadInt(-1, -1)
    assert str(QuadInt(85, 60)) == "60A+85"


def test_fp_arithmetic_and_mismatch():
    F7 = GF(7)
    assert F7(3) * F7(5) == F7(1)
    assert F7(3) / F7(3) == F7(1)
    assert F7(3) ** 6 == 1
    with pytest.raises(RingMismatchError):
        FpElem(1, 5) + FpElem(1, 7)


def test_dual_numbers_truncate():
    R = DualNumbers(GF(5), 3)
    e = R.eps
    assert e * e != 0
    assert e * e * e == 0
    assert (1 + e) * (1 - e) == 1 - e * e


def test_root_lift_hensel_case():
    # f'(3) = 6 is a unit mod 7, so exactly one lift at every step
    R = DualNumbers(GF(7), 1)
    r = DualElem([3], R)
    (lift,) = root_lift([-2, 0, 1], r)
    (again,) = root_lift([-2, 0, 1], lift)
    assert again.ring.n == 3


def test_root_lift_obstructions():
    F5 = DualNumbers(GF(5), 2)
    assert root_lift([-1, 1, 1], DualElem([2, 1], F5)) == frozenset()
    O1 = DualNumbers(OO, 1)
    A = DualElem([QuadInt(0, 1)], O1)
    assert root_lift([-1, 1, 1], A, where=lambda c: int(reduce_mod_pi(c)) == 1) == frozenset()
    assert len(root_lift([-1, 1, 1], A)) == 1


def test_root_lift_rejects_non_root():
    with pytest.raises(PreconditionError):
        root_lift([-1, 1, 1], DualElem([1], DualNumbers(GF(5), 1)))
