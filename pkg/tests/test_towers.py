import random
from fractions import Fraction

import mpmath as mp
import pytest

from abeldiff.errors import (ContextMismatch, NotInvertible, NotSquareFree,
                             ZeroDivision)
from abeldiff.polys import BPoly, UPoly
from abeldiff.towers import TowerContext, adjoin, eval_bpoly

SQRT2 = UPoly([-2, 0, 1])
SQRT3 = UPoly([-3, 0, 1])
CUBE3 = UPoly([-3, 0, 0, 1])
CUBIC_F = BPoly({(3, 0): 1, (0, 3): -1, (1, 1): 2, (1, 0): 1, (0, 1): -2, (0, 0): 1})


def test_adjoin_square_root():
    ctx, r2 = adjoin(TowerContext(), SQRT2, 1)
    assert (r2 * r2) == 2
    assert ((r2 + 1) * (r2 - 1)) == 1


def test_adjoin_cube_root():
    ctx, c = adjoin(TowerContext(), CUBE3, 2)  # the real cube root
    assert c ** 3 == 3


def test_two_generators_multiply():
    ctx = TowerContext()
    ctx, r2 = adjoin(ctx, SQRT2, 1)
    ctx, r3 = adjoin(ctx, SQRT3, 1)
    prod = r2 * r3
    assert prod * prod == 6


def test_arithmetic_roundtrip():
    ctx = TowerContext()
    ctx, r2 = adjoin(ctx, SQRT2, 1)
    ctx, r3 = adjoin(ctx, SQRT3, 0)
    a = 2 * r2 - r3 + Fraction(1, 3)
    b = r2 * r3 - 5
    assert (a + b) - b == a
    assert a * (b + 1) == a * b + a


def test_ring_axioms_randomized():
    ctx = TowerContext()
    ctx, r2 = adjoin(ctx, SQRT2, 1)
    ctx, c3 = adjoin(ctx, CUBE3, 2)
    rng = random.Random(4)

    def rand_elt():
        e = ctx.constant(rng.randint(-3, 3))
        for g in (r2, c3):
            e = e + rng.randint(-2, 2) * g + rng.randint(-2, 2) * g * g
        return e

    for _ in range(10):
        a, b, c = rand_elt(), rand_elt(), rand_elt()
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a


def test_invert_sqrt2():
    ctx, r2 = adjoin(TowerContext(), SQRT2, 1)
    inv = r2.invert()
    assert inv == r2 / 2
    assert r2 * inv == 1


def test_invert_one_and_rationals():
    ctx = TowerContext()
    ctx, r2 = adjoin(ctx, SQRT2, 1)
    assert ctx.one.invert() == 1
    assert (ctx.constant(Fraction(3, 7))).invert() == Fraction(7, 3)


def test_invert_random_elements_in_tower():
    ctx = TowerContext()
    ctx, r2 = adjoin(ctx, SQRT2, 1)
    ctx, c3 = adjoin(ctx, CUBE3, 2)
    rng = random.Random(11)
    for _ in range(8):
        e = ctx.constant(rng.randint(1, 3)) + rng.randint(-2, 2) * r2 \
            + rng.randint(-2, 2) * c3 + rng.randint(-1, 1) * r2 * c3
        if e.is_zero():
            continue
        assert e * e.invert() == 1


def test_not_invertible_witness():
    # Q[t]/(y^2 - 1) is reducible; t - 1 is a zero divisor
    ctx, t = adjoin(TowerContext(), UPoly([-1, 0, 1]), 0)
    with pytest.raises(NotInvertible) as exc:
        (t - 1).invert()
    assert exc.value.modulus_index == 0
    assert exc.value.factor == UPoly([-1, 1])  # witness: y - 1


def test_invert_zero_raises():
    ctx, r2 = adjoin(TowerContext(), SQRT2, 1)
    with pytest.raises(ZeroDivision):
        ctx.zero.invert()
    with pytest.raises(ZeroDivision):
        (r2 - r2).invert()


def test_is_zero_basic():
    ctx, r2 = adjoin(TowerContext(), SQRT2, 1)
    assert ctx.zero.is_zero()
    assert (r2 * r2 - 2).is_zero()
    assert not (r2 - 1).is_zero()


def test_is_zero_semantic_fallback():
    # two generators bound to the *same* root: t1 - t2 is syntactically
    # nonzero but embeds to zero
    ctx = TowerContext()
    ctx, a = adjoin(ctx, SQRT2, 1)
    ctx, b = adjoin(ctx, SQRT2, 1)
    d = a - b
    assert bool(d)          # nonzero in the ring
    assert d.is_zero()      # zero under the embedding
    assert not (a + b).is_zero()
    with pytest.raises(ZeroDivision):
        d.invert()


def test_context_mismatch():
    _, r2 = adjoin(TowerContext(), SQRT2, 1)
    _, other = adjoin(TowerContext(), SQRT2, 1)
    with pytest.raises(ContextMismatch):
        r2 + other


def test_adjoin_requires_squarefree():
    with pytest.raises(NotSquareFree):
        adjoin(TowerContext(), UPoly([0, 0, 1]), 0)


def test_approximate_sqrt2():
    _, r2 = adjoin(TowerContext(), SQRT2, 1)
    v = r2.approximate(10)
    with mp.workdps(30):
        assert abs(v - mp.sqrt(2)) < mp.mpf(10) ** -10


def test_approximate_real_cubic_root():
    ctx, y = adjoin(TowerContext(), UPoly([-1, 2, 0, 1]), 2)  # real root
    v = y.approximate(5)
    assert abs(v.real - mp.mpf("0.45340")) < 1e-4
    assert abs(v.imag) < 1e-5


def test_approximate_rational():
    ctx = TowerContext()
    v = ctx.constant(Fraction(3, 7)).approximate(3)
    assert abs(v.real - mp.mpf(3) / 7) < 1e-3


def test_approximate_consistency_under_doubling():
    ctx = TowerContext()
    ctx, r2 = adjoin(ctx, SQRT2, 0)
    ctx, c3 = adjoin(ctx, CUBE3, 0)
    e = 3 * r2 * c3 - Fraction(7, 5) * c3 + 1
    v1 = e.approximate(20)
    v2 = e.approximate(40)
    with mp.workdps(60):
        assert abs(mp.mpc(v1) - mp.mpc(v2)) < 2 * mp.mpf(10) ** -20


def test_eval_bpoly_on_curve_root():
    sec = CUBIC_F.subs_x(Fraction(0))
    ctx, y1 = adjoin(TowerContext(), sec.monic(), 0)
    assert eval_bpoly(CUBIC_F, 0, y1).is_zero()


def test_eval_bpoly_affine():
    ctx, r2 = adjoin(TowerContext(), SQRT2, 1)
    p = BPoly({(1, 0): 1, (0, 1): 1})
    assert eval_bpoly(p, 1, r2) == r2 + 1


def test_eval_bpoly_cube_root_section():
    # f(1, y) = -y^3 + 3 vanishes at the cube roots of 3
    ctx, c = adjoin(TowerContext(), CUBE3, 0)
    assert eval_bpoly(CUBIC_F, 1, c).is_zero()


def test_concurrent_refinement_is_consistent():
    from concurrent.futures import ThreadPoolExecutor

    ctx = TowerContext()
    ctx, r2 = adjoin(ctx, SQRT2, 1)
    ctx, c3 = adjoin(ctx, CUBE3, 2)
    e = 3 * r2 * c3 - 7
    with ThreadPoolExecutor(6) as ex:
        vals = list(ex.map(lambda k: e.approximate(25 + 5 * (k % 3)), range(12)))
    with mp.workdps(50):
        ref = mp.mpc(e.approximate(35))
        assert all(abs(mp.mpc(v) - ref) < mp.mpf(10) ** -20 for v in vals)


def test_serialization_shape():
    ctx, r2 = adjoin(TowerContext(), SQRT2, 1)
    doc = (r2 + Fraction(1, 3)).serialize(digits=12)
    assert doc["generators"][0]["modulus_int_coeffs"] == ["-2", "0", "1"]
    assert doc["generators"][0]["root_index"] == 1
    assert ["re" in doc["decimal"], "im" in doc["decimal"]] == [True, True]
    coeffs = dict((tuple(k), v) for k, v in doc["coefficients"])
    assert coeffs[()] == "1/3"
    assert coeffs[(1,)] == "1"
