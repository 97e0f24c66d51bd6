import dataclasses
from fractions import Fraction

import pytest

from abeldiff.curves import Curve, Point
from abeldiff.differentials import (eval_u, first_kind_basis, haupt_eval,
                                    haupt_solve,
                                    monomials_upto, residue_at,
                                    residue_certificates, third_kind,
                                    third_kind_system_naive,
                                    third_kind_system_sym,
                                    unit_circle_pullback,
                                    vandermonde_equivalence, _solve_tower)
from abeldiff.errors import (DegeneratePoints, EvaluationAtPole, MultipleRoots,
                             SameAbscissa)
from abeldiff.linsolve import rank
from abeldiff.polys import BPoly
from abeldiff.towers import TowerContext


def test_first_kind_basis_cubic(cubic):
    basis = first_kind_basis(cubic)
    assert len(basis) == 1
    assert basis.numerators == [BPoly.const(1)]


def test_first_kind_basis_conic(circle):
    assert len(first_kind_basis(circle)) == 0


def test_first_kind_basis_quartic(quartic):
    basis = first_kind_basis(quartic)
    assert [m.terms for m in basis.numerators] == [
        {(0, 0): Fraction(1)}, {(1, 0): Fraction(1)}, {(0, 1): Fraction(1)}]


def test_naive_system_cubic_six_by_six(cubic, cubic_setup):
    _, p1, p2 = cubic_setup
    sys = third_kind_system_naive(cubic, p1, p2)
    assert sys.shape == (6, 6)
    assert sys.labels == [f"c{k}" for k in range(6)]
    vanish = [t for t in sys.row_tags if t[0] == "vanish"]
    residue = [t for t in sys.row_tags if t[0] == "residue"]
    assert len(vanish) == 4 and len(residue) == 2


def test_naive_system_conic_shape(circle, circle_setup):
    _, p1, p2 = circle_setup
    sys = third_kind_system_naive(circle, p1, p2)
    assert sys.shape == (4, 3)


def test_sym_system_matrix_is_rational(cubic, cubic_setup):
    _, p1, p2 = cubic_setup
    sys = third_kind_system_sym(cubic, p1, p2)
    assert sys.shape == (6, 6)
    assert all(isinstance(v, Fraction) for row in sys.matrix for v in row)
    # right-hand sides live in the single-generator subrings of the poles
    for rhs in sys.rhs:
        assert len(rhs.present_generators()) <= 1


def test_sym_system_rank_cubic(cubic_diff):
    assert cubic_diff.rank == 5
    assert cubic_diff.parameter_count == 1


def test_sym_system_rank_conic(circle_diff):
    assert circle_diff.rank == 3
    assert circle_diff.parameter_count == 0


def test_tangent_section_rejected(circle, circle_setup):
    ctx, p1, _ = circle_setup
    with pytest.raises(MultipleRoots):
        bad = circle.section_roots(1, TowerContext())


def test_same_abscissa_rejected(cubic):
    ctx = TowerContext()
    pts = cubic.section_roots(0, ctx)
    with pytest.raises(SameAbscissa):
        third_kind_system_naive(cubic, pts[0], pts[1])


def test_vandermonde_equivalence_cubic(cubic_diff):
    assert vandermonde_equivalence(cubic_diff)


def test_vandermonde_equivalence_conic(circle_diff):
    assert vandermonde_equivalence(circle_diff)


def test_nullspace_is_embedded_first_kind_space(cubic, cubic_setup):
    from abeldiff.linsolve import RatMatrix, ff_solve
    _, p1, p2 = cubic_setup
    sys = third_kind_system_sym(cubic, p1, p2)
    sol = ff_solve(RatMatrix(sys.matrix), sys.rhs)
    assert len(sol.nullspace) == cubic.genus() == 1
    monos = sys.monomials
    pf = BPoly({(1, 0): 1, (0, 0): 0}) * BPoly({(0, 0): 1, (1, 0): -1})
    embedded = tuple(pf.terms.get(m, Fraction(0)) for m in monos)
    assert rank(list(sol.nullspace)) == rank([embedded]) == \
        rank(list(sol.nullspace) + [embedded]) == 1


def test_residues_cubic(cubic_diff):
    certs = residue_certificates(cubic_diff)
    assert all(c["ok"] for c in certs)
    expected = sorted(c["expected"] for c in certs[:-1])
    assert expected == [-1, 0, 0, 0, 0, 1]


def test_residues_conic(circle_diff):
    assert all(c["ok"] for c in residue_certificates(circle_diff))


def test_residue_values_at_poles(cubic_diff):
    assert (residue_at(cubic_diff, cubic_diff.pole1) - 1).is_zero()
    assert (residue_at(cubic_diff, cubic_diff.pole2) + 1).is_zero()


def test_residue_zero_at_non_pole_points(cubic_diff):
    for pt in cubic_diff.section1:
        if pt is cubic_diff.pole1:
            continue
        assert residue_at(cubic_diff, pt).is_zero()


def test_residues_invariant_under_parameters(cubic_diff):
    for params in ([Fraction(1)], [Fraction(-7, 3)]):
        certs = residue_certificates(cubic_diff, params=params)
        assert all(c["ok"] for c in certs)


def test_swapped_poles_negate_residues(cubic, cubic_setup):
    _, p1, p2 = cubic_setup
    swapped = third_kind(cubic, p2, p1)
    assert (residue_at(swapped, swapped.pole1) - 1).is_zero()
    # pole1 of the swapped family is the old pole2
    assert swapped.pole1.x == p2.x
    assert (residue_at(swapped, swapped.pole2) + 1).is_zero()


def test_particular_solution_satisfies_naive_system(cubic, cubic_setup, cubic_diff):
    _, p1, p2 = cubic_setup
    naive = third_kind_system_naive(cubic, p1, p2)
    monos = naive.monomials
    coords = [cubic_diff.base_numerator.terms.get(m, Fraction(0)) for m in monos]
    for row, rhs in zip(naive.matrix, naive.rhs):
        acc = cubic_diff.ctx.zero
        for a, c in zip(row, coords):
            acc = acc + a * c
        assert (acc - rhs).is_zero()


def test_nullspace_vector_satisfies_homogeneous_naive(cubic, cubic_setup, cubic_diff):
    _, p1, p2 = cubic_setup
    naive = third_kind_system_naive(cubic, p1, p2)
    pf = cubic_diff.pole_factor()
    for mono in cubic_diff.first_kind_numerators:
        vec = mono * pf
        coords = [vec.terms.get(m, Fraction(0)) for m in naive.monomials]
        for row in naive.matrix:
            acc = cubic_diff.ctx.zero
            for a, c in zip(row, coords):
                if c:
                    acc = acc + a * c
            assert acc.is_zero()


def test_eval_u_zero_numerator(cubic, cubic_setup, cubic_diff):
    empty = dataclasses.replace(cubic_diff, base_numerator=BPoly(),
                                first_kind_numerators=[])
    ctx = TowerContext()
    pt = cubic.section_roots(5, ctx)[0]
    assert eval_u(empty, pt).is_zero()


def test_eval_u_at_pole_abscissa_rejected(cubic_diff):
    with pytest.raises(EvaluationAtPole):
        eval_u(cubic_diff, cubic_diff.pole1)


def test_eval_u_conic_rational_point(circle, circle_diff):
    ctx = circle_diff.ctx
    pt = Point(circle, Fraction(3, 5), ctx.constant(Fraction(4, 5)))
    val = eval_u(circle_diff, pt)
    # independent genus-0 oracle through x=(1-t^2)/(1+t^2), y=2t/(1+t^2):
    # u(x(t0), y(t0)) directly from the defining fraction at t0 = y/(1+x)
    t0 = Fraction(4, 5) / (1 + Fraction(3, 5))
    assert t0 == Fraction(1, 2)
    xt = (1 - t0 ** 2) / (1 + t0 ** 2)
    yt = 2 * t0 / (1 + t0 ** 2)
    assert (xt, yt) == (Fraction(3, 5), Fraction(4, 5))
    num = circle_diff.numerator_with(None).eval(xt, ctx.constant(yt))
    den = (xt - circle_diff.pole1.x) * (circle_diff.pole2.x - xt) \
        * circle.fy.eval(xt, ctx.constant(yt))
    assert (val - num * den.invert()).is_zero()


def test_unit_circle_pullback(circle_diff):
    out = unit_circle_pullback(circle_diff)
    assert out["ok"]
    assert out["poles_distinct"] and out["identity"]


def test_pullback_rejects_other_curves(cubic_diff):
    with pytest.raises(ValueError):
        unit_circle_pullback(cubic_diff)


def test_haupt_cubic(cubic):
    ctx = TowerContext()
    p1 = cubic.section_roots(0, ctx)[0]
    p2 = cubic.section_roots(1, ctx)[0]
    a1 = cubic.section_roots(2, ctx)[0]
    pp = cubic.section_roots(3, ctx)[0]
    res = haupt_solve(cubic, p1, p2, pp, [a1])
    # the step-2 assignment makes u vanish exactly at the auxiliary pole
    assert eval_u(res.differential, a1, res.parameters).is_zero()
    assert len(res.parameters) == 1
    assert not res.value.is_zero()


def test_haupt_eval_returns_tower_element(cubic):
    from abeldiff.towers import TowerElement
    ctx = TowerContext()
    p1 = cubic.section_roots(0, ctx)[0]
    p2 = cubic.section_roots(1, ctx)[0]
    a1 = cubic.section_roots(2, ctx)[0]
    pp = cubic.section_roots(3, ctx)[0]
    value = haupt_eval(cubic, p1, p2, pp, [a1])
    assert isinstance(value, TowerElement)
    assert (value - haupt_solve(cubic, p1, p2, pp, [a1]).value).is_zero()


def test_haupt_genus_zero_equals_direct_evaluation(circle, circle_diff):
    ctx = circle_diff.ctx
    pp = Point(circle, Fraction(3, 5), ctx.constant(Fraction(4, 5)))
    res = haupt_solve(circle, circle_diff.pole1, circle_diff.pole2, pp, [])
    assert res.parameters == []
    assert (res.value - eval_u(circle_diff, pp)).is_zero()


def test_haupt_wrong_pole_count(cubic, cubic_setup):
    ctx, p1, p2 = cubic_setup
    pp = cubic.section_roots(3, ctx)[0]
    with pytest.raises(DegeneratePoints):
        haupt_eval(cubic, p1, p2, pp, [])


def test_haupt_duplicate_abscissas_rejected(cubic, cubic_setup):
    ctx, p1, p2 = cubic_setup
    pp = cubic.section_roots(3, ctx)[0]
    a_dup = cubic.section_roots(3, ctx)[1]
    with pytest.raises(SameAbscissa):
        haupt_eval(cubic, p1, p2, pp, [a_dup])


def test_solve_tower_singular_raises(cubic_setup):
    ctx, p1, _ = cubic_setup
    zero, one = ctx.zero, ctx.one
    with pytest.raises(DegeneratePoints):
        _solve_tower([[zero, zero], [one, one]], [one, one])


def test_monomials_upto_order():
    assert monomials_upto(2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def test_first_kind_numerators_have_zero_residue_everywhere(cubic_diff):
    # the embedded first-kind numerators alone give regular differentials:
    # residue 0 at every section point over both pole abscissas
    pf = cubic_diff.pole_factor()
    for mono in cubic_diff.first_kind_numerators:
        pure = dataclasses.replace(cubic_diff, base_numerator=mono * pf,
                                   first_kind_numerators=[])
        for pt in cubic_diff.section1 + cubic_diff.section2:
            assert residue_at(pure, pt).is_zero()


def test_corrupted_numerator_flagged_with_point(cubic_diff):
    bad = dataclasses.replace(
        cubic_diff, base_numerator=cubic_diff.base_numerator + BPoly.const(1))
    certs = residue_certificates(bad)
    failing = [c for c in certs if not c["ok"]]
    assert failing
    assert any("x=" in c["point"] for c in failing)
