"""Differentials of the first and third kind on a smooth plane curve, and
evaluation of the fundamental function by duality.

The third-kind differential with simple poles over two rational abscissas is
found as E(x,y) dx / ((x - x1)(x2 - x) f_y(x,y)) where E collects every
monomial of total degree <= r-1.  Per pole abscissa the conditions are: E
vanishes at the r-1 non-pole points of the section, and E equals
(x2 - x1) f_y at the pole itself (residues +1 and -1).  Solving those
conditions directly would put algebraic numbers in the matrix; summing the
conditions against powers of the section ordinates turns every left-hand
coefficient into a power sum of the section polynomial — a rational number —
which is the symmetrized system this module actually solves.  The two forms
are equivalent: the symmetrized rows are the Vandermonde matrix of the
section ordinates times the per-point rows.

Every constructed differential is certified fail-closed by an independent
residue oracle that substitutes the local power series at each section point
and reads the t^{-1} coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .curves import Curve, Point, _series_eval
from .errors import (ContextMismatch, DegeneratePoints, EvaluationAtPole,
                     HigherOrderPole, Inconsistent, SameAbscissa,
                     VerificationFailed)
from .linsolve import RatMatrix, ff_solve, vandermonde
from .polys import BPoly, UPoly, power_sums
from .towers import TowerContext, TowerElement, eval_bpoly


def monomials_upto(d: int) -> list[tuple[int, int]]:
    """Monomial exponents (i, j) with i + j <= d, graded order, x before y."""
    out = []
    for total in range(d + 1):
        for j in range(total + 1):
            out.append((total - j, j))
    return out


@dataclass
class FirstKindBasis:
    """Numerators of a basis of everywhere-regular differentials: the
    monomials of total degree <= r-3, each over the shared denominator f_y."""

    curve: Curve
    numerators: list[BPoly]

    def __len__(self):
        return len(self.numerators)


def first_kind_basis(curve: Curve) -> FirstKindBasis:
    if curve.r < 3:
        return FirstKindBasis(curve, [])
    nums = [BPoly({m: 1}) for m in monomials_upto(curve.r - 3)]
    assert len(nums) == curve.genus()
    return FirstKindBasis(curve, nums)


@dataclass
class LinearSystem:
    """One of the two linear systems for the third-kind numerator.

    row_tags maps each row to its source condition: ("vanish", i, root_id)
    for a regularity condition at a non-pole section point of abscissa i, or
    ("residue", i, root_id) for the residue normalization at pole i.
    """

    kind: str                      # "naive" | "symmetrized"
    matrix: list                   # rows; Fractions for symmetrized
    rhs: list
    labels: list[str]              # c0, c1, ... in graded monomial order
    monomials: list[tuple[int, int]]
    row_tags: list[tuple]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.matrix), len(self.monomials))


@dataclass
class _PolePair:
    curve: Curve
    ctx: TowerContext
    pole1: Point
    pole2: Point
    section1: list[Point]
    section2: list[Point]
    pole1_idx: int
    pole2_idx: int


def _locate_pole(sections: list[Point], p: Point) -> int:
    for i, q in enumerate(sections):
        if (q.y - p.y).is_zero():
            return i
    raise Inconsistent("pole ordinate matches no section root")  # unreachable


def _prepare(curve: Curve, p1: Point, p2: Point) -> _PolePair:
    if p1.y.ctx is not p2.y.ctx:
        raise ContextMismatch("pole points live in different tower contexts")
    if p1.x == p2.x:
        raise SameAbscissa(f"both poles lie over x = {p1.x}")
    ctx = p1.y.ctx
    sec1 = curve.section_roots(p1.x, ctx)
    sec2 = curve.section_roots(p2.x, ctx)
    i1 = _locate_pole(sec1, p1)
    i2 = _locate_pole(sec2, p2)
    # canonical ordinates: always compute with the section generators
    return _PolePair(curve, ctx, sec1[i1], sec2[i2], sec1, sec2, i1, i2)


def third_kind_system_naive(curve: Curve, p1: Point, p2: Point) -> LinearSystem:
    """The per-point system: 2r equations (one per section point) in the
    r(r+1)/2 monomial coefficients; matrix entries are tower elements."""
    pp = _prepare(curve, p1, p2)
    monos = monomials_upto(curve.r - 1)
    dx = pp.pole2.x - pp.pole1.x
    matrix, rhs, tags = [], [], []
    for i, (sec, pole_idx, pole) in enumerate(
            [(pp.section1, pp.pole1_idx, pp.pole1),
             (pp.section2, pp.pole2_idx, pp.pole2)], start=1):
        for rid, pt in enumerate(sec):
            if rid == pole_idx:
                continue
            matrix.append([eval_bpoly(BPoly({m: 1}), pt.x, pt.y) for m in monos])
            rhs.append(pp.ctx.zero)
            tags.append(("vanish", i, rid))
        matrix.append([eval_bpoly(BPoly({m: 1}), pole.x, pole.y) for m in monos])
        rhs.append(dx * curve.fy_at(pole))
        tags.append(("residue", i, pole_idx))
    return LinearSystem("naive", matrix, rhs,
                        [f"c{k}" for k in range(len(monos))], monos, tags)


def third_kind_system_sym(curve: Curve, p1: Point, p2: Point) -> LinearSystem:
    """The symmetrized system: for each pole abscissa and k = 0..r-1, the sum
    of the point conditions weighted by the k-th power of the ordinate.  The
    unknowns' coefficients become power sums of the section polynomial, hence
    rational; only the right-hand side touches the pole ordinates."""
    pp = _prepare(curve, p1, p2)
    r = curve.r
    monos = monomials_upto(r - 1)
    dx = pp.pole2.x - pp.pole1.x
    matrix, rhs, tags = [], [], []
    for i, pole in ((1, pp.pole1), (2, pp.pole2)):
        ps = power_sums(curve.section_poly(pole.x), 2 * r - 1)
        xpows = [pole.x ** a for a in range(r)]
        fyv = dx * curve.fy_at(pole)
        ypow = pole.y.ctx.one
        for k in range(r):
            matrix.append([xpows[a] * ps[k + b] for (a, b) in monos])
            rhs.append(ypow * fyv)
            tags.append(("power", i, k))
            ypow = ypow * pole.y
    return LinearSystem("symmetrized", matrix, rhs,
                        [f"c{k}" for k in range(len(monos))], monos, tags)


@dataclass
class ParametricDifferential:
    """A third-kind differential family E(c) dx / ((x-x1)(x2-x) f_y).

    The assigned numerator is base_numerator plus, for each free parameter,
    the corresponding first-kind numerator times (x-x1)(x2-x) — adding a
    multiple of (x-x1)(x2-x)*m with deg m <= r-3 is exactly adding the
    first-kind differential m dx / f_y.  Residues are +1 at pole1, -1 at
    pole2 and 0 at the remaining section points for every assignment.
    """

    curve: Curve
    pole1: Point
    pole2: Point
    base_numerator: BPoly
    first_kind_numerators: list[BPoly]
    section1: list[Point] = field(repr=False)
    section2: list[Point] = field(repr=False)
    system: LinearSystem = field(repr=False)
    rank: int = 0

    @property
    def parameter_count(self) -> int:
        return len(self.first_kind_numerators)

    @property
    def ctx(self) -> TowerContext:
        return self.pole1.y.ctx

    def pole_factor(self) -> BPoly:
        x1, x2 = self.pole1.x, self.pole2.x
        return BPoly({(1, 0): 1, (0, 0): -x1}) * BPoly({(0, 0): x2, (1, 0): -1})

    def _params(self, params) -> list:
        p = self.parameter_count
        if params is None:
            return [Fraction(0)] * p
        params = list(params)
        if len(params) != p:
            raise ValueError(f"expected {p} parameters, got {len(params)}")
        return params

    def numerator_with(self, params=None) -> BPoly:
        out = self.base_numerator
        pf = self.pole_factor()
        for c, mono in zip(self._params(params), self.first_kind_numerators):
            if isinstance(c, Fraction) and not c:
                continue
            out = out + c * (mono * pf)
        return out


def third_kind(curve: Curve, p1: Point, p2: Point, verify: bool = True,
               series_order: int = 2) -> ParametricDifferential:
    """Construct the third-kind family: solve the symmetrized system, check
    that its nullspace is exactly the embedded first-kind space, canonicalize
    the particular solution, and (by default) certify all residues with the
    local-series oracle."""
    pp = _prepare(curve, p1, p2)
    system = third_kind_system_sym(curve, pp.pole1, pp.pole2)
    sol = ff_solve(RatMatrix(system.matrix), system.rhs)

    p = curve.genus()
    if len(sol.nullspace) != p:
        raise Inconsistent(
            f"nullspace dimension {len(sol.nullspace)} != genus {p}")

    monos = system.monomials
    fkb = first_kind_basis(curve)
    pf = BPoly({(1, 0): 1, (0, 0): -pp.pole1.x}) * BPoly({(0, 0): pp.pole2.x, (1, 0): -1})
    embedded: list[tuple[Fraction, ...]] = []
    for mono in fkb.numerators:
        prod = mono * pf
        embedded.append(tuple(prod.terms.get(m, Fraction(0)) for m in monos))
    if not _same_span(sol.nullspace, embedded):
        raise Inconsistent("nullspace is not the embedded first-kind space")

    particular = _project_out(sol.particular, sol.nullspace, pp.ctx)
    base = BPoly({monos[k]: particular[k] for k in range(len(monos))
                  if _nonzero(particular[k])})

    diff = ParametricDifferential(
        curve=curve, pole1=pp.pole1, pole2=pp.pole2, base_numerator=base,
        first_kind_numerators=fkb.numerators, section1=pp.section1,
        section2=pp.section2, system=system, rank=sol.rank)
    if verify:
        failures = [c for c in residue_certificates(diff, series_order=series_order)
                    if not c["ok"]]
        if failures:
            raise VerificationFailed(
                f"residue oracle mismatch at {failures[0]['point']}")
    return diff


def _nonzero(v) -> bool:
    if isinstance(v, TowerElement):
        return bool(v)
    return v != 0


def _same_span(a: list, b: list) -> bool:
    from .linsolve import rank as _rank
    if not a and not b:
        return True
    if len(a) != len(b):
        return False
    ra = _rank(list(a))
    rb = _rank(list(b))
    ru = _rank(list(a) + list(b))
    return ra == rb == ru == len(a)


def _project_out(particular: list, nullspace: list, ctx: TowerContext) -> list:
    """Subtract the nullspace components under the monomial inner product so
    the reported base numerator is deterministic."""
    if not nullspace:
        return list(particular)
    ortho: list[tuple[Fraction, ...]] = []
    for v in nullspace:
        w = list(v)
        for u in ortho:
            c = sum(a * b for a, b in zip(w, u)) / sum(a * a for a in u)
            w = [wi - c * ui for wi, ui in zip(w, u)]
        ortho.append(tuple(w))
    out = [x if isinstance(x, TowerElement) else ctx.constant(x) for x in particular]
    for u in ortho:
        dot = ctx.zero
        for xi, ui in zip(out, u):
            if ui:
                dot = dot + xi * ui
        norm = sum(a * a for a in u)
        coef = dot / norm
        out = [xi - coef * ui if ui else xi for xi, ui in zip(out, u)]
    return out


# -- the independent residue oracle ----------------------------------------


def residue_at(diff: ParametricDifferential, point: Point, params=None,
               series_order: int = 2) -> TowerElement:
    """Residue of the assigned differential at a section point over either
    pole abscissa, computed independently of the construction: substitute
    the local series into numerator and denominator and read the t^{-1}
    coefficient.  Certifies along the way that the pole order is at most 1.
    """
    x1, x2 = diff.pole1.x, diff.pole2.x
    if point.x == x1:
        sign, shift = 1, x2 - x1      # (x2 - x) = (x2 - x1) - t
        tsign = -1
    elif point.x == x2:
        sign, shift = -1, x2 - x1     # (x - x1) = (x2 - x1) + t
        tsign = 1
    else:
        raise ValueError("residue_at expects a point over a pole abscissa")

    order = max(series_order, 1)
    series = diff.curve.local_series(point, order)  # raises VerticalTangent
    ycoeffs = [point.y] + list(series.coefficients)
    num = _series_eval(diff.numerator_with(params), point.x, ycoeffs, order)
    fy = _series_eval(diff.curve.fy, point.x, ycoeffs, order)
    # D1(t) = (shift + tsign*t) * fy(t); the full denominator is t * D1(t)
    d1 = [shift * c for c in fy]
    for k in range(1, order + 1):
        d1[k] = d1[k] + tsign * fy[k - 1]
    d1 = [c if isinstance(c, TowerElement) else diff.ctx.constant(c) for c in d1]
    if d1[0].is_zero():
        raise HigherOrderPole("denominator series has no constant term")
    inv0 = d1[0].invert()
    quot: list[TowerElement] = []
    for k in range(order + 1):
        acc = num[k] if isinstance(num[k], TowerElement) else diff.ctx.constant(num[k])
        for j in range(k):
            acc = acc - quot[j] * d1[k - j]
        quot.append(acc * inv0)
    # differential = sign * (quot[0]/t + quot[1] + ...) dt: simple pole only
    return sign * quot[0]


def residue_certificates(diff: ParametricDifferential, params=None,
                         series_order: int = 2) -> list[dict]:
    """Residue oracle at every section point over both pole abscissas, plus
    the residue-sum identity.

    Each residue is certified exactly equal to its expected value, so the
    sum certificate is the sum of the expected values over the certified
    points (mixing all residues into one element would drag every generator
    into a single huge subring for no extra information).
    """
    out = []
    expected_total = 0
    all_ok = True
    for sec, pole in ((diff.section1, diff.pole1), (diff.section2, diff.pole2)):
        for rid, pt in enumerate(sec):
            expected = 0
            if pt is diff.pole1:
                expected = 1
            elif pt is diff.pole2:
                expected = -1
            res = residue_at(diff, pt, params, series_order)
            ok = (res - expected).is_zero()
            all_ok = all_ok and ok
            expected_total += expected
            out.append({
                "point": f"(x={pt.x}, root {rid})",
                "expected": expected,
                "ok": ok,
            })
    out.append({"point": "sum over all section points", "expected": 0,
                "ok": all_ok and expected_total == 0})
    return out


def eval_u(diff: ParametricDifferential, point: Point, params=None) -> TowerElement:
    """Exact value of the rational function u at a point away from the pole
    abscissas."""
    if point.x == diff.pole1.x or point.x == diff.pole2.x:
        raise EvaluationAtPole(f"x = {point.x} is a pole abscissa")
    fyv = diff.curve.fy_at(point)
    if fyv.is_zero():
        raise EvaluationAtPole("f_y vanishes at the evaluation point")
    denom = (point.x - diff.pole1.x) * (diff.pole2.x - point.x) * fyv
    num = eval_bpoly(diff.numerator_with(params), point.x, point.y)
    return num * denom.invert()


# -- fundamental function ---------------------------------------------------


@dataclass
class HauptResult:
    value: TowerElement
    parameters: list
    differential: ParametricDifferential


def haupt_eval(curve: Curve, p1: Point, p2: Point, p_prime: Point,
               poles: list[Point], series_order: int = 2) -> TowerElement:
    """Value of the fundamental function at p1 (see haupt_solve)."""
    return haupt_solve(curve, p1, p2, p_prime, poles, series_order).value


def haupt_solve(curve: Curve, p1: Point, p2: Point, p_prime: Point,
                poles: list[Point], series_order: int = 2) -> HauptResult:
    """Value of the fundamental function at p1: the function with simple
    poles at p_prime and the given auxiliary points, residue -1 at p_prime,
    normalized to vanish at p2.

    Steps: construct the third-kind family for (p1, p2); fix its free
    parameters so the function vanishes at every auxiliary pole; evaluate at
    p_prime.  The result carries the determined parameters and the
    underlying third-kind family alongside the value.
    """
    p = curve.genus()
    if len(poles) != p:
        raise DegeneratePoints(f"expected {p} auxiliary poles, got {len(poles)}")
    absc = [p1.x, p2.x, p_prime.x] + [q.x for q in poles]
    if len(set(absc)) != len(absc):
        raise SameAbscissa("all chosen abscissas must be pairwise distinct")

    diff = third_kind(curve, p1, p2, series_order=series_order)
    params: list = []
    if p:
        fkb = diff.first_kind_numerators
        rows, rhs = [], []
        for q in poles:
            fy_inv = curve.fy_at(q).invert()
            rows.append([eval_bpoly(mono, q.x, q.y) * fy_inv for mono in fkb])
            rhs.append(-eval_u(diff, q))
        params = _solve_tower(rows, rhs)
        for q in poles:
            if not eval_u(diff, q, params).is_zero():
                raise VerificationFailed(
                    f"assigned differential does not vanish at x = {q.x}")
    value = eval_u(diff, p_prime, params)
    return HauptResult(value=value, parameters=params, differential=diff)


def _solve_tower(rows: list[list[TowerElement]], rhs: list[TowerElement]) -> list:
    """Gauss-Jordan over the tower ring for the (tiny) p x p parameter
    system; raises DegeneratePoints when the system is singular."""
    n = len(rows)
    a = [list(r) for r in rows]
    b = list(rhs)
    for col in range(n):
        piv = None
        for i in range(col, n):
            if not a[i][col].is_zero():
                piv = i
                break
        if piv is None:
            raise DegeneratePoints(
                "auxiliary poles are not in general position (singular system)")
        a[col], a[piv] = a[piv], a[col]
        b[col], b[piv] = b[piv], b[col]
        inv = a[col][col].invert()
        a[col] = [v * inv for v in a[col]]
        b[col] = b[col] * inv
        for i in range(n):
            if i == col:
                continue
            f = a[i][col]
            if f.is_zero():
                continue
            a[i] = [vi - f * vc for vi, vc in zip(a[i], a[col])]
            b[i] = b[i] - f * b[col]
    return b


# -- verification bundles ----------------------------------------------------


def vandermonde_equivalence(diff: ParametricDifferential) -> bool:
    """Exact check that V_i . (per-point rows) == (symmetrized rows) for both
    pole abscissas, including the right-hand sides."""
    naive = third_kind_system_naive(diff.curve, diff.pole1, diff.pole2)
    sym = diff.system
    r = diff.curve.r
    ncols = len(naive.monomials)
    for i, sec in ((1, diff.section1), (2, diff.section2)):
        point_rows = {}
        point_rhs = {}
        for row, tag, rv in zip(naive.matrix, naive.row_tags, naive.rhs):
            if tag[1] == i:
                point_rows[tag[2]] = row
                point_rhs[tag[2]] = rv
        v = vandermonde([pt.y for pt in sec])
        sym_rows = [(row, rv) for row, tag, rv in zip(sym.matrix, sym.row_tags, sym.rhs)
                    if tag[1] == i]
        for k in range(r):
            srow, srhs = sym_rows[k]
            for c in range(ncols):
                acc = diff.ctx.zero
                for j in range(r):
                    acc = acc + v[k][j] * point_rows[j][c]
                if not (acc - srow[c]).is_zero():
                    return False
            acc = diff.ctx.zero
            for j in range(r):
                acc = acc + v[k][j] * point_rhs[j]
            if not (acc - srhs).is_zero():
                return False
    return True


def unit_circle_pullback(diff: ParametricDifferential) -> dict:
    """Genus-0 oracle for the unit circle: pull the differential back through
    x = (1-t^2)/(1+t^2), y = 2t/(1+t^2) and verify, by exact polynomial
    identity over the tower, that it equals (1/(t-t1) - 1/(t-t2)) dt — i.e.
    exactly two simple finite poles with residues +1 and -1 and no pole at
    infinity."""
    f = diff.curve.f
    scale = f.terms.get((2, 0))
    if scale is None or f != BPoly({(2, 0): scale, (0, 2): scale, (0, 0): -scale}):
        raise ValueError("pullback oracle only applies to the unit circle")
    x1, x2 = diff.pole1.x, diff.pole2.x
    if x1 == -1 or x2 == -1:
        raise ValueError("parametrization chart excludes x = -1")
    ctx = diff.ctx

    def upoly(coeffs) -> UPoly:
        return UPoly([c if isinstance(c, TowerElement) else ctx.constant(c)
                      for c in coeffs])

    e = diff.numerator_with(None)
    one_minus = upoly([1, 0, -1])     # 1 - t^2
    two_t = upoly([0, 2])             # 2t
    one_plus = upoly([1, 0, 1])       # 1 + t^2
    ehat = upoly([0])
    for (i, j), c in sorted(e.terms.items()):
        cc = c if isinstance(c, TowerElement) else ctx.constant(c)
        term = UPoly([cc]) * one_minus ** i * two_t ** j * one_plus ** (1 - i - j)
        ehat = ehat + term
    a1 = upoly([1 - x1, 0, -(1 + x1)])           # (x(t) - x1)(1+t^2)
    a2 = upoly([x2 - 1, 0, x2 + 1])              # (x2 - x(t))(1+t^2)
    num = -1 * ehat
    den = Fraction(scale) * (a1 * a2)

    tau1 = diff.pole1.y / (1 + x1)
    tau2 = diff.pole2.y / (1 + x2)
    sep_ok = not (tau1 - tau2).is_zero()
    lhs = num * upoly([-tau1, 1]) * upoly([-tau2, 1])
    rhs = (tau1 - tau2) * den
    delta = lhs - rhs
    identity_ok = all(
        (c.is_zero() if isinstance(c, TowerElement) else c == 0)
        for c in delta.coeffs)
    return {
        "poles_distinct": sep_ok,
        "identity": identity_ok,
        "ok": sep_ok and identity_ok,
        "pullback_numerator_degree": num.degree,
        "pullback_denominator_degree": den.degree,
    }
