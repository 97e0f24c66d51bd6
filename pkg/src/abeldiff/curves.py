"""Plane algebraic curves over Q: degree, genus, exact smoothness, section
ordinates over a rational abscissa, and local power-series uniformization.

Smoothness is decided exactly, never numerically.  The affine singular locus
is screened by the y-resultant of the curve with its y-derivative; candidate
abscissas are then handled by a gcd computation over Q[x] modulo the
square-free candidate polynomial, splitting the modulus whenever a zero test
is ambiguous (dynamic evaluation), so the answer holds for every root of
every branch.  Points at infinity are checked through the homogenization's
partial derivatives restricted to the line at infinity, which reduces to gcds
of binary forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (DegreeDrop, IrrationalAbscissaUnsupported, MultipleRoots,
                     NotSmooth, PointNotOnCurve, VerticalTangent)
from .polys import BPoly, UPoly, is_squarefree, poly_gcd, resultant_y
from .towers import TowerContext, TowerElement, eval_bpoly, locate_or_adjoin


@dataclass
class SmoothnessReport:
    smooth: bool
    detail: str


def _as_rational(x) -> Fraction:
    if isinstance(x, float):
        raise IrrationalAbscissaUnsupported(
            "abscissas must be exact rationals (got a float); pass a Fraction "
            "or an integer")
    return Fraction(x)


class Curve:
    """A smooth plane curve f(x, y) = 0 of total degree r.

    Smoothness is verified exactly on construction; pass assume_smooth=True
    to waive the check (the genus formula and both construction algorithms
    silently assume it).
    """

    def __init__(self, f: BPoly, assume_smooth: bool = False):
        if f.is_zero or f.total_degree < 1:
            raise ValueError("curve polynomial must be nonzero and nonconstant")
        self.f = f
        self.r = f.total_degree
        self.fx = f.partial_x()
        self.fy = f.partial_y()
        self.report: SmoothnessReport | None = None
        if not assume_smooth:
            self.report = smoothness_report(f)
            if not self.report.smooth:
                raise NotSmooth(self.report.detail)

    def genus(self) -> int:
        return (self.r - 1) * (self.r - 2) // 2

    def section_poly(self, x0) -> UPoly:
        return self.f.subs_x(_as_rational(x0))

    def section_roots(self, x0, ctx: TowerContext) -> list["Point"]:
        """All r points of the curve over the abscissa x0, ordinates adjoined
        to (or located in) ctx, in the canonical root order."""
        x0 = _as_rational(x0)
        s = self.section_poly(x0)
        if s.degree < self.r:
            raise DegreeDrop(
                f"section at x = {x0} has degree {s.degree} < {self.r}")
        if not is_squarefree(s):
            raise MultipleRoots(f"section at x = {x0} has a multiple root")
        monic = s.monic()
        return [Point(self, x0, locate_or_adjoin(ctx, monic, rid))
                for rid in range(self.r)]

    def fy_at(self, p: "Point") -> TowerElement:
        return eval_bpoly(self.fy, p.x, p.y)

    def fx_at(self, p: "Point") -> TowerElement:
        return eval_bpoly(self.fx, p.x, p.y)

    def local_series(self, p: "Point", order: int) -> "LocalSeries":
        """Uniformization y = y0 + c1 t + ... + cn t^n with x = x0 + t.

        Each coefficient solves a linear equation whose pivot is f_y(p), so
        the point must not sit on a vertical tangent.
        """
        fyv = self.fy_at(p)
        if fyv.is_zero():
            raise VerticalTangent(f"f_y vanishes at x = {p.x}")
        inv = fyv.invert()
        coeffs: list[TowerElement] = []
        for m in range(1, order + 1):
            res = _series_eval(self.f, p.x, [p.y] + coeffs, m)[m]
            coeffs.append(-res * inv)
        return LocalSeries(p, tuple(coeffs), order)

    def __repr__(self):
        return f"Curve(degree={self.r}, genus={self.genus()})"


class Point:
    """A curve point with rational abscissa and tower-element ordinate;
    membership f(x, y) = 0 is verified exactly on construction."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: Curve, x, y: TowerElement):
        self.curve = curve
        self.x = _as_rational(x)
        if not isinstance(y, TowerElement):
            raise TypeError("ordinate must be a TowerElement")
        self.y = y
        if not eval_bpoly(curve.f, self.x, y).is_zero():
            raise PointNotOnCurve(f"f({self.x}, y) != 0 for the given ordinate")

    def __repr__(self):
        return f"Point(x={self.x}, y={self.y!r})"


@dataclass
class LocalSeries:
    """Truncated uniformization at a point: substituting x = x0 + t,
    y = y0 + sum(c_k t^k) into f leaves a remainder of order t^(order+1)."""

    point: Point
    coefficients: tuple
    order: int


# -- truncated series ------------------------------------------------------


def _trunc_mul(a: list, b: list, order: int) -> list:
    out = [Fraction(0)] * (order + 1)
    for i, av in enumerate(a):
        if i > order or not av:
            continue
        for j, bv in enumerate(b):
            if i + j > order:
                break
            if bv:
                out[i + j] = out[i + j] + av * bv
    return out


def _series_eval(f: BPoly, x0: Fraction, ycoeffs: list, order: int) -> list:
    """Coefficients of f(x0 + t, y(t)) up to t^order, where y(t) has the
    given coefficients (constant term first)."""
    xs = [x0, Fraction(1)]
    xpow: dict[int, list] = {0: [Fraction(1)]}
    ypow: dict[int, list] = {0: [Fraction(1)]}

    def _p(cache, base, e):
        if e not in cache:
            cache[e] = _trunc_mul(_p(cache, base, e - 1), base, order)
        return cache[e]

    acc = [Fraction(0)] * (order + 1)
    for (i, j), c in sorted(f.terms.items()):
        term = _trunc_mul(_p(xpow, xs, i), _p(ypow, ycoeffs, j), order)
        for k in range(min(len(term), order + 1)):
            if term[k]:
                acc[k] = acc[k] + c * term[k]
    return acc


# -- exact smoothness ------------------------------------------------------


def smoothness_report(f: BPoly) -> SmoothnessReport:
    """Decide whether f, f_x, f_y have a common projective zero."""
    r = f.total_degree
    fx, fy = f.partial_x(), f.partial_y()

    # curves that are unions of parallel lines
    if f.degree_y == 0 or f.degree_x == 0:
        uni = UPoly([f.terms.get((i, 0), Fraction(0)) for i in range(f.degree_x + 1)]) \
            if f.degree_y == 0 else \
            UPoly([f.terms.get((0, j), Fraction(0)) for j in range(f.degree_y + 1)])
        if poly_gcd(uni, uni.derivative()).degree > 0:
            return SmoothnessReport(False, "repeated linear component")
        return _infinity_report(f, r)

    # repeated factors make every point of that component singular
    disc = resultant_y(f, fy)
    if disc.is_zero:
        return SmoothnessReport(False, "repeated factor (y-discriminant vanishes)")
    if resultant_y(_transpose(f), _transpose(fx)).is_zero:
        return SmoothnessReport(False, "repeated factor (x-discriminant vanishes)")

    if disc.degree >= 1:
        m = (disc // poly_gcd(disc, disc.derivative())).monic()
        witness = _common_section_root(
            m, [f.coefficients_in_y(), fx.coefficients_in_y(), fy.coefficients_in_y()])
        if witness is not None:
            mod, g = witness
            if g is None:
                return SmoothnessReport(
                    False, f"vertical line component over {_fmt(mod)} = 0")
            return SmoothnessReport(
                False,
                f"affine singular point: over abscissas with {_fmt(mod)} = 0 the "
                f"sections of f, f_x, f_y share the factor {_fmt_y(g, mod)}")
    return _infinity_report(f, r)


def _transpose(f: BPoly) -> BPoly:
    return BPoly({(j, i): c for (i, j), c in f.terms.items()})


def _fmt(p: UPoly) -> str:
    return " + ".join(f"{c}*x^{i}" for i, c in enumerate(p.coeffs) if c) or "0"


def _fmt_y(g: list, mod: UPoly) -> str:
    return " + ".join(f"({_fmt(c)})*y^{i}" for i, c in enumerate(g) if not c.is_zero) or "0"


def _infinity_report(f: BPoly, r: int) -> SmoothnessReport:
    top = f.homogeneous_part(r)
    sub = f.homogeneous_part(r - 1)
    # forms of degree r-1, keyed by the y exponent
    form_x = {}
    for j, c in top.items():
        if r - j:
            form_x[j] = c * (r - j)
    form_y = {}
    for j, c in top.items():
        if j:
            form_y[j - 1] = c * j
    forms = [(form_x, r - 1), (form_y, r - 1), (sub, r - 1)]
    forms = [(d, deg) for d, deg in forms if d]
    if not forms:
        return SmoothnessReport(False, "degenerate form at infinity")
    # a nonzero constant form vanishes nowhere
    for d, deg in forms:
        if deg == 0:
            return SmoothnessReport(True, "no singular points")
    if all(d.get(deg, 0) == 0 for d, deg in forms):
        return SmoothnessReport(False, "singular point at infinity [0:1:0]")
    g: UPoly | None = None
    for d, deg in forms:
        uni = UPoly([d.get(j, Fraction(0)) for j in range(deg + 1)])
        g = uni if g is None else poly_gcd(g, uni)
    if g is not None and g.degree >= 1:
        return SmoothnessReport(
            False, f"singular point at infinity along slope with {_fmt(g)} = 0")
    return SmoothnessReport(True, "no singular points")


def _common_section_root(mod: UPoly, polys_in: list[list[UPoly]]):
    """Dynamic-evaluation gcd: do the given y-polynomials (coefficients in
    Q[x]) share a root for some abscissa with mod = 0?  Returns a witness
    (branch modulus, common factor as y-coefficient list) or None."""
    if mod.degree == 0:
        return None

    def reduce_poly(p: list[UPoly]) -> list[UPoly]:
        return [c % mod for c in p]

    polys = [reduce_poly(p) for p in polys_in]

    while True:
        normalized: list[list[UPoly]] = []
        for p in polys:
            q = list(p)
            while q:
                lead = q[-1]
                if lead.is_zero:
                    q.pop()
                    continue
                g = poly_gcd(lead, mod)
                if g.degree == 0:
                    break
                # ambiguous zero test: split the modulus and try both parts
                for part in (g, (mod // g).monic()):
                    w = _common_section_root(part, polys_in)
                    if w is not None:
                        return w
                return None
            if q:
                normalized.append(q)
        if not normalized:
            # every section vanishes identically over this branch
            return (mod, None)
        if any(len(q) == 1 for q in normalized):
            return None  # a unit in the would-be gcd: no common root
        if len(normalized) == 1:
            return (mod, normalized[0])
        normalized.sort(key=len)
        base = normalized[0]
        reduced = [base]
        for other in normalized[1:]:
            rem = _prem(other, base, mod)
            if rem:
                reduced.append(rem)
        polys = reduced


def _prem(a: list[UPoly], b: list[UPoly], mod: UPoly) -> list[UPoly]:
    """Pseudo-remainder of a by b, coefficients reduced mod the branch
    modulus; degrees are syntactic (the caller re-normalizes)."""
    a = [c % mod for c in a]
    lcb = b[-1]
    while len(a) >= len(b):
        while a and a[-1].is_zero:
            a.pop()
        if len(a) < len(b):
            break
        lca = a[-1]
        shift = len(a) - len(b)
        a = [(lcb * c) % mod for c in a]
        for i, bc in enumerate(b):
            a[i + shift] = (a[i + shift] - lca * bc) % mod
        a.pop()
    while a and a[-1].is_zero:
        a.pop()
    return a
