"""Certified isolation and refinement of the complex roots of a square-free
rational polynomial.

Strategy: a Mahler-type separation bound is computed exactly from the integer
coefficients, numeric roots are refined by Newton iteration until the
classical a-posteriori radius  deg * |p(z)/p'(z)|  (inflated for rounding)
drops below a quarter of that bound, after which each disc provably contains
exactly one root and refinement can never jump to a different root.

Canonical order: ascending real part, ties broken by ascending imaginary
part.  Real-part comparisons that do not resolve numerically are certified
exactly: conjugate pairs are detected through disc pairing, and the remaining
ties fall back to a separation bound for the polynomial whose roots are all
midpoints of root pairs (real parts are midpoints of conjugate pairs, so two
distinct real parts differ by at least that bound).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, isqrt

import mpmath as mp

from .errors import NotSquareFree, ZeroPolynomial
from .linsolve import bareiss_det
from .polys import UPoly, interpolate, is_squarefree, poly_gcd, resultant


class RootApprox:
    """One certified root: an open disc |z - center| < radius containing
    exactly one root of the (implicit) polynomial."""

    __slots__ = ("index", "center", "radius", "prec", "conj_index")

    def __init__(self, index, center, radius, prec, conj_index):
        self.index = index
        self.center = center
        self.radius = radius
        self.prec = prec
        self.conj_index = conj_index

    @property
    def is_real(self) -> bool:
        return self.conj_index == self.index

    def __repr__(self):
        return f"RootApprox({self.index}, {mp.nstr(self.center, 8)}, r<{mp.nstr(self.radius, 3)})"


def _horner(coeffs, z):
    acc = mp.mpf(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def separation_bound(ints: list[int]) -> Fraction:
    """Positive rational strictly below the minimal pairwise root distance
    (Mahler's bound), for a square-free integer polynomial."""
    n = len(ints) - 1
    if n <= 1:
        return Fraction(1)
    p = UPoly(ints)
    disc = resultant(p, p.derivative()) / p.leading
    d3 = abs(3 * disc)
    # numerator: floor(sqrt(3|D|)) -- |D| >= 1 for square-free integer polys
    num = isqrt(d3.numerator // d3.denominator)
    if num == 0:
        num = Fraction(isqrt(d3.numerator), isqrt(d3.denominator) + 1)
    # denominator: upper bounds for n^((n+2)/2) and ||p||_2^(n-1)
    if n % 2 == 0:
        npow = n ** ((n + 2) // 2)
    else:
        npow = n ** ((n + 1) // 2) * (isqrt(n) + 1)
    norm2_sq = sum(c * c for c in ints)
    norm_up = isqrt(norm2_sq) + 1
    return Fraction(num) / (npow * norm_up ** (n - 1))


def _initial_roots(ints: list[int], prec: int):
    rev = list(reversed(ints))
    for extra in (50, 200, 800):
        try:
            with mp.workprec(prec + extra):
                return mp.polyroots(rev, maxsteps=300, extraprec=extra)
        except mp.libmp.libhyper.NoConvergence:
            continue
    raise RuntimeError("numeric root finding did not converge")


def _newton_to(ints, dints, n, z, target, prec):
    """Newton-iterate z at the given precision until the certified radius is
    below target; returns (center, radius) or None if stuck."""
    with mp.workprec(prec):
        z = mp.mpc(z)
        target = mp.mpf(target)
        for _ in range(300):
            pz = _horner(ints, z)
            dz = _horner(dints, z)
            if dz == 0:
                return None
            step = pz / dz
            rad = 2 * n * abs(step) + mp.ldexp(1 + abs(z), 8 - prec)
            if rad < target:
                return z, rad
            if abs(step) < mp.ldexp(1 + abs(z), 16 - prec):
                return None  # stalled: needs more precision
            z = z - step
    return None


class _Record:
    __slots__ = ("center", "radius", "prec")

    def __init__(self, center, radius, prec):
        self.center = center
        self.radius = radius
        self.prec = prec


class _Isolator:
    def __init__(self, poly: UPoly):
        if poly.is_zero or poly.degree < 1:
            raise ZeroPolynomial("root isolation needs degree >= 1")
        if not is_squarefree(poly):
            raise NotSquareFree("polynomial has multiple roots")
        self.ints, _ = poly.to_int_coeffs()
        self.n = len(self.ints) - 1
        self.dints = [i * c for i, c in enumerate(self.ints)][1:]
        self.sep = separation_bound(self.ints)
        self._re_gap: Fraction | None = None

    def _refine_record(self, rec: _Record, target: Fraction | mp.mpf) -> None:
        t = mp.mpf(target.numerator) / target.denominator * mp.mpf("0.5") \
            if isinstance(target, Fraction) else mp.mpf(target)
        if rec.radius < t:
            return
        prec = rec.prec
        while True:
            got = _newton_to(self.ints, self.dints, self.n, rec.center, t, prec)
            if got is not None:
                z, rad = got
                if rec.radius > 0:
                    assert abs(z - rec.center) <= rec.radius + rad
                rec.center, rec.radius, rec.prec = z, rad, max(prec, rec.prec)
                return
            prec = prec * 2

    def re_gap(self) -> Fraction:
        """Lower bound on |re(a) - re(b)| over root pairs with distinct real
        parts: separation bound of the midpoint polynomial
        Res_y(p(y), p(2s - y))."""
        if self._re_gap is not None:
            return self._re_gap
        n = self.n
        a = [Fraction(c) for c in self.ints]
        samples = []
        v = 0
        while len(samples) <= n * n:
            s = Fraction(v)
            q = [Fraction(0)] * (n + 1)
            for k in range(n + 1):
                if not a[k]:
                    continue
                for j in range(k + 1):
                    q[j] += a[k] * comb(k, j) * (2 * s) ** (k - j) * (-1) ** j
            size = 2 * n
            rows = []
            ra = list(reversed(a))
            rb = list(reversed(q))
            for k in range(n):
                rows.append([Fraction(0)] * k + ra + [Fraction(0)] * (size - k - n - 1))
            for k in range(n):
                rows.append([Fraction(0)] * k + rb + [Fraction(0)] * (size - k - n - 1))
            samples.append((s, bareiss_det(rows)))
            v = -v if v > 0 else -v + 1
        big = interpolate(samples)
        sqf = (big // poly_gcd(big, big.derivative()))
        if sqf.degree <= 1:
            gap = Fraction(1)
        else:
            gap = separation_bound(sqf.to_int_coeffs()[0])
        self._re_gap = gap
        return gap

    def run(self) -> list[RootApprox]:
        prec = 80
        for _ in range(3):
            seeds = _initial_roots(self.ints, prec)
            recs = []
            for z in seeds:
                rec = _Record(mp.mpc(z), mp.inf, prec)
                self._refine_record(rec, self.sep / 4)
                recs.append(rec)
            ok = all(abs(recs[i].center - recs[j].center) > recs[i].radius + recs[j].radius
                     for i in range(self.n) for j in range(i + 1, self.n))
            if ok:
                break
            prec *= 4
        else:
            raise RuntimeError("could not isolate all roots into disjoint discs")

        # pairwise-disjoint discs + radii < sep/4 make conjugate pairing exact
        conj = self._pair_conjugates(recs)

        order = sorted(range(self.n), key=_CmpKey(self, recs, conj))
        roots: list[RootApprox] = []
        pos = {old: new for new, old in enumerate(order)}
        for new, old in enumerate(order):
            rec = recs[old]
            roots.append(RootApprox(new, rec.center, rec.radius, rec.prec,
                                    pos[conj[old]]))
        return roots

    def _pair_conjugates(self, recs) -> list[int]:
        conj = [-1] * self.n
        for i, rec in enumerate(recs):
            target = mp.conj(rec.center)
            best = None
            for j, other in enumerate(recs):
                if abs(target - other.center) <= rec.radius + other.radius:
                    best = j
                    break
            assert best is not None, "conjugate root not located"
            conj[i] = best
        assert all(conj[conj[i]] == i for i in range(self.n))
        return conj

    def compare(self, recs, conj, i, j) -> int:
        """-1/+1 once the canonical order of roots i and j is certified."""
        a, b = recs[i], recs[j]
        re_tie = conj[i] == j and i != j
        if not re_tie:
            attempts = 0
            while True:
                d = a.center.real - b.center.real
                if abs(d) > a.radius + b.radius:
                    return -1 if d < 0 else 1
                attempts += 1
                if attempts <= 3:
                    self._refine_record(a, a.radius * mp.mpf("0.25"))
                    self._refine_record(b, b.radius * mp.mpf("0.25"))
                    continue
                # exact tie certification via the midpoint-polynomial gap
                gap4 = self.re_gap() / 4
                g = mp.mpf(gap4.numerator) / gap4.denominator
                if g > a.radius and g > b.radius:
                    re_tie = True
                    break
                self._refine_record(a, gap4)
                self._refine_record(b, gap4)
        # equal real parts: order by imaginary part (never equal for i != j)
        ia = mp.mpf(0) if conj[i] == i else a.center.imag
        ib = mp.mpf(0) if conj[j] == j else b.center.imag
        while not abs(ia - ib) > a.radius + b.radius:
            self._refine_record(a, min(a.radius, b.radius) * mp.mpf("0.25"))
            self._refine_record(b, min(a.radius, b.radius) * mp.mpf("0.25"))
            ia = mp.mpf(0) if conj[i] == i else a.center.imag
            ib = mp.mpf(0) if conj[j] == j else b.center.imag
        return -1 if ia < ib else 1


class _CmpKey:
    """functools.cmp_to_key equivalent bound to one isolation run."""

    def __init__(self, iso, recs, conj):
        self.iso, self.recs, self.conj = iso, recs, conj

    def __call__(self, idx):
        outer = self

        class K:
            __slots__ = ("i",)

            def __init__(self, i):
                self.i = i

            def __lt__(self, other):
                return outer.iso.compare(outer.recs, outer.conj, self.i, other.i) < 0

        return K(idx)


_CACHE: dict[tuple, list[RootApprox]] = {}


def isolate_roots(m: UPoly) -> list[RootApprox]:
    """All complex roots of a square-free polynomial as certified discs, in
    the canonical order (ascending re, then ascending im)."""
    ints, _ = m.to_int_coeffs()
    key = tuple(ints)
    if key not in _CACHE:
        _CACHE[key] = _Isolator(m).run()
    src = _CACHE[key]
    return [RootApprox(r.index, r.center, r.radius, r.prec, r.conj_index) for r in src]


def refine_root(m: UPoly, root: RootApprox, target: mp.mpf) -> RootApprox:
    """Shrink the certified radius below target; the root identity (index)
    is preserved because the new disc intersects the old isolating disc."""
    if root.radius < target:
        return root
    ints, _ = m.to_int_coeffs()
    n = len(ints) - 1
    dints = [i * c for i, c in enumerate(ints)][1:]
    prec = max(root.prec, 80)
    while True:
        got = _newton_to(ints, dints, n, root.center, target, prec)
        if got is not None:
            z, rad = got
            assert abs(z - root.center) <= root.radius + rad
            return RootApprox(root.index, z, rad, prec, root.conj_index)
        prec *= 2
