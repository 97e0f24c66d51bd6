"""Dense univariate and sparse bivariate polynomials over exact scalars.

Coefficients are Fractions by default, but every ring operation (and most
helpers) also accepts elements of richer commutative rings over Q — tower
elements, or even UPoly values themselves — as long as they support +, -, *
and a truthiness test for zero.  Division-based routines (divmod, gcd,
resultant, power sums) require Fraction coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd, lcm
from typing import Iterable, Sequence

from .errors import ZeroPolynomial
from .linsolve import bareiss_det


def _coeff(v):
    return Fraction(v) if isinstance(v, int) else v


class UPoly:
    """Univariate polynomial; ``coeffs[k]`` is the coefficient of t**k.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_coeff(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> "UPoly":
        return cls([c])

    @classmethod
    def x(cls) -> "UPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self):
        if self.is_zero:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == UPoly([other])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return UPoly([-c for c in self.coeffs])

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UPoly([other])
        if not isinstance(other, UPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UPoly([other])
        if not isinstance(other, UPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, UPoly):
            if self.is_zero or other.is_zero:
                return UPoly()
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if not a:
                    continue
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
            return UPoly(out)
        return UPoly([c * other for c in self.coeffs])

    def __rmul__(self, other):
        return UPoly([other * c for c in self.coeffs])

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = UPoly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "UPoly":
        """Multiply by t**k."""
        if self.is_zero:
            return self
        return UPoly([Fraction(0)] * k + list(self.coeffs))

    def derivative(self) -> "UPoly":
        return UPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def eval(self, v):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def monic(self) -> "UPoly":
        if self.is_zero:
            return self
        lc = self.leading
        if lc == 1:
            return self
        inv = Fraction(1) / lc
        return UPoly([c * inv for c in self.coeffs])

    def divmod(self, other: "UPoly") -> tuple["UPoly", "UPoly"]:
        """Quotient and remainder; requires Fraction coefficients."""
        if other.is_zero:
            raise ZeroPolynomial("division by the zero polynomial")
        if self.degree < other.degree:
            return UPoly(), self
        rem = list(self.coeffs)
        dq = self.degree - other.degree
        quo = [Fraction(0)] * (dq + 1)
        dlc = other.leading
        for k in range(dq, -1, -1):
            c = rem[other.degree + k] / dlc
            quo[k] = c
            if c:
                for i, oc in enumerate(other.coeffs):
                    rem[i + k] -= c * oc
        return UPoly(quo), UPoly(rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def to_int_coeffs(self) -> tuple[list[int], Fraction]:
        """Primitive integer coefficients and the scalar s with self = s * prim."""
        if self.is_zero:
            return [], Fraction(1)
        m = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * m) for c in self.coeffs]
        g = 0
        for v in ints:
            g = int_gcd(g, v)
        ints = [v // g for v in ints]
        if ints[-1] < 0:
            ints = [-v for v in ints]
            g = -g
        return ints, Fraction(g, m)

    def __repr__(self):
        return f"UPoly({[str(c) for c in self.coeffs]})"


def poly_gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic greatest common divisor over Q; gcd(0, 0) = 0."""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def xgcd(a: UPoly, b: UPoly) -> tuple[UPoly, UPoly, UPoly]:
    """Extended Euclid over Q: returns (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = UPoly([1]), UPoly()
    t0, t1 = UPoly(), UPoly([1])
    while not r1.is_zero:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero:
        return r0, s0, t0
    inv = Fraction(1) / r0.leading
    return r0 * inv, s0 * inv, t0 * inv


def is_squarefree(a: UPoly) -> bool:
    if a.is_zero:
        raise ZeroPolynomial("square-freeness of the zero polynomial")
    return poly_gcd(a, a.derivative()).degree <= 0


def sylvester_matrix(a: UPoly, b: UPoly) -> list[list[Fraction]]:
    """Sylvester matrix with a's coefficients in the top deg(b) rows.

    This fixes the sign convention: resultant(y - 1, y - 2) == -1.
    """
    m, n = a.degree, b.degree
    size = m + n
    rows = []
    ra = list(reversed(a.coeffs))
    rb = list(reversed(b.coeffs))
    for k in range(n):
        rows.append([Fraction(0)] * k + ra + [Fraction(0)] * (size - k - m - 1))
    for k in range(m):
        rows.append([Fraction(0)] * k + rb + [Fraction(0)] * (size - k - n - 1))
    return rows


def resultant(a: UPoly, b: UPoly) -> Fraction:
    """Resultant of two nonzero univariate polynomials (Sylvester determinant;
    see sylvester_matrix for the sign convention)."""
    if a.is_zero or b.is_zero:
        raise ZeroPolynomial("resultant with a zero polynomial")
    if a.degree == 0:
        return a.coeffs[0] ** b.degree
    if b.degree == 0:
        return b.coeffs[0] ** a.degree
    return bareiss_det(sylvester_matrix(a, b))


def discriminant(a: UPoly) -> Fraction:
    n = a.degree
    if n < 1:
        raise ZeroPolynomial("discriminant needs degree >= 1")
    if n == 1:
        return Fraction(1)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(a, a.derivative()) / a.leading


def power_sums(a: UPoly, count: int) -> list[Fraction]:
    """Power sums p_k of the roots, k = 0 .. count-1, by Newton's identities.

    Works on the coefficients alone — no root is ever extracted — which is
    what keeps the symmetrized linear system rational.  p_0 is the degree.
    """
    if a.is_zero:
        raise ZeroPolynomial("power sums of the zero polynomial")
    if a.degree < 1:
        raise ZeroPolynomial("power sums need degree >= 1")
    mon = a.monic()
    n = mon.degree
    # elementary symmetric functions from the coefficients
    e = [Fraction(0)] * (n + 1)
    e[0] = Fraction(1)
    for i in range(1, n + 1):
        e[i] = (-1) ** i * mon.coeffs[n - i]
    ps: list[Fraction] = [Fraction(n)]
    for k in range(1, count):
        acc = Fraction(0)
        for i in range(1, min(k - 1, n) + 1):
            acc += (-1) ** (i - 1) * e[i] * ps[k - i]
        if k <= n:
            acc += (-1) ** (k - 1) * k * e[k]
        ps.append(acc)
    return ps[:count]


def interpolate(points: Sequence[tuple[Fraction, Fraction]]) -> UPoly:
    """Exact polynomial interpolation (Newton form) through distinct nodes."""
    xs = [Fraction(p[0]) for p in points]
    coeffs = [Fraction(p[1]) for p in points]
    n = len(points)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coeffs[i] = (coeffs[i] - coeffs[i - 1]) / (xs[i] - xs[i - j])
    poly = UPoly()
    for i in range(n - 1, -1, -1):
        poly = poly * UPoly([-xs[i], 1]) + UPoly([coeffs[i]])
    return poly


class BPoly:
    """Sparse bivariate polynomial keyed by (x_exponent, y_exponent)."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        norm = {}
        if terms:
            for (i, j), c in terms.items():
                c = _coeff(c)
                if c:
                    norm[(int(i), int(j))] = c
        self.terms = norm

    @classmethod
    def const(cls, c) -> "BPoly":
        return cls({(0, 0): c})

    @classmethod
    def x(cls) -> "BPoly":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "BPoly":
        return cls({(0, 1): 1})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(i + j for i, j in self.terms)

    @property
    def degree_x(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    @property
    def degree_y(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def __eq__(self, other):
        if isinstance(other, BPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == BPoly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self):
        return BPoly({k: -c for k, c in self.terms.items()})

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BPoly.const(other)
        if not isinstance(other, BPoly):
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return BPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BPoly.const(other)
        if not isinstance(other, BPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, BPoly):
            out: dict = {}
            for (i1, j1), c1 in self.terms.items():
                for (i2, j2), c2 in other.terms.items():
                    k = (i1 + i2, j1 + j2)
                    out[k] = out.get(k, Fraction(0)) + c1 * c2
            return BPoly(out)
        return BPoly({k: c * other for k, c in self.terms.items()})

    def __rmul__(self, other):
        return BPoly({k: other * c for k, c in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = BPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def partial_x(self) -> "BPoly":
        return BPoly({(i - 1, j): i * c for (i, j), c in self.terms.items() if i})

    def partial_y(self) -> "BPoly":
        return BPoly({(i, j - 1): j * c for (i, j), c in self.terms.items() if j})

    def subs_x(self, x0) -> UPoly:
        """The section polynomial f(x0, y) as a UPoly in y."""
        x0 = _coeff(x0)
        if not self.terms:
            return UPoly()
        out = [Fraction(0)] * (self.degree_y + 1)
        xpow = {0: Fraction(1)}
        for (i, j), c in self.terms.items():
            if i not in xpow:
                p = Fraction(1)
                for _ in range(i):
                    p *= x0
                xpow[i] = p
            out[j] = out[j] + c * xpow[i]
        return UPoly(out)

    def coefficients_in_y(self) -> list[UPoly]:
        """List of y-coefficients, each a UPoly in x; index = y exponent."""
        dy = self.degree_y
        if dy < 0:
            return []
        cols: list[dict] = [dict() for _ in range(dy + 1)]
        for (i, j), c in self.terms.items():
            cols[j][i] = c
        out = []
        for col in cols:
            dx = max(col, default=-1)
            out.append(UPoly([col.get(i, Fraction(0)) for i in range(dx + 1)]))
        return out

    def homogeneous_part(self, k: int) -> dict[int, Fraction]:
        """Coefficients of the degree-k form, keyed by the y exponent."""
        return {j: c for (i, j), c in self.terms.items() if i + j == k}

    def eval(self, xv, yv):
        """Evaluate at a pair of ring values (Fractions, tower elements,
        series represented as UPoly, ...)."""
        acc = Fraction(0)
        xpow: dict = {}
        ypow: dict = {}

        def _pow(cache, base, e):
            if e == 0:
                return Fraction(1)
            if e not in cache:
                if e == 1:
                    cache[e] = base
                else:
                    cache[e] = _pow(cache, base, e - 1) * base
            return cache[e]

        for (i, j), c in sorted(self.terms.items()):
            term = c
            if i:
                term = term * _pow(xpow, xv, i)
            if j:
                term = term * _pow(ypow, yv, j)
            acc = acc + term
        return acc

    def __repr__(self):
        items = ", ".join(f"{k}: {c}" for k, c in sorted(self.terms.items()))
        return f"BPoly({{{items}}})"


def resultant_y(f: BPoly, g: BPoly) -> UPoly:
    """Resultant of f and g with respect to y, as a UPoly in x.

    Computed by evaluation/interpolation: the Sylvester matrix is built from
    the generic y-degree shape (so degree drops at special x do not change
    the matrix), evaluated at enough rational points, and interpolated.
    """
    fy = f.coefficients_in_y()
    gy = g.coefficients_in_y()
    m = len(fy) - 1
    n = len(gy) - 1
    if m < 0 or n < 0:
        raise ZeroPolynomial("resultant with the zero polynomial")
    if m == 0 and n == 0:
        return UPoly([1])
    dbound = 0
    if fy:
        dbound += n * max(p.degree for p in fy)
    if gy:
        dbound += m * max(p.degree for p in gy)
    dbound = max(dbound, 0)
    samples: list[tuple[Fraction, Fraction]] = []
    v = 0
    while len(samples) < dbound + 1:
        x0 = Fraction(v)
        # generic-shape Sylvester determinant, even where y-degrees drop
        size = m + n
        rows = []
        ra = [fy[i].eval(x0) for i in range(m, -1, -1)]
        rb = [gy[i].eval(x0) for i in range(n, -1, -1)]
        for k in range(n):
            rows.append([Fraction(0)] * k + ra + [Fraction(0)] * (size - k - m - 1))
        for k in range(m):
            rows.append([Fraction(0)] * k + rb + [Fraction(0)] * (size - k - n - 1))
        samples.append((x0, bareiss_det(rows)))
        v = -v if v > 0 else -v + 1
    return interpolate(samples)

