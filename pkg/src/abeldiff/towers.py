"""Exact algebraic numbers as elements of a flat multi-extension ring.

A TowerContext is an append-only list of generators t1, t2, ..., each bound
to a square-free rational modulus m_j and to one certified root of it.  An
element is a multivariate polynomial in the generators, fully reduced so that
the degree in t_j stays below deg(m_j); that reduced form is the canonical
representative, so ring-level zero testing is purely syntactic.

The ring maps into the complex numbers by sending every generator to its
chosen root.  That map is a ring homomorphism for any root choice, and all
public predicates (is_zero, approximate) answer questions about the embedded
complex value: certified numerically where a disc certificate suffices,
exactly via the characteristic polynomial of the multiplication operator
where it does not.  Moduli are never factored and no absolute minimal
polynomial is ever computed; reducible moduli only surface when a zero
divisor is inverted, which raises NotInvertible with a witness factor.
"""

from __future__ import annotations

import threading
from fractions import Fraction

import mpmath as mp

from .errors import (ContextMismatch, NotInvertible, NotSquareFree,
                     ZeroDivision)
from .polys import BPoly, UPoly
from .roots import RootApprox, isolate_roots, refine_root, separation_bound


class _Ball:
    """Complex disc (center, radius) with rounding slop folded into the
    radius after every operation."""

    __slots__ = ("c", "r")

    def __init__(self, c, r):
        self.c = c
        self.r = r

    @staticmethod
    def from_fraction(fr: Fraction, prec: int) -> "_Ball":
        c = mp.mpf(fr.numerator) / mp.mpf(fr.denominator)
        return _Ball(mp.mpc(c), mp.ldexp(1 + abs(c), 4 - prec))

    def add(self, other: "_Ball", prec: int) -> "_Ball":
        c = self.c + other.c
        return _Ball(c, self.r + other.r + mp.ldexp(1 + abs(c), 6 - prec))

    def mul(self, other: "_Ball", prec: int) -> "_Ball":
        c = self.c * other.c
        r = abs(self.c) * other.r + abs(other.c) * self.r + self.r * other.r
        return _Ball(c, r + mp.ldexp(1 + abs(c), 6 - prec))

    def pow(self, e: int, prec: int) -> "_Ball":
        out = _Ball(mp.mpc(1), mp.mpf(0))
        base = self
        while e:
            if e & 1:
                out = out.mul(base, prec)
            base = base.mul(base, prec)
            e >>= 1
        return out


class ExtensionDescriptor:
    """One generator: a square-free monic modulus plus the certified
    approximation that pins which of its roots the generator denotes.

    Refinement only ever shrinks the disc, so the root identity (root_id in
    the canonical root order) can never change.
    """

    def __init__(self, modulus: UPoly, root: RootApprox, separation: Fraction):
        self.modulus = modulus
        self.root_id = root.index
        self.separation = separation
        self._root = root
        self._lock = threading.Lock()
        d = modulus.degree
        # reduced forms of t^d .. t^(2d-2): enough for products of reduced terms
        table: dict[int, tuple[Fraction, ...]] = {}
        base = tuple(-c for c in modulus.coeffs[:-1])
        table[d] = base
        prev = base
        for e in range(d + 1, 2 * d - 1):
            shifted = (Fraction(0),) + prev
            top = shifted[d] if len(shifted) > d else Fraction(0)
            nxt = [shifted[i] + top * base[i] for i in range(d)]
            prev = tuple(nxt[:d])
            table[e] = prev
        self.power_table = table

    @property
    def degree(self) -> int:
        return self.modulus.degree

    def reduced_power(self, e: int) -> tuple[Fraction, ...]:
        d = self.degree
        if e in self.power_table:
            return self.power_table[e]
        with self._lock:
            top = max(self.power_table)
            prev = self.power_table[top]
            base = self.power_table[d]
            while top < e:
                shifted = [Fraction(0)] + list(prev)
                head = shifted.pop(d) if len(shifted) > d else Fraction(0)
                nxt = [shifted[i] if i < len(shifted) else Fraction(0) for i in range(d)]
                if head:
                    nxt = [nxt[i] + head * base[i] for i in range(d)]
                prev = tuple(nxt)
                top += 1
                self.power_table[top] = prev
        return self.power_table[e]

    def approximation(self) -> RootApprox:
        return self._root

    def refine_to(self, target) -> RootApprox:
        with self._lock:
            if not self._root.radius < target:
                self._root = refine_root(self.modulus, self._root, target)
            return self._root

    def serialize(self) -> dict:
        ints, _ = self.modulus.to_int_coeffs()
        root = self._root
        return {
            "modulus_int_coeffs": [str(c) for c in ints],
            "root_index": self.root_id,
            "root_approx": {
                "re": mp.nstr(root.center.real, 20),
                "im": mp.nstr(root.center.imag, 20),
            },
        }


class TowerContext:
    """Append-only registry of extension descriptors.

    Elements of different contexts never mix; growing a context keeps all
    previously created elements valid.
    """

    def __init__(self):
        self.extensions: list[ExtensionDescriptor] = []
        self._lock = threading.Lock()

    def __len__(self):
        return len(self.extensions)

    def constant(self, value) -> "TowerElement":
        value = Fraction(value)
        terms = {(): value} if value else {}
        return TowerElement(self, terms, reduce=False)

    @property
    def zero(self) -> "TowerElement":
        return self.constant(0)

    @property
    def one(self) -> "TowerElement":
        return self.constant(1)

    def generator(self, i: int) -> "TowerElement":
        if not 0 <= i < len(self.extensions):
            raise IndexError(f"no generator t{i} in this context")
        key = tuple([0] * i + [1])
        return TowerElement(self, {key: Fraction(1)}, reduce=False)

    def locate(self, modulus: UPoly, root_id: int) -> int | None:
        monic = modulus.monic()
        for i, ext in enumerate(self.extensions):
            if ext.modulus == monic and ext.root_id == root_id:
                return i
        return None

    def _append(self, ext: ExtensionDescriptor) -> int:
        with self._lock:
            self.extensions.append(ext)
            return len(self.extensions) - 1


def adjoin(ctx: TowerContext, modulus: UPoly, root_id: int) -> tuple[TowerContext, "TowerElement"]:
    """Append a generator for the root_id-th root (canonical order) of a
    square-free modulus; returns the grown context and the new generator."""
    monic = modulus.monic()
    if monic.degree < 1:
        raise NotSquareFree("modulus must have degree >= 1")
    roots = isolate_roots(monic)  # raises NotSquareFree when appropriate
    if not 0 <= root_id < len(roots):
        raise IndexError(f"root index {root_id} out of range for degree {len(roots)}")
    sep = separation_bound(monic.to_int_coeffs()[0])
    idx = ctx._append(ExtensionDescriptor(monic, roots[root_id], sep))
    return ctx, ctx.generator(idx)


def locate_or_adjoin(ctx: TowerContext, modulus: UPoly, root_id: int) -> "TowerElement":
    found = ctx.locate(modulus, root_id)
    if found is not None:
        return ctx.generator(found)
    return adjoin(ctx, modulus, root_id)[1]


def _trim(key: tuple) -> tuple:
    k = len(key)
    while k and key[k - 1] == 0:
        k -= 1
    return tuple(key[:k])


class TowerElement:
    """An exact algebraic value: reduced polynomial in the context generators.

    Immutable once constructed.  Arithmetic coerces ints and Fractions, and
    mixing elements of different contexts raises ContextMismatch.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: TowerContext, terms: dict, reduce: bool = True):
        self.ctx = ctx
        self.terms = _reduce_terms(ctx, terms) if reduce else terms

    # -- plumbing ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TowerElement):
            if other.ctx is not self.ctx:
                raise ContextMismatch("elements belong to different tower contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.constant(other)
        return None

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    __hash__ = None

    # -- ring arithmetic --------------------------------------------------

    def __neg__(self):
        return TowerElement(self.ctx, {k: -c for k, c in self.terms.items()}, reduce=False)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, c in o.terms.items():
            s = out.get(k, Fraction(0)) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return TowerElement(self.ctx, out, reduce=False)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        raw: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in o.terms.items():
                if len(k1) < len(k2):
                    k1e = k1 + (0,) * (len(k2) - len(k1))
                    key = tuple(a + b for a, b in zip(k1e, k2))
                else:
                    k2e = k2 + (0,) * (len(k1) - len(k2))
                    key = tuple(a + b for a, b in zip(k1, k2e))
                key = _trim(key)
                raw[key] = raw.get(key, Fraction(0)) + c1 * c2
        return TowerElement(self.ctx, raw)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.invert() ** (-n)
        out = self.ctx.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, TowerElement):
            return self * other.invert()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivision("division by zero")
            inv = Fraction(1, 1) / Fraction(other)
            return TowerElement(self.ctx, {k: c * inv for k, c in self.terms.items()},
                                reduce=False)
        return NotImplemented

    # -- structure --------------------------------------------------------

    def is_rational(self) -> bool:
        return all(k == () for k in self.terms)

    def as_fraction(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_rational():
            raise ValueError("element is not syntactically rational")
        return self.terms[()]

    def present_generators(self) -> list[int]:
        out: set[int] = set()
        for key in self.terms:
            for i, e in enumerate(key):
                if e:
                    out.add(i)
        return sorted(out)

    # -- decisions about the embedded complex value -----------------------

    def is_zero(self) -> bool:
        """Exact decision: does the embedded complex value equal zero?

        The reduced representative is canonical, so a syntactic zero decides
        immediately.  A syntactically nonzero element can still embed to
        zero when some modulus is reducible and the element is a zero
        divisor; that case is settled by comparing a certified disc against
        a positive lower bound from the element's minimal polynomial mu:
        the ring is a product of fields, so the embedded value is a root of
        mu, and every nonzero root satisfies |root| >= |psi_0| / (|psi_0| +
        max_i |psi_i|) where psi is mu with the z-factor stripped.  Never
        probabilistic.
        """
        if not self.terms:
            return True
        if self.is_rational():
            return False
        for digits in (15, 40):
            ball = self._ball(digits)
            if abs(ball.c) > ball.r:
                return False
        mu = self._minimal_polynomial()
        if mu[0] != 0:
            return False  # no embedding maps this element to zero
        psi = mu[1:]
        assert psi[0] != 0  # square-free moduli make mu square-free
        top = max(abs(c) for c in psi[1:]) if len(psi) > 1 else Fraction(0)
        bound = abs(psi[0]) / (abs(psi[0]) + top)
        digits = 40
        while True:
            ball = self._ball(digits)
            if abs(ball.c) > ball.r:
                return False
            b = mp.mpf(bound.numerator) / mp.mpf(bound.denominator)
            if abs(ball.c) + ball.r < b:
                return True
            digits *= 2

    def invert(self) -> "TowerElement":
        """Exact inverse by iterated extended Euclid across the generators.

        Raises ZeroDivision for (embedded) zero, NotInvertible with a factor
        witness when a nonzero zero divisor is hit.
        """
        if not self.terms:
            raise ZeroDivision("inverting zero")
        try:
            return _invert(self)
        except NotInvertible:
            if self.is_zero():
                raise ZeroDivision(
                    "inverting an element whose embedded value is zero") from None
            raise

    def _ball(self, digits10: int) -> _Ball:
        prec = int(digits10 * 3.4) + 40
        target = mp.mpf(10) ** (-digits10)
        gens: dict[int, RootApprox] = {}
        for i in self.present_generators():
            gens[i] = self.ctx.extensions[i].refine_to(target)
        with mp.workprec(prec):
            acc = _Ball(mp.mpc(0), mp.mpf(0))
            for key, coeff in self.terms.items():
                term = _Ball.from_fraction(coeff, prec)
                for i, e in enumerate(key):
                    if e:
                        root = gens[i]
                        term = term.mul(_Ball(root.center, root.radius).pow(e, prec), prec)
                acc = acc.add(term, prec)
            return acc

    def _minimal_polynomial(self) -> list[Fraction]:
        """Minimal polynomial of the element over Q, monic, coefficients
        lowest degree first.

        Krylov iteration on the powers 1, a, a^2, ...: the first linear
        dependence over Q gives the minimal polynomial.  Moduli are
        square-free, so the ring is a product of number fields and the
        minimal polynomial is exactly prod (z - v) over the distinct values
        v the element takes across all embeddings; its degree is usually
        far below the subring dimension.
        """
        echelon: list[tuple[tuple, dict, list[Fraction]]] = []
        power = self.ctx.one
        k = 0
        while True:
            row = dict(power.terms)
            combo = [Fraction(0)] * k + [Fraction(1)]
            for piv, brow, bcombo in echelon:
                v = row.get(piv)
                if not v:
                    continue
                f = v / brow[piv]
                for kk, vv in brow.items():
                    nv = row.get(kk, Fraction(0)) - f * vv
                    if nv:
                        row[kk] = nv
                    else:
                        row.pop(kk, None)
                for i, c in enumerate(bcombo):
                    if c:
                        combo[i] -= f * c
            if not row:
                return combo
            piv = min(row)
            echelon.append((piv, row, combo))
            power = power * self
            k += 1

    def approximate(self, digits: int) -> mp.mpc:
        """Complex approximation with certified error below 10**-digits."""
        attempt = 0
        while True:
            work = digits + 10 + attempt * 20
            ball = self._ball(work)
            if ball.r < mp.mpf(10) ** (-digits) / 2:
                with mp.workdps(digits + 5):
                    return mp.mpc(ball.c)
            attempt += 1
            if attempt > 8:
                raise RuntimeError("approximation did not converge")

    def serialize(self, digits: int | None = None) -> dict:
        gens = self.present_generators()
        doc = {
            "generators": [self.ctx.extensions[i].serialize() for i in gens],
            "coefficients": [
                [list(key), str(coeff)]
                for key, coeff in sorted(self.terms.items())
            ],
        }
        if digits:
            val = self.approximate(digits)
            doc["decimal"] = {
                "re": mp.nstr(val.real, digits),
                "im": mp.nstr(val.imag, digits),
                "digits": digits,
            }
        return doc

    def __repr__(self):
        if not self.terms:
            return "TowerElement(0)"
        if self.is_rational():
            return f"TowerElement({self.terms[()]})"
        try:
            v = self.approximate(8)
            return f"TowerElement(~{mp.nstr(v, 8)}; {len(self.terms)} terms)"
        except Exception:
            return f"TowerElement({len(self.terms)} terms)"


def _reduce_terms(ctx: TowerContext, raw: dict) -> dict:
    """Canonical reduced form: degree in t_j below deg(m_j) for every j."""
    out: dict = {}
    stack = [(k, c) for k, c in raw.items() if c]
    while stack:
        key, coeff = stack.pop()
        over = None
        for i, e in enumerate(key):
            if e >= ctx.extensions[i].degree:
                over = i
                break
        if over is None:
            s = out.get(key, Fraction(0)) + coeff
            if s:
                out[key] = s
            else:
                out.pop(key, None)
            continue
        ext = ctx.extensions[over]
        repl = ext.reduced_power(key[over])
        for e2, c2 in enumerate(repl):
            if not c2:
                continue
            nk = list(key)
            nk[over] = e2
            stack.append((_trim(tuple(nk)), coeff * c2))
    return out


# -- inversion ------------------------------------------------------------


def _as_coeff_lists(a: TowerElement, j: int) -> list[TowerElement]:
    """View a as a polynomial in generator j: list of coefficient elements
    (not involving t_j), lowest degree first."""
    d = a.ctx.extensions[j].degree
    buckets: list[dict] = [dict() for _ in range(d)]
    for key, c in a.terms.items():
        e = key[j] if len(key) > j else 0
        nk = list(key)
        if len(nk) > j:
            nk[j] = 0
        buckets[e][_trim(tuple(nk))] = c
    return [TowerElement(a.ctx, b, reduce=False) for b in buckets]


def _rp_strip(p: list[TowerElement]) -> list[TowerElement]:
    q = list(p)
    while q and not q[-1]:
        q.pop()
    return q


def _rp_divmod(num: list[TowerElement], den: list[TowerElement], ctx: TowerContext):
    den = _rp_strip(den)
    lead_inv = _invert(den[-1]) if not den[-1].is_rational() or den[-1].terms.get((), 0) != 1 \
        else ctx.one
    rem = list(num)
    dq = len(rem) - len(den)
    quo: list[TowerElement] = [ctx.zero] * (dq + 1) if dq >= 0 else []
    while len(_rp_strip(rem)) >= len(den):
        rem = _rp_strip(rem)
        k = len(rem) - len(den)
        c = rem[-1] * lead_inv
        quo[k] = quo[k] + c
        for i, dc in enumerate(den):
            rem[i + k] = rem[i + k] - c * dc
        rem = rem[:-1]
    return quo, _rp_strip(rem)


def _invert(a: TowerElement) -> TowerElement:
    ctx = a.ctx
    if not a.terms:
        raise ZeroDivision("inverting zero")
    gens = a.present_generators()
    if not gens:
        return ctx.constant(Fraction(1) / a.terms[()])
    j = gens[-1]
    d = ctx.extensions[j].degree
    m_list = [ctx.constant(c) for c in ctx.extensions[j].modulus.coeffs]
    a_list = _rp_strip(_as_coeff_lists(a, j))

    r0, r1 = m_list, a_list
    s0, s1 = [ctx.zero], [ctx.one]
    while _rp_strip(r1):
        q, r = _rp_divmod(r0, r1, ctx)
        r0, r1 = r1, r
        # s_{k+1} = s_{k-1} - q * s_k
        prod = [ctx.zero] * (len(q) + len(s1) - 1) if q and s1 else []
        for i, qc in enumerate(q):
            for k, sc in enumerate(s1):
                prod[i + k] = prod[i + k] + qc * sc
        width = max(len(s0), len(prod), 1)
        nxt = [(s0[i] if i < len(s0) else ctx.zero) -
               (prod[i] if i < len(prod) else ctx.zero) for i in range(width)]
        s0, s1 = s1, _rp_strip(nxt)

    g = _rp_strip(r0)
    if len(g) > 1:
        # nontrivial common factor of a and the modulus: witness for a split
        try:
            glead_inv = _invert(g[-1])
            monic = [c * glead_inv for c in g]
        except NotInvertible:
            monic = g
        witness: object
        if all(c.is_rational() for c in monic):
            witness = UPoly([c.as_fraction() for c in monic])
        else:
            witness = monic
        raise NotInvertible(j, witness)
    ginv = _invert(g[0])
    # inverse = s0(t_j) * ginv, assembled back into the full ring
    acc = ctx.zero
    tj = ctx.generator(j)
    tpow = ctx.one
    for k, sc in enumerate(s0):
        if k:
            tpow = tpow * tj
        if sc:
            acc = acc + sc * tpow
    return acc * ginv


def eval_bpoly(p: BPoly, x, y: TowerElement) -> TowerElement:
    """Exact evaluation of a bivariate polynomial at a rational abscissa and
    a tower ordinate.  Coefficients may themselves be tower elements of the
    same context."""
    if not isinstance(y, TowerElement):
        raise TypeError("ordinate must be a TowerElement")
    for c in p.terms.values():
        if isinstance(c, TowerElement) and c.ctx is not y.ctx:
            raise ContextMismatch("coefficient context differs from the ordinate's")
    result = p.eval(Fraction(x), y)
    if isinstance(result, (int, Fraction)):
        return y.ctx.constant(result)
    return result
