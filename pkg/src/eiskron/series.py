"""Truncated Laurent series over a pluggable coefficient ring.

One implementation serves both exact expansions over K = Q(sqrt(-D)) and
p-adic expansions on residue discs; the ring adapter supplies constants and
coercions, coefficients themselves are ring elements with operator arithmetic.

A Series is sum_{ord <= k < trunc} c_k x^k + O(x^trunc).  trunc = BIG marks
entire/polynomial data.  Composition requires positive valuation of the inner
series; Laurent pole parts are composed through the inverse of the unit part.

High-truncation p-adic multiplication and composition run on packed integer
vectors mod p^M (the PadicRing fast path); everything else is dict-based.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .quadfield import QuadFieldElem
from .padics import PadicElem, PadicEmbedding, INF_VAL

BIG = 10**9


class QFRing:
    """Coefficients in Q(sqrt(-D))."""

    def __init__(self, D: int):
        self.D = D

    def from_int(self, k: int) -> QuadFieldElem:
        return QuadFieldElem(k, 0, self.D)

    def from_fraction(self, q) -> QuadFieldElem:
        return QuadFieldElem(Fraction(q), 0, self.D)

    def coerce(self, x):
        if isinstance(x, QuadFieldElem):
            return x
        return QuadFieldElem(Fraction(x), 0, self.D)

    def is_nil(self, x: QuadFieldElem) -> bool:
        return x.is_zero()

    fast = False


class PadicRing:
    """Coefficients in Q_p at working relative precision n."""

    def __init__(self, p: int, n: int, embedding: PadicEmbedding | None = None):
        self.p = p
        self.n = n
        self.embedding = embedding

    def from_int(self, k: int) -> PadicElem:
        return PadicElem.from_int(k, self.p, self.n)

    def from_fraction(self, q) -> PadicElem:
        return PadicElem.from_fraction(Fraction(q), self.p, self.n)

    def coerce(self, x):
        if isinstance(x, PadicElem):
            return x
        if isinstance(x, QuadFieldElem):
            if self.embedding is None:
                raise ValueError("no embedding configured on this PadicRing")
            return self.embedding.embed(x, self.n)
        return PadicElem.from_fraction(Fraction(x), self.p, self.n)

    def is_nil(self, x: PadicElem) -> bool:
        return x.u == 0

    fast = True

    # -- packed fast path ---------------------------------------------------

    def pack(self, coeffs: dict, lo: int, hi: int):
        """(shift s, modulus exponent M, int list for degrees lo..hi-1)."""
        s = 0
        m_abs = self.n + 8
        for c in coeffs.values():
            if c.u:
                s = max(s, -c.v)
                m_abs = min(m_abs, c.abs_prec())
            else:
                m_abs = min(m_abs, c.v)
        M = m_abs + s
        if M <= 0:
            raise ValueError("packed p-adic series has no surviving digits")
        mod = self.p**M
        vec = [0] * (hi - lo)
        for k, c in coeffs.items():
            if lo <= k < hi and c.u:
                e = c.v + s
                vec[k - lo] = c.u * self.p**e % mod if e >= 0 else 0
        return s, M, vec

    def unpack(self, s: int, M: int, vec: list, lo: int) -> dict:
        out = {}
        for i, cv in enumerate(vec):
            cv %= self.p**M
            if cv:
                out[lo + i] = PadicElem(self.p, -s, cv, M)
        return out


def _conv(a: list, b: list, mod: int, out_len: int) -> list:
    """Truncated convolution of int vectors mod `mod`."""
    out = [0] * out_len
    for i, ai in enumerate(a):
        if ai == 0 or i >= out_len:
            continue
        lim = out_len - i
        for j, bj in enumerate(b[:lim]):
            if bj:
                out[i + j] = (out[i + j] + ai * bj) % mod
    return out


class Series:
    __slots__ = ("ring", "c", "trunc")

    def __init__(self, ring, coeffs: dict, trunc: int):
        self.ring = ring
        self.trunc = min(trunc, BIG)
        self.c = {k: v for k, v in coeffs.items() if k < self.trunc and not ring.is_nil(v)}

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(ring, trunc: int = BIG) -> "Series":
        return Series(ring, {}, trunc)

    @staticmethod
    def one(ring, trunc: int = BIG) -> "Series":
        return Series(ring, {0: ring.from_int(1)}, trunc)

    @staticmethod
    def x(ring, trunc: int = BIG) -> "Series":
        return Series(ring, {1: ring.from_int(1)}, trunc)

    @staticmethod
    def const(ring, value, trunc: int = BIG) -> "Series":
        return Series(ring, {0: ring.coerce(value)}, trunc)

    # -- structure ------------------------------------------------------------

    def ord(self) -> int:
        return min(self.c) if self.c else self.trunc

    def coeff(self, k: int):
        if k >= self.trunc:
            raise ValueError(f"coefficient {k} beyond truncation {self.trunc}")
        return self.c.get(k, self.ring.from_int(0))

    def is_zero(self) -> bool:
        return not self.c

    def pole_order(self) -> int:
        o = self.ord()
        return -o if o < 0 else 0

    def truncate(self, T: int) -> "Series":
        return Series(self.ring, {k: v for k, v in self.c.items() if k < T},
                      min(self.trunc, T))

    def map_coeffs(self, ring, fn) -> "Series":
        return Series(ring, {k: fn(v) for k, v in self.c.items()}, self.trunc)

    # -- linear ops -------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Series):
            other = Series.const(self.ring, other)
        T = min(self.trunc, other.trunc)
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out[k] + v if k in out else v
        return Series(self.ring, out, T)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.ring, {k: -v for k, v in self.c.items()}, self.trunc)

    def __sub__(self, other):
        if not isinstance(other, Series):
            other = Series.const(self.ring, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, a) -> "Series":
        a = self.ring.coerce(a)
        return Series(self.ring, {k: v * a for k, v in self.c.items()}, self.trunc)

    def scale_var(self, a) -> "Series":
        """f(a x): degreewise scaling (a a unit of the coefficient ring)."""
        a = self.ring.coerce(a)
        out = {}
        for k, v in self.c.items():
            out[k] = v * a**k
        return Series(self.ring, out, self.trunc)

    def shift(self, k: int) -> "Series":
        return Series(self.ring, {d + k: v for d, v in self.c.items()}, self.trunc + k)

    # -- multiplication -----------------------------------------------------------

    def __mul__(self, other):
        if not isinstance(other, Series):
            return self.scale(other)
        ring = self.ring
        if self.is_zero() or other.is_zero():
            T = min(self.trunc + other.ord(), other.trunc + self.ord(), BIG)
            return Series(ring, {}, max(T, 1))
        o1, o2 = self.ord(), other.ord()
        T = min(self.trunc + o2, other.trunc + o1)
        if ring.fast and T - o1 - o2 >= 60 and T < BIG:
            n_out = T - o1 - o2
            s1, M1, v1 = ring.pack(self.c, o1, self.trunc if self.trunc < BIG else max(self.c) + 1)
            s2, M2, v2 = ring.pack(other.c, o2, other.trunc if other.trunc < BIG else max(other.c) + 1)
            M = min(M1, M2)
            vec = _conv(v1, v2, ring.p**M, n_out)
            return Series(ring, ring.unpack(s1 + s2, M, vec, o1 + o2), T)
        out = {}
        for i, a in self.c.items():
            for j, b in other.c.items():
                if i + j < T:
                    k = i + j
                    out[k] = out[k] + a * b if k in out else a * b
        return Series(ring, out, T)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Series.one(self.ring, BIG)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def inverse(self) -> "Series":
        """Inverse of c_o x^o (1 + h); relative truncation is preserved."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero series")
        o = self.ord()
        lead = self.c[o]
        inv_lead = _ring_inv(lead, self.ring)
        if len(self.c) == 1:
            return Series(self.ring, {-o: inv_lead},
                          (self.trunc - 2 * o) if self.trunc < BIG else BIG)
        if self.trunc >= BIG:
            raise ValueError("inverse of a multi-term polynomial needs a truncation")
        rel = self.trunc - o
        u = Series(self.ring, {k - o: v * inv_lead for k, v in self.c.items()}, rel)
        # Newton: y <- y (2 - u y); each step is exact to the doubled precision,
        # so the recorded truncation is re-stamped rather than inherited
        y = Series.one(self.ring, 1)
        prec = 1
        two = Series.const(self.ring, 2, BIG)
        while prec < rel:
            prec = min(2 * prec, rel)
            yp = Series(self.ring, y.c, prec)  # lift the stamp before the step
            step = yp * (two - u.truncate(prec) * yp)
            y = Series(self.ring, step.truncate(prec).c, prec)
        y = y.scale(inv_lead)
        return Series(self.ring, {k - o: v for k, v in y.c.items()}, rel - o)

    def __truediv__(self, other):
        if not isinstance(other, Series):
            inv = self.ring.coerce(other)
            inv = self.ring.from_int(1) / inv if not isinstance(inv, PadicElem) else inv.inverse()
            return self.scale(inv)
        return self * other.inverse()

    # -- calculus ----------------------------------------------------------------

    def derivative(self) -> "Series":
        out = {}
        for k, v in self.c.items():
            if k != 0:
                out[k - 1] = v * k
        return Series(self.ring, out, self.trunc - 1 if self.trunc < BIG else BIG)

    def integrate(self) -> "Series":
        """Termwise primitive with zero constant; x^-1 must be absent."""
        if -1 in self.c:
            raise ValueError("x^-1 term: primitive needs a log (handled upstream)")
        out = {}
        for k, v in self.c.items():
            out[k + 1] = v / (k + 1)
        return Series(self.ring, out, self.trunc + 1 if self.trunc < BIG else BIG)

    # -- composition ---------------------------------------------------------------

    def compose(self, g: "Series") -> "Series":
        """f(g) for ord(g) >= 1."""
        ring = self.ring
        og = g.ord()
        if og < 1:
            raise ValueError("composition needs positive valuation")
        if g.is_zero():
            cT = g.trunc
            out = Series(ring, {0: self.c[0]} if 0 in self.c else {}, cT)
            if self.ord() < 0:
                raise ZeroDivisionError("pole composed with zero series")
            return out
        fT = self.trunc
        T = min(g.trunc if g.trunc < BIG else BIG,
                fT * og if fT < BIG else BIG)
        gt = g.truncate(T) if T < BIG else g
        # regular part by Paterson-Stockmeyer
        reg_keys = [k for k in self.c if k >= 0]
        out = Series.zero(ring, T)
        if reg_keys:
            top = max(reg_keys) + 1
            m = max(1, isqrt(top))
            pows = [Series.one(ring, T)]
            for _ in range(m - 1):
                pows.append((pows[-1] * gt).truncate(T))
            gm = (pows[-1] * gt).truncate(T)
            nblocks = (top + m - 1) // m
            acc = Series.zero(ring, T)
            for bi in reversed(range(nblocks)):
                blk = Series.zero(ring, T)
                for i in range(m):
                    k = bi * m + i
                    if k in self.c:
                        blk = blk + pows[i].scale(self.c[k])
                acc = (acc * gm).truncate(T) + blk
            out = acc
        # pole part through the inverse
        pole_keys = sorted(k for k in self.c if k < 0)
        if pole_keys:
            ginv = gt.inverse()
            ip = ginv
            cur = -1
            for k in reversed(pole_keys):  # k = -1, -2, ...
                while cur > k:
                    ip = (ip * ginv)
                    cur -= 1
                out = out + ip.scale(self.c[k]).truncate(T)
                out = out.truncate(min(T, ip.trunc))
        return out.truncate(min(T, out.trunc))

    def reversion(self) -> "Series":
        """g with f(g) = x, for f = c1 x + ... with invertible c1."""
        if self.ord() != 1:
            raise ValueError("reversion needs a series of order exactly 1")
        ring = self.ring
        T = self.trunc
        c1 = self.c[1]
        c1inv = ring.from_int(1) / c1 if not isinstance(c1, PadicElem) else c1.inverse()
        g = Series(ring, {1: c1inv}, 2)
        xs = Series.x(ring, T)
        prec = 2
        while prec < T:
            prec = min(2 * prec, T)
            gp = Series(ring, dict(g.c), prec)
            err = self.truncate(prec).compose(gp) - xs.truncate(prec)
            der = self.derivative().truncate(prec - 1).compose(gp)
            step = gp - err * der.inverse()
            g = Series(ring, step.truncate(prec).c, prec)
        return g.truncate(T)

    # -- analytic helpers -------------------------------------------------------------

    def exp(self) -> "Series":
        """exp(f) with ord(f) >= 1, by the ODE y' = f' y."""
        if not self.is_zero() and self.ord() < 1:
            raise ValueError("exp needs positive valuation")
        T = self.trunc
        fp = self.derivative()
        y = {0: self.ring.from_int(1)}
        for n in range(1, T if T < BIG else max(self.c, default=0) * 8 + 1):
            acc = None
            for k, fv in fp.c.items():
                j = n - 1 - k
                if 0 <= j < n and j in y:
                    t = fv * y[j]
                    acc = t if acc is None else acc + t
            if acc is not None:
                y[n] = acc / n
        return Series(self.ring, y, T)

    def log_unit(self) -> "Series":
        """log(f) for f = 1 + h, ord(h) >= 1 (integrate f'/f)."""
        if 0 not in self.c:
            raise ValueError("log_unit needs constant term 1")
        return (self.derivative() * self.inverse()).integrate()

    def evaluate(self, x0):
        """Value at a ring point; Horner on the regular part, powers on the pole."""
        ring = self.ring
        top = max((k for k in self.c if k >= 0), default=-1)
        acc = ring.from_int(0)
        for k in range(top, -1, -1):
            acc = acc * x0
            if k in self.c:
                acc = acc + self.c[k]
        neg = [k for k in self.c if k < 0]
        if neg:
            inv = _ring_inv(x0, ring)
            for k in neg:
                acc = acc + self.c[k] * _ring_pow(inv, -k, ring)
        return acc

    def __repr__(self):
        ks = sorted(self.c)
        inner = " + ".join(f"({self.c[k]})*x^{k}" for k in ks[:6])
        more = " + ..." if len(ks) > 6 else ""
        return f"Series({inner}{more} + O(x^{self.trunc}))"


def _ring_pow(x, k, ring):
    out = ring.from_int(1)
    base = x
    while k:
        if k & 1:
            out = out * base
        base = base * base
        k >>= 1
    return out


def _ring_inv(x, ring):
    if isinstance(x, PadicElem):
        return x.inverse()
    return ring.from_int(1) / x


class BiSeries:
    """Rectangularly truncated series in two variables, Laurent in each."""

    __slots__ = ("ring", "c", "tx", "ty")

    def __init__(self, ring, coeffs: dict, tx: int, ty: int):
        self.ring = ring
        self.tx = min(tx, BIG)
        self.ty = min(ty, BIG)
        self.c = {k: v for k, v in coeffs.items()
                  if k[0] < self.tx and k[1] < self.ty and not ring.is_nil(v)}

    @staticmethod
    def zero(ring, tx: int, ty: int) -> "BiSeries":
        return BiSeries(ring, {}, tx, ty)

    @staticmethod
    def from_x(f: Series, ty: int) -> "BiSeries":
        return BiSeries(f.ring, {(k, 0): v for k, v in f.c.items()}, f.trunc, ty)

    @staticmethod
    def from_y(f: Series, tx: int) -> "BiSeries":
        return BiSeries(f.ring, {(0, k): v for k, v in f.c.items()}, tx, f.trunc)

    def ordx(self) -> int:
        return min((k[0] for k in self.c), default=self.tx)

    def ordy(self) -> int:
        return min((k[1] for k in self.c), default=self.ty)

    def __add__(self, other):
        if not isinstance(other, BiSeries):
            other = BiSeries(self.ring, {(0, 0): self.ring.coerce(other)}, BIG, BIG)
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out[k] + v if k in out else v
        return BiSeries(self.ring, out, min(self.tx, other.tx), min(self.ty, other.ty))

    __radd__ = __add__

    def __neg__(self):
        return BiSeries(self.ring, {k: -v for k, v in self.c.items()}, self.tx, self.ty)

    def __sub__(self, other):
        if not isinstance(other, BiSeries):
            other = BiSeries(self.ring, {(0, 0): self.ring.coerce(other)}, BIG, BIG)
        return self + (-other)

    def scale(self, a) -> "BiSeries":
        a = self.ring.coerce(a)
        return BiSeries(self.ring, {k: v * a for k, v in self.c.items()}, self.tx, self.ty)

    def __mul__(self, other):
        if not isinstance(other, BiSeries):
            return self.scale(other)
        tx = min(self.tx + other.ordx(), other.tx + self.ordx())
        ty = min(self.ty + other.ordy(), other.ty + self.ordy())
        out = {}
        for (i1, j1), a in self.c.items():
            for (i2, j2), b in other.c.items():
                i, j = i1 + i2, j1 + j2
                if i < tx and j < ty:
                    key = (i, j)
                    out[key] = out[key] + a * b if key in out else a * b
        return BiSeries(self.ring, out, tx, ty)

    __rmul__ = __mul__

    def coeff_of_y(self, j: int) -> Series:
        """Extract the y^j coefficient as a series in x."""
        if j >= self.ty:
            raise ValueError(f"y^{j} beyond truncation {self.ty}")
        return Series(self.ring, {k[0]: v for k, v in self.c.items() if k[1] == j},
                      self.tx)

    def coeff(self, i: int, j: int):
        if i >= self.tx or j >= self.ty:
            raise ValueError("coefficient beyond truncation")
        return self.c.get((i, j), self.ring.from_int(0))

    def swap(self) -> "BiSeries":
        return BiSeries(self.ring, {(j, i): v for (i, j), v in self.c.items()},
                        self.ty, self.tx)

    def truncate(self, tx: int, ty: int) -> "BiSeries":
        return BiSeries(self.ring, self.c, min(self.tx, tx), min(self.ty, ty))

    def __repr__(self):
        return f"BiSeries({len(self.c)} terms, O(x^{self.tx}, y^{self.ty}))"


def compose_uni_bi(f: Series, g: BiSeries) -> BiSeries:
    """f(g(x,y)) for a bivariate g with no constant term (poles in f allowed
    only when g has an invertible structure; not needed here)."""
    if (0, 0) in g.c:
        raise ValueError("composition needs vanishing constant term")
    if f.ord() < 0:
        raise ValueError("Laurent-in-bivariate composition unsupported")
    ring = f.ring
    tx, ty = g.tx, g.ty
    out = BiSeries.zero(ring, tx, ty)
    top = max(f.c, default=-1)
    # Horner
    acc = BiSeries.zero(ring, tx, ty)
    for k in range(top, -1, -1):
        acc = acc * g
        if k in f.c:
            acc = acc + BiSeries(ring, {(0, 0): f.c[k]}, tx, ty)
    return acc
