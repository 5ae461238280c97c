"""Precision-tracked p-adic arithmetic and the embedding of O_K into Z_p.

PadicElem represents p^v * u + O(p^(v+n)) with u a unit known mod p^n.
Precision propagates pessimistically: min absolute precision under addition,
summed valuations and min relative precision under multiplication.
"""

from __future__ import annotations

from fractions import Fraction

from .quadfield import QuadFieldElem, ConfigError

INF_VAL = 10**6  # absolute precision stamp for exact zeros


class PrecisionError(ArithmeticError):
    pass


class UnsupportedPrimeError(ConfigError):
    pass


def _vp(n: int, p: int) -> int:
    if n == 0:
        return INF_VAL
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicElem:
    __slots__ = ("p", "v", "u", "n")

    def __init__(self, p: int, v: int, u: int, n: int):
        # normalized on construction; u == 0 encodes O(p^v)
        self.p = p
        if u == 0:
            self.v = min(v, INF_VAL)
            self.u = 0
            self.n = 0
            return
        k = _vp(u, p)
        u //= p**k
        v += k
        n -= k
        if n <= 0:
            # the unit carried no surviving digits
            self.v = min(v + n, INF_VAL)
            self.u = 0
            self.n = 0
            return
        self.v = v
        self.u = u % p**n
        self.n = n

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(p: int, abs_prec: int = INF_VAL) -> "PadicElem":
        return PadicElem(p, abs_prec, 0, 0)

    @staticmethod
    def from_int(a: int, p: int, n: int) -> "PadicElem":
        if a == 0:
            return PadicElem.zero(p)
        v = _vp(a, p)
        return PadicElem(p, v, a // p**v, n)

    @staticmethod
    def from_fraction(q: Fraction, p: int, n: int) -> "PadicElem":
        if q == 0:
            return PadicElem.zero(p)
        num, den = q.numerator, q.denominator
        vn, vd = _vp(num, p), _vp(den, p)
        num //= p**vn
        den //= p**vd
        u = num * pow(den, -1, p**n) % p**n
        return PadicElem(p, vn - vd, u, n)

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        """Indistinguishable from zero at the known precision."""
        return self.u == 0

    def abs_prec(self) -> int:
        return self.v + self.n if self.u else self.v

    def valuation(self) -> int:
        """Valuation; for a tracked zero this is a lower bound."""
        return self.v

    def lift(self) -> int:
        """Integer lift p^v * u (v >= 0 required)."""
        if self.u == 0:
            return 0
        if self.v < 0:
            raise ValueError("negative valuation has no integer lift")
        return self.p**self.v * self.u

    def unit_lift(self) -> int:
        return self.u

    # -- arithmetic ------------------------------------------------------------

    def _check(self, other: "PadicElem"):
        if self.p != other.p:
            raise ConfigError("mixed primes")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PadicElem.from_fraction(Fraction(other), self.p, max(self.n, 1))
        self._check(other)
        p = self.p
        ap1, ap2 = self.abs_prec(), other.abs_prec()
        absn = min(ap1, ap2)
        if self.u == 0 and other.u == 0:
            return PadicElem.zero(p, absn)
        if self.u == 0:
            return _reduce_abs(other, absn)
        if other.u == 0:
            return _reduce_abs(self, absn)
        m = min(self.v, other.v)
        nrel = absn - m
        if nrel <= 0:
            return PadicElem.zero(p, absn)
        mod = p**nrel
        s = (self.u * p ** (self.v - m) + other.u * p ** (other.v - m)) % mod
        if s == 0:
            return PadicElem.zero(p, absn)
        return PadicElem(p, m, s, nrel)

    __radd__ = __add__

    def __neg__(self):
        if self.u == 0:
            return self
        return PadicElem(self.p, self.v, self.p**self.n - self.u, self.n)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PadicElem.from_fraction(Fraction(other), self.p, max(self.n, 1))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PadicElem.from_fraction(Fraction(other), self.p, max(self.n, 1))
        self._check(other)
        p = self.p
        if self.u == 0 or other.u == 0:
            # O(p^a) * (p^v u + ...) = O(p^(a+v))
            return PadicElem.zero(p, self.v + other.v)
        n = min(self.n, other.n)
        return PadicElem(p, self.v + other.v, self.u * other.u % p**n, n)

    __rmul__ = __mul__

    def inverse(self) -> "PadicElem":
        if self.u == 0:
            raise ZeroDivisionError("p-adic inverse of (indistinguishable-from-)zero")
        return PadicElem(self.p, -self.v, pow(self.u, -1, self.p**self.n), self.n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PadicElem.from_fraction(Fraction(other), self.p, max(self.n, 1))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = PadicElem.from_int(1, self.p, self.n if self.n else 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- structure -----------------------------------------------------------

    def teichmuller(self) -> "PadicElem":
        """Teichmuller representative of the unit part (requires v = 0)."""
        if self.u == 0 or self.v != 0:
            raise ValueError("teichmuller needs a unit")
        p, n = self.p, self.n
        mod = p**n
        w = self.u % p
        # Hensel for w^(p-1) = 1: iterate Frobenius
        w = self.u % mod
        for _ in range(n + 2):
            w = pow(w, p, mod)
        return PadicElem(p, 0, w, n)

    def __repr__(self):
        if self.u == 0:
            return f"O({self.p}^{self.v})"
        return f"{self.u}*{self.p}^{self.v} + O({self.p}^{self.v + self.n})"

    def serialize(self) -> dict:
        """{valuation, digits base p, precision} per the wire format."""
        if self.u == 0:
            return {"valuation": None, "digits": [], "precision": self.v}
        digs = []
        u = self.u
        for _ in range(self.n):
            digs.append(u % self.p)
            u //= self.p
        return {"valuation": self.v, "digits": digs, "precision": self.n}

    def digits_str(self) -> str:
        s = self.serialize()
        if s["valuation"] is None:
            return f"O({self.p}^{self.v})"
        return "..." + ",".join(str(d) for d in reversed(s["digits"])) + f" * {self.p}^{self.v}"


def _reduce_abs(x: PadicElem, absn: int) -> PadicElem:
    """Forget x below absolute precision absn."""
    if x.u == 0:
        return PadicElem.zero(x.p, min(x.v, absn))
    n = absn - x.v
    if n <= 0:
        return PadicElem.zero(x.p, absn)
    if n >= x.n:
        return x
    return PadicElem(x.p, x.v, x.u % x.p**n, n)


def val_of_diff(a: PadicElem, b: PadicElem) -> int:
    """Absolute valuation bound of a - b (how many digits they share)."""
    d = a - b
    return d.v if d.u else d.abs_prec()


# -- p-adic logarithm ----------------------------------------------------------

def padic_log_unit(x: PadicElem) -> PadicElem:
    """log of a principal unit (x = 1 mod p), by the usual series."""
    if x.u == 0 or x.v != 0 or x.u % x.p != 1:
        raise ValueError("padic_log_unit needs x = 1 (mod p)")
    p, n = x.p, x.n
    one = PadicElem.from_int(1, p, n)
    h = x - one
    if h.u == 0:
        return PadicElem.zero(p, h.v)
    # sum (-1)^(k+1) h^k / k; v(h) >= 1 so k = n + 8 terms suffice for p >= 5
    kmax = n + 8
    acc = PadicElem.zero(p, INF_VAL)
    hp = h
    for k in range(1, kmax + 1):
        t = hp / k
        acc = acc + (t if k % 2 == 1 else -t)
        hp = hp * h
    return acc


def padic_log_branch(x: PadicElem, branch: PadicElem | int = 0) -> PadicElem:
    """Branch-of-log: x = p^v * omega * u1 maps to v*branch + log(u1)."""
    if x.u == 0:
        raise ValueError("log of zero")
    p, n = x.p, x.n
    if isinstance(branch, int):
        branch = PadicElem.from_int(branch, p, n) if branch else PadicElem.zero(p)
    unit = PadicElem(p, 0, x.u, x.n)
    u1 = unit / unit.teichmuller()
    out = padic_log_unit(u1)
    if x.v != 0 and not branch.is_zero():
        out = out + branch * x.v
    return out


# -- the embedding K -> Q_p ------------------------------------------------------

class PadicEmbedding:
    """Embedding of Q(sqrt(-D)) into Q_p for a split prime, pinned by |iota(pi)| < 1."""

    def __init__(self, p: int, D: int, root: int, N: int, pi: QuadFieldElem):
        self.p = p
        self.D = D
        self.root = root  # integer lift of sqrt(-D) mod p^N
        self.N = N
        self.pi = pi
        self.pi_image = self.embed(pi)
        self.pibar_image = self.embed(pi.conj())
        if self.pi_image.valuation() < 1:
            raise ConfigError("embedding does not send pi into the maximal ideal")

    def embed(self, x: QuadFieldElem, n: int | None = None) -> PadicElem:
        if x.D != self.D:
            raise ConfigError("field mismatch in embedding")
        n = n or self.N
        a = PadicElem.from_fraction(x.a, self.p, n)
        if x.b == 0:
            return a
        b = PadicElem.from_fraction(x.b, self.p, n)
        r = PadicElem.from_int(self.root, self.p, n)
        return a + b * r

    def embed_fraction(self, q: Fraction, n: int | None = None) -> PadicElem:
        return PadicElem.from_fraction(q, self.p, n or self.N)


def hensel_embed(D: int, p: int, N: int, pi: QuadFieldElem) -> PadicEmbedding:
    """Hensel-lift a root r of x^2 + D mod p^N with iota(pi) = 0 mod p.

    Raises UnsupportedPrimeError for inert or ramified p (p >= 5 split required).
    """
    if p < 5:
        raise UnsupportedPrimeError(f"p = {p} < 5 unsupported")
    if D % p == 0:
        raise UnsupportedPrimeError(f"p = {p} ramifies in Q(sqrt(-{D}))")
    r0 = None
    for r in range(1, p):
        if (r * r + D) % p == 0:
            r0 = r
            break
    if r0 is None:
        raise UnsupportedPrimeError(f"p = {p} is inert in Q(sqrt(-{D}))")
    mod = p
    r = r0
    while mod < p**N:
        mod = min(mod * mod, p**N)
        r = (r - (r * r + D) * pow(2 * r, -1, mod)) % mod
    # choose the root sending pi inside the maximal ideal:
    # iota(pi) = a + b*cand, test p | (a + b*cand) via a common denominator
    for cand in (r, (p**N - r) % p**N):
        den = pi.a.denominator * pi.b.denominator
        val_num = pi.a.numerator * pi.b.denominator + pi.b.numerator * pi.a.denominator * cand
        if den % p != 0 and val_num % p == 0:
            return PadicEmbedding(p, D, cand, N, pi)
    raise ConfigError("no root of x^2+D sends pi into the maximal ideal "
                      "(is pi a generator of a prime above p?)")
