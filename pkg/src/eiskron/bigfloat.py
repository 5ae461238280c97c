"""Fixed-point multiprecision real/complex arithmetic with conservative error bounds.

A BigReal is an integer mantissa scaled by 2^(-fb) together with an exponent
bound err2 on the absolute error (value known to within 2^err2).  Fixed point
rather than floating point: every quantity this engine meets is O(1)-to-
moderate in magnitude, and absolute-error bookkeeping is what rational
recognition needs.

Errors are propagated pessimistically; transcendental routines run with
internal guard bits and stamp a conservative bound on the result.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .quadfield import QuadFieldElem

_EXACT = -(10**9)  # err2 sentinel for exact values

_LN2 = math.log(2)
_LOG10_2 = math.log10(2)


def _round_div(a: int, b: int) -> int:
    """Round a/b to nearest (b > 0)."""
    q, r = divmod(a, b)
    if 2 * r >= b:
        q += 1
    return q


class BigReal:
    __slots__ = ("man", "fb", "err2")

    def __init__(self, man: int, fb: int, err2: int = _EXACT):
        self.man = man
        self.fb = fb
        self.err2 = err2

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_int(n: int, fb: int) -> "BigReal":
        return BigReal(n << fb, fb)

    @staticmethod
    def from_fraction(x: Fraction, fb: int) -> "BigReal":
        if x.denominator == 1:
            return BigReal(x.numerator << fb, fb)
        man = _signed_round_div(x.numerator << fb, x.denominator)
        exact = (x.numerator << fb) % x.denominator == 0
        return BigReal(man, fb, _EXACT if exact else -fb)

    @staticmethod
    def from_float(x: float, fb: int) -> "BigReal":
        return BigReal.from_fraction(Fraction(x), fb)

    @staticmethod
    def from_decimal(s: str, fb: int) -> "BigReal":
        """Parse a decimal literal; error bound half an ulp of the last digit."""
        s = s.strip()
        neg = s.startswith("-")
        if s and s[0] in "+-":
            s = s[1:]
        if "." in s:
            head, tail = s.split(".")
            digits = len(tail)
            val = Fraction(int(head or "0") * 10**digits + int(tail or "0"), 10**digits)
        else:
            digits = 0
            val = Fraction(int(s))
        if neg:
            val = -val
        r = BigReal.from_fraction(val, fb)
        ulp2 = int(-digits / _LOG10_2) - 1
        return BigReal(r.man, fb, max(r.err2, ulp2))

    def _align(self, other: "BigReal"):
        fb = max(self.fb, other.fb)
        a = self.man << (fb - self.fb)
        b = other.man << (fb - other.fb)
        return a, b, fb

    # -- ring ops -------------------------------------------------------------

    def __add__(self, other):
        other = _as_real(other, self.fb)
        a, b, fb = self._align(other)
        return BigReal(a + b, fb, _err_add(self.err2, other.err2))

    __radd__ = __add__

    def __neg__(self):
        return BigReal(-self.man, self.fb, self.err2)

    def __sub__(self, other):
        other = _as_real(other, self.fb)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_real(other, self.fb)
        a, b, fb = self._align(other)
        man = _round_div(a * b, 1 << fb)
        # |x| de_y + |y| de_x + rounding
        ex = _err_mul_part(other.err2, a, fb)
        ey = _err_mul_part(self.err2, b, fb)
        err = _err_add(_err_add(ex, ey), -fb)
        return BigReal(man, fb, err)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_real(other, self.fb)
        if other.man == 0:
            raise ZeroDivisionError("BigReal division by zero")
        a, b, fb = self._align(other)
        man = _signed_round_div(a << fb, b)
        inv_mag = (1 << fb) ** 2 // abs(b) + 1  # |1/b| at fb bits
        err = _err_add(
            _err_add(_err_mul_part(self.err2, inv_mag, fb),
                     _err_mul_part(other.err2, abs(man) * inv_mag >> fb, fb)),
            -fb,
        )
        return BigReal(man, fb, err)

    def __rtruediv__(self, other):
        return _as_real(other, self.fb) / self

    def __pow__(self, n: int):
        if n < 0:
            return BigReal.from_int(1, self.fb) / (self ** (-n))
        out = BigReal.from_int(1, self.fb)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __abs__(self):
        return BigReal(abs(self.man), self.fb, self.err2)

    # -- queries ----------------------------------------------------------------

    def to_fraction(self) -> Fraction:
        return Fraction(self.man, 1 << self.fb)

    def to_float(self) -> float:
        s = self.man.bit_length() - 52
        if s <= 0:
            return self.man / (1 << self.fb)
        return (self.man >> s) * 2.0 ** (s - self.fb)

    def certified_digits(self) -> float:
        """Decimal digits of the absolute-error bound (inf for exact)."""
        if self.err2 <= _EXACT:
            return float("inf")
        return -self.err2 * _LOG10_2

    def sign(self) -> int:
        return (self.man > 0) - (self.man < 0)

    def __lt__(self, other):
        other = _as_real(other, self.fb)
        a, b, _ = self._align(other)
        return a < b

    def __le__(self, other):
        other = _as_real(other, self.fb)
        a, b, _ = self._align(other)
        return a <= b

    def __gt__(self, other):
        return not self <= other

    def __ge__(self, other):
        return not self < other

    def __repr__(self):
        return f"BigReal({self.dec(20)}, fb={self.fb}, err2={self.err2})"

    def dec(self, digits: int = 30) -> str:
        q = 10**digits
        v = _signed_round_div(self.man * q, 1 << self.fb)
        s = f"{abs(v):0{digits + 1}d}"
        head, tail = s[:-digits], s[-digits:]
        return ("-" if v < 0 else "") + f"{head}.{tail}"


def _signed_round_div(a: int, b: int) -> int:
    if b < 0:
        a, b = -a, -b
    if a >= 0:
        return _round_div(a, b)
    return -_round_div(-a, b)


def _as_real(x, fb: int) -> BigReal:
    if isinstance(x, BigReal):
        return x
    if isinstance(x, int):
        return BigReal.from_int(x, fb)
    if isinstance(x, Fraction):
        return BigReal.from_fraction(x, fb)
    raise TypeError(f"cannot coerce {x!r} to BigReal")


def _err_add(e1: int, e2: int) -> int:
    if e1 <= _EXACT and e2 <= _EXACT:
        return _EXACT
    return max(e1, e2) + 1


def _err_mul_part(e: int, other_man: int, fb: int) -> int:
    """Error bound exponent of (value with err2=e) * (|other| = other_man/2^fb)."""
    if e <= _EXACT:
        return _EXACT
    return e + max(abs(other_man).bit_length() - fb, 0) + 1


# -- elementary functions -----------------------------------------------------

def sqrt_real(x: BigReal) -> BigReal:
    if x.man < 0:
        raise ValueError("sqrt of negative BigReal")
    fb = x.fb
    n = x.man << fb  # value * 2^(2 fb)
    r = math.isqrt(n)
    return BigReal(r, fb, max(x.err2, -fb + 2))


def exp_real(x: BigReal) -> BigReal:
    """exp(x) by scaling-and-squaring plus Taylor, conservative error stamp."""
    fb = x.fb
    mag = abs(x.to_float())
    k = max(0, int(mag).bit_length() + 2)
    g = fb + 2 * k + 48
    xm = x.man << (g - fb)  # x at g fraction bits
    xs = xm >> k            # x / 2^k
    one = 1 << g
    term = one
    acc = one
    i = 1
    while term:
        term = _signed_round_div(term * xs, one)
        term = term // i if term >= 0 else -((-term) // i)
        acc += term
        i += 1
        if i > 5 * g:
            break
    for _ in range(k):
        acc = _signed_round_div(acc * acc, one)
    man = _signed_round_div(acc, 1 << (g - fb))
    res_mag_bits = max(man.bit_length() - fb, 0)
    err = max(x.err2 + res_mag_bits + 1, -fb + 4) if x.err2 > _EXACT else -fb + 4
    return BigReal(man, fb, err)


def ln_real(x: BigReal) -> BigReal:
    """Natural log by Newton iteration on exp."""
    if x.man <= 0:
        raise ValueError("ln of non-positive BigReal")
    fb = x.fb
    y = BigReal.from_float(math.log(x.to_float()), fb)
    # Newton: y <- y + x*exp(-y) - 1; quadratic, float seed gives ~50 bits
    steps = max(1, math.ceil(math.log2(fb / 45)) + 1)
    one = BigReal.from_int(1, fb)
    for _ in range(steps):
        y = y + x * exp_real(-y) - one
    return BigReal(y.man, fb, max(x.err2 + 1, -fb + 5))


_PI_CACHE: dict[int, BigReal] = {}


def pi_real(fb: int) -> BigReal:
    """pi by the Gauss-Legendre AGM iteration."""
    if fb in _PI_CACHE:
        return _PI_CACHE[fb]
    g = fb + 32
    one = BigReal.from_int(1, g)
    a = one
    b = one / sqrt_real(BigReal.from_int(2, g))
    t = BigReal.from_fraction(Fraction(1, 4), g)
    p = 1
    for _ in range(int(math.log2(g)) + 2):
        an = (a + b) * Fraction(1, 2)
        bn = sqrt_real(a * b)
        d = a - an
        t = t - BigReal.from_int(p, g) * d * d
        a, b, p = an, bn, 2 * p
    pi = (a + b) * (a + b) / (t * 4)
    out = BigReal(_signed_round_div(pi.man, 1 << (g - fb)), fb, -fb + 4)
    _PI_CACHE[fb] = out
    return out


_GAMMA_CACHE: dict[int, BigReal] = {}


def euler_gamma(fb: int) -> BigReal:
    """Euler-Mascheroni constant by the Brent-McMillan AGM-free sums.

    gamma = A(n)/B(n) - ln(n) with A = sum (n^k/k!)^2 H_k, B = sum (n^k/k!)^2,
    error O(e^(-4n)).
    """
    if fb in _GAMMA_CACHE:
        return _GAMMA_CACHE[fb]
    g = fb + 48
    n = int(g * _LN2 / 4) + 4
    one = 1 << g
    # fixed point at g bits; H_k kept at g bits too
    t = one  # (n^k/k!)^2 at k=0
    A = 0
    B = t
    H = 0
    n2 = n * n
    k = 1
    while t:
        H += _round_div(one, k)
        t = t * n2 // (k * k)
        t = t >> 0
        A += _round_div(t * H, one)
        B += t
        k += 1
        if k > 20 * n:
            break
    ratio = Fraction(A, B)
    r = BigReal.from_fraction(ratio, g)
    lnn = ln_real(BigReal.from_int(n, g))
    gam = r - lnn
    out = BigReal(_signed_round_div(gam.man, 1 << (g - fb)), fb, -fb + 6)
    _GAMMA_CACHE[fb] = out
    return out


def _sincos(x: BigReal):
    """(sin x, cos x) with range reduction mod 2 pi."""
    fb = x.fb
    g = fb + 48
    xg = BigReal(x.man << (g - fb), g, x.err2)
    xf = x.to_float()
    if abs(xf) > 6.4:
        k = round(xf / (2 * math.pi))
        xg = xg - pi_real(g) * (2 * k)
    one = 1 << g
    xm = xg.man
    s = 0
    c = 0
    term = one  # x^i / i!
    i = 0
    while term:
        if i % 4 == 0:
            c += term
        elif i % 4 == 1:
            s += term
        elif i % 4 == 2:
            c -= term
        else:
            s -= term
        term = _signed_round_div(term * xm, one)
        term = term // (i + 1) if term >= 0 else -((-term) // (i + 1))
        i += 1
        if i > 8 * g:
            break
    err = max(x.err2 + 1, -fb + 5)
    return (
        BigReal(_signed_round_div(s, 1 << (g - fb)), fb, err),
        BigReal(_signed_round_div(c, 1 << (g - fb)), fb, err),
    )


def sin_real(x: BigReal) -> BigReal:
    return _sincos(x)[0]


def cos_real(x: BigReal) -> BigReal:
    return _sincos(x)[1]


def agm(a: BigReal, b: BigReal) -> BigReal:
    """Arithmetic-geometric mean of positive reals."""
    if a.man <= 0 or b.man <= 0:
        raise ValueError("agm needs positive operands")
    fb = a.fb
    for _ in range(int(math.log2(fb)) + 4):
        a, b = (a + b) * Fraction(1, 2), sqrt_real(a * b)
    if abs((a - b).man) > 4:
        raise ArithmeticError("AGM did not converge at this precision")
    return BigReal(a.man, fb, max(a.err2, -fb + 4))


# -- complexes ---------------------------------------------------------------

class BigComplex:
    __slots__ = ("re", "im")

    def __init__(self, re: BigReal, im: BigReal):
        self.re = re
        self.im = im

    @staticmethod
    def from_real(x: BigReal) -> "BigComplex":
        return BigComplex(x, BigReal(0, x.fb))

    @staticmethod
    def from_int(n: int, fb: int) -> "BigComplex":
        return BigComplex(BigReal.from_int(n, fb), BigReal(0, fb))

    @staticmethod
    def from_fractions(re: Fraction, im: Fraction, fb: int) -> "BigComplex":
        return BigComplex(BigReal.from_fraction(re, fb), BigReal.from_fraction(im, fb))

    @property
    def fb(self):
        return self.re.fb

    def _coerce(self, other) -> "BigComplex":
        if isinstance(other, BigComplex):
            return other
        if isinstance(other, BigReal):
            return BigComplex.from_real(other)
        if isinstance(other, (int, Fraction)):
            return BigComplex.from_real(_as_real(other, self.fb))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return BigComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return BigComplex(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return BigComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return BigComplex(self.re * o.re - self.im * o.im,
                          self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "BigComplex":
        return BigComplex(self.re, -self.im)

    def abs2(self) -> BigReal:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.abs2()
        num = self * o.conj()
        return BigComplex(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return BigComplex.from_int(1, self.fb) / (self ** (-n))
        out = BigComplex.from_int(1, self.fb)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self) -> bool:
        return self.re.man == 0 and self.im.man == 0

    def to_complex(self) -> complex:
        return complex(self.re.to_float(), self.im.to_float())

    def dec(self, digits: int = 30) -> str:
        return f"{self.re.dec(digits)} + {self.im.dec(digits)}i"

    def __repr__(self):
        return f"BigComplex({self.dec(20)})"


def exp_complex(z: BigComplex) -> BigComplex:
    r = exp_real(z.re)
    s, c = _sincos(z.im)
    return BigComplex(r * c, r * s)


def embed_complex(x: QuadFieldElem, fb: int) -> BigComplex:
    """Embed a + b sqrt(-D) as a + b sqrt(D) i (sqrt(-D) in the upper half plane)."""
    if x.b == 0:
        return BigComplex.from_fractions(x.a, Fraction(0), fb)
    sq = sqrt_real(BigReal.from_int(x.D, fb))
    return BigComplex(BigReal.from_fraction(x.a, fb),
                      BigReal.from_fraction(x.b, fb) * sq)


# -- rational recognition ------------------------------------------------------

class RecognitionError(ValueError):
    pass


def _best_rational(x: Fraction, denom_bound: int) -> Fraction:
    """Best rational approximation with denominator <= denom_bound (CF convergents)."""
    p0, q0 = 0, 1
    p1, q1 = 1, 0
    a = x
    num, den = a.numerator, a.denominator
    while True:
        q, r = divmod(num, den)
        p2, q2 = q * p1 + p0, q * q1 + q0
        if q2 > denom_bound:
            # largest admissible semiconvergent
            k = (denom_bound - q0) // q1 if q1 else 0
            cand = Fraction(k * p1 + p0, k * q1 + q0) if k * q1 + q0 > 0 else Fraction(p1, q1)
            best = Fraction(p1, q1) if q1 <= denom_bound else cand
            if q1 <= denom_bound and abs(x - best) <= abs(x - cand):
                return best
            return cand
        p0, q0, p1, q1 = p1, q1, p2, q2
        if r == 0:
            return Fraction(p1, q1)
        num, den = den, r


def recognize_real(x: BigReal, denom_bound: int, tol_digits: float) -> Fraction:
    tol = Fraction(1, 10 ** int(tol_digits))
    cand = _best_rational(x.to_fraction(), denom_bound)
    if abs(x.to_fraction() - cand) >= tol:
        raise RecognitionError(
            f"no rational with denominator <= {denom_bound} within 1e-{tol_digits}")
    if 2 * tol >= Fraction(1, denom_bound * denom_bound):
        raise RecognitionError(
            "ambiguous reconstruction: tolerance exceeds the uniqueness radius "
            f"1/(2*{denom_bound}^2)")
    return cand


def recognize(z: BigComplex, denom_bound: int, D: int = 1) -> QuadFieldElem:
    """Recognize z as an element of Q(sqrt(-D)) with bounded denominators.

    Requires >= 40 certified decimal digits on both parts; matches at half the
    certified digits per the recognition contract.
    """
    cert = min(z.re.certified_digits(), z.im.certified_digits())
    if cert < 40:
        raise RecognitionError(f"need >= 40 certified digits, have {cert:.1f}")
    tol_digits = min(cert / 2, 300)
    a = recognize_real(z.re, denom_bound, tol_digits)
    if z.im.man == 0:
        return QuadFieldElem(a, 0, D)
    sq = sqrt_real(BigReal.from_int(D, z.fb))
    b = recognize_real(z.im / sq, denom_bound, tol_digits)
    got = embed_complex(QuadFieldElem(a, b, D), z.fb)
    diff2 = (got - z).abs2()
    if diff2.to_float() > 10.0 ** (-tol_digits):
        raise RecognitionError("residual exceeds recognition threshold")
    return QuadFieldElem(a, b, D)
