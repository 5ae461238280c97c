"""Exact arithmetic in the imaginary quadratic field K = Q(sqrt(-D)).

Elements are a + b*sqrt(-D) with a, b rational.  D is fixed per element and
operations between mismatched D raise ConfigError.  All values are immutable.
"""

from __future__ import annotations

from fractions import Fraction


class ConfigError(ValueError):
    """Configuration mismatch (e.g. operands over different fields)."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to Fraction")


class QuadFieldElem:
    """a + b*sqrt(-D) with exact rational a, b and square-free D > 0."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b=0, D=1):
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))
        object.__setattr__(self, "D", int(D))
        if self.D <= 0:
            raise ConfigError("D must be a positive integer")

    def __setattr__(self, *args):
        raise AttributeError("QuadFieldElem is immutable")

    # -- ring structure ----------------------------------------------------

    def _coerce(self, other) -> "QuadFieldElem":
        if isinstance(other, QuadFieldElem):
            if other.D != self.D:
                raise ConfigError(f"field mismatch: D={self.D} vs D={other.D}")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadFieldElem(other, 0, self.D)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadFieldElem(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __neg__(self):
        return QuadFieldElem(-self.a, -self.b, self.D)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadFieldElem(self.a - o.a, self.b - o.b, self.D)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        # (a1 + b1 w)(a2 + b2 w) with w^2 = -D
        return QuadFieldElem(
            self.a * o.a - self.D * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.D,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadFieldElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of 0 in Q(sqrt(-D))")
        c = self.conj()
        return QuadFieldElem(c.a / n, c.b / n, self.D)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadFieldElem(1, 0, self.D)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- field-specific ----------------------------------------------------

    def conj(self) -> "QuadFieldElem":
        return QuadFieldElem(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        """N(x) = a^2 + D b^2, >= 0 with equality iff x = 0."""
        return self.a * self.a + self.D * self.b * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def is_integral(self) -> bool:
        """Lies in Z[sqrt(-D)] (sufficient for every alpha this engine uses)."""
        return self.a.denominator == 1 and self.b.denominator == 1

    # -- comparisons, hashing, printing -------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if not isinstance(other, QuadFieldElem):
            return NotImplemented
        return self.D == other.D and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b, self.D))

    def __repr__(self):
        return f"QF({self})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        s = f"{self.b}*sqrt(-{self.D})"
        if self.a == 0:
            return s
        sign = "+" if self.b > 0 else "-"
        mag = abs(self.b)
        return f"{self.a} {sign} {mag}*sqrt(-{self.D})"


def quad_mul(x: QuadFieldElem, y: QuadFieldElem) -> QuadFieldElem:
    """Field multiplication in Q(sqrt(-D)); errors on mismatched D."""
    return x * y


def parse_quad(text: str, D: int) -> QuadFieldElem:
    """Parse "a/b + c/d*sqrt(-D)" (either part optional)."""
    s = text.replace(" ", "")
    marker = f"*sqrt(-{D})"
    alt = f"sqrt(-{D})"
    if marker in s or alt in s:
        if marker in s:
            head, _, _ = s.partition(marker)
        else:
            head, _, _ = s.partition(alt)
            if head.endswith("*"):
                head = head[:-1]
        # split head into rational part and coefficient: last +/- not inside a fraction
        idx = None
        for i in range(len(head) - 1, 0, -1):
            if head[i] in "+-" and head[i - 1] not in "+-*/(":
                idx = i
                break
        if idx is None:
            a_part, b_part = "0", head or "1"
        else:
            a_part, b_part = head[:idx], head[idx:] or "1"
        if b_part in ("", "+"):
            b_part = "1"
        elif b_part == "-":
            b_part = "-1"
        return QuadFieldElem(Fraction(a_part), Fraction(b_part), D)
    return QuadFieldElem(Fraction(s), 0, D)


# Gaussian-integer conveniences for the flagship field Q(i).

def gauss(a, b=0) -> QuadFieldElem:
    """a + b*i in Q(i)."""
    return QuadFieldElem(a, b, 1)


I_UNIT = gauss(0, 1)
