"""Weierstrass model y^2 = 4x^3 - g2 x - g3 over K, CM action, division polynomials.

The flagship configuration is (g2, g3) = (4, 0) over Q(i) with p = 13 and
pi = 3 + 2i.  The API accepts general (g2, g3, D) but the CM action beyond
D = 1 is rejected with an honest unsupported error.
"""

from __future__ import annotations

from fractions import Fraction

from .quadfield import QuadFieldElem, ConfigError, gauss
from .padics import UnsupportedPrimeError
from .series import Series, QFRing, BIG


class ValidationError(ValueError):
    pass


class PointK:
    """A K-rational point: infinity or (x, y) with y^2 = 4x^3 - g2 x - g3."""

    __slots__ = ("x", "y", "infinite")

    def __init__(self, x=None, y=None):
        self.infinite = x is None
        self.x = x
        self.y = y

    @staticmethod
    def infinity() -> "PointK":
        return PointK()

    def __eq__(self, other):
        if not isinstance(other, PointK):
            return NotImplemented
        if self.infinite or other.infinite:
            return self.infinite and other.infinite
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.infinite, self.x, self.y))

    def __repr__(self):
        return "O" if self.infinite else f"({self.x}, {self.y})"


class CurveK:
    def __init__(self, g2, g3, D: int = 1):
        self.D = D
        self.ring = QFRing(D)
        self.g2 = self.ring.coerce(g2)
        self.g3 = self.ring.coerce(g3)
        disc = self.g2**3 - 27 * self.g3 * self.g3
        if disc.is_zero():
            raise ValidationError("singular curve: g2^3 - 27 g3^2 = 0")
        self.disc = disc

    def is_on_curve(self, P: PointK) -> bool:
        if P.infinite:
            return True
        return (P.y * P.y - (4 * P.x**3 - self.g2 * P.x - self.g3)).is_zero()

    def check(self, P: PointK):
        if not self.is_on_curve(P):
            raise ValidationError(f"point {P} not on the curve")

    # -- group law -----------------------------------------------------------

    def point_neg(self, P: PointK) -> PointK:
        if P.infinite:
            return P
        return PointK(P.x, -P.y)

    def point_add(self, P: PointK, Q: PointK) -> PointK:
        self.check(P)
        self.check(Q)
        if P.infinite:
            return Q
        if Q.infinite:
            return P
        if P.x == Q.x:
            if (P.y + Q.y).is_zero():
                return PointK.infinity()
            # tangent: 2 y y' = 12 x^2 - g2
            s = (12 * P.x * P.x - self.g2) / (2 * P.y)
        else:
            s = (Q.y - P.y) / (Q.x - P.x)
        # x1 + x2 + x3 = s^2 / 4 for the 4x^3 model
        x3 = s * s * Fraction(1, 4) - P.x - Q.x
        y3 = -(s * (x3 - P.x) + P.y)
        return PointK(x3, y3)

    def scalar_mul(self, n: int, P: PointK) -> PointK:
        if n < 0:
            return self.scalar_mul(-n, self.point_neg(P))
        R = PointK.infinity()
        Q = P
        while n:
            if n & 1:
                R = self.point_add(R, Q)
            n >>= 1
            if n:
                Q = self.point_add(Q, Q)
        return R

    def cm_i(self, P: PointK) -> PointK:
        """[i](x, y) = (-x, i y); flagship CM generator."""
        if self.D != 1:
            raise ConfigError("CM action implemented only for D = 1")
        if P.infinite:
            return P
        i = gauss(0, 1)
        return PointK(-P.x, i * P.y)

    def cm_mul(self, alpha: QuadFieldElem, P: PointK) -> PointK:
        """[alpha] for alpha = m + n i in Z[i] (D = 1 only beyond integers)."""
        if isinstance(alpha, int):
            return self.scalar_mul(alpha, P)
        if alpha.b == 0:
            if alpha.a.denominator != 1:
                raise ConfigError("cm_mul needs an algebraic integer")
            return self.scalar_mul(int(alpha.a), P)
        if self.D != 1:
            raise ConfigError("CM action implemented only for D = 1")
        if not alpha.is_integral():
            raise ConfigError("cm_mul needs an element of Z[i]")
        m, n = int(alpha.a), int(alpha.b)
        return self.point_add(self.scalar_mul(m, P),
                              self.cm_i(self.scalar_mul(n, P)))

    def two_torsion(self) -> list:
        """O plus the (x, 0) with 4x^3 - g2 x - g3 = 0 over K (flagship: x = 0, 1, -1)."""
        pts = [PointK.infinity()]
        for x in self._two_torsion_x():
            pts.append(PointK(self.ring.coerce(x), self.ring.from_int(0)))
        return pts

    def _two_torsion_x(self):
        # rational-root search is enough at desk scale; flagship roots are 0, +-1
        g2, g3 = self.g2, self.g3
        if not (g2.is_rational() and g3.is_rational()):
            return []
        cands = set()
        # 4x^3 - g2 x - g3 with rational coefficients: try small candidates
        for num in range(-12, 13):
            for den in (1, 2, 3, 4):
                cands.add(Fraction(num, den))
        roots = []
        for x in sorted(cands):
            if 4 * x**3 - g2.a * x - g3.a == 0:
                roots.append(x)
        return roots


class PrimeData:
    """Split prime data: N(pi) = p, pi + conj(pi) = a_p, pi = 1 mod (1+i)^3."""

    def __init__(self, p: int, pi: QuadFieldElem, a_p: int):
        self.p = p
        self.pi = pi
        self.a_p = a_p

    def __repr__(self):
        return f"PrimeData(p={self.p}, pi={self.pi}, a_p={self.a_p})"


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def count_points(curve: CurveK, p: int) -> int:
    """#E(F_p) by brute force over x (Legendre symbol on the cubic)."""
    g2 = curve.g2.a
    g3 = curve.g3.a
    if g2.denominator % p == 0 or g3.denominator % p == 0 or not (curve.g2.is_rational() and curve.g3.is_rational()):
        raise ValidationError("curve not p-integral / not rational")
    g2p = g2.numerator * pow(g2.denominator, -1, p) % p
    g3p = g3.numerator * pow(g3.denominator, -1, p) % p
    count = 1  # infinity
    for x in range(p):
        rhs = (4 * x**3 - g2p * x - g3p) % p
        count += 1 + _legendre(rhs, p)
    return count


def _divides_gauss(d: QuadFieldElem, x: QuadFieldElem) -> bool:
    q = x / d
    return q.a.denominator == 1 and q.b.denominator == 1


def derive_pi(curve: CurveK, p: int) -> PrimeData:
    """Point-count, solve pi pibar = p with pi + pibar = a_p, pick the CM-normalized
    associate pi = 1 mod (1+i)^3.  Unsupported for inert/ramified/small p."""
    if curve.D != 1:
        raise ConfigError("derive_pi implemented for D = 1")
    if p < 5:
        raise UnsupportedPrimeError(f"p = {p} < 5")
    if _legendre(-1, p) != 1:
        raise UnsupportedPrimeError(f"p = {p} is inert in Q(i)")
    if int(4 * (curve.g2.a**3 - 27 * curve.g3.a**2)) % p == 0:
        raise UnsupportedPrimeError(f"bad reduction at {p}")
    npts = count_points(curve, p)
    a_p = p + 1 - npts
    if a_p % 2 != 0:
        raise ConfigError("odd a_p cannot come from Z[i]")
    u = a_p // 2
    v2 = p - u * u
    v = _isqrt_exact(v2)
    if v is None:
        raise ConfigError("a_p inconsistent with N(pi) = p")
    base = gauss(u, v)
    unit_i = gauss(0, 1)
    norm3 = gauss(-2, 2)  # (1+i)^3
    for assoc in (base, -base, unit_i * base, -(unit_i * base)):
        if _divides_gauss(norm3, assoc - 1):
            return PrimeData(p, assoc, a_p)
    raise ConfigError("no associate of pi is = 1 mod (1+i)^3 "
                      "(wrong curve/prime pairing)")


def _isqrt_exact(n: int):
    if n < 0:
        return None
    from math import isqrt
    r = isqrt(n)
    return r if r * r == n else None


# -- division polynomials ------------------------------------------------------

class DivisionPoly:
    """psi_N = A(x) + B(x) y with sigma(Nz)/sigma(z)^(N^2) = psi_N(wp, wp')."""

    def __init__(self, N: int, A: list, B: list, D: int):
        self.N = N
        self.A = A  # coefficient list in x, A[k] * x^k
        self.B = B
        self.D = D

    def eval_series(self, wp: Series, wpp: Series) -> Series:
        ring = wp.ring
        out = _poly_on_series(self.A, wp, ring)
        if self.B:
            out = out + _poly_on_series(self.B, wp, ring) * wpp
        return out

    def x_poly_degree(self) -> int:
        return len(self.A) - 1 if self.A else -1

    def leading(self):
        return self.A[-1] if self.A else self.B[-1]


def _poly_on_series(coeffs: list, s: Series, ring) -> Series:
    acc = Series.zero(ring, s.trunc - 2 * max(len(coeffs) - 2, 0) if s.trunc < BIG else BIG)
    acc = Series.zero(ring, BIG)
    for c in reversed(coeffs):
        acc = acc * s + Series.const(ring, c)
    return acc


def division_polynomial(curve: CurveK, N: int, _cache={}) -> DivisionPoly:
    """Match sigma(Nz)/sigma(z)^(N^2) against {x^a} or {x^b y}; N <= 12."""
    key = (str(curve.g2), str(curve.g3), curve.D, N)
    if key in _cache:
        return _cache[key]
    if N < 1 or N > 12:
        raise ValidationError("division_polynomial supports 1 <= N <= 12")
    from .series_engine import wp_series  # local import to avoid a cycle
    ring = curve.ring
    trunc = N * N + 14
    wp, wpp, _zeta, sigma = wp_series(curve, trunc)
    target = sigma.scale_var(ring.from_int(N)) * (sigma.truncate(trunc) ** (N * N)).inverse()
    even = N % 2 == 1  # psi_N even function iff N odd
    A: dict[int, QuadFieldElem] = {}
    B: dict[int, QuadFieldElem] = {}
    res = target
    guard = 0
    while not res.is_zero() and res.ord() < 0:
        o = res.ord()
        lead = res.c[o]
        if even:
            a = -o // 2
            if -o % 2 != 0:
                raise ValidationError("parity mismatch matching psi_N")
            base = wp**a
            A[a] = lead / base.c[o]
            res = res - base.scale(A[a])
        else:
            b = (-o - 3) // 2
            if b < 0 or (-o - 3) % 2 != 0:
                raise ValidationError("parity mismatch matching psi_N")
            base = (wp**b) * wpp
            B[b] = lead / base.c[o]
            res = res - base.scale(B[b])
        guard += 1
        if guard > N * N + 4:
            raise ValidationError("psi_N matching did not terminate")
    # constant term
    if not res.is_zero():
        c0 = res.c.get(0)
        if c0 is not None and even:
            A[0] = c0
            res = res - Series.const(ring, c0)
    rest = {k: v for k, v in res.c.items() if k < trunc - 2}
    if rest:
        raise ValidationError(f"psi_{N} does not match the (x, y)-basis: residual {rest}")
    deg = max(A) if A else -1
    degB = max(B) if B else -1
    out = DivisionPoly(N,
                       [A.get(k, ring.from_int(0)) for k in range(deg + 1)],
                       [B.get(k, ring.from_int(0)) for k in range(degB + 1)],
                       curve.D)
    _cache[key] = out
    return out


def quasi_period_constant(curve: CurveK, z0: PointK, N: int) -> QuadFieldElem:
    """The algebraic additive constant of F_{z0,1}.

    From N zeta(Nz) = N^2 zeta(z) + dlog psi_N(z) expanded at the exact
    N-torsion point z0, the combination zeta(z0) - s2 z0 - conj(z0)/A equals
    -C0/N^2 where C0 is the constant term of dlog psi_N at z0.  All steps
    stay in K.
    """
    if z0.infinite:
        raise ValidationError("quasi_period_constant needs z0 != O")
    curve.check(z0)
    if not curve.scalar_mul(N, z0).infinite:
        raise ValidationError(f"point is not {N}-torsion")
    from .series_engine import weier_translate
    trunc = N * N + 16
    psi = division_polynomial(curve, N)
    wp_t, wpp_t = weier_translate(curve, z0, trunc)
    g = psi.eval_series(wp_t, wpp_t)
    if g.ord() != 1:
        raise ValidationError("psi_N does not vanish simply at z0")
    dlog = g.derivative() * g.inverse()
    C0 = dlog.coeff(0)
    return C0 * Fraction(-1, N * N)
