"""Period lattice, the character chi, and numeric Weierstrass/theta functions.

Periods come from AGM iteration on the real 2-torsion; sigma/zeta/wp are
evaluated through the Jacobi theta function theta_1 (q-series, exponentially
convergent), self-calibrated against the exact expansions so no classical
normalization constant is trusted blindly.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .bigfloat import (BigReal, BigComplex, pi_real, sqrt_real, agm, exp_complex,
                       exp_real)
from .curve import CurveK, PointK, ValidationError


class Lattice:
    """Gamma = Z omega1 + Z omega2 with Im(omega2/omega1) > 0; A = area/pi."""

    def __init__(self, omega1: BigComplex, omega2: BigComplex):
        self.omega1 = omega1
        self.omega2 = omega2
        fb = omega1.fb
        im = (omega1.conj() * omega2).im
        if im.man <= 0:
            raise ValidationError("need Im(conj(omega1) omega2) > 0")
        self.A = im / pi_real(fb)
        self.fb = fb

    def point(self, m: int, n: int) -> BigComplex:
        return self.omega1 * m + self.omega2 * n

    def rep(self, mn) -> BigComplex:
        """(a, b) -> (a omega1 + b omega2)/2 for torsion labels in (1/2)Gamma."""
        a, b = mn
        return (self.omega1 * a + self.omega2 * b) * Fraction(1, 2)


def curve_periods(curve: CurveK, fb: int) -> Lattice:
    """AGM periods for a curve with three real 2-torsion x-values.

    omega1 = pi / agm(sqrt(e1-e3), sqrt(e1-e2)) (real),
    omega2 = i pi / agm(sqrt(e1-e3), sqrt(e2-e3)).
    """
    xs = sorted((x for x in curve._two_torsion_x()), reverse=True)
    if len(xs) != 3:
        raise ValidationError("curve_periods needs three real 2-torsion points")
    e1, e2, e3 = (BigReal.from_fraction(x, fb) for x in xs)
    pi = pi_real(fb)
    om1 = pi / agm(sqrt_real(e1 - e3), sqrt_real(e1 - e2))
    om2im = pi / agm(sqrt_real(e1 - e3), sqrt_real(e2 - e3))
    zero = BigReal(0, fb)
    return Lattice(BigComplex(om1, zero), BigComplex(zero, om2im))


def chi(z: BigComplex, w: BigComplex, lat: Lattice) -> BigComplex:
    """chi_w(z) = exp((z conj(w) - w conj(z))/A)."""
    t = z * w.conj() - w * z.conj()
    # purely imaginary
    return exp_complex(BigComplex(t.re / lat.A, t.im / lat.A))


# -- numeric Weierstrass suite via theta_1 -----------------------------------------


class WeierNumeric:
    """sigma, theta, zeta, wp, wp', F1 for one curve/lattice at fb bits."""

    def __init__(self, curve: CurveK, lat: Lattice, s2=Fraction(0)):
        self.curve = curve
        self.lat = lat
        self.fb = lat.fb
        fb = self.fb
        self.pi = pi_real(fb)
        # tau = omega2/omega1, q = exp(i pi tau); nome shrinks fast for the square lattice
        tau = lat.omega2 / lat.omega1
        self.q = exp_complex(BigComplex(-self.pi * tau.im, self.pi * tau.re))
        self.scale = BigComplex(self.pi, BigReal(0, fb)) / lat.omega1  # u = scale * z
        self.nterms = self._nterms()
        self.s2 = Fraction(s2)
        # calibrate sigma(z) = C exp(a z^2) theta1(u): C from theta1'(0),
        # a from the vanishing z^3 coefficient of sigma
        d1, d3 = self._theta1_odd_derivs()
        self.C = (BigComplex.from_int(1, fb) / (d1 * self.scale))
        self.a_quad = -(self.scale * self.scale) * d3 / (d1 * 6)

    def _nterms(self) -> int:
        qabs = math.sqrt(max(self.q.abs2().to_float(), 1e-300))
        # |q|^((n+1/2)^2) < 2^-(fb+40)
        need = (self.fb + 40) * math.log(2)
        n = int(math.sqrt(need / -math.log(qabs))) + 3
        return max(n, 4)

    def _theta1_odd_derivs(self):
        # exponents (n+1/2)^2 are quarter-integers: work with p = q^(1/4)
        fb = self.fb
        p4 = self._q_quarter()
        d1 = BigComplex.from_int(0, fb)
        d3 = BigComplex.from_int(0, fb)
        for n in range(self.nterms):
            k = 2 * n + 1
            term = p4 ** (k * k)
            sgn = 1 if n % 2 == 0 else -1
            d1 = d1 + term * (sgn * k)
            d3 = d3 - term * (sgn * k**3)
        return d1 * 2, d3 * 2

    def _q_quarter(self) -> BigComplex:
        # q = exp(i pi tau) -> q^(1/4) = exp(i pi tau / 4)
        tau = self.lat.omega2 / self.lat.omega1
        return exp_complex(BigComplex(-self.pi * tau.im / 4, self.pi * tau.re / 4))

    def _theta1(self, u: BigComplex, derivs: int = 0):
        """theta1 and u-derivatives up to order `derivs` (list)."""
        fb = self.fb
        p4 = self._q_quarter()
        outs = [BigComplex.from_int(0, fb) for _ in range(derivs + 1)]
        for n in range(self.nterms):
            k = 2 * n + 1
            coef = p4 ** (k * k) * (2 if n % 2 == 0 else -2)
            ku = u * k
            s, c = _sincos_c(ku)
            cyc = [s, c, -s, -c]
            for d in range(derivs + 1):
                outs[d] = outs[d] + coef * cyc[d % 4] * (k**d)
        return outs

    # -- public values ---------------------------------------------------------

    def sigma(self, z: BigComplex) -> BigComplex:
        u = self.scale * z
        th = self._theta1(u)[0]
        return self.C * exp_complex(self.a_quad * z * z) * th

    def theta(self, z: BigComplex) -> BigComplex:
        s = self.sigma(z)
        if self.s2 == 0:
            return s
        s2r = BigReal.from_fraction(-self.s2 / 2, self.fb)
        return exp_complex(z * z * s2r) * s

    def zeta(self, z: BigComplex) -> BigComplex:
        u = self.scale * z
        th = self._theta1(u, 1)
        return self.a_quad * z * 2 + self.scale * (th[1] / th[0])

    def wp(self, z: BigComplex) -> BigComplex:
        u = self.scale * z
        th = self._theta1(u, 2)
        L = th[1] / th[0]
        Lp = th[2] / th[0] - L * L
        return -(self.a_quad * 2 + self.scale * self.scale * Lp)

    def wp_prime(self, z: BigComplex) -> BigComplex:
        u = self.scale * z
        th = self._theta1(u, 3)
        L = th[1] / th[0]
        Lp = th[2] / th[0] - L * L
        Lpp = th[3] / th[0] - (th[2] / th[0]) * L - L * Lp * 2
        return -(self.scale ** 3) * Lpp

    def F1(self, z: BigComplex) -> BigComplex:
        out = self.zeta(z)
        if self.s2 != 0:
            out = out - z * BigReal.from_fraction(self.s2, self.fb)
        return out

    def kronecker_theta(self, z: BigComplex, w: BigComplex) -> BigComplex:
        tz = self.theta(z)
        tw = self.theta(w)
        if tz.is_zero() or tw.is_zero():
            raise ValidationError("pole of Theta(z, w)")
        return self.theta(z + w) / (tz * tw)

    def kronecker_theta_translated(self, z0: BigComplex, w0: BigComplex,
                                   z: BigComplex, w: BigComplex) -> BigComplex:
        """Theta_{z0,w0}(z,w) = e^(-z0 conj(w0)/A) e^(-(z conj(w0)+w conj(z0))/A)
        Theta(z+z0, w+w0)."""
        A = self.lat.A
        pref = exp_complex(-(z0 * w0.conj()) / A) * \
            exp_complex(-(z * w0.conj() + w * z0.conj()) / A)
        return pref * self.kronecker_theta(z + z0, w + w0)


def _sincos_c(u: BigComplex):
    """(sin u, cos u) for complex u = x + iy."""
    from .bigfloat import _sincos
    sx, cx = _sincos(u.re)
    # sin(x+iy) = sin x cosh y + i cos x sinh y; cosh/sinh via exp
    ey = exp_real(u.im)
    eyi = BigReal.from_int(1, u.fb) / ey
    half = Fraction(1, 2)
    ch = (ey + eyi) * half
    sh = (ey - eyi) * half
    s = BigComplex(sx * ch, cx * sh)
    c = BigComplex(cx * ch, -(sx * sh))
    return s, c


def two_torsion_lattice_label(curve: CurveK, lat: Lattice, P: PointK, fb_check: int = 96):
    """Map a 2-torsion point to its half-period (a, b) with z = (a w1 + b w2)/2.

    Ordered by the real x-values: e1 <-> (1,0), e2 <-> (1,1), e3 <-> (0,1).
    """
    if P.infinite:
        return (0, 0)
    xs = sorted(curve._two_torsion_x(), reverse=True)
    x = P.x.a
    if x == xs[0]:
        return (1, 0)
    if x == xs[1]:
        return (1, 1)
    if x == xs[2]:
        return (0, 1)
    raise ValidationError("not a rational 2-torsion point")
