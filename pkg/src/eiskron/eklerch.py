"""Eisenstein-Kronecker-Lerch series K*_a(z0, w0, s) with analytic continuation.

Three evaluation routes:

* direct lattice summation (converges for 2s - a > 2; polynomial tail, so only
  low-precision),
* mirror summation through the functional equation (again polynomial),
* the incomplete-gamma split: both halves of the Mellin integral summed after
  the theta transformation, exponentially convergent at any (a, s).

The split at u0 = 1/A gives

Gamma(s) S = W - d_{z0} d_{a0} A^(-s)/s
           + chi_{z0}(w0)^(-1) A^(a+1-2s) [ V + d_{w0} d_{a0} A^(s-1)/(s-1) ]

with W = sum_{w in z0+Gamma, w != 0} conj(w)^a chi_{w0}(w) |w|^(-2s) Gamma(s, |w|^2/A),
V the same sum with (z0, w0, s) -> (w0, z0, a+1-s), and K* = chi_{w0}(z0)^(-1) S.
K* vanishes at integer s <= 0 up to the explicit delta term (trivial zeros).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .bigfloat import (BigReal, BigComplex, pi_real, exp_real, exp_complex,
                       ln_real, euler_gamma, _EXACT)
from .lattice import Lattice, chi
from .curve import ValidationError


class PoleError(ArithmeticError):
    pass


class PrecisionShortfall(ArithmeticError):
    pass


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


class _GammaCache:
    """Upper incomplete gamma values Gamma(n, x) for integer n, cached per x."""

    def __init__(self, fb: int):
        self.fb = fb
        self.e1: dict = {}
        self.expm: dict = {}
        self._gamma = euler_gamma(fb + 64)

    def exp_neg(self, x: BigReal) -> BigReal:
        key = (x.man, x.fb)
        if key not in self.expm:
            self.expm[key] = exp_real(-x)
        return self.expm[key]

    def E1(self, x: BigReal) -> BigReal:
        """E1(x) = -gamma - ln x + sum (-1)^(k+1) x^k/(k k!), with guard bits
        against the e^x-sized cancellation."""
        key = (x.man, x.fb)
        if key in self.e1:
            return self.e1[key]
        xf = x.to_float()
        if xf <= 0:
            raise ValidationError("E1 needs x > 0")
        guard = int(xf * 1.4427) + 64
        g = self.fb + guard
        xg = BigReal(x.man << (g - x.fb), g, x.err2)
        one = 1 << g
        xm = xg.man  # x > 0 so plain floor divisions are fine
        term = one
        acc = 0
        k = 1
        while term:
            term = _sdiv(term * xm, one) // k  # x^k/k!
            acc += (term // k) if k % 2 == 1 else -(term // k)
            k += 1
            if k > 10 * g:
                break
        s = BigReal(acc, g)
        val = -self._gamma_at(g) - ln_real(xg) + s
        out = BigReal(_sdiv(val.man, 1 << (g - self.fb)), self.fb, -self.fb + 6)
        self.e1[key] = out
        return out

    def _gamma_at(self, g: int) -> BigReal:
        gm = self._gamma
        if gm.fb >= g:
            return BigReal(gm.man >> (gm.fb - g), g, -g + 8)
        return BigReal(gm.man << (g - gm.fb), g, gm.err2)

    def upper(self, n: int, x: BigReal) -> BigReal:
        """Gamma(n, x) for any integer n."""
        if n >= 1:
            e = self.exp_neg(x)
            acc = BigReal(0, self.fb)
            xp = BigReal.from_int(1, self.fb)
            kfact = 1
            for k in range(n):
                if k:
                    xp = xp * x
                    kfact *= k
                acc = acc + xp / kfact
            return acc * e * _factorial(n - 1)
        # n <= 0: downward from Gamma(0, x) = E1(x)
        g = self.E1(x)
        if n == 0:
            return g
        e = self.exp_neg(x)
        xp = BigReal.from_int(1, self.fb) / x  # x^(s-1) at s = 0
        s = 0
        while s > n:
            # Gamma(s-1, x) = (Gamma(s,x) - x^(s-1) e^-x)/(s-1)
            g = (g - xp * e) / (s - 1)
            s -= 1
            xp = xp / x
        return g


def _sdiv(a: int, b: int) -> int:
    if a >= 0:
        q, r = divmod(a, b)
        return q + (1 if 2 * r >= b else 0)
    return -_sdiv(-a, b)


def lattice_points(lat: Lattice, center: BigComplex, xmax: float):
    """All w = center + m w1 + n w2 with |w|^2 <= xmax (float bound, inclusive
    with margin); returns (w, m, n) triples, excluding w = 0."""
    w1 = lat.omega1.to_complex()
    w2 = lat.omega2.to_complex()
    c = center.to_complex()
    r = math.sqrt(xmax) * 1.001 + abs(c) + 1e-9
    # bounding box from the dual basis
    det = w1.real * w2.imag - w1.imag * w2.real
    mmax = int(abs(r * w2.imag / det) + abs(r * w2.real / det)) + 2
    nmax = int(abs(r * w1.imag / det) + abs(r * w1.real / det)) + 2
    out = []
    for m in range(-mmax, mmax + 1):
        for n in range(-nmax, nmax + 1):
            wf = c + m * w1 + n * w2
            t = wf.real * wf.real + wf.imag * wf.imag
            if t <= xmax and t > 1e-18:
                w = center + lat.omega1 * m + lat.omega2 * n
                out.append((w, m, n))
    return out


def _chi_powers(lat: Lattice, charpt: BigComplex, center: BigComplex,
                mmax: int, nmax: int):
    """chi_charpt(center + m w1 + n w2) = chi(center) a^m b^n, precomputed."""
    base = chi(center, charpt, lat)
    a = chi(lat.omega1, charpt, lat)
    b = chi(lat.omega2, charpt, lat)
    apow = {0: BigComplex.from_int(1, lat.fb)}
    bpow = {0: BigComplex.from_int(1, lat.fb)}
    ainv = BigComplex.from_int(1, lat.fb) / a
    binv = BigComplex.from_int(1, lat.fb) / b
    for m in range(1, mmax + 1):
        apow[m] = apow[m - 1] * a
        apow[-m] = apow[-(m - 1)] * ainv
    for n in range(1, nmax + 1):
        bpow[n] = bpow[n - 1] * b
        bpow[-n] = bpow[-(n - 1)] * binv

    def val(m, n):
        return base * apow[m] * bpow[n]

    return val


def _half_sum(lat: Lattice, a: int, s: int, z0: BigComplex, w0: BigComplex,
              gc: _GammaCache, xmax: float) -> BigComplex:
    """W = sum_{w in z0+Gamma \ 0} conj(w)^a chi_{w0}(w) |w|^(-2s) Gamma(s, |w|^2/A)."""
    fb = lat.fb
    pts = lattice_points(lat, z0, xmax * lat.A.to_float())
    if not pts:
        return BigComplex.from_int(0, fb)
    mmax = max(abs(m) for _, m, _ in pts)
    nmax = max(abs(n) for _, _, n in pts)
    chiv = _chi_powers(lat, w0, z0, mmax, nmax)
    acc = BigComplex.from_int(0, fb)
    for w, m, n in pts:
        w2 = w.abs2()
        x = w2 / lat.A
        g = gc.upper(s, x)
        term = (w.conj() ** a) * chiv(m, n) * g
        if s > 0:
            term = term / (w2 ** s)
        elif s < 0:
            term = term * (w2 ** (-s))
        acc = acc + term
    return acc


def ek_lerch_theta(a: int, z0: BigComplex, w0: BigComplex, s: int,
                   lat: Lattice, gc: _GammaCache | None = None) -> BigComplex:
    """K*_a(z0, w0, s) by the incomplete-gamma split (any integer s)."""
    fb = lat.fb
    gc = gc or _GammaCache(fb)
    z0_in = _is_lattice(lat, z0)
    w0_in = _is_lattice(lat, w0)
    if s == 1 and a == 0 and w0_in:
        raise PoleError("K*_0(z0, w0, 1) has a pole for w0 in the lattice")
    if s <= 0:
        # trivial zeros up to the explicit delta term
        if a == 0 and s == 0 and z0_in:
            return chi(z0, w0, lat) ** (-1) * (-1)
        return BigComplex.from_int(0, fb)
    xmax = (fb + 46) * math.log(2.0)
    W = _half_sum(lat, a, s, z0, w0, gc, xmax)
    V = _half_sum(lat, a, a + 1 - s, w0, z0, gc, xmax)
    S = W
    if z0_in and a == 0:
        Apow = _A_pow(lat, -s)
        S = S - Apow / s
    corr = V
    if w0_in and a == 0 and s != 1:
        corr = corr + _A_pow(lat, s - 1) / (s - 1)
    pref = chi(z0, w0, lat)  # chi_{z0}(w0)^(-1) = chi_{w0}(z0)
    S = S + pref * _A_pow(lat, a + 1 - 2 * s) * corr
    S = S / _factorial(s - 1)
    out = chi(z0, w0, lat) ** (-1) * S
    return _stamp(out, fb)


def ek_lerch_direct(a: int, z0: BigComplex, w0: BigComplex, s: int,
                    lat: Lattice, rmax: float = 220.0):
    """Direct summation; returns (value, certified decimal digits).

    Tail ~ R^(a+2-2s): only meaningful for 2s - a > 2.
    """
    fb = lat.fb
    if 2 * s - a <= 2:
        raise PrecisionShortfall("direct sum diverges (2s - a <= 2)")
    pts = lattice_points(lat, z0, rmax * rmax)
    mmax = max(abs(m) for _, m, _ in pts)
    nmax = max(abs(n) for _, _, n in pts)
    chiv = _chi_powers(lat, w0, z0, mmax, nmax)
    acc = BigComplex.from_int(0, fb)
    for w, m, n in pts:
        term = (w.conj() ** a) * chiv(m, n) / (w.abs2() ** s)
        acc = acc + term
    expo = 2 * s - a - 2
    # tail: sum |w|^(-expo-2) over |w| > R, lattice density 1/(pi A)
    tail = (2.0 / lat.A.to_float()) * rmax ** (-expo) / expo
    digits = -math.log10(max(tail, 1e-300))
    out = chi(z0, w0, lat) ** (-1) * acc
    return out, digits


def ek_lerch_mirror(a: int, z0: BigComplex, w0: BigComplex, s: int,
                    lat: Lattice, rmax: float = 220.0):
    """Mirror summation via the functional equation; (value, certified digits)."""
    if 2 * (a + 1 - s) - a <= 2:
        raise PrecisionShortfall("mirror sum diverges")
    if s < 1 or a + 1 - s < 1:
        raise PrecisionShortfall("mirror route needs 1 <= s <= a")
    val, digits = ek_lerch_direct(a, w0, z0, a + 1 - s, lat, rmax)
    fac = _A_pow(lat, a + 1 - 2 * s) * Fraction(_factorial(a - s), _factorial(s - 1))
    out = fac * val * chi(z0, w0, lat)
    return out, digits


def ek_lerch(a: int, z0: BigComplex, w0: BigComplex, s: int, lat: Lattice,
             method: str = "theta", gc=None):
    """Dispatch: 'theta' (full precision), 'direct', 'mirror' (low precision
    cross-checks; raise PrecisionShortfall outside their convergence band)."""
    if method == "theta":
        return ek_lerch_theta(a, z0, w0, s, lat, gc)
    if method == "direct":
        return ek_lerch_direct(a, z0, w0, s, lat)[0]
    if method == "mirror":
        return ek_lerch_mirror(a, z0, w0, s, lat)[0]
    raise ValueError(f"unknown method {method!r}")


def _A_pow(lat: Lattice, k: int) -> BigReal:
    A = lat.A
    out = BigReal.from_int(1, lat.fb)
    if k >= 0:
        for _ in range(k):
            out = out * A
    else:
        for _ in range(-k):
            out = out / A
    return out


def _is_lattice(lat: Lattice, z: BigComplex) -> bool:
    if z.is_zero():
        return True
    # solve z = m w1 + n w2 approximately and check the residual
    w1 = lat.omega1.to_complex()
    w2 = lat.omega2.to_complex()
    zc = z.to_complex()
    det = w1.real * w2.imag - w1.imag * w2.real
    m = (zc.real * w2.imag - zc.imag * w2.real) / det
    n = (zc.imag * w1.real - zc.real * w1.imag) / det
    mr, nr = round(m), round(n)
    res = zc - mr * w1 - nr * w2
    return abs(res) < 1e-9


def _stamp(z: BigComplex, fb: int) -> BigComplex:
    e = -(fb - 34)
    return BigComplex(BigReal(z.re.man, fb, max(z.re.err2, e)),
                      BigReal(z.im.man, fb, max(z.im.err2, e)))


# -- wrappers -----------------------------------------------------------------

def ek_number(a: int, b: int, z0: BigComplex, w0: BigComplex, lat: Lattice,
              gc=None) -> BigComplex:
    """e*_{a,b}(z0, w0) = K*_{a+b}(z0, w0, b)."""
    return ek_lerch_theta(a + b, z0, w0, b, lat, gc)


def ek_number_one(a: int, b: int, z0: BigComplex, lat: Lattice, gc=None) -> BigComplex:
    """e*_{a,b}(z0) = K*_{a+b}(0, z0, b)."""
    zero = BigComplex.from_int(0, lat.fb)
    return ek_lerch_theta(a + b, zero, z0, b, lat, gc)


def kronecker_double(m: int, n: int, z: BigComplex, lat: Lattice, gc=None) -> BigComplex:
    """E_{m,n}(z) = K*_{n-m}(0, z, n).

    This is the present normalization; the companion normalization differs by
    A^(m+n-1).
    """
    zero = BigComplex.from_int(0, lat.fb)
    return ek_lerch_theta(n - m, zero, z, n, lat, gc)
