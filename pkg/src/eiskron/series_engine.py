"""Exact Laurent expansions over K: Weierstrass functions, the Kronecker theta
function, the torsion-point expansions F_{z0,b}, connection functions L_n, and
their p-modified variants.

Everything here is ring-generic: the same constructions run over Q(sqrt(-D))
for the exact path and over Q_p (through the fixed embedding) for the
residue-disc path at higher truncation.
"""

from __future__ import annotations

from fractions import Fraction

from .quadfield import QuadFieldElem, ConfigError
from .curve import CurveK, PointK, PrimeData, ValidationError, quasi_period_constant
from .series import Series, BiSeries, QFRing, BIG

_WP_CACHE: dict = {}


def _ring_key(ring):
    if isinstance(ring, QFRing):
        return ("QF", ring.D)
    return ("Qp", ring.p, ring.n)


def _curve_key(curve: CurveK):
    return (str(curve.g2), str(curve.g3), curve.D)


def wp_series(curve: CurveK, trunc: int, ring=None):
    """(wp, wp', zeta, sigma) to O(z^trunc), driven by wp'' = 6 wp^2 - g2/2.

    c1 = g2/20, c2 = g3/28, then c_k = 3/((2k+3)(k-2)) sum_{h} c_h c_{k-1-h}.
    """
    ring = ring or curve.ring
    key = (_curve_key(curve), _ring_key(ring), trunc)
    if key in _WP_CACHE:
        return _WP_CACHE[key]
    g2 = ring.coerce(curve.g2) if not isinstance(ring, QFRing) else curve.g2
    g3 = ring.coerce(curve.g3) if not isinstance(ring, QFRing) else curve.g3
    kmax = (trunc - 1) // 2 + 1
    c = {1: g2 * Fraction(1, 20), 2: g3 * Fraction(1, 28)}
    for k in range(3, kmax + 1):
        acc = None
        for h in range(1, k - 1):
            t = c[h] * c[k - 1 - h]
            acc = t if acc is None else acc + t
        c[k] = acc * Fraction(3, (2 * k + 3) * (k - 2)) if acc is not None \
            else ring.from_int(0)
    wp_c = {-2: ring.from_int(1)}
    zeta_c = {-1: ring.from_int(1)}
    logs_c = {}
    for k in range(1, kmax + 1):
        wp_c[2 * k] = c[k]
        zeta_c[2 * k + 1] = c[k] * Fraction(-1, 2 * k + 1)
        logs_c[2 * k + 2] = c[k] * Fraction(-1, (2 * k + 1) * (2 * k + 2))
    wp = Series(ring, wp_c, trunc)
    zeta = Series(ring, zeta_c, trunc)
    sigma = Series(ring, logs_c, trunc + 1).exp().shift(1).truncate(trunc + 1)
    out = (wp, wp.derivative(), zeta, sigma)
    _WP_CACHE[key] = out
    return out


def theta_series(curve: CurveK, s2, trunc: int, ring=None) -> Series:
    """theta = exp(-s2 z^2/2) sigma; the flagship has s2 = e*_{0,2} = 0."""
    ring = ring or curve.ring
    _, _, _, sigma = wp_series(curve, trunc, ring)
    s2 = ring.coerce(s2)
    if ring.is_nil(s2):
        return sigma
    quad = Series(ring, {2: s2 * Fraction(-1, 2)}, trunc + 1)
    return (quad.exp() * sigma).truncate(trunc + 1)


def weier_translate(curve: CurveK, z0: PointK, trunc: int, ring=None):
    """(wp(z+z0), wp'(z+z0)) as series in z, via the chord addition formula."""
    ring = ring or curve.ring
    curve.check(z0)
    if z0.infinite:
        wp, wpp, _, _ = wp_series(curve, trunc, ring)
        return wp, wpp
    wp, wpp, _, _ = wp_series(curve, trunc + 4, ring)
    x0 = ring.coerce(z0.x)
    y0 = ring.coerce(z0.y)
    num = wpp - Series.const(ring, y0)
    den = (wp - Series.const(ring, x0))
    slope = num * den.inverse()
    wp_t = slope * slope * Fraction(1, 4) - wp - Series.const(ring, x0)
    return wp_t.truncate(trunc), wp_t.derivative().truncate(trunc)


def F1_series(curve: CurveK, s2, trunc: int, ring=None) -> Series:
    """F1 = theta'/theta = zeta - s2 z."""
    ring = ring or curve.ring
    _, _, zeta, _ = wp_series(curve, trunc, ring)
    s2 = ring.coerce(s2)
    return zeta - Series(ring, {1: s2}, trunc)


def theta_two_var(curve: CurveK, s2, ztrunc: int, wtrunc: int, ring=None) -> BiSeries:
    """Kronecker theta Theta(z, w) = theta(z+w)/(theta(z) theta(w))."""
    ring = ring or curve.ring
    T = ztrunc + wtrunc + 2
    th = theta_series(curve, s2, T, ring)
    # theta(z+w) = sum_k theta^(k)(z)/k! w^k
    rows = {}
    d = th
    fact = 1
    for k in range(wtrunc + 2):
        for i, v in d.c.items():
            if i < ztrunc + 2:
                rows[(i, k)] = v / fact if fact > 1 else v
        d = d.derivative()
        fact *= (k + 1)
    num = BiSeries(ring, rows, ztrunc + 2, wtrunc + 2)
    inv_z = BiSeries.from_x(th.truncate(ztrunc + 2).inverse(), wtrunc + 2)
    inv_w = BiSeries.from_y(th.truncate(wtrunc + 2).inverse(), ztrunc + 2)
    return (num * inv_z * inv_w).truncate(ztrunc, wtrunc)


def F_series_at_zero(curve: CurveK, s2, b: int, trunc: int, ring=None) -> Series:
    """F_b = w^(b-1)-coefficient of Theta(z, w) (the w^-1 coefficient for b = 0)."""
    if b < 0:
        raise ValidationError("b >= 0 required")
    ring = ring or curve.ring
    th2 = theta_two_var(curve, s2, trunc, b + 2, ring)
    return th2.coeff_of_y(b - 1)


class WeierRational:
    """A(x) + B(x) y reduced mod the curve: an elliptic function with poles at O."""

    def __init__(self, A: list, B: list, curve: CurveK):
        self.A = list(A)
        self.B = list(B)
        self.curve = curve

    def eval_series(self, wp: Series, wpp: Series) -> Series:
        ring = wp.ring
        out = _poly_series(self.A, wp, ring)
        if self.B:
            out = out + _poly_series(self.B, wp, ring) * wpp
        return out

    def eval_point(self, x, y):
        acc = None
        for k, c in enumerate(self.A):
            t = c * x**k if k else c
            acc = t if acc is None else acc + t
        if self.B:
            accB = None
            for k, c in enumerate(self.B):
                t = c * x**k if k else c
                accB = t if accB is None else accB + t
            t = accB * y
            acc = t if acc is None else acc + t
        return acc

    def d_dz(self) -> "WeierRational":
        """d/dz via x' = y, y' = 6x^2 - g2/2 (wp-model)."""
        g2 = self.curve.g2
        dA = _poly_diff(self.A)
        dB = _poly_diff(self.B)
        # (A + B y)' = A'(x) y + B'(x) y^2 + B (6x^2 - g2/2)
        # y^2 = 4x^3 - g2 x - g3
        ysq = [-self.curve.g3, -g2, self.curve.ring.from_int(0), self.curve.ring.from_int(4)]
        newA = _poly_add(_poly_mul(dB, ysq),
                         _poly_mul(self.B, [g2 * Fraction(-1, 2),
                                            self.curve.ring.from_int(0),
                                            self.curve.ring.from_int(6)]))
        newB = dA
        return WeierRational(newA, newB, self.curve)

    def is_zero(self):
        return all(c.is_zero() for c in self.A) and all(c.is_zero() for c in self.B)

    def __repr__(self):
        return f"WeierRational(A={[str(c) for c in self.A]}, B={[str(c) for c in self.B]})"


def _poly_series(coeffs: list, s: Series, ring) -> Series:
    acc = Series.zero(ring, BIG)
    for c in reversed(coeffs):
        acc = acc * s + Series.const(ring, c)
    return acc if coeffs else Series.zero(ring, s.trunc)


def _poly_diff(c: list) -> list:
    return [c[k] * k for k in range(1, len(c))]


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [a[0] * 0 for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _poly_add(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = []
    for k in range(n):
        if k < len(a) and k < len(b):
            out.append(a[k] + b[k])
        elif k < len(a):
            out.append(a[k])
        else:
            out.append(b[k])
    return out


def match_rational(f: Series, curve: CurveK) -> WeierRational:
    """Express an elliptic expansion as A(wp) + B(wp) wp' by peeling pole orders.

    Raises ValidationError when the residual fails to vanish (internal
    consistency error per the connection-function contract).
    """
    ring = curve.ring
    trunc = f.trunc
    wp, wpp, _, _ = wp_series(curve, trunc + 6)
    A: dict[int, QuadFieldElem] = {}
    B: dict[int, QuadFieldElem] = {}
    res = f
    guard = 0
    while not res.is_zero() and res.ord() < 0:
        o = res.ord()
        lead = res.c[o]
        if o % 2 == 0:
            a = -o // 2
            base = (wp**a).truncate(trunc)
            A[a] = lead / base.c[o]
            res = res - base.scale(A[a])
        else:
            bdeg = (-o - 3) // 2
            if bdeg < 0:
                raise ValidationError("odd pole of order 1 cannot be elliptic")
            base = ((wp**bdeg) * wpp).truncate(trunc)
            B[bdeg] = lead / base.c[o]
            res = res - base.scale(B[bdeg])
        guard += 1
        if guard > 100:
            raise ValidationError("rational matching did not terminate")
    if not res.is_zero() and 0 in res.c:
        A[0] = res.c[0]
        res = res - Series.const(ring, A[0])
    if not res.is_zero():
        raise ValidationError(f"rational matching failed; residual order {res.ord()}")
    degA = max(A) if A else -1
    degB = max(B) if B else -1
    return WeierRational([A.get(k, ring.from_int(0)) for k in range(degA + 1)],
                         [B.get(k, ring.from_int(0)) for k in range(degB + 1)],
                         curve)


_L_CACHE: dict = {}


def connection_functions(curve: CurveK, s2, Nmax: int, trunc: int):
    """L_0..L_Nmax from Xi(z,w) = exp(-F1(z) w) Theta(z,w) = sum L_n(z) w^(n-1).

    Returns [(series, rational form)]; the two are matched and the match is
    asserted, per the series-engine contract.
    """
    key = (_curve_key(curve), str(curve.ring.coerce(s2)), Nmax, trunc)
    if key in _L_CACHE:
        return _L_CACHE[key]
    ring = curve.ring
    wt = Nmax + 2
    th2 = theta_two_var(curve, s2, trunc, wt)
    f1 = F1_series(curve, s2, trunc + wt + 2)
    # exp(-F1 w) = sum_k (-F1)^k/k! w^k  (finitely many, w-truncated)
    rows = {}
    pw = Series.one(ring, trunc + wt + 2)
    fact = 1
    for k in range(wt):
        for i, v in pw.c.items():
            if i < trunc:
                rows[(i, k)] = v / fact if fact > 1 else v
        pw = (pw * (-f1)).truncate(trunc + 2)
        fact *= (k + 1)
    expf = BiSeries(ring, rows, trunc, wt)
    xi = expf * th2
    out = []
    for n in range(Nmax + 1):
        ln = xi.coeff_of_y(n - 1)
        rat = match_rational(ln, curve)
        out.append((ln, rat))
    _L_CACHE[key] = out
    return out


def F_series_at_torsion(curve: CurveK, z0: PointK, b: int, trunc: int,
                        s2=0, ring=None, conn=None) -> Series:
    """F_{z0,b}(z) about an exact torsion point z0 != O, fully in K (or embedded).

    F_{z0,1} = zeta(z) + (wp'(z)-wp'(z0))/(2(wp(z)-wp(z0))) - s2 z + v(z0) and
    F_{z0,b} = sum_n F_{z0,1}^(b-n)/(b-n)! L_n(z+z0).
    """
    ring = ring or curve.ring
    if z0.infinite:
        return F_series_at_zero(curve, s2, b, trunc, ring)
    f1 = F1_translated(curve, z0, trunc, s2, ring)
    if b == 0:
        return Series.one(ring, trunc)
    if b == 1:
        return f1
    if conn is None:
        conn = connection_functions(curve, s2, b, trunc + 2)
    wpT, wppT = weier_translate(curve, z0, trunc, ring)
    out = Series.zero(ring, trunc)
    pows = [Series.one(ring, trunc)]
    for k in range(1, b + 1):
        pows.append((pows[-1] * f1).truncate(trunc))
    fact = 1
    for n in range(0, b + 1):
        Ln_t = conn[n][1].eval_series(wpT, wppT).truncate(trunc)
        kk = b - n
        fact = 1
        for j in range(2, kk + 1):
            fact *= j
        out = out + (pows[kk] * Ln_t).scale(Fraction(1, fact))
    return out.truncate(trunc)


def F1_translated(curve: CurveK, z0: PointK, trunc: int, s2=0, ring=None) -> Series:
    ring = ring or curve.ring
    if z0.infinite:
        return F1_series(curve, s2, trunc, ring)
    order = _torsion_order(curve, z0)
    v = quasi_period_constant(curve, z0, order)
    wp, wpp, zeta, _ = wp_series(curve, trunc + 4, ring)
    x0 = ring.coerce(z0.x)
    y0 = ring.coerce(z0.y)
    half = (wpp - Series.const(ring, y0)) * (wp - Series.const(ring, x0)).inverse()
    s2e = ring.coerce(s2)
    out = zeta + half.scale(Fraction(1, 2)) - Series(ring, {1: s2e}, trunc) \
        + Series.const(ring, ring.coerce(v))
    return out.truncate(trunc)


def _torsion_order(curve: CurveK, z0: PointK, bound: int = 12) -> int:
    P = z0
    for n in range(1, bound + 1):
        if P.infinite if n == 1 else False:
            return 1
        if curve.scalar_mul(n, z0).infinite:
            return n
    raise ValidationError("point is not torsion of order <= 12")


def torsion_translates(curve: CurveK, alpha: QuadFieldElem):
    """The kernel E[alpha] when it is K-rational at desk scale (alpha in
    {units, 1+i, 2} on the flagship)."""
    n = alpha.norm()
    if n == 1:
        return [PointK.infinity()]
    pts = [P for P in curve.two_torsion()]
    ker = [P for P in pts if curve.cm_mul(alpha, P).infinite]
    if len(ker) != n:
        raise ConfigError(f"E[{alpha}] is not rational over K at desk scale")
    return ker


def distribution_residual(curve: CurveK, alpha: QuadFieldElem, z0: PointK,
                          b: int, trunc: int, s2=0) -> Series:
    """LHS - RHS of  sum_{z_a in E[alpha]} F_{z0+z_a,b}(z) = alpha conj(alpha)^(1-b)
    F_{alpha z0, b}(alpha z), exactly as series in z."""
    ring = curve.ring
    lhs = Series.zero(ring, trunc)
    for za in torsion_translates(curve, alpha):
        pt = curve.point_add(z0, za)
        lhs = lhs + F_series_at_torsion(curve, pt, b, trunc, s2)
    az0 = curve.cm_mul(alpha, z0)
    rhs = F_series_at_torsion(curve, az0, b, trunc, s2).scale_var(alpha)
    rhs = rhs.scale(alpha * alpha.conj() ** (1 - b))
    return lhs - rhs


# -- p-modified objects --------------------------------------------------------

def psi_alpha_poly(curve: CurveK, alpha: QuadFieldElem, s2=0) -> WeierRational:
    """psi_alpha = sigma(alpha z)/sigma(z)^N(alpha) as a polynomial in (wp, wp').

    Elliptic only when s2 = 0 (flagship); the leading x-coefficient is alpha
    for even psi (N(alpha) odd).
    """
    if not curve.ring.coerce(s2).is_zero():
        raise ConfigError("psi_alpha route needs e*_{0,2} = 0 (flagship lattice)")
    n = alpha.norm()
    if n.denominator != 1:
        raise ConfigError("alpha must be integral")
    n = int(n)
    trunc = n + 14
    _, _, _, sigma = wp_series(curve, trunc)
    f = sigma.scale_var(alpha) * (sigma.truncate(trunc) ** n).inverse()
    return match_rational(f.truncate(trunc - n - 2), curve)


def fp1_series(curve: CurveK, prime: PrimeData, z0: PointK, trunc: int,
               ring=None, _cache={}) -> Series:
    """F1^(p)(z + z0) = -(1/p) dlog psi_pi, expanded at the disc of z0.

    This is the rational-function route, independent of the Frobenius
    difference of the Coleman interpolation.
    """
    ring = ring or curve.ring
    key = (_curve_key(curve), _ring_key(ring), str(prime.pi), repr(z0), trunc)
    if key in _cache:
        return _cache[key]
    psi = psi_alpha_poly(curve, prime.pi)
    rat_num = psi.d_dz()
    wpT, wppT = weier_translate(curve, z0, trunc + 4, ring)
    g = psi.eval_series(wpT, wppT)
    gp = rat_num.eval_series(wpT, wppT)
    out = (gp * g.inverse()).scale(Fraction(-1, prime.p)).truncate(trunc)
    _cache[key] = out
    return out


def xi_p_L_series(curve: CurveK, prime: PrimeData, z0: PointK, Nmax: int,
                  trunc: int, s2=0, ring=None) -> list:
    """L_n^(p) expanded at the disc of z0 via the Xi^(p) generating function:

    exp(-F_{z0,1} w) [ sum_b F_{z0,b}(z) w^(b-1)
                       - conj(pi)^(-1) sum_b F_{z0,b}(pi z) (w/conj(pi))^(b-1) ].
    """
    ring = ring or curve.ring
    pi = prime.pi
    pibar = pi.conj()
    wt = Nmax + 2
    f1 = F1_translated(curve, z0, trunc, s2, ring)
    rows = {}
    rows2 = {}
    for b in range(wt + 1):
        fb = F_series_at_torsion(curve, z0, b, trunc, s2, ring)
        for i, v in fb.c.items():
            rows[(i, b - 1)] = rows.get((i, b - 1), ring.from_int(0)) + v
        fb_pi = fb.scale_var(ring.coerce(pi))
        w_pibar = ring.coerce(pibar ** (1 - b))
        for i, v in fb_pi.c.items():
            key = (i, b - 1)
            t = v * w_pibar
            rows2[key] = rows2.get(key, ring.from_int(0)) + t
    theta_part = BiSeries(ring, rows, trunc, wt) - \
        BiSeries(ring, rows2, trunc, wt).scale(ring.coerce(1 / pibar))
    exp_rows = {}
    pw = Series.one(ring, trunc)
    fact = 1
    for k in range(wt):
        for i, v in pw.c.items():
            exp_rows[(i, k)] = v / fact if fact > 1 else v
        pw = (pw * (-f1)).truncate(trunc + 2)
        fact *= (k + 1)
    xi_p = BiSeries(ring, exp_rows, trunc, wt) * theta_part
    return [xi_p.coeff_of_y(n - 1).truncate(trunc) for n in range(Nmax + 1)]
