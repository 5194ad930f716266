"""Rational q-expansions, the w = +1 part of S_2(Gamma_0(p^2)) and hyperelliptic models.

The space of regular differentials of X_0^+(p^2) is spanned by the newforms of
New^+_{p^2} and by the lifts f(q) + p eps(f) f(q^p) of the newforms of level p.
An echelon basis by order of vanishing at the cusp infinity tells whether
infinity can be a (non-)Weierstrass point of a hyperelliptic curve; if it can,
the functions x, y built from the last two basis elements are tested for a
relation y^2 = P(x).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .catalog import InsufficientRange, sturm_bound
from .exact.arith import factorint, primes_up_to
from .exact.gf2 import GF2n
from .exact.numberfield import NumberField
from .exact.poly import Poly, poly_gcd
from .exact.qseries import QSeries

log = logging.getLogger(__name__)

NONWEIERSTRASS = "NONWEIERSTRASS"
WEIERSTRASS_HYP = "WEIERSTRASS_HYP"
OTHER = "OTHER"


class ShapeError(ValueError):
    pass


def _prime_eigenvalue(orbit, ell, p):
    if ell == p:
        # a_p = -eps at level p; a_p = 0 when p^2 divides the level
        return Poly([-orbit.epsilon]) if orbit.level == p else Poly([0])
    if not orbit.eigen or ell not in orbit.eigen:
        raise InsufficientRange(f"orbit {orbit.label} has no eigenvalue for T_{ell}")
    return orbit.eigen[ell]


def eigenform_coefficients(orbit, p, precision):
    """a_n in Q[x]/(f) for 0 <= n < precision."""
    K = NumberField(orbit.field_poly)
    a = [Poly([0]), Poly([1])] + [None] * max(0, precision - 2)
    a = a[:precision]
    prime_powers = {}
    for ell in primes_up_to(precision - 1):
        al = _prime_eigenvalue(orbit, ell, p)
        powers = [Poly([1]), al]
        k = ell * ell
        while k < precision:
            if orbit.level % ell == 0:
                nxt = K.mul(powers[-1], al)
            else:
                nxt = K.mul(al, powers[-1]) - powers[-2] * ell
            powers.append(nxt % K.modulus)
            k *= ell
        prime_powers[ell] = powers
    for n in range(2, precision):
        val = Poly([1])
        for ell, e in factorint(n):
            val = K.mul(val, prime_powers[ell][e])
        a[n] = val
    return a, K


def orbit_qexpansion(orbit, p, precision):
    """Rational basis of S_2(f) dq/q ∩ Q[[q]]: series sum_n Tr(alpha^j a_n) q^n, j < dim."""
    a, K = eigenform_coefficients(orbit, p, precision)
    out = []
    alpha_j = Poly([1])
    for _ in range(orbit.dimension):
        coeffs = [K.trace(K.mul(alpha_j, an)) for an in a]
        out.append(QSeries(coeffs, precision))
        alpha_j = K.mul(alpha_j, K.gen())
    return out


def oldform_lift(orbit, p, precision):
    """The w_{p^2} = +1 combinations f(q) + p eps(f) f(q^p) for an orbit of level p."""
    if orbit.level != p:
        raise ValueError("oldform_lift needs an orbit of level p")
    out = []
    for s in orbit_qexpansion(orbit, p, precision):
        shifted = QSeries.from_dict({n * p: c for n, c in s.terms().items() if n * p < precision}, precision)
        out.append(s + shifted * (p * orbit.epsilon))
    return out


def echelonize(series):
    """Reduced echelon form by valuation; returns (basis, pivots)."""
    if not series:
        return [], []
    prec = min(s.prec for s in series)
    rows = [[s[n] for n in range(prec)] for s in series]
    pivots = []
    r = 0
    for col in range(prec):
        pr = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                c = rows[i][col]
                rows[i] = [x - c * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    if r < len(rows):
        raise ShapeError(f"series are dependent to precision {prec}")
    return [QSeries(row, prec) for row in rows], pivots


def classify_shape(pivots):
    g = len(pivots)
    if pivots == list(range(1, g + 1)):
        return NONWEIERSTRASS
    if pivots == list(range(1, 2 * g, 2)):
        return WEIERSTRASS_HYP
    return OTHER


@dataclass
class PlusSpaceBasis:
    p: int
    precision: int
    basis: list
    pivots: list
    shape: str
    sources: list = field(default_factory=list)

    @property
    def genus(self):
        return len(self.basis)


def default_precision(p, g):
    return max(sturm_bound(p), 2 * (2 * g + 2) + 4)


def plus_space_generators(catalog, precision):
    p = catalog.p
    gens, sources = [], []
    for o in catalog.plus_orbits():
        if o.level == p:
            ss = oldform_lift(o, p, precision)
        else:
            ss = orbit_qexpansion(o, p, precision)
        gens += ss
        sources += [o.label] * len(ss)
    return gens, sources


def plus_space_basis(catalog, precision=None):
    p = catalog.p
    g = catalog.plus_dimension()
    if precision is None:
        precision = default_precision(p, g)
    if precision < 2 * (2 * g + 2) + 4:
        raise ShapeError(f"precision {precision} is below 2(2g+2)+4 = {2 * (2 * g + 2) + 4}")
    gens, sources = plus_space_generators(catalog, precision)
    basis, pivots = echelonize(gens)
    return PlusSpaceBasis(p, precision, basis, pivots, classify_shape(pivots), sources)


# -- models ----------------------------------------------------------------


@dataclass
class HyperellipticModel:
    P: Poly
    x_series: QSeries
    y_series: QSeries
    y_scale: Fraction
    verified_to: int
    certified: bool
    certification_bound: int
    notes: list = field(default_factory=list)

    def to_json(self):
        return {
            "equation": f"y^2 = {self.P.to_text('x')}",
            "P": [str(c) for c in self.P.coeffs],
            "x": self.x_series.truncate(8).to_text(),
            "y": self.y_series.truncate(8).to_text(),
            "y_scale": str(self.y_scale),
            "verified_to": self.verified_to,
            "certified": self.certified,
            "certification_bound": self.certification_bound,
            "notes": self.notes,
        }


@dataclass
class ModelRefusal:
    reason: str
    pivots: list
    shape: str
    residual_valuation: int = None
    residual_coefficient: Fraction = None

    def to_json(self):
        return {
            "reason": self.reason,
            "pivots": self.pivots,
            "shape": self.shape,
            "residual_valuation": self.residual_valuation,
            "residual_coefficient": None if self.residual_coefficient is None else str(self.residual_coefficient),
        }


def solve_for_P(x, y, degree):
    """Greedy solve of y^2 = sum c_k x^k, x having a pole at infinity; returns (P, residual)."""
    e = -x.valuation()
    if e <= 0:
        raise ShapeError("x must have a pole at infinity")
    r = y * y
    lc = x.lc()
    coeffs = [Fraction(0)] * (degree + 1)
    powers = [QSeries([1], r.prec + degree * e)]
    for _ in range(degree):
        powers.append(powers[-1] * x)
    for k in range(degree, -1, -1):
        c = r[-k * e] / lc**k if -k * e < r.prec else Fraction(0)
        coeffs[k] = c
        if c:
            r = r - powers[k] * c
    return Poly(coeffs), r


def _square_class(c):
    """c = u * s^2 with u a squarefree integer and s > 0 rational."""
    c = Fraction(c)
    if c == 0:
        raise ValueError("zero has no square class")
    n = abs(c.numerator) * c.denominator
    u, s = (-1 if c < 0 else 1), 1
    for q, e in factorint(n) if n > 1 else []:
        if e % 2:
            u *= q
        s *= q ** (e // 2)
    return u, Fraction(s, c.denominator)


def _model_from_xy(x, y, degree, level_mu, den_series, notes):
    P, r = solve_for_P(x, y, degree)
    if not r.is_zero():
        return None, r
    # normalise y so that P is monic (or has squarefree leading coefficient) and y's leading term is positive
    u, s = _square_class(P.lc())
    scale = 1 / s
    if (y * scale).lc() < 0:
        scale = -scale
    P = P * (scale * scale)
    y = y * scale
    g = (degree - 1) // 2
    weight = 2 * (2 * g + 2)
    bound = ceil(weight * level_mu / 12)
    # f^{2g+2} (y^2 - P(x)) is a weight-(4g+4) cusp form; Sturm's bound certifies its vanishing
    order = r.prec + (2 * g + 2) * den_series.valuation()
    model = HyperellipticModel(P, x, y, scale, r.prec, order > bound, bound, notes)
    return model, r


def hyperelliptic_model(basis):
    """Model y^2 = P(x) from an echelon basis, or a refusal certificate."""
    g = basis.genus
    if basis.shape == OTHER:
        raise ShapeError("shape OTHER: infinity fits neither hyperelliptic branch")
    f_prev, f_last = basis.basis[g - 2], basis.basis[g - 1]
    x = f_prev / f_last
    y = x.derive() / f_last
    degree = 2 * g + 2 if basis.shape == NONWEIERSTRASS else 2 * g + 1
    mu = basis.p * (basis.p + 1)
    notes = ["x = f_{g-1}/f_g and y = q(dx/dq)/f_g, f_g the basis element of largest valuation"]
    model, r = _model_from_xy(x, y, degree, mu, f_last, notes)
    if model is None:
        v = r.valuation()
        return ModelRefusal(
            f"no relation y^2 = P(x) of degree {degree}: residual nonzero at q^{v}",
            basis.pivots,
            basis.shape,
            v,
            r.lc(),
        )
    if poly_gcd(model.P, model.P.derivative()).degree > 0:
        return ModelRefusal("relation found but P is not squarefree", basis.pivots, basis.shape)
    return model


# -- the case p = 11 -------------------------------------------------------

REFERENCE_P11 = Poly([11, 0, 11, 0, -7, 0, 1])


def p11_model(catalog, precision=None):
    """Model from the basis f_1 (CM form of level 121) and h = f_2(q) - 11 f_2(q^11)."""
    if catalog.p != 11:
        raise ValueError("p11_model needs the p = 11 catalog")
    mu = 11 * 12
    if precision is None:
        precision = ceil(12 * mu / 12) + 12
    cm = [o for o in catalog.orbits if o.cm]
    old = catalog.level_orbits(11)
    if len(cm) != 1 or len(old) != 1 or cm[0].dimension != 1 or old[0].dimension != 1:
        raise ValueError("unexpected p = 11 catalog")
    f1 = orbit_qexpansion(cm[0], 11, precision)[0]
    h = oldform_lift(old[0], 11, precision)[0]
    x = h / f1
    y = x.derive() / f1
    # x has no pole here, so solve with the local parameter 1/(x - x(inf)) shifted back
    P, r = _solve_finite(x, y, 6)
    if P is None:
        return None, r, f1, h
    u, s = _square_class(P.lc())
    scale = 1 / s
    if (y * scale).lc() < 0:
        scale = -scale
    P = P * (scale * scale)
    y = y * scale
    # f1^6 (y^2 - P(x)) is a weight-12 cusp form on Gamma_0(121)
    bound = ceil(12 * mu / 12)
    order = r.prec + 6 * f1.valuation()
    model = HyperellipticModel(
        P, x, y, scale, r.prec, order > bound, bound, ["x = h/f_1 and y = c q(dx/dq)/f_1"]
    )
    return model, r, f1, h


def _solve_finite(x, y, degree):
    """Solve y^2 = P(x) when x is regular at infinity, by linear algebra over Q."""
    prec = min(x.prec, y.prec)
    powers = [QSeries([1], prec)]
    for _ in range(degree):
        powers.append(powers[-1] * x)
    target = y * y
    prec = min([target.prec] + [s.prec for s in powers])
    rows = [[powers[k][n] for k in range(degree + 1)] + [target[n]] for n in range(prec)]
    sol = _solve_linear(rows, degree + 1)
    if sol is None:
        return None, target
    P = Poly(sol)
    r = target - sum((powers[k] * sol[k] for k in range(degree + 1)), QSeries([], prec))
    return (P if r.is_zero() else None), r


def _solve_linear(rows, nvars):
    rows = [list(r) for r in rows]
    piv_cols = []
    r = 0
    for col in range(nvars):
        pr = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                c = rows[i][col]
                rows[i] = [a - c * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(col)
        r += 1
    if any(row[-1] != 0 for row in rows[r:]):
        return None
    if len(piv_cols) < nvars:
        return None
    sol = [Fraction(0)] * nvars
    for i, col in enumerate(piv_cols):
        sol[col] = rows[i][-1]
    return sol


def verify_p11(catalog, weil_at=None):
    """Certificate for the genus-2 curve X_0^+(121): model, automorphisms, position of infinity."""
    model, r, f1, h = p11_model(catalog)
    cert = {"checks": {}, "failures": []}

    def check(name, ok):
        cert["checks"][name] = bool(ok)
        if not ok:
            cert["failures"].append(name)

    check("model_found", model is not None)
    if model is None:
        cert["residual_valuation"] = r.valuation()
        return cert
    P = model.P
    cert["model"] = model.to_json()
    check("matches_reference_equation", P == REFERENCE_P11)
    check("squarefree", poly_gcd(P, P.derivative()).degree == 0)
    check("certified_by_sturm_bound", model.certified)
    check("P_even", P.compose(Poly([0, -1])) == P)
    inf = (model.x_series[0], model.y_series[0])
    cert["infinity"] = [str(inf[0]), str(inf[1])]
    check("infinity_on_curve", inf[1] ** 2 == P(inf[0]))
    fixed_by = []
    for sx, sy in ((-1, 1), (1, -1), (-1, -1)):
        if (sx * inf[0], sy * inf[1]) == inf:
            fixed_by.append([sx, sy])
    check("infinity_not_fixed_by_sign_maps", not fixed_by)
    cert["automorphisms"] = ["(x,y)->(x,y)", "(x,y)->(-x,y)", "(x,y)->(x,-y)", "(x,y)->(-x,-y)"]
    cert["f1"] = f1.truncate(8).to_text()
    cert["h"] = h.truncate(13).to_text()
    if weil_at is not None:
        counts = point_count_comparison(P, weil_at)
        cert["point_counts"] = counts
        check("point_counts_match", all(c["model"] == c["hecke"] for c in counts))
    cert["status"] = "VERIFIED" if not cert["failures"] else "FAILED"
    return cert


# -- point counting ----------------------------------------------------------


def count_points_odd(P, ell):
    """Points of the smooth projective model of y^2 = P(x) over F_ell, ell odd, deg P even."""
    if ell == 2:
        raise ValueError("odd characteristic only")
    c = [int(Fraction(v).numerator * pow(Fraction(v).denominator, -1, ell)) % ell for v in P.coeffs]
    total = 0
    for x0 in range(ell):
        v = 0
        for coef in reversed(c):
            v = (v * x0 + coef) % ell
        total += 1 + _legendre(v, ell)
    lead = c[-1]
    if P.degree % 2 == 1:
        total += 1
    else:
        total += 1 + _legendre(lead, ell)
    return total


def _legendre(a, ell):
    a %= ell
    if a == 0:
        return 0
    return 1 if pow(a, (ell - 1) // 2, ell) == 1 else -1


@dataclass
class Char2Model:
    """Y^2 + h(X) Y = f(X) over Z, smooth mod 2, isomorphic over Q to y^2 = P(x)."""

    h: Poly
    f: Poly
    transform: str

    def is_smooth_mod2(self):
        return _char2_smooth(self.h, self.f)

    def count(self, n):
        F = GF2n(n)
        hc = [int(v) for v in _pad(self.h, 4)]
        fc = [int(v) for v in _pad(self.f, 7)]
        total = 0
        for x in F.elements():
            hv = F.eval_poly(hc, x)
            fv = F.eval_poly(fc, x)
            if hv == 0:
                total += 1
            else:
                z = F.mul(fv, F.inv(F.square(hv)))
                total += 2 if F.trace(z) == 0 else 0
        # points above X = infinity: Z^2 + h3 Z = f6
        h3, f6 = hc[3] & 1, fc[6] & 1
        if h3 == 0:
            total += 1
        else:
            total += 2 if F.trace(f6) == 0 else 0
        return total


def _pad(p, n):
    c = list(p.int_coeffs())
    return c + [0] * (n - len(c))


def _mod2_poly(c):
    out = 0
    for i, v in enumerate(c):
        if int(v) & 1:
            out |= 1 << i
    return out


def _gf2_deriv(a):
    out = 0
    i = 1
    while a >> i:
        if (a >> i) & 1 and i % 2 == 1:
            out |= 1 << (i - 1)
        i += 1
    return out


def _gf2_gcd(a, b):
    from .exact.gf2 import _pmod

    while b:
        a, b = b, _pmod(a, b)
    return a


def _char2_smooth(h, f):
    """Smoothness mod 2 of Y^2 + hY = f as a genus-2 curve, both charts."""
    from .exact.gf2 import _clmul

    def singular(hc, fc):
        H = _mod2_poly(hc)
        Fp = _mod2_poly(fc)
        if H == 0:
            return True
        dH = _gf2_deriv(H)
        dF = _gf2_deriv(Fp)
        cond = _clmul(_clmul(dH, dH), Fp) ^ _clmul(dF, dF)
        return _gf2_gcd(H, cond).bit_length() > 1

    hc, fc = _pad(h, 4), _pad(f, 7)
    if singular(hc, fc):
        return False
    # chart at infinity: X = 1/T, Y = V / T^3
    return not _singular_at_zero(list(reversed(hc)), list(reversed(fc)))


def _singular_at_zero(hc, fc):
    if hc[0] & 1:
        return False
    # h(0) = 0: singular iff h'(0)^2 f(0) + f'(0)^2 = 0 mod 2
    return ((hc[1] & 1) * (fc[0] & 1) + (fc[1] & 1)) % 2 == 0


def find_char2_model(P, search=3):
    """A model Y^2 + h(X) Y = f(X) smooth at 2, for y^2 = P(x) with deg P = 6.

    Searches x = (aX + b)/(cX + d) over small integer matrices, clears even
    factors from (cX + d)^6 P(x), and writes y = 2^k (2Y + A(X)) / (cX + d)^3
    with A chosen so that the remainder is divisible by 4.
    """
    from itertools import product

    if P.degree not in (5, 6):
        raise ValueError("genus-2 models only")
    rng = range(-search, search + 1)
    for a, b, c, d in product(rng, repeat=4):
        if a * d - b * c == 0:
            continue
        num, den = Poly([b, a]), Poly([d, c])
        Q = Poly([0])
        for k in range(P.degree + 1):
            Q = Q + P[k] * num**k * den ** (6 - k)
        if not Q.is_integral() or Q.is_zero():
            continue
        k2 = 0
        while all(int(v) % 4 == 0 for v in Q.coeffs):
            Q = Q / 4
            k2 += 1
        for A in product(range(2), repeat=4):
            Ap = Poly(list(A))
            diff = Q - Ap * Ap
            if not all(int(v) % 4 == 0 for v in _pad(diff, 7)):
                continue
            m = Char2Model(
                Ap,
                diff / 4,
                f"x = ({a}X + {b})/({c}X + {d}), y = 2^{k2 + 1} (Y + A(X)/2)/({c}X + {d})^3, A = {Ap.to_text('X')}",
            )
            if m.is_smooth_mod2():
                return m
    return None


def point_count_comparison(P, weil_by_ell, two_powers=(1, 2, 3, 4, 5, 6, 7, 8)):
    """Model point counts against Hecke-side N_ell(n)."""
    out = []
    for ell, weil in sorted(weil_by_ell.items()):
        if ell == 2:
            m = find_char2_model(P)
            if m is None:
                out.append({"field": "F_2", "model": None, "hecke": weil.N(1), "note": "no smooth model found"})
                continue
            for n in two_powers:
                out.append({"field": f"F_{2 ** n}", "model": m.count(n), "hecke": weil.N(n), "char2_model": m.transform})
        else:
            out.append({"field": f"F_{ell}", "model": count_points_odd(P, ell), "hecke": weil.N(1)})
    return out
