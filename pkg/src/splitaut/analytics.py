"""Genus data, Weil polynomials and the parity argument against involutions.

Point counts of X_0^+(p^2) over F_{l^n} come from Eichler-Shimura: the
Frobenius at l acts on the Tate module with characteristic polynomial
prod (x^2 - a_l(f) x + l) over all newforms f of New^+_{p^2} and New_p.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd

from .exact.arith import divisors, factorint, is_prime, kronecker, moebius
from .exact.poly import Poly, power_sums

# ranges of n used for sum P_2(n), per prime
REFERENCE_N_RANGE = {31: 36, 29: 42, 23: 38, 19: 46, 17: 46}
# largest number of fixed points of a non-trivial automorphism (cited constant)
FIXED_POINT_CAP = 12
# gonality-based genus cap for p > 31 (cited constant)
GENUS_CAP = 30


class WeilDataError(ArithmeticError):
    pass


@dataclass(frozen=True)
class GenusData:
    p: int
    g_plus: int
    g_zero: int


def genus_table(p):
    """Genera of X_0^+(p^2) and X_0(p) by the residue class of p mod 12."""
    if not is_prime(p) or p < 11:
        raise ValueError("genus_table needs a prime p >= 11")
    r = p % 12
    if r == 1:
        return GenusData(p, (p - 1) * (p - 7) // 24, (p - 13) // 12)
    if r == 5:
        return GenusData(p, (p - 3) * (p - 5) // 24, (p - 5) // 12)
    if r == 7:
        return GenusData(p, (p - 1) * (p - 7) // 24, (p - 7) // 12)
    return GenusData(p, (p - 3) * (p - 5) // 24, (p + 1) // 12)


def residue_degree(p, ell=2):
    """Residue degree of ell in K = Q(sqrt(p*)); for ell = 2 it is 1 iff p* = 1 mod 8."""
    if p == 2 or not is_prime(p):
        raise ValueError("residue_degree needs an odd prime p")
    if ell == p:
        raise ValueError("ell must differ from p")
    pstar = p if p % 4 == 1 else -p
    return 1 if kronecker(pstar, ell) == 1 else 2


def orbit_weil_factor(charpoly, ell):
    """x^d c(x + ell/x): the product of x^2 - a x + ell over the roots a of c."""
    d = charpoly.degree
    x = Poly.x()
    quad = x * x + ell
    out = Poly([0])
    for k in range(d + 1):
        ck = charpoly[k]
        if ck:
            out = out + quad**k * x ** (d - k) * ck
    return out


@dataclass
class WeilData:
    p: int
    ell: int
    weil_poly: Poly
    s: int
    _sums: list = field(default_factory=list, repr=False)

    @property
    def genus(self):
        return self.weil_poly.degree // 2

    def power_sum(self, n):
        if n > len(self._sums):
            if self.genus == 0:
                self._sums = [0] * max(n, 2 * len(self._sums))
            else:
                self._sums = power_sums(self.weil_poly, max(n, 2 * len(self._sums)))
        return self._sums[n - 1]

    def N(self, n):
        """Number of points over F_{ell^n}."""
        if n < 1:
            raise ValueError("n >= 1")
        return 1 + self.ell**n - self.power_sum(n)

    def functional_equation_holds(self):
        g = self.genus
        W = self.weil_poly
        # x^{2g} W(ell/x) = ell^g W(x)  <=>  c_k = ell^(g-k) c_{2g-k}
        return all(W[k] == self.ell ** (g - k) * W[2 * g - k] for k in range(g + 1))


def weil_polynomial(catalog, ell=2):
    """Frobenius polynomial at ell of J_0^+(p^2) assembled from catalog charpolys."""
    p = catalog.p
    if ell == p:
        raise ValueError("ell must differ from p")
    W = Poly([1])
    for o in catalog.plus_orbits():
        W = W * orbit_weil_factor(o.charpoly(ell), ell)
    return WeilData(p, ell, W, residue_degree(p, ell) if p != 2 else 1)


def weil_from_polynomial(W, ell, s=1, p=0):
    return WeilData(p, ell, W, s)


def max_fixed_points(g_plus):
    """Largest 2r, r <= 6, with g_u = (g+ + 1 - r)/2 an integer."""
    if g_plus < 2:
        raise ValueError("g_plus >= 2")
    return 10 if g_plus % 2 == 0 else 12


@dataclass
class ParityCertificate:
    p: int
    ell: int
    s: int
    n_max: int
    N: list  # N(s*k) for k = 1 .. n_max+1
    exact_degree: list  # a_m, m = 1 .. n_max+1
    R: list  # R(n), n = 1 .. n_max+1
    P: list  # P(n), n = 1 .. n_max
    sum_P: int
    fixed_point_cap: int = None
    allowed_max: int = None
    ruled_out: bool = None
    inclusion_exclusion_agrees: bool = None
    literal_display_mismatches: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_json(self):
        return {
            "p": self.p,
            "ell": self.ell,
            "s": self.s,
            "n_max": self.n_max,
            "N": [str(v) for v in self.N],
            "exact_degree": [str(v) for v in self.exact_degree],
            "R": [str(v) for v in self.R],
            "P": self.P,
            "sum_P": self.sum_P,
            "fixed_point_cap": self.fixed_point_cap,
            "allowed_max": self.allowed_max,
            "ruled_out": self.ruled_out,
            "inclusion_exclusion_agrees": self.inclusion_exclusion_agrees,
            "literal_display_mismatches": self.literal_display_mismatches,
            "notes": self.notes,
        }


def exact_degree_counts(weil, m_max):
    """a_m = sum_{d | m} mu(m/d) N(s d): points of exact degree m over F_{ell^s}."""
    s = weil.s
    out = []
    for m in range(1, m_max + 1):
        a = sum(moebius(m // d) * weil.N(s * d) for d in divisors(m))
        if a < 0 or a % m:
            raise WeilDataError(f"exact-degree count a_{m} = {a} is impossible; Weil data is corrupt")
        out.append(a)
    return out


def _union_count(weil, degrees):
    """|union of X(F_{ell^{s d}}) for d in degrees|, by inclusion-exclusion over gcds."""
    s = weil.s
    total = 0
    for j in range(1, len(degrees) + 1):
        for sub in combinations(degrees, j):
            g = 0
            for d in sub:
                g = gcd(g, d)
            total += (-1) ** (j - 1) * weil.N(s * g)
    return total


def r_step_inclusion_exclusion(weil, n):
    """R(n+1) - R(n) as N(s(n+1)) minus the points already defined over proper subfields."""
    m = n + 1
    if m == 1:
        return weil.N(weil.s)
    ds = [m // q for q, _ in factorint(m)]
    return weil.N(weil.s * m) - _union_count(weil, ds)


def _literal_display_step(P, n):
    """The recursion as printed: P in place of N and the sign (-1)^(r-1)."""
    m = n + 1
    qs = [q for q, _ in factorint(m)]
    r = len(qs)
    ds = [m // q for q in qs]
    total = P(m)
    for j in range(1, r + 1):
        for sub in combinations(ds, j):
            g = 0
            for d in sub:
                g = gcd(g, d)
            total -= (-1) ** (r - 1) * P(g)
    return total


def parity_sequence(weil, n_max, cross_check=True):
    """R(n), P(n) = R(n+1) - R(n) mod 2 for n = 1 .. n_max, plus cross-checks."""
    a = exact_degree_counts(weil, n_max + 1)
    R = []
    acc = 0
    for v in a:
        acc += v
        R.append(acc)
    P = [(R[n] - R[n - 1]) % 2 for n in range(1, n_max + 1)]
    cert = ParityCertificate(
        weil.p, weil.ell, weil.s, n_max, [weil.N(weil.s * k) for k in range(1, n_max + 2)], a, R, P, sum(P)
    )
    if cross_check:
        cert.inclusion_exclusion_agrees = all(
            r_step_inclusion_exclusion(weil, n) == R[n] - R[n - 1] for n in range(1, n_max + 1)
        )
        if not cert.inclusion_exclusion_agrees:
            raise WeilDataError("Moebius and inclusion-exclusion counts disagree")
        # the printed recursion involves P at indices up to s(n+1); extend as needed
        need = weil.s * (n_max + 1)
        a_ext = exact_degree_counts(weil, need + 1)

        def P_at(k):
            return a_ext[k] % 2  # P(k) = a_{k+1} mod 2

        for n in range(1, n_max + 1):
            lhs = (R[n] - R[n - 1]) % 2
            if _literal_display_step(lambda k: P_at(weil.s * k), n) % 2 != lhs:
                cert.literal_display_mismatches.append(n)
    return cert


def involution_ruled_out(catalog, n_max=None, ell=2):
    """Parity certificate that X_0^+(p^2) has no involution beyond the fixed-point cap."""
    p = catalog.p
    if n_max is None:
        if p not in REFERENCE_N_RANGE:
            raise ValueError(f"no reference n range for p = {p}; pass n_max")
        n_max = REFERENCE_N_RANGE[p]
    weil = weil_polynomial(catalog, ell)
    cert = parity_sequence(weil, n_max)
    g = weil.genus
    cap = max_fixed_points(g)
    Ns = weil.N(weil.s)
    cert.fixed_point_cap = cap
    cert.allowed_max = cap - (Ns % 2)
    cert.ruled_out = cert.sum_P > cert.allowed_max
    cert.notes.append(
        "allowed_max = 2r_max - 1 when N(s) is odd: an involution with an odd number of rational "
        "points over F_{l^s} has an odd number of fixed points there (interpretation)"
    )
    return cert


@dataclass(frozen=True)
class OddOrderBound:
    t: int
    g_plus: int
    bound: Fraction
    excluded: bool


def exclude_odd_order(t, g_plus):
    """Riemann-Hurwitz: an automorphism of odd order m has m <= (g+ - 1)/(t - 1)."""
    if t <= 1:
        raise ValueError(f"t = {t}: the bound (g+ - 1)/(t - 1) is undefined")
    bound = Fraction(g_plus - 1, t - 1)
    return OddOrderBound(t, g_plus, bound, bound < 3)


def genus_bound_excludes(p):
    """g+ > 30 rules p out via the gonality bound."""
    return genus_table(p).g_plus > GENUS_CAP
