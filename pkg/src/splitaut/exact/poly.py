"""Univariate polynomials with exact rational coefficients."""

from fractions import Fraction
from math import gcd, lcm


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


class Poly:
    """Polynomial in one variable; coefficients are stored ascending.

    Integer polynomials are simply Polys whose coefficients all have
    denominator one (see `is_integral`).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = tuple(Fraction(c) for c in _trim(coeffs))

    @classmethod
    def x(cls):
        return cls([0, 1])

    @classmethod
    def monomial(cls, n, c=1):
        return cls([0] * n + [c])

    @classmethod
    def from_roots(cls, roots):
        f = cls([1])
        for r in roots:
            f = f * cls([-r, 1])
        return f

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_monic(self):
        return self.lc() == 1

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self):
        if not self.is_integral():
            raise ValueError("polynomial has non-integral coefficients")
        return [int(c) for c in self.coeffs]

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        return self.to_text()

    def to_text(self, var="x"):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = Poly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other):
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(rem) - other.degree)
        lead = other.lc()
        while len(rem) - 1 >= other.degree and rem:
            shift = len(rem) - 1 - other.degree
            c = rem[-1] / lead
            q[shift] = c
            for i, b in enumerate(other.coeffs):
                rem[shift + i] -= c * b
            rem = _trim(rem)
        return Poly(q), Poly(rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self):
        return self * Fraction(1) / self.lc() if self.coeffs else self

    def __truediv__(self, c):
        return Poly([a / c for a in self.coeffs])

    def derivative(self):
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def content(self):
        """Positive rational c with self/c primitive in Z[x] (sign of lc kept)."""
        if not self.coeffs:
            return Fraction(0)
        den = lcm(*(c.denominator for c in self.coeffs))
        num = 0
        for c in self.coeffs:
            num = gcd(num, int(c * den))
        return Fraction(num, den)

    def primitive(self):
        """Primitive integer polynomial with positive leading coefficient."""
        if not self.coeffs:
            return self
        c = self.content()
        if self.lc() < 0:
            c = -c
        return Poly([a / c for a in self.coeffs])

    def compose(self, other):
        other = _coerce(other)
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def twist(self):
        """The polynomial whose roots are the negatives of the roots of self.

        For monic f of degree d this is (-1)^d f(-x).
        """
        d = self.degree
        return Poly([c if (d - k) % 2 == 0 else -c for k, c in enumerate(self.coeffs)])


def _coerce(other):
    if isinstance(other, Poly):
        return other
    return Poly([other])


def poly_gcd(a, b):
    """Monic gcd over Q."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def squarefree_decomposition(f):
    """Yun's algorithm: list of (g_i, i) with f = lc * prod g_i^i, g_i monic squarefree."""
    f = f.monic()
    out = []
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f // a
    c = df // a
    i = 1
    while b.degree > 0:
        d = c - b.derivative()
        g = poly_gcd(b, d)
        if g.degree > 0:
            out.append((g, i))
        b = b // g
        c = d // g
        i += 1
    return out


def power_sums(f, n_max):
    """s_1..s_{n_max}: power sums of the roots of monic integer f (Newton's identities)."""
    if f.is_zero() or not f.is_monic():
        raise ValueError("power_sums needs a monic polynomial")
    if not f.is_integral():
        raise ValueError("power_sums needs integer coefficients")
    d = f.degree
    # e_k = (-1)^k * coefficient of x^(d-k)
    c = f.int_coeffs()
    e = [(-1) ** k * c[d - k] for k in range(d + 1)]
    s = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        acc = (-1) ** (n - 1) * n * e[n] if n <= d else 0
        for k in range(1, min(n - 1, d) + 1):
            acc += (-1) ** (k - 1) * e[k] * s[n - k]
        s[n] = acc
    return s[1:]
