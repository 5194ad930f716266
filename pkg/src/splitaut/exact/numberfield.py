"""Arithmetic in Q[x]/(f) for an irreducible monic integer f."""

from fractions import Fraction

from .matrix import RationalMatrix
from .poly import Poly, power_sums


class NumberField:
    """The quotient ring Q[x]/(f); elements are Polys of degree < deg f."""

    def __init__(self, modulus):
        if not modulus.is_monic():
            raise ValueError("defining polynomial must be monic")
        self.modulus = modulus
        self.degree = modulus.degree
        self._traces = None

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.modulus == other.modulus

    def __hash__(self):
        return hash(self.modulus)

    def element(self, coeffs):
        return Poly(coeffs) % self.modulus

    def gen(self):
        return self.element([0, 1]) if self.degree > 1 else self.element([-self.modulus[0]])

    def one(self):
        return Poly([1])

    def mul(self, a, b):
        return (a * b) % self.modulus

    def power_traces(self, n):
        """Tr(alpha^k) for k = 0..n-1."""
        if self._traces is None or len(self._traces) < n:
            f = self.modulus
            if f.is_integral():
                s = power_sums(f, max(n, 1))
            else:
                s = _power_sums_rational(f, max(n, 1))
            self._traces = [Fraction(self.degree)] + [Fraction(v) for v in s]
        return self._traces[:n]

    def trace(self, a):
        t = self.power_traces(self.degree)
        return sum((a[i] * t[i] for i in range(self.degree)), Fraction(0))

    def multiplication_matrix(self, a):
        """Matrix of b -> a*b on the power basis (row i = image of alpha^i)."""
        rows = []
        x = Poly([1])
        for i in range(self.degree):
            img = self.mul(a, x)
            rows.append([img[j] for j in range(self.degree)])
            x = self.mul(x, Poly([0, 1]))
        return RationalMatrix.from_rows(rows)

    def charpoly(self, a):
        return self.multiplication_matrix(a).charpoly()


def _power_sums_rational(f, n):
    d = f.degree
    e = [(-1) ** k * f[d - k] for k in range(d + 1)]
    s = [Fraction(0)] * (n + 1)
    for m in range(1, n + 1):
        acc = (-1) ** (m - 1) * m * e[m] if m <= d else Fraction(0)
        for k in range(1, min(m - 1, d) + 1):
            acc += (-1) ** (k - 1) * e[k] * s[m - k]
        s[m] = acc
    return s[1:]
