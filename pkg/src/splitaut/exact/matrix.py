"""Dense matrices with exact rational entries, and their characteristic polynomials."""

from fractions import Fraction
from math import comb, lcm

import numpy as np

from . import modp
from .arith import crt_pair, modular_primes, symmetric_mod
from .poly import Poly


class RationalMatrix:
    """Immutable dense matrix over Q, row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        entries = tuple(Fraction(e) for e in entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [e for r in rows for e in r])

    @classmethod
    def identity(cls, n):
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def zero(cls, rows, cols=None):
        cols = rows if cols is None else cols
        return cls(rows, cols, [0] * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self):
        return self.rows == self.cols

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"RationalMatrix({self.rows}x{self.cols})"

    def __add__(self, other):
        self._same_shape(other)
        return RationalMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._same_shape(other)
        return RationalMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return RationalMatrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c):
        c = Fraction(c)
        return RationalMatrix(self.rows, self.cols, [a * c for a in self.entries])

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        cols = [other.entries[j :: other.cols] for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for c in cols:
                out.append(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)))
        return RationalMatrix(self.rows, other.cols, out)

    def transpose(self):
        return RationalMatrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    def denominator(self):
        return lcm(1, *(e.denominator for e in self.entries))

    def integer_part(self):
        """(M, d) with self = M / d, M an integer numpy object array."""
        d = self.denominator()
        return [int(e * d) for e in self.entries], d

    def mod(self, p):
        """Reduction modulo p as an int64 numpy array (p must not divide denominators)."""
        d = self.denominator()
        if d % p == 0:
            raise ZeroDivisionError(f"{p} divides a denominator")
        inv = pow(d, -1, p)
        vals = [int(e * d) % p * inv % p for e in self.entries]
        return np.array(vals, dtype=np.int64).reshape(self.rows, self.cols)

    def evaluate_poly(self, f):
        """f(self) for a Poly f (Horner)."""
        if not self.is_square:
            raise ValueError("matrix must be square")
        n = self.rows
        acc = RationalMatrix.zero(n)
        ident = RationalMatrix.identity(n)
        for c in reversed(f.coeffs):
            acc = acc @ self + ident.scale(c)
        return acc

    def charpoly(self):
        return charpoly(self)


def _int_charpoly_bound(ints, n):
    """Bound on |coefficients| of det(xI - M) for the integer matrix M."""
    if n == 0:
        return 1
    rownorm = max(sum(abs(ints[i * n + j]) for j in range(n)) for i in range(n))
    return max(comb(n, k) * rownorm**k for k in range(n + 1))


def charpoly(m):
    """Characteristic polynomial det(xI - m), computed multi-modularly.

    The matrix is scaled to an integer matrix M = d*m; the charpoly of M is
    recovered by CRT over word-size primes until the modulus exceeds twice the
    Hadamard-type bound C(n,k) * ||M||^k, then rescaled by powers of d.
    """
    if not m.is_square:
        raise ValueError("charpoly needs a square matrix")
    n = m.rows
    if n == 0:
        return Poly([1])
    ints, d = m.integer_part()
    bound = 2 * _int_charpoly_bound(ints, n) + 1
    arr = np.array(ints, dtype=object).reshape(n, n)
    modulus = 1
    residues = [0] * (n + 1)
    count = 4
    used = 0
    while modulus <= bound:
        primes = modular_primes(count)
        for p in primes[used:]:
            a = np.array([[int(v) % p for v in row] for row in arr], dtype=np.int64)
            cp = modp.charpoly(a, p)
            for k in range(n + 1):
                residues[k], _ = crt_pair(residues[k], modulus, cp[k], p)
            modulus *= p
            used += 1
            if modulus > bound:
                break
        count *= 2
    coeffs = [symmetric_mod(r, modulus) for r in residues]
    # det(xI - M/d) = d^-n det(dx I - M)
    return Poly([Fraction(c, d ** (n - k)) for k, c in enumerate(coeffs)])
