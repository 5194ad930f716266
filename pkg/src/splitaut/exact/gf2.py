"""The finite fields F_{2^n}, elements packed as integers (bit i = coefficient of t^i)."""

from functools import lru_cache


def _clmul(a, b):
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def _pmod(a, m):
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def _is_irreducible(m):
    n = m.bit_length() - 1
    # no factor of degree <= n/2
    for d in range(1, n // 2 + 1):
        for f in range(1 << d, 1 << (d + 1)):
            if _pmod(m, f) == 0:
                return False
    return True


@lru_cache(maxsize=None)
def conway_like_modulus(n):
    """Smallest irreducible polynomial of degree n over F_2 (as a bit mask)."""
    for m in range(1 << n, 1 << (n + 1)):
        if m & 1 and _is_irreducible(m):
            return m
    raise ValueError(n)


class GF2n:
    def __init__(self, n):
        if n < 1:
            raise ValueError("n >= 1")
        self.n = n
        self.q = 1 << n
        self.modulus = conway_like_modulus(n) if n > 1 else 0b10

    def mul(self, a, b):
        return _pmod(_clmul(a, b), self.modulus)

    def square(self, a):
        return self.mul(a, a)

    def pow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError
        return self.pow(a, self.q - 2)

    def trace(self, a):
        """Absolute trace to F_2."""
        t = 0
        x = a
        for _ in range(self.n):
            t ^= x
            x = self.square(x)
        return t & 1 if t in (0, 1) else _bad_trace(t)

    def elements(self):
        return range(self.q)

    def from_int(self, c):
        """Image of an integer."""
        return c & 1

    def eval_poly(self, coeffs, x):
        """Evaluate an integer polynomial (ascending coefficients) reduced mod 2."""
        acc = 0
        for c in reversed(coeffs):
            acc = self.mul(acc, x) ^ (int(c) & 1)
        return acc


def _bad_trace(t):
    raise ArithmeticError(f"trace landed outside F_2: {t}")
