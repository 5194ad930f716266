"""Integer arithmetic helpers: primes, Moebius, Legendre symbols, CRT."""

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import gmpy2


def is_prime(n):
    return n >= 2 and bool(gmpy2.is_prime(n))


def primes_up_to(n):
    """All primes p <= n, by a plain sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i in range(n + 1) if sieve[i]]


def factorint(n):
    """Prime factorisation of n >= 1 as a sorted list of (prime, exponent)."""
    if n < 1:
        raise ValueError("factorint needs n >= 1")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def divisors(n):
    divs = [1]
    for p, e in factorint(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def moebius(n):
    if n < 1:
        raise ValueError("moebius is defined for n >= 1")
    mu = 1
    for _, e in factorint(n):
        if e > 1:
            return 0
        mu = -mu
    return mu


def legendre(a, p):
    """Legendre symbol (a|p) for an odd prime p."""
    return int(gmpy2.legendre(a, p))


def kronecker(a, n):
    return int(gmpy2.kronecker(a, n))


def euler_phi(n):
    r = n
    for p, _ in factorint(n):
        r = r // p * (p - 1)
    return r


def crt_pair(r1, m1, r2, m2):
    """Combine x = r1 mod m1 and x = r2 mod m2 (coprime moduli)."""
    t = (r2 - r1) * pow(m1, -1, m2) % m2
    return r1 + m1 * t, m1 * m2


def symmetric_mod(a, m):
    a %= m
    return a - m if a > m // 2 else a


def rational_reconstruction(a, m):
    """Return n/d with n = a*d mod m, |n|, d <= sqrt(m/2), or None."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


@lru_cache(maxsize=None)
def modular_primes(count, below=1 << 26):
    """`count` distinct primes just below `below`, in decreasing order.

    The bound keeps products of two residues, summed over a few thousand terms,
    inside int64 for numpy matrix products.
    """
    out = []
    p = below
    while len(out) < count:
        p = _prev_prime(p)
        out.append(p)
    return tuple(out)


def _prev_prime(n):
    n -= 1
    while not is_prime(n):
        n -= 1
    return n


def class_number(D):
    """Class number of primitive positive definite forms of discriminant D < 0.

    Counts reduced forms (a, b, c) with |b| <= a <= c, b >= 0 when |b| = a or
    a = c, by brute-force enumeration.
    """
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError("need a negative discriminant")
    h = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            h += 1
        a += 1
    return h
