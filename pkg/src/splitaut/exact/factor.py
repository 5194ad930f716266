"""Factorisation of rational polynomials.

Squarefree decomposition, Cantor-Zassenhaus modulo a small prime, multifactor
Hensel lifting and subset recombination.
"""

import random
from fractions import Fraction
from itertools import combinations
from math import isqrt, prod

from .arith import is_prime
from .poly import Poly, squarefree_decomposition

# ---- dense polynomials over Z/mZ, ascending int lists ----


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _mod(a, m):
    return _trim([c % m for c in a])


def _add(a, b, m):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % m for i in range(n)])


def _sub(a, b, m):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % m for i in range(n)])


def _mul(a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _mod(out, m)


def _scale(a, c, m):
    return _mod([x * c for x in a], m)


def _divmod(a, b, m):
    """Division by b whose leading coefficient is a unit mod m."""
    a = list(a)
    inv = pow(b[-1], -1, m)
    db = len(b) - 1
    q = [0] * max(0, len(a) - db)
    while len(a) - 1 >= db and a:
        c = a[-1] * inv % m
        shift = len(a) - 1 - db
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - c * y) % m
        _trim(a)
    return _trim(q), a


def _monic(a, m):
    return _scale(a, pow(a[-1], -1, m), m)


def _gcd(a, b, p):
    while b:
        a, b = b, _divmod(a, b, p)[1]
    return _monic(a, p) if a else a


def _powmod(base, e, f, p):
    result = [1]
    base = _divmod(base, f, p)[1]
    while e:
        if e & 1:
            result = _divmod(_mul(result, base, p), f, p)[1]
        base = _divmod(_mul(base, base, p), f, p)[1]
        e >>= 1
    return result


def _deriv(a, m):
    return _mod([k * c for k, c in enumerate(a)][1:], m)


def _xgcd(a, b, p):
    """s, t with s*a + t*b = 1 mod p (a, b coprime)."""
    r0, r1 = a, b
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _sub(s0, _mul(q, s1, p), p)
        t0, t1 = t1, _sub(t0, _mul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    if len(r0) != 1:
        raise ValueError("polynomials not coprime mod p")
    return _scale(s0, inv, p), _scale(t0, inv, p)


# ---- factorisation modulo p (p odd prime) ----


def _ddf(f, p):
    """Distinct degree factorisation of monic squarefree f."""
    out = []
    h = [0, 1]
    i = 0
    f = list(f)
    while len(f) - 1 >= 2 * (i + 1):
        i += 1
        h = _powmod(h, p, f, p)
        g = _gcd(f, _sub(h, [0, 1], p), p)
        if len(g) > 1:
            out.append((g, i))
            f = _divmod(f, g, p)[0]
            h = _divmod(h, f, p)[1]
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _edf(f, d, p, rng):
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = [rng.randrange(p) for _ in range(n)]
        _trim(a)
        if len(a) < 2:
            continue
        g = _gcd(a, f, p)
        if 1 < len(g) < len(f):
            break
        b = _powmod(a, (p**d - 1) // 2, f, p)
        g = _gcd(_sub(b, [1], p), f, p)
        if 1 < len(g) < len(f):
            break
    return _edf(g, d, p, rng) + _edf(_divmod(f, g, p)[0], d, p, rng)


def factor_mod_p(f, p, seed=0):
    """Monic irreducible factors of monic squarefree f over F_p."""
    rng = random.Random(seed)
    out = []
    for g, d in _ddf(f, p):
        out.extend(_edf(g, d, p, rng))
    return sorted(out, key=lambda g: (len(g), g))


# ---- Hensel lifting ----


def _hensel_step(f, g, h, s, t, m):
    """One quadratic lifting step from modulus m to m**2 (h monic)."""
    m2 = m * m
    e = _sub(f, _mul(g, h, m2), m2)
    q, r = _divmod(_mul(s, e, m2), h, m2)
    g1 = _add(_add(g, _mul(t, e, m2), m2), _mul(q, g, m2), m2)
    h1 = _add(h, r, m2)
    b = _sub(_add(_mul(s, g1, m2), _mul(t, h1, m2), m2), [1], m2)
    c, d = _divmod(_mul(s, b, m2), h1, m2)
    s1 = _sub(s, d, m2)
    t1 = _sub(_sub(t, _mul(t, b, m2), m2), _mul(c, g1, m2), m2)
    return g1, h1, s1, t1


def hensel_lift(f, factors, p, k):
    """Lift f = lc * prod(factors) mod p to modulus p**(2**k).

    `factors` are monic mod p; the lifted factors are monic mod the new modulus.
    """
    if len(factors) == 1:
        m = p ** (2**k)
        return [_monic(_mod(f, m), m)]
    half = len(factors) // 2
    lc = f[-1]
    g = _scale(_mul_all(factors[:half], p), lc, p)
    h = _mul_all(factors[half:], p)
    s, t = _xgcd(g, h, p)
    m = p
    for _ in range(k):
        g, h, s, t = _hensel_step(f, g, h, s, t, m)
        m = m * m
    return hensel_lift(g, factors[:half], p, k) + hensel_lift(h, factors[half:], p, k)


def _mul_all(fs, m):
    acc = [1]
    for g in fs:
        acc = _mul(acc, g, m)
    return acc


# ---- over Z / Q ----


def _symmetric(a, m):
    return [c - m if c > m // 2 else c for c in a]


def _exact_div(f, g):
    """f / g over Z if g divides f exactly, else None."""
    f = list(f)
    q = [0] * (len(f) - len(g) + 1)
    lg = g[-1]
    for shift in range(len(f) - len(g), -1, -1):
        c = f[shift + len(g) - 1]
        if c % lg:
            return None
        c //= lg
        q[shift] = c
        if c:
            for i, y in enumerate(g):
                f[shift + i] -= c * y
    if any(f):
        return None
    return q


def _content(a):
    from math import gcd

    c = 0
    for x in a:
        c = gcd(c, x)
    return c


def _primitive(a):
    c = _content(a)
    a = [x // c for x in a]
    return a if a[-1] > 0 else [-x for x in a]


def _choose_prime(f, tries=6):
    """Small odd prime p with f squarefree mod p and p not dividing lc; fewest factors wins."""
    best = None
    p = 3
    found = 0
    while found < tries:
        if is_prime(p) and f[-1] % p:
            fp = _mod(f, p)
            if len(_gcd(_monic(fp, p), _deriv(fp, p), p)) == 1:
                facs = factor_mod_p(_monic(fp, p), p)
                if best is None or len(facs) < len(best[1]):
                    best = (p, facs)
                found += 1
        p += 2
    return best


def _factor_squarefree_primitive(f):
    n = len(f) - 1
    if n <= 1:
        return [f]
    p, facs = _choose_prime(f)
    if len(facs) == 1:
        return [f]
    # coefficient bound for factors of lc * f (Mignotte)
    norm = isqrt(sum(c * c for c in f)) + 1
    bound = 2 * abs(f[-1]) * (2**n) * norm
    k = 0
    while p ** (2**k) <= bound:
        k += 1
    m = p ** (2**k)
    lifted = hensel_lift(_mod(f, m), facs, p, k)
    found = []
    remaining = list(range(len(lifted)))
    f_cur = list(f)
    size = 1
    while 2 * size <= len(remaining):
        hit = False
        for subset in combinations(remaining, size):
            lc = f_cur[-1]
            g = _symmetric(_scale(_mul_all([lifted[i] for i in subset], m), lc, m), m)
            # quick constant-term test
            if g[0] == 0 and f_cur[0] != 0:
                continue
            if g[0] and (lc * f_cur[0]) % g[0]:
                continue
            g = _primitive(g)
            q = _exact_div(f_cur, g)
            if q is None:
                continue
            found.append(g)
            f_cur = q
            remaining = [i for i in remaining if i not in subset]
            hit = True
            break
        if not hit:
            size += 1
    found.append(_primitive(f_cur))
    return found


def factor_over_rationals(f):
    """Factor a nonzero rational polynomial.

    Returns (unit, [(g, e), ...]) with g primitive integer polynomials of
    positive leading coefficient, irreducible over Q, and f = unit * prod g^e.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    out = []
    for g, e in squarefree_decomposition(f):
        gi = g.primitive().int_coeffs()
        for h in _factor_squarefree_primitive(gi):
            out.append((Poly(h), e))
    out.sort(key=lambda t: (t[0].degree, [str(c) for c in t[0].coeffs], t[1]))
    prodpoly = Poly([1])
    for g, e in out:
        prodpoly = prodpoly * g**e
    unit = f.lc() / prodpoly.lc()
    return unit, out


def is_irreducible(f):
    _, facs = factor_over_rationals(f)
    return len(facs) == 1 and facs[0][1] == 1
