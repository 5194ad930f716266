"""Splitting a Hecke-stable space of modular symbols into Galois orbits.

Everything runs multi-modularly.  A piece of the decomposition is described by
rational conditions (operator, irreducible polynomial) whose common kernel it
is; that description reduces to the same subspace modulo every good prime.
Characteristic polynomials are recovered by CRT under the Ramanujan bound
|a_l| <= 2 sqrt(l) on Hecke eigenvalues.  Each final orbit carries an operator
A with irreducible characteristic polynomial f, and every T_l restricted to
the orbit is written exactly as g_l(A) with g_l in Q[x]/(f), recovered by
rational reconstruction and confirmed on fresh primes.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, isqrt

import numpy as np

from .exact import modp
from .exact.arith import crt_pair, modular_primes, primes_up_to, rational_reconstruction, symmetric_mod
from .exact.factor import factor_over_rationals
from .exact.poly import Poly
from .modsym import subspace_mod

log = logging.getLogger(__name__)


class DecompositionError(RuntimeError):
    pass


class BadPrime(Exception):
    pass


def op_key(spec):
    return spec if isinstance(spec, tuple) else ("T", spec)


def eigenvalue_bound(spec):
    """Integer bound on |eigenvalues| of an operator spec on cusp forms."""
    kind = spec[0]
    if kind == "W":
        return 1
    if kind == "T":
        return isqrt(4 * spec[1]) + 1
    if kind == "C":
        return sum(abs(c) * (isqrt(4 * l) + 1) for l, c in spec[1])
    raise ValueError(spec)


class ModularContext:
    """Reductions of operators on a fixed exact subspace, cached per prime."""

    def __init__(self, space, basis):
        self.space = space
        self.basis = basis
        self.dim = len(basis[0])
        self._sub = {}
        self._ops = {}
        self._pieces = {}

    def subspace(self, P):
        if P not in self._sub:
            try:
                self._sub[P] = subspace_mod(self.basis, P)
            except ZeroDivisionError as exc:
                raise BadPrime(P) from exc
        return self._sub[P]

    def op(self, spec, P):
        key = (spec, P)
        if key not in self._ops:
            B, piv = self.subspace(P)
            kind = spec[0]
            if kind == "W":
                full = _int_mod(self.space.fricke_int(), P)
            elif kind == "T":
                full = _int_mod(self.space.hecke_int(spec[1]), P)
            elif kind == "C":
                full = None
                for l, c in spec[1]:
                    m = _int_mod(self.space.hecke_int(l), P) * (c % P) % P
                    full = m if full is None else (full + m) % P
            else:
                raise ValueError(spec)
            self._ops[key] = modp.restrict(B, piv, full, P)
        return self._ops[key]

    def piece(self, conditions, P, expected_dim=None):
        """RREF basis (in coordinates of the ambient subspace) of a piece mod P."""
        key = (conditions, P)
        if key not in self._pieces:
            if not conditions:
                basis = np.eye(self.dim, dtype=np.int64)
                piv = list(range(self.dim))
            else:
                parent, ppiv = self.piece(conditions[:-1], P)
                spec, g = conditions[-1]
                a = modp.restrict(parent, ppiv, self.op(spec, P), P)
                coeffs = [int(c) for c in g.coeffs]
                k = modp.left_kernel(modp.poly_of_matrix(coeffs, a, P), P)
                basis, piv = modp.rref(modp.matmul(k, parent, P), P) if len(k) else (k, [])
            self._pieces[key] = (basis, piv)
        basis, piv = self._pieces[key]
        if expected_dim is not None and len(piv) != expected_dim:
            raise BadPrime(P)
        return basis, piv

    def op_on_piece(self, spec, conditions, P, expected_dim=None):
        basis, piv = self.piece(conditions, P, expected_dim)
        return modp.restrict(basis, piv, self.op(spec, P), P)


def _int_mod(int_and_den, P):
    mat, den = int_and_den
    if den % P == 0:
        raise BadPrime(P)
    return (mat % P) * pow(den, -1, P) % P


def _prime_stream(skip=0):
    k = 8
    i = skip
    while True:
        primes = modular_primes(k)
        while i < len(primes):
            yield primes[i]
            i += 1
        k *= 2


def exact_charpoly(ctx, spec, conditions, dim):
    """Characteristic polynomial over Q of an operator on a piece, by CRT."""
    r = eigenvalue_bound(spec)
    bound = 2 * max(comb(dim, k) * r**k for k in range(dim + 1)) + 1
    residues = [0] * (dim + 1)
    modulus = 1
    confirmed = False
    result = None
    for P in _prime_stream():
        try:
            cp = modp.charpoly(ctx.op_on_piece(spec, conditions, P, dim), P)
        except BadPrime:
            continue
        if modulus > bound:
            # one extra prime must agree with the reconstruction
            if all((result[k] - cp[k]) % P == 0 for k in range(dim + 1)):
                confirmed = True
                break
            raise DecompositionError(f"charpoly of {spec} failed confirmation modulo {P}")
        for k in range(dim + 1):
            residues[k], _ = crt_pair(residues[k], modulus, cp[k], P)
        modulus *= P
        if modulus > bound:
            result = [symmetric_mod(v, modulus) for v in residues]
    assert confirmed
    return Poly(result)


@dataclass
class Orbit:
    """One Galois orbit of newforms inside a space of modular symbols."""

    level: int
    dimension: int
    conditions: tuple
    primitive: tuple
    field_poly: Poly
    epsilon: int = 0
    eigen: dict = field(default_factory=dict)  # l -> Poly in Q[x]/(field_poly)

    @property
    def key(self):
        return (self.level, self.conditions)


def default_operators(N, budget=100):
    ops = [("W",)]
    ops += [("T", l) for l in primes_up_to(budget) if N % l]
    combos = [("C", ((2, 1), (3, c))) for c in (1, 2, -1)]
    combos += [("C", ((2, 1), (3, 1), (5, c))) for c in (1, 2)]
    return ops + [c for c in combos if all(N % l for l, _ in c[1])]


def eigen_decompose(ctx, budget=100):
    """Split the ambient subspace of `ctx` into Hecke-irreducible pieces.

    The Fricke involution is used first, so every orbit has a well-defined
    sign.  Returns a list of Orbit objects without eigenvalue data.
    """
    N = ctx.space.N
    ops = default_operators(N, budget)
    pending = [((), ctx.dim, 0)]
    done = []
    while pending:
        conditions, dim, start = pending.pop()
        if dim == 0:
            continue
        for i in range(start, len(ops)):
            spec = ops[i]
            cp = exact_charpoly(ctx, spec, conditions, dim)
            _, facs = factor_over_rationals(cp)
            if spec[0] == "W":
                # always record the sign, even when it is constant on the piece
                for g, e in facs:
                    pending.append((conditions + ((spec, g),), g.degree * e, i + 1))
                break
            if len(facs) == 1 and facs[0][1] > 1:
                continue
            for g, e in facs:
                sub = conditions + ((spec, g),) if len(facs) > 1 else conditions
                if e == 1:
                    done.append((sub, g.degree, spec, g))
                else:
                    pending.append((sub, g.degree * e, i + 1))
            break
        else:
            raise DecompositionError(
                f"level {N}: operators up to budget {budget} do not separate a piece of dimension {dim}"
            )
    orbits = []
    for conditions, dim, spec, cp in done:
        eps = 0
        for s, g in conditions:
            if s == ("W",):
                eps = -int(g[0])  # g = x - eps
        orbits.append(Orbit(N, dim, conditions, spec, cp, eps))
    orbits.sort(key=lambda o: (o.dimension, str(o.field_poly.coeffs), o.epsilon))
    return orbits


def _krylov_coeffs(ctx, orbit, specs, P):
    """Coefficients (mod P) of g_l with T_l = g_l(A) on the orbit, for each spec."""
    d = orbit.dimension
    basis, piv = ctx.piece(orbit.conditions, P, d)
    A = modp.restrict(basis, piv, ctx.op(orbit.primitive, P), P)
    w = np.zeros((1, d), dtype=np.int64)
    w[0, 0] = 1
    rows = [w[0]]
    for _ in range(d - 1):
        rows.append(modp.matmul(rows[-1][None, :], A, P)[0])
    K = np.array(rows, dtype=np.int64)
    try:
        Kinv = modp.inverse(K, P)
    except ZeroDivisionError:
        raise BadPrime(P)
    out = {}
    for spec in specs:
        T = modp.restrict(basis, piv, ctx.op(spec, P), P)
        img = modp.matmul(w, T, P)
        out[spec] = [int(v) for v in modp.matmul(img, Kinv, P)[0]]
    return out


def hecke_eigen_data(ctx, orbit, ells, extra_confirm=2):
    """Exact g_l in Q[x]/(f) for each prime l in `ells` (T_l = g_l(A) on the orbit)."""
    specs = [("T", l) for l in ells]
    d = orbit.dimension
    residues = {s: [0] * d for s in specs}
    modulus = 1
    previous = None
    confirmations = 0
    for P in _prime_stream():
        try:
            data = _krylov_coeffs(ctx, orbit, specs, P)
        except BadPrime:
            continue
        if previous is not None:
            ok = all(
                all((_frac_mod(previous[s][k], P) - data[s][k]) % P == 0 for k in range(d)) for s in specs
            )
            if ok:
                confirmations += 1
                if confirmations >= extra_confirm:
                    break
                continue
            confirmations = 0
        for s in specs:
            for k in range(d):
                residues[s][k], _ = crt_pair(residues[s][k], modulus, data[s][k], P)
        modulus *= P
        recon = {}
        for s in specs:
            vals = [rational_reconstruction(v, modulus) for v in residues[s]]
            if any(v is None for v in vals):
                recon = None
                break
            recon[s] = vals
        previous = recon
    return {s[1]: Poly(previous[s]) for s in specs}


def _frac_mod(x, P):
    x = Fraction(x)
    if x.denominator % P == 0:
        return -1
    return x.numerator * pow(x.denominator, -1, P) % P
