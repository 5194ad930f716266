"""Weight-2 modular symbols for Gamma_0(N).

The space is presented by Manin symbols (c:d) in P^1(Z/NZ), i.e. g{0, oo}
for g in SL_2(Z) with bottom row (c, d), modulo the 2-term relations
x + xS = 0, the 3-term relations x + x tau + x tau^2 = 0 and, for sign
+1, the star involution x = x eta.  Operators act on row vectors from the
right: the i-th row of a matrix is the image of the i-th free generator.
"""

import logging
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd

import numpy as np

from .exact import modp
from .exact.arith import factorint, is_prime
from .exact.matrix import RationalMatrix

log = logging.getLogger(__name__)

MAX_LEVEL = 2000


class LevelTooLarge(ValueError):
    pass


# ---- P^1(Z/NZ) ----


class P1List:
    """Canonical representatives of P^1(Z/NZ) with an O(1) index table."""

    def __init__(self, N):
        self.N = N
        if N == 1:
            self.symbols = [(0, 0)]
            self.table = np.zeros(1, dtype=np.int32)
            return
        n = N
        cs, ds = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        valid = np.gcd(np.gcd(cs, ds), n) == 1
        units = np.array([u for u in range(1, n) if gcd(u, n) == 1], dtype=np.int64)
        table = np.full(n * n, -1, dtype=np.int32)
        validflat = valid.ravel()
        symbols = []
        for flat in np.nonzero(validflat)[0]:
            if table[flat] >= 0:
                continue
            c, d = divmod(int(flat), n)
            k = len(symbols)
            symbols.append((c, d))
            table[(units * c % n) * n + units * d % n] = k
        self.symbols = symbols
        self.table = table

    def __len__(self):
        return len(self.symbols)

    def index(self, c, d):
        if self.N == 1:
            return 0
        return int(self.table[(c % self.N) * self.N + d % self.N])

    def indices(self, c, d):
        """Vectorised lookup; -1 marks pairs that are not in P^1."""
        if self.N == 1:
            return np.zeros(np.shape(c), dtype=np.int64)
        return self.table[(np.asarray(c) % self.N) * self.N + np.asarray(d) % self.N].astype(np.int64)


# ---- Heilbronn matrices and continued fractions ----


@lru_cache(maxsize=None)
def heilbronn_merel(n):
    """Merel's matrices [[a, b], [c, d]] with ad - bc = n, a > b >= 0, d > c >= 0."""
    out = []
    for a in range(1, n + 1):
        for b in range(0, a):
            c = 0
            while c * (a - b) < n:
                num = n + b * c
                if num % a == 0:
                    d = num // a
                    if d > c:
                        out.append((a, b, c, d))
                c += 1
    return np.array(out, dtype=np.int64).reshape(-1, 4)


def lift_to_sl2(c, d, N):
    """A matrix [[a, b], [c', d']] in SL_2(Z) with (c', d') = (c, d) mod N."""
    c %= N
    d %= N
    if N == 1:
        return (1, 0, 0, 1)
    if c == 0:
        c = N
    while gcd(c, d) != 1:
        d += N
    g, x, y = _xgcd(c, d)
    # a*d - b*c = 1 with a = y, b = -x  (x*c + y*d = 1)
    return (y, -x, c, d)


def _xgcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def manin_expansion(num, den):
    """{0, num/den} as a list of (sign-free) Manin symbols (c, d) over Z.

    den == 0 means the cusp oo.
    """
    if den == 0:
        return [(0, 1)]
    if num == 0:
        return []
    g = gcd(num, den)
    num //= g
    den //= g
    if den < 0:
        num, den = -num, -den
    # convergents p_j / q_j
    out = [(0, 1)]  # j = -1 term: {0, oo}
    p_prev, q_prev = 1, 0
    p_cur, q_cur = num // den, 1
    a, b = num, den
    j = 0
    while True:
        sign = 1 if j % 2 == 1 else -1  # det = (-1)^(j-1)
        out.append((sign * q_cur, q_prev))
        a, b = b, a - (a // b) * b
        if b == 0:
            break
        t = a // b
        p_prev, p_cur = p_cur, t * p_cur + p_prev
        q_prev, q_cur = q_cur, t * q_cur + q_prev
        j += 1
    return out


# ---- the space ----


def _cusp_key(a, c, N, sign):
    """Gamma_0(N)-class of the cusp a/c (lowest terms, c = 0 for oo)."""
    if c == 0:
        return (N, 0)
    if c < 0:
        a, c = -a, -c
    d = gcd(c, N)
    g = gcd(d, N // d)
    u = a * (c // d) % g if g > 1 else 0
    if sign != 0 and g > 1:
        u = min(u, (-u) % g)
    return (d, u)


def _reduce_frac(a, c):
    if c == 0:
        return (1, 0)
    g = gcd(a, c)
    a, c = a // g, c // g
    if c < 0:
        a, c = -a, -c
    return a, c


class ModularSymbolSpace:
    """Modular symbols of weight 2 for Gamma_0(N), sign 0 or +1.

    Frozen after construction; Hecke and Fricke matrices are computed lazily
    and cached (they are deterministic functions of the level).
    """

    def __init__(self, N, sign=1, max_level=MAX_LEVEL):
        if N < 1:
            raise ValueError("level must be positive")
        if N > max_level:
            raise LevelTooLarge(f"level {N} exceeds the configured cap {max_level}")
        if sign not in (0, 1):
            raise ValueError("only sign 0 and +1 are supported")
        self.N = N
        self.sign = sign
        self.p1 = P1List(N)
        self._build_relations()
        self._hecke_cache = {}

    # -- presentation --

    def _build_relations(self):
        N, p1 = self.N, self.p1
        nsym = len(p1)
        syms = p1.symbols
        S = [p1.index(d, -c) for c, d in syms]
        eta = [p1.index(-c, d) for c, d in syms]
        # 2-term classes: each symbol = sign * representative, or zero
        rep = [-1] * nsym
        coef = [0] * nsym
        classes = []
        for i in range(nsym):
            if rep[i] >= 0:
                continue
            k = len(classes)
            members = {i: 1}
            stack = [i]
            zero = False
            while stack:
                x = stack.pop()
                nbrs = [(S[x], -members[x])]
                if self.sign:
                    nbrs.append((eta[x], self.sign * members[x]))
                for y, s in nbrs:
                    if y in members:
                        if members[y] != s:
                            zero = True
                    else:
                        members[y] = s
                        stack.append(y)
            for x, s in members.items():
                rep[x] = k
                coef[x] = 0 if zero else s
            classes.append((i, zero))
        # 3-term relations
        rels = set()
        for i, (c, d) in enumerate(syms):
            j = p1.index(d, -c - d)
            k = p1.index(-c - d, c)
            row = {}
            for x in (i, j, k):
                if coef[x]:
                    row[rep[x]] = row.get(rep[x], 0) + coef[x]
            row = tuple(sorted((a, b) for a, b in row.items() if b))
            if row:
                rels.add(row)
        pivot_rows = _sparse_eliminate(sorted(rels), len(classes))
        free = [k for k in range(len(classes)) if k not in pivot_rows and not classes[k][1]]
        gen_index = {k: n for n, k in enumerate(free)}
        # express each class in the free generators
        class_vec = [None] * len(classes)
        for k in range(len(classes)):
            if classes[k][1]:
                class_vec[k] = {}
            elif k in gen_index:
                class_vec[k] = {gen_index[k]: Fraction(1)}
            else:
                class_vec[k] = {gen_index[j]: -v for j, v in pivot_rows[k].items() if j != k}
        self.ngens = len(free)
        self.gens = [syms[classes[k][0]] for k in free]
        self._gen_symbol = [classes[k][0] for k in free]
        den = 1
        for vec in class_vec:
            for v in vec.values():
                den = den * v.denominator // gcd(den, v.denominator)
        R = np.zeros((nsym, self.ngens), dtype=np.int64)
        for i in range(nsym):
            if coef[i]:
                for g, v in class_vec[rep[i]].items():
                    R[i, g] = int(coef[i] * v * den)
        self._reduce_int = R
        self._reduce_den = den

    @property
    def dimension(self):
        return self.ngens

    def symbol_vector(self, c, d):
        """Vector (Fractions) of the Manin symbol (c:d) in the free generators."""
        i = self.p1.index(c, d)
        if i < 0:
            return [Fraction(0)] * self.ngens
        return [Fraction(int(v), self._reduce_den) for v in self._reduce_int[i]]

    def _combine(self, counts):
        """Exact rational matrix from a (rows x nsym) integer count matrix."""
        m = counts @ self._reduce_int
        den = self._reduce_den
        return RationalMatrix(m.shape[0], m.shape[1], [Fraction(int(v), den) for v in m.ravel()])

    def _expansion_counts(self, pairs_per_row):
        """Count matrix for rows given as lists of (sign, num, den) boundary pairs."""
        counts = np.zeros((len(pairs_per_row), len(self.p1)), dtype=np.int64)
        for r, terms in enumerate(pairs_per_row):
            for s, num, den in terms:
                for c, d in manin_expansion(num, den):
                    i = self.p1.index(c, d)
                    if i >= 0:
                        counts[r, i] += s
        return counts

    def _symbol_pairs(self, alpha, beta):
        """{alpha, beta} = {0, beta} - {0, alpha}; cusps as (num, den)."""
        return [(1, beta[0], beta[1]), (-1, alpha[0], alpha[1])]

    # -- operators --

    def hecke_int(self, n):
        """T_n on the whole space as (integer matrix, denominator), via Merel's Heilbronn matrices."""
        if n < 1:
            raise ValueError("Hecke index must be positive")
        if n not in self._hecke_cache:
            if n == 1:
                counts = np.zeros((self.ngens, len(self.p1)), dtype=np.int64)
                counts[np.arange(self.ngens), self._gen_symbol] = 1
            else:
                H = heilbronn_merel(n)
                counts = np.zeros((self.ngens, len(self.p1)), dtype=np.int64)
                for g, (c, d) in enumerate(self.gens):
                    cc = c * H[:, 0] + d * H[:, 2]
                    dd = c * H[:, 1] + d * H[:, 3]
                    idx = self.p1.indices(cc, dd)
                    np.add.at(counts[g], idx[idx >= 0], 1)
            self._hecke_cache[n] = (counts @ self._reduce_int, self._reduce_den)
        return self._hecke_cache[n]

    def hecke_matrix(self, n):
        return _as_rational(self.hecke_int(n))

    @cached_property
    def _fricke(self):
        N = self.N
        rows = []
        for c, d in self.gens:
            a, b, c1, d1 = lift_to_sl2(c, d, N)
            # g{0, oo} = {b/d, a/c}
            alpha = _reduce_frac(-d1, N * b)
            beta = _reduce_frac(-c1, N * a)
            rows.append(self._symbol_pairs(alpha, beta))
        return (self._expansion_counts(rows) @ self._reduce_int, self._reduce_den)

    def fricke_int(self):
        return self._fricke

    @property
    def fricke_matrix(self):
        """The Fricke involution z -> -1/(Nz)."""
        return _as_rational(self._fricke)

    def atkin_lehner_matrix(self):
        return self.fricke_matrix

    def degeneracy_matrix(self, M, t):
        """alpha_t: symbols of level N -> level M, {a, b} -> {t a, t b} (t M | N)."""
        if self.N % (t * M):
            raise ValueError("need t*M | N")
        target = get_space(M, self.sign) if M != self.N else self
        rows = []
        for c, d in self.gens:
            a, b, c1, d1 = lift_to_sl2(c, d, self.N)
            alpha = _reduce_frac(t * b, d1)
            beta = _reduce_frac(t * a, c1)
            rows.append(target._symbol_pairs(alpha, beta))
        return target._combine(target._expansion_counts(rows)), target

    @cached_property
    def boundary_matrix(self):
        """Boundary map to the free space on cusp classes (rows: generators)."""
        keys = {}
        entries = []
        for c, d in self.gens:
            a, b, c1, d1 = lift_to_sl2(c, d, self.N)
            row = {}
            for s, (x, y) in ((1, _reduce_frac(a, c1)), (-1, _reduce_frac(b, d1))):
                k = _cusp_key(x, y, self.N, self.sign)
                keys.setdefault(k, len(keys))
                row[keys[k]] = row.get(keys[k], 0) + s
            entries.append(row)
        self.cusp_keys = sorted(keys, key=keys.get)
        return RationalMatrix(
            self.ngens, len(keys), [row.get(j, 0) for row in entries for j in range(len(keys))]
        )

    # -- subspaces (exact, as RREF row bases) --

    @cached_property
    def cuspidal_basis(self):
        return left_kernel_exact(self.boundary_matrix)

    @cached_property
    def new_basis(self):
        """Intersection of the cuspidal subspace with the kernels of all degeneracy maps."""
        blocks = [self.boundary_matrix]
        for q, _ in factorint(self.N) if self.N > 1 else []:
            M = self.N // q
            for t in (1, q):
                mat, _ = self.degeneracy_matrix(M, t)
                if mat.cols:
                    blocks.append(mat)
        return left_kernel_exact(_hstack(blocks))

    def cuspidal_dimension(self):
        return len(self.cuspidal_basis[0])

    def new_dimension(self):
        return len(self.new_basis[0])


@lru_cache(maxsize=64)
def get_space(N, sign=1):
    """Shared, cached space for a level (spaces are immutable once built)."""
    return ModularSymbolSpace(N, sign)


def _as_rational(int_and_den):
    m, den = int_and_den
    return RationalMatrix(m.shape[0], m.shape[1], [Fraction(int(v), den) for v in m.ravel()])


def _hstack(mats):
    rows = mats[0].rows
    cols = sum(m.cols for m in mats)
    entries = []
    for i in range(rows):
        for m in mats:
            entries.extend(m.row(i))
    return RationalMatrix(rows, cols, entries)


def _sparse_eliminate(rows, ncols):
    """Fully reduce sparse integer relations; returns {pivot: row dict}.

    Each returned row has coefficient 1 at its pivot and no other pivot columns.
    """
    pivots = {}
    for r in rows:
        row = {j: Fraction(v) for j, v in r}
        changed = True
        while changed:
            changed = False
            for j in list(row):
                if j in pivots and row.get(j):
                    c = row[j]
                    for k, v in pivots[j].items():
                        nv = row.get(k, 0) - c * v
                        if nv:
                            row[k] = nv
                        else:
                            row.pop(k, None)
                    changed = True
        if not row:
            continue
        # prefer a unit pivot on the largest column to keep rows short
        piv = max(row, key=lambda j: (abs(row[j]) == 1, j))
        c = row[piv]
        row = {k: v / c for k, v in row.items()}
        for other in pivots.values():
            if piv in other:
                f = other[piv]
                for k, v in row.items():
                    nv = other.get(k, 0) - f * v
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
        pivots[piv] = row
    return pivots


def rref_exact(m):
    """Exact reduced row echelon form of a RationalMatrix; (rows, pivots)."""
    rows = [list(m.row(i)) for i in range(m.rows)]
    pivots = []
    r = 0
    for c in range(m.cols):
        k = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def left_kernel_exact(m):
    """RREF basis (rows, pivots) of {v : v m = 0}."""
    n = m.rows
    if m.cols == 0:
        rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        return rows, list(range(n))
    r, piv = rref_exact(m.transpose())
    pivset = set(piv)
    free = [c for c in range(n) if c not in pivset]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for j, pc in enumerate(piv):
            v[pc] = -r[j][f]
        basis.append(v)
    if not basis:
        return [], []
    return rref_exact(RationalMatrix.from_rows(basis))


def subspace_mod(basis, p):
    """Reduce an exact RREF basis (rows of Fractions) modulo p."""
    rows, pivots = basis
    if not rows:
        return np.zeros((0, 0), dtype=np.int64), pivots
    return RationalMatrix.from_rows(rows).mod(p), pivots


def genus_x0(N):
    """Genus of X_0(N) from the index, elliptic points and cusps."""
    fac = factorint(N) if N > 1 else []
    mu = N
    for p, _ in fac:
        mu = mu * (p + 1) // p
    if N % 4 == 0:
        e2 = 0
    else:
        e2 = 1
        for p, _ in fac:
            e2 *= 0 if p == 2 else (1 + (1 if p % 4 == 1 else -1))
    if N % 9 == 0:
        e3 = 0
    else:
        e3 = 1
        for p, _ in fac:
            e3 *= 1 if p == 3 else (1 + (1 if p % 3 == 1 else -1))
    cusps = sum(_phi(gcd(d, N // d)) for d in range(1, N + 1) if N % d == 0)
    return (12 + mu - 3 * e2 - 4 * e3 - 6 * cusps) // 12


def _phi(n):
    r = n
    for p, _ in factorint(n) if n > 1 else []:
        r = r // p * (p - 1)
    return r
