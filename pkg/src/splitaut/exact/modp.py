"""Dense linear algebra over F_p with numpy int64 arrays.

All primes used here are below 2**26, so a product of two reduced entries fits
in 52 bits and a matrix product of width < 2048 cannot overflow int64.
"""

import numpy as np

MAX_WIDTH = 2048


def asmod(a, p):
    return np.asarray(a, dtype=np.int64) % p


def matmul(a, b, p):
    if a.shape[1] >= MAX_WIDTH:
        raise ValueError("matrix too wide for int64 accumulation")
    return (a @ b) % p


def rref(a, p):
    """Reduced row echelon form of `a` over F_p.

    Returns (rows, pivots) where `rows` holds only the nonzero rows.
    """
    m = np.array(a, dtype=np.int64) % p
    nrows, ncols = m.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if len(nz) == 0:
            continue
        k = r + nz[0]
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if len(rows):
            m[rows] = (m[rows] - np.outer(col[rows], m[r]) % p) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(a, p):
    return len(rref(a, p)[1])


def right_kernel(a, p):
    """Basis (as rows, echelonised) of {x : a x = 0}."""
    a = np.asarray(a, dtype=np.int64)
    ncols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    r, pivots = rref(a, p)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for j, pc in enumerate(pivots):
            basis[i, pc] = (-r[j, f]) % p
    if len(free) == 0:
        return basis
    return rref(basis, p)[0]


def left_kernel(a, p):
    """Basis (as rows, echelonised) of {v : v a = 0}."""
    return right_kernel(np.asarray(a, dtype=np.int64).T, p)


def restrict(basis, pivots, t, p):
    """Matrix of the right action of `t` on the row space of an RREF `basis`.

    The row space must be stable under `t`; coordinates of a vector in the
    row space are read off at the pivot columns.
    """
    img = matmul(basis, t, p)
    res = img[:, pivots]
    if not np.array_equal(matmul(res, basis, p), img):
        raise ValueError("subspace is not invariant")
    return res


def coordinates(basis, pivots, v, p):
    """Coordinates of row vector(s) `v` in an RREF basis (no membership check)."""
    v = np.asarray(v, dtype=np.int64)
    return v[..., pivots] % p


def intersect(a, b, p):
    """Intersection of two row spaces."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64)
    stacked = np.vstack([a, b])
    k = left_kernel(stacked, p)
    if k.shape[0] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64)
    vecs = matmul(k[:, : a.shape[0]], a, p)
    return rref(vecs, p)[0]


def identity(n):
    return np.eye(n, dtype=np.int64)


def poly_of_matrix(coeffs, a, p):
    """Evaluate the polynomial with ascending integer `coeffs` at the matrix `a`."""
    n = a.shape[0]
    res = np.zeros((n, n), dtype=np.int64)
    for c in reversed(coeffs):
        res = matmul(res, a, p)
        res[np.diag_indices(n)] = (res[np.diag_indices(n)] + int(c) % p) % p
    return res


def inverse(a, p):
    n = a.shape[0]
    r, pivots = rref(np.hstack([np.asarray(a, dtype=np.int64) % p, identity(n)]), p)
    if pivots[:n] != list(range(n)) or len(pivots) < n or pivots[n - 1] != n - 1:
        raise ZeroDivisionError("singular matrix mod p")
    return r[:, n:]


def charpoly(a, p):
    """Characteristic polynomial det(xI - a) over F_p via Hessenberg reduction.

    Returns ascending coefficients as Python ints, monic of degree n.
    """
    h = np.array(a, dtype=np.int64) % p
    n = h.shape[0]
    for m in range(1, n - 1):
        nz = np.nonzero(h[m + 1 :, m - 1])[0]
        if h[m, m - 1] == 0:
            if len(nz) == 0:
                continue
            i = m + 1 + nz[0]
            h[[i, m]] = h[[m, i]]
            h[:, [i, m]] = h[:, [m, i]]
        inv = pow(int(h[m, m - 1]), -1, p)
        for i in range(m + 1, n):
            u = int(h[i, m - 1]) * inv % p
            if u:
                h[i] = (h[i] - u * h[m]) % p
                h[:, m] = (h[:, m] + u * h[:, i]) % p
    # recurrence on the leading principal minors of the Hessenberg form
    polys = [[1]]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        cur = [0] + prev
        cur = [(c - int(h[m - 1, m - 1]) * (prev[k] if k < len(prev) else 0)) % p for k, c in enumerate(cur)]
        t = 1
        for i in range(1, m):
            t = t * int(h[m - i, m - i - 1]) % p
            coef = t * int(h[m - i - 1, m - 1]) % p
            if coef:
                for k, c in enumerate(polys[m - i - 1]):
                    cur[k] = (cur[k] - coef * c) % p
        polys.append(cur)
    return polys[n]
