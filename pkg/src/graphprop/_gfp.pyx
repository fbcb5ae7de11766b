# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(p) row reduction; mirrors ``_gfp_py.rref_mod_p``."""

cdef long long _inv_mod(long long a, long long p):
    cdef long long t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rref_mod_p(long long[:, ::1] M, long long p, int pivot_cols):
    """Gauss-Jordan reduce ``M`` modulo ``p < 2**31`` in place; returns (column, row) pivots."""
    cdef Py_ssize_t m = M.shape[0], ncols = M.shape[1]
    cdef Py_ssize_t c, i, j, r
    cdef long long inv, f, x
    cdef unsigned char[::1] used = bytearray(m)
    pivots = []
    for c in range(pivot_cols):
        r = -1
        for i in range(m):
            if used[i] == 0 and M[i, c] != 0:
                r = i
                break
        if r < 0:
            continue
        used[r] = 1
        inv = _inv_mod(M[r, c], p)
        if inv != 1:
            for j in range(ncols):
                M[r, j] = M[r, j] * inv % p
        for i in range(m):
            if i == r:
                continue
            f = M[i, c]
            if f != 0:
                for j in range(ncols):
                    if M[r, j] != 0:
                        x = (M[i, j] - f * M[r, j]) % p
                        if x < 0:
                            x += p
                        M[i, j] = x
        pivots.append((c, r))
    return pivots
