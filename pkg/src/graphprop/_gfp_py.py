"""Pure-Python GF(p) row reduction; same contract as the compiled ``_gfp``."""


def rref_mod_p(M, p, pivot_cols):
    """Gauss-Jordan reduce the int64 array ``M`` modulo ``p`` in place.

    Columns ``0 .. pivot_cols-1`` are scanned left to right; the pivot for a
    column is the lowest-index row not yet used.  Rows are never swapped.
    Returns the list of (column, row) pivots.
    """
    rows = M.tolist()
    m = len(rows)
    used = [False] * m
    pivots = []
    for c in range(pivot_cols):
        r = -1
        for i in range(m):
            if not used[i] and rows[i][c]:
                r = i
                break
        if r < 0:
            continue
        used[r] = True
        prow = rows[r]
        inv = pow(prow[c], -1, p)
        if inv != 1:
            prow = [x * inv % p for x in prow]
            rows[r] = prow
        nz = [j for j, x in enumerate(prow) if x]
        for i in range(m):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if f:
                for j in nz:
                    row[j] = (row[j] - f * prow[j]) % p
        pivots.append((c, r))
    if m:
        M[:, :] = rows
    return pivots
