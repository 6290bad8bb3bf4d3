"""Pure-Python prime-field kernels (fallback for the compiled ``_ffkernel``).

Matrices are tuples of row tuples of ints in ``0..p-1``.
"""


def rref_mod(rows, ncols, p):
    """Reduced row echelon form over F_p; returns (nonzero rows, pivot columns)."""
    m = [[x % p for x in r] for r in rows]
    pivots = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        k = r
        while k < nrows and m[k][c] == 0:
            k += 1
        if k == nrows:
            continue
        m[r], m[k] = m[k], m[r]
        inv = pow(m[r][c], p - 2, p)
        row = [(x * inv) % p for x in m[r]]
        m[r] = row
        for k in range(nrows):
            if k != r:
                e = m[k][c]
                if e:
                    other = m[k]
                    m[k] = [(x - e * y) % p for x, y in zip(other, row)]
        pivots.append(c)
        r += 1
    return tuple(tuple(x) for x in m[:r]), tuple(pivots)


def reduce_mod(vec, basis, pivots, p):
    """Residual of vec modulo the row space of an RREF basis."""
    v = [x % p for x in vec]
    for row, c in zip(basis, pivots):
        e = v[c]
        if e:
            v = [(x - e * y) % p for x, y in zip(v, row)]
    return tuple(v)


def maps_into_mod(f, src, dst, dst_pivots, p):
    """True iff f maps every vector of src into the span of the RREF basis dst."""
    for v in src:
        img = [sum(a * b for a, b in zip(frow, v)) % p for frow in f]
        if any(reduce_mod(img, dst, dst_pivots, p)):
            return False
    return True
