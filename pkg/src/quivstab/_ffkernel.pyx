# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled prime-field kernels; same API as ``_ffkernel_py``."""

from libc.stdlib cimport malloc, free


cdef long long _inv(long long a, long long p):
    cdef long long r = 1, e = p - 2, b = a % p
    while e > 0:
        if e & 1:
            r = (r * b) % p
        b = (b * b) % p
        e >>= 1
    return r


cdef long long* _load(rows, Py_ssize_t nrows, Py_ssize_t ncols, long long p) except NULL:
    cdef long long* m = <long long*> malloc((nrows * ncols + 1) * sizeof(long long))
    cdef Py_ssize_t i, j
    cdef long long x
    if m == NULL:
        raise MemoryError()
    for i in range(nrows):
        row = rows[i]
        for j in range(ncols):
            x = row[j] % p
            if x < 0:
                x += p
            m[i * ncols + j] = x
    return m


def rref_mod(rows, Py_ssize_t ncols, long long p):
    cdef Py_ssize_t nrows = len(rows)
    cdef long long* m = _load(rows, nrows, ncols, p)
    cdef Py_ssize_t r = 0, c, k, j
    cdef long long inv, e, t
    pivots = []
    try:
        for c in range(ncols):
            if r == nrows:
                break
            k = r
            while k < nrows and m[k * ncols + c] == 0:
                k += 1
            if k == nrows:
                continue
            if k != r:
                for j in range(ncols):
                    t = m[r * ncols + j]
                    m[r * ncols + j] = m[k * ncols + j]
                    m[k * ncols + j] = t
            inv = _inv(m[r * ncols + c], p)
            for j in range(ncols):
                m[r * ncols + j] = (m[r * ncols + j] * inv) % p
            for k in range(nrows):
                if k == r:
                    continue
                e = m[k * ncols + c]
                if e == 0:
                    continue
                for j in range(ncols):
                    m[k * ncols + j] = (m[k * ncols + j] - e * m[r * ncols + j]) % p
                    if m[k * ncols + j] < 0:
                        m[k * ncols + j] += p
            pivots.append(c)
            r += 1
        out = tuple(tuple(m[i * ncols + j] for j in range(ncols)) for i in range(r))
    finally:
        free(m)
    return out, tuple(pivots)


cdef void _reduce(long long* v, long long* basis, Py_ssize_t nb,
                  Py_ssize_t n, long long p, long long* piv):
    cdef Py_ssize_t i, j
    cdef long long e
    for i in range(nb):
        e = v[piv[i]]
        if e == 0:
            continue
        for j in range(n):
            v[j] = (v[j] - e * basis[i * n + j]) % p
            if v[j] < 0:
                v[j] += p


def reduce_mod(vec, basis, pivots, long long p):
    cdef Py_ssize_t n = len(vec), nb = len(basis), i
    cdef long long* v = _load((vec,), 1, n, p)
    cdef long long* b = NULL
    cdef long long* piv = <long long*> malloc((nb + 1) * sizeof(long long))
    try:
        b = _load(basis, nb, n, p)
        for i in range(nb):
            piv[i] = pivots[i]
        _reduce(v, b, nb, n, p, piv)
        out = tuple(v[i] for i in range(n))
    finally:
        free(v)
        free(piv)
        if b != NULL:
            free(b)
    return out


def maps_into_mod(f, src, dst, dst_pivots, long long p):
    cdef Py_ssize_t q = len(f), nsrc = len(src), nb = len(dst)
    cdef Py_ssize_t n = len(src[0]) if nsrc else 0
    cdef Py_ssize_t s, i, j
    cdef long long acc
    cdef bint ok = True
    cdef long long* fm
    cdef long long* sm
    cdef long long* dm
    cdef long long* v
    cdef long long* piv
    if nsrc == 0 or q == 0:
        return True
    fm = _load(f, q, n, p)
    sm = _load(src, nsrc, n, p)
    dm = _load(dst, nb, q, p)
    v = <long long*> malloc((q + 1) * sizeof(long long))
    piv = <long long*> malloc((nb + 1) * sizeof(long long))
    try:
        for i in range(nb):
            piv[i] = dst_pivots[i]
        for s in range(nsrc):
            for i in range(q):
                acc = 0
                for j in range(n):
                    acc = (acc + fm[i * n + j] * sm[s * n + j]) % p
                v[i] = acc
            _reduce(v, dm, nb, q, p, piv)
            for i in range(q):
                if v[i] != 0:
                    ok = False
                    break
            if not ok:
                break
    finally:
        free(fm)
        free(sm)
        free(dm)
        free(v)
        free(piv)
    return ok
