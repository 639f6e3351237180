# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels; same contracts as ``_pykernels``."""
from libc.stdlib cimport malloc, free
from math import gcd


def int_valuation(n, long p):
    cdef long v = 0
    if n < 0:
        n = -n
    if p == 2:
        return (n & -n).bit_length() - 1
    if n < 9223372036854775807:
        return _small_val(n, p)
    while n % p == 0:
        n //= p
        v += 1
    return v


cdef long _small_val(long long n, long p):
    cdef long v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def convolve(dict a, dict b, tuple lo, tuple hi):
    if not a or not b:
        return {}
    cdef Py_ssize_t m = len(lo)
    cdef Py_ssize_t na = len(a), nb = len(b)
    cdef Py_ssize_t i, j, l
    cdef long *ia = <long *> malloc(na * m * sizeof(long))
    cdef long *ib = <long *> malloc(nb * m * sizeof(long))
    cdef long *clo = <long *> malloc(m * sizeof(long))
    cdef long *chi = <long *> malloc(m * sizeof(long))
    cdef long *stride = <long *> malloc(m * sizeof(long))
    cdef long x, off, vol = 1
    cdef bint ok
    cdef list va = list(a.values())
    cdef list vb = list(b.values())
    cdef dict acc = {}
    cdef list dense = None
    try:
        for l in range(m - 1, -1, -1):
            clo[l] = lo[l]
            chi[l] = hi[l]
            stride[l] = vol
            vol *= (chi[l] - clo[l] + 1)
        i = 0
        for key in a:
            for l in range(m):
                ia[i * m + l] = key[l]
            i += 1
        j = 0
        for key in b:
            for l in range(m):
                ib[j * m + l] = key[l]
            j += 1
        if vol <= 1 << 22:
            dense = [0] * vol
        for i in range(na):
            ai = va[i]
            for j in range(nb):
                ok = True
                off = 0
                for l in range(m):
                    x = ia[i * m + l] + ib[j * m + l]
                    if x < clo[l] or x > chi[l]:
                        ok = False
                        break
                    off += (x - clo[l]) * stride[l]
                if not ok:
                    continue
                if dense is not None:
                    dense[off] = dense[off] + ai * vb[j]
                else:
                    acc[off] = acc.get(off, 0) + ai * vb[j]
        out = {}
        if dense is not None:
            items = ((o, dense[o]) for o in range(vol) if dense[o])
        else:
            items = ((o, v) for o, v in acc.items() if v)
        for o, v in items:
            key = [0] * m
            off = o
            for l in range(m):
                key[l] = off // stride[l] + clo[l]
                off = off % stride[l]
            out[tuple(key)] = v
        return out
    finally:
        free(ia)
        free(ib)
        free(clo)
        free(chi)
        free(stride)


def sparse_rank(rows):
    cdef dict pivots = {}
    cdef long rank = 0
    cdef dict r, prow, new
    for row in rows:
        r = {c: v for c, v in row.items() if v}
        while r:
            c = min(r)
            prow = pivots.get(c)
            if prow is None:
                pivots[c] = r
                rank += 1
                break
            pc = prow[c]
            rc = r[c]
            g = gcd(pc, rc)
            mp = pc // g
            mr = rc // g
            new = {k: mp * v for k, v in r.items()}
            for k, v in prow.items():
                nv = new.get(k, 0) - mr * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            if new:
                g = 0
                for v in new.values():
                    g = gcd(g, v)
                    if g == 1:
                        break
                if g > 1:
                    new = {k: v // g for k, v in new.items()}
            r = new
    return rank


def solve_mod_p(rows, long ncols, long long p):
    # dense elimination; the reduced echelon form is unique, so the answer
    # matches the sparse reference exactly
    if p >= 2147483648:
        from . import _pykernels
        return _pykernels.solve_mod_p(rows, ncols, p)
    cdef long nrows = len(rows)
    cdef long width = ncols + 1
    cdef long long *A = <long long *> malloc(max(nrows * width, 1) * sizeof(long long))
    cdef long i, j, k, r = 0, piv
    cdef long long f, inv, tmp
    if A == NULL:
        raise MemoryError()
    try:
        for i in range(nrows * width):
            A[i] = 0
        for i, (coeffs, rhs) in enumerate(rows):
            for c, v in coeffs.items():
                A[i * width + c] = (A[i * width + c] + v % p) % p
            A[i * width + ncols] = rhs % p
        for j in range(ncols):
            piv = -1
            for i in range(r, nrows):
                if A[i * width + j]:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for k in range(width):
                    tmp = A[piv * width + k]
                    A[piv * width + k] = A[r * width + k]
                    A[r * width + k] = tmp
            inv = pow(A[r * width + j], -1, p)
            for k in range(j, width):
                A[r * width + k] = A[r * width + k] * inv % p
            for i in range(nrows):
                if i != r:
                    f = A[i * width + j]
                    if f:
                        for k in range(j, width):
                            A[i * width + k] = (A[i * width + k] - f * A[r * width + k]) % p
                            if A[i * width + k] < 0:
                                A[i * width + k] += p
            r += 1
            if r == nrows:
                break
        for i in range(r, nrows):
            if A[i * width + ncols]:
                return None
        out = {}
        for i in range(r):
            if A[i * width + ncols]:
                for j in range(ncols):
                    if A[i * width + j]:
                        out[j] = A[i * width + ncols]
                        break
        return out
    finally:
        free(A)
