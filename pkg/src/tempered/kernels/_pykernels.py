"""Reference kernels in pure Python.

The compiled twin in ``_ckernels.pyx`` must stay output-identical to these;
``tests/test_kernels.py`` runs both against each other.
"""
from math import gcd
from operator import add


def int_valuation(n, p):
    """Exponent of p in the nonzero integer n."""
    if n < 0:
        n = -n
    if p == 2:
        return (n & -n).bit_length() - 1
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def convolve(a, b, lo, hi):
    """Cauchy product of integer coefficient maps, kept inside [lo, hi].

    ``a`` and ``b`` map index tuples to ints; zero results are dropped.
    """
    if not a or not b:
        return {}
    if len(lo) == 1:
        l0, h0 = lo[0], hi[0]
        bl = sorted((j[0], v) for j, v in b.items())
        acc = {}
        for (i,), va in a.items():
            for j, vb in bl:
                k = i + j
                if k < l0:
                    continue
                if k > h0:
                    break
                acc[k] = acc.get(k, 0) + va * vb
        return {(k,): v for k, v in acc.items() if v}
    acc = {}
    bounds = list(zip(lo, hi))
    for ja, va in a.items():
        for jb, vb in b.items():
            k = tuple(map(add, ja, jb))
            for x, (l, h) in zip(k, bounds):
                if x < l or x > h:
                    break
            else:
                acc[k] = acc.get(k, 0) + va * vb
    return {k: v for k, v in acc.items() if v}


def sparse_rank(rows):
    """Rank over Q of an integer matrix given as sparse rows {col: int}.

    Fraction-free elimination: a row is reduced against the stored pivot row
    by cross multiplication, then divided by its content.
    """
    pivots = {}
    rank = 0
    for row in rows:
        r = {c: v for c, v in row.items() if v}
        while r:
            c = min(r)
            prow = pivots.get(c)
            if prow is None:
                pivots[c] = r
                rank += 1
                break
            pc, rc = prow[c], r[c]
            g = gcd(pc, rc)
            mp, mr = pc // g, rc // g
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


def solve_mod_p(rows, ncols, p):
    """Solve rows ``(coeffs: {col: int}, rhs)`` over F_p, columns < ncols.

    Pivot rows are kept fully reduced, so the result is read off the reduced
    echelon form with free columns set to 0. Returns ``{col: value}`` for the
    nonzero entries, or None when the system is inconsistent.
    """
    pivots = {}          # col -> [coeffs, rhs] with coeffs[col] == 1
    for coeffs, rhs in rows:
        row = {c: v % p for c, v in coeffs.items() if v % p}
        rhs %= p
        for col in [c for c in row if c in pivots]:
            f = row[col]
            prow, prhs = pivots[col]
            for c, v in prow.items():
                nv = (row.get(c, 0) - f * v) % p
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
            rhs = (rhs - f * prhs) % p
        if not row:
            if rhs:
                return None
            continue
        col = min(row)
        inv = pow(row[col], -1, p)
        row = {c: v * inv % p for c, v in row.items()}
        rhs = rhs * inv % p
        for other in pivots.values():
            f = other[0].get(col)
            if f:
                for c, v in row.items():
                    nv = (other[0].get(c, 0) - f * v) % p
                    if nv:
                        other[0][c] = nv
                    else:
                        other[0].pop(c, None)
                other[1] = (other[1] - f * rhs) % p
        pivots[col] = [row, rhs]
    return {col: rhs for col, (_, rhs) in pivots.items() if rhs}
