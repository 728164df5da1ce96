# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled fraction-free sparse elimination (same contract as ``_elim_py``)."""
from math import gcd


cdef dict _normalize_int(dict row):
    cdef object g = 0
    cdef object v
    cdef object k
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    cdef object lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        for k in list(row):
            row[k] = row[k] // g
    return row


cdef dict _combine_int(dict r, dict prow, object c):
    cdef object a = r[c]
    cdef object p = prow[c]
    cdef object g = gcd(a, p)
    cdef object fa = p // g
    cdef object fp = a // g
    cdef dict new
    cdef object k, v, nv
    if fa != 1:
        new = {}
        for k, v in r.items():
            new[k] = v * fa
    else:
        new = dict(r)
    for k, v in prow.items():
        nv = new.get(k, 0) - fp * v
        if nv:
            new[k] = nv
        else:
            new.pop(k, None)
    return new


def echelon_int(rows, bint full=False):
    cdef dict pivots = {}
    cdef dict r
    cdef dict prow
    cdef object c
    for row in rows:
        r = {k: v for k, v in row.items() if v}
        while r:
            c = min(r)
            prow = pivots.get(c)
            if prow is None:
                pivots[c] = _normalize_int(r)
                break
            r = _combine_int(r, prow, c)
    if full:
        _back_substitute(pivots)
    return pivots


cdef void _back_substitute(dict pivots):
    cdef dict done = {}
    cdef dict r
    cdef object c, k
    for c in sorted(pivots, reverse=True):
        r = pivots[c]
        hits = [k for k in r if k != c and k in done]
        for k in hits:
            if k in r:
                r = _combine_int(r, done[k], k)
        done[c] = _normalize_int(r)
    pivots.update(done)
