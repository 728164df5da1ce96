"""Pure-Python sparse elimination kernels.

Rows are ``dict[int, value]`` maps from column index to a nonzero entry.
Both kernels return ``{pivot_column: row}``; with ``full=True`` the rows form
the reduced row echelon form (every pivot column is zero outside its own row).
The compiled module ``_elim`` implements :func:`echelon_int` with the same
contract.
"""
from math import gcd


def _normalize_int(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        for k in row:
            row[k] //= g
    return row


def _combine_int(r, prow, c):
    """Return ``fa*r - fp*prow`` with the column ``c`` entry cancelled."""
    a = r[c]
    p = prow[c]
    g = gcd(a, p)
    fa = p // g
    fp = a // g
    if fa != 1:
        new = {k: v * fa for k, v in r.items()}
    else:
        new = dict(r)
    for k, v in prow.items():
        nv = new.get(k, 0) - fp * v
        if nv:
            new[k] = nv
        else:
            new.pop(k, None)
    return new


def echelon_int(rows, full=False):
    """Fraction-free elimination of integer rows.

    Every stored row is divided by the gcd of its entries, with a positive
    leading entry, which keeps coefficient growth in check.
    """
    pivots = {}
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
        _back_substitute(pivots, _combine_int, _normalize_int)
    return pivots


def _back_substitute(pivots, combine, normalize):
    done = {}
    for c in sorted(pivots, reverse=True):
        r = pivots[c]
        hits = [k for k in r if k != c and k in done]
        for k in hits:
            if k in r:
                r = combine(r, done[k], k)
        done[c] = normalize(r)
    pivots.update(done)


def _normalize_field(row):
    lead = row[min(row)]
    if lead != 1:
        inv = 1 / lead
        for k in row:
            row[k] = row[k] * inv
    return row


def _combine_field(r, prow, c):
    # prow is normalized (pivot entry 1)
    a = r[c]
    new = dict(r)
    for k, v in prow.items():
        nv = new.get(k, 0) - a * v
        if nv != 0:
            new[k] = nv
        else:
            new.pop(k, None)
    new.pop(c, None)
    return new


def echelon_field(rows, full=False):
    """Elimination over any exact field (entries support ``+ - * /``)."""
    pivots = {}
    for row in rows:
        r = {k: v for k, v in row.items() if v != 0}
        while r:
            c = min(r)
            prow = pivots.get(c)
            if prow is None:
                pivots[c] = _normalize_field(r)
                break
            r = _combine_field(r, prow, c)
    if full:
        _back_substitute(pivots, _combine_field, lambda row: row)
    return pivots
