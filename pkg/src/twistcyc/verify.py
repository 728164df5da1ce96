"""Independent re-verification of invariants and search results.

Nothing here calls the operators in :mod:`twistcyc.schur` or the search
helpers in :mod:`twistcyc.geometry`.  The invariants are rebuilt from
scratch: the harmonic part is obtained from the normal equations of the
orthogonal complement (the span of all insertions), the symmetrizers are
explicit sums over every element of the row and column groups, and
positivity is read off leading principal minors.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Sequence

from .exactfield import ExactMatrix, sign, sparse_solve
from .exactfield.linalg import rows_field


def _gram_dense(gram: ExactMatrix) -> list[list]:
    return gram.tolist()


def _apply_gram(t: dict, g: list[list], N: int) -> dict:
    """Apply the Gram matrix in every slot of a sparse tensor."""
    cur = dict(t)
    if not cur:
        return cur
    d = len(next(iter(cur)))
    for s in range(d):
        nxt: dict = {}
        for k, v in cur.items():
            b = k[s]
            for a in range(N):
                gab = g[a][b]
                if gab != 0:
                    nk = k[:s] + (a,) + k[s + 1:]
                    nxt[nk] = nxt.get(nk, 0) + gab * v
        cur = {k: v for k, v in nxt.items() if v != 0}
    return cur


def form_pair(s: dict, t: dict, gram: ExactMatrix) -> object:
    """sum_{k,l} s_k t_l prod_i g(k_i, l_i)."""
    g = _gram_dense(gram)
    gs = _apply_gram(s, g, gram.rows)
    total = Fraction(0)
    for k, v in gs.items():
        w = t.get(k)
        if w is not None:
            total = total + v * w
    return total


def _insertion(alpha: tuple, i: int, j: int, ginv: list[list], N: int) -> dict:
    """sum_{a,b} g^{ab} placed in 0-based slots i < j around the multi-index alpha."""
    out = {}
    for a in range(N):
        for b in range(N):
            c = ginv[a][b]
            if c == 0:
                continue
            k = list(alpha)
            k.insert(i, a)
            k.insert(j, b)
            out[tuple(k)] = out.get(tuple(k), 0) + c
    return out


_normal_cache: dict = {}


def _normal_system(gram: ExactMatrix, d: int):
    key = (gram, d)
    if key in _normal_cache:
        return _normal_cache[key]
    N = gram.rows
    g = _gram_dense(gram)
    ginv = gram.inverse().tolist()
    span = []
    for i, j in combinations(range(d), 2):
        for alpha in product(range(N), repeat=d - 2):
            span.append(_insertion(alpha, i, j, ginv, N))
    gspan = [_apply_gram(v, g, N) for v in span]
    by_key: dict = {}
    for b, v in enumerate(span):
        for k, x in v.items():
            by_key.setdefault(k, []).append((b, x))
    rows = []
    for gv in gspan:
        row: dict = {}
        for k, x in gv.items():
            for b, y in by_key.get(k, ()):
                row[b] = row.get(b, 0) + x * y
        rows.append({b: v for b, v in row.items() if v != 0})
    data = (span, gspan, rows)
    _normal_cache[key] = data
    return data


def harmonic_part(t: dict, gram: ExactMatrix) -> dict:
    """t minus its orthogonal projection onto the span of all insertions."""
    if not t:
        return {}
    d = len(next(iter(t)))
    if d < 2:
        return dict(t)
    span, gspan, rows = _normal_system(gram, d)
    rhs = []
    for gv in gspan:
        s = Fraction(0)
        for k, x in gv.items():
            y = t.get(k)
            if y is not None:
                s = s + x * y
        rhs.append(s)
    field = rows_field(rows)
    for x in rhs:
        field = field.join(rows_field([{0: x}]))
    c = sparse_solve(rows, len(span), rhs, field)
    if c is None:
        raise ArithmeticError("normal equations are inconsistent")
    out = dict(t)
    for cb, v in zip(c, span):
        if cb == 0:
            continue
        for k, x in v.items():
            out[k] = out.get(k, 0) - cb * x
    return {k: v for k, v in out.items() if v != 0}


def _row_blocks(mu: Sequence[int]) -> list[list[int]]:
    blocks, start = [], 0
    for b in mu:
        if b:
            blocks.append(list(range(start, start + b)))
            start += b
    return blocks


def _col_blocks(mu: Sequence[int]) -> list[list[int]]:
    rows = _row_blocks(mu)
    width = len(rows[0]) if rows else 0
    return [[r[c] for r in rows if len(r) > c] for c in range(width)]


def _stabilizer(d: int, blocks: list[list[int]]) -> list[tuple[int, ...]]:
    """All permutations of d slots mapping every block onto itself."""
    where = {}
    for bi, blk in enumerate(blocks):
        for s in blk:
            where[s] = bi
    out = []
    for p in permutations(range(d)):
        if all(where.get(s, -1 - s) == where.get(p[s], -1 - p[s]) for s in range(d)):
            out.append(p)
    return out


def _sgn(p: Sequence[int]) -> int:
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return -1 if inv % 2 else 1


def _permute(t: dict, p: tuple) -> dict:
    out = {}
    for k, v in t.items():
        nk = [None] * len(k)
        for s, a in enumerate(k):
            nk[p[s]] = a
        out[tuple(nk)] = v
    return out


def _group_average(t: dict, group: list, signed: bool) -> dict:
    out: dict = {}
    scale = Fraction(1, len(group))
    for p in group:
        c = scale * (_sgn(p) if signed else 1)
        for k, v in _permute(t, p).items():
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v != 0}


def seed(vectors: Sequence[Sequence], mu: Sequence[int]) -> dict:
    parts = [b for b in mu if b]
    t = {(): Fraction(1)}
    for v, b in zip(vectors, parts):
        for _ in range(b):
            t = {k + (a,): x * y for k, x in t.items() for a, y in enumerate(v) if y != 0}
    return t


def oracle_tau(vectors: Sequence[Sequence], mu: Sequence[int], gram: ExactMatrix) -> dict:
    mu = [b for b in mu if b]
    d = sum(mu)
    t = harmonic_part(seed(vectors, mu), gram)
    t = _group_average(t, _stabilizer(d, _row_blocks(mu)), signed=False)
    return _group_average(t, _stabilizer(d, _col_blocks(mu)), signed=True)


def oracle_pairing(x: Sequence[Sequence], y: Sequence[Sequence], mu: Sequence[int], gram: ExactMatrix):
    if not any(mu):
        return Fraction(1)
    return form_pair(oracle_tau(x, mu, gram), oracle_tau(y, mu, gram), gram)


def leading_minors_positive(gram: ExactMatrix, embedding: int = 1) -> bool:
    n = gram.rows
    for k in range(1, n + 1):
        sub = ExactMatrix.from_rows([[gram[i, j] for j in range(k)] for i in range(k)], gram.field)
        if sign(sub.det(), embedding) <= 0:
            return False
    return True


def span_dimension_is(vectors: Sequence[Sequence], n: int) -> bool:
    """dim span = n, read off the Euclidean Gram determinant of the coordinates."""
    if len(vectors) < n:
        return False
    if len(vectors) != n:
        raise ValueError("expected exactly n spanning vectors")
    E = ExactMatrix.from_rows([[sum((a * b for a, b in zip(u, v)), Fraction(0)) for v in vectors] for u in vectors])
    return E.det() != 0


def _form_gram(vectors, gram: ExactMatrix) -> ExactMatrix:
    return ExactMatrix.from_rows([[sum((gram[i, j] * u[i] * v[j] for i in range(gram.rows)
                                        for j in range(gram.cols) if gram[i, j] != 0), Fraction(0))
                                   for v in vectors] for u in vectors], gram.field)


def verify_complementary(x, y, mu, gram: ExactMatrix, n: int) -> dict:
    k = len(x)
    pairing = oracle_pairing(x, y[:k], mu, gram)
    z = list(x) + list(y)
    dim_ok = span_dimension_is(z, n)
    pos = dim_ok and leading_minors_positive(_form_gram(z, gram))
    return {"pairing": pairing, "pairing_nonzero": pairing != 0, "dimension": dim_ok, "positive": pos,
            "ok": pairing != 0 and dim_ok and pos}


def verify_cup(q1: int, q2: int, mu1, mu2, w, gram: ExactMatrix, n: int) -> dict:
    N = gram.rows
    e = [[Fraction(int(i == j)) for i in range(N)] for j in range(n)]
    p1 = sum(1 for b in mu1 if b)
    p2 = sum(1 for b in mu2 if b)
    a = oracle_pairing(e[:p1], w[:p1], mu1, gram)
    b = oracle_pairing(e[q1:q1 + p2], w[q1:q1 + p2], mu2, gram)
    u = e[:q1 + q2] + list(w)
    dim_ok = span_dimension_is(u, n)
    pos = dim_ok and leading_minors_positive(_form_gram(u, gram))
    return {"pairings": [a, b], "pairings_nonzero": a != 0 and b != 0, "dimension": dim_ok,
            "positive": pos, "ok": a != 0 and b != 0 and dim_ok and pos}
