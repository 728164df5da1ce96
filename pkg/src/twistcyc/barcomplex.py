"""Bar complex C_p(G) (x) V of a finite group with coefficients in a representation.

Group elements are the integers ``0 .. order-1``; ``table[g][h]`` is ``gh``.
A p-chain is a sparse map from p-tuples of elements to vectors of V.

The boundary moves the first element onto the coefficient.  That only squares
to zero for a right action, so ``g.v`` in the boundary means
``rho(g)^{-1} v``; the fixed vectors (and hence decomposable cycles) are the
same as for ``rho``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Mapping, Sequence

from .exactfield import QQ, ExactMatrix, Field, sparse_rank


class GroupError(ValueError):
    pass


class SizeLimitExceeded(ValueError):
    pass


DEFAULT_MAX_DEGREE = 4
DEFAULT_MAX_CELLS = 60000


class FiniteGroup:
    def __init__(self, table: Sequence[Sequence[int]], name: str = ""):
        n = len(table)
        tab = [list(map(int, row)) for row in table]
        if n == 0 or any(len(row) != n for row in tab):
            raise GroupError("multiplication table must be square and nonempty")
        if any(not 0 <= x < n for row in tab for x in row):
            raise GroupError("table entries must be element indices")
        ids = [e for e in range(n) if all(tab[e][g] == g and tab[g][e] == g for g in range(n))]
        if not ids:
            raise GroupError("no identity element")
        e = ids[0]
        for g in range(n):
            if sorted(tab[g]) != list(range(n)):
                raise GroupError(f"row {g} is not a permutation: element {g} has no inverse")
        for a, b, c in product(range(n), repeat=3):
            if tab[tab[a][b]][c] != tab[a][tab[b][c]]:
                raise GroupError(f"table is not associative at ({a},{b},{c})")
        self.table = tab
        self.order = n
        self.identity = e
        self.name = name
        self._inv = [tab[g].index(e) for g in range(n)]

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inv(self, g: int) -> int:
        return self._inv[g]

    def elements(self) -> range:
        return range(self.order)

    def to_json(self) -> dict:
        return {"order": self.order, "table": self.table}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteGroup":
        g = cls(data["table"], data.get("name", ""))
        if "order" in data and int(data["order"]) != g.order:
            raise GroupError(f"declared order {data['order']} does not match the table")
        return g

    def __repr__(self):
        return f"FiniteGroup({self.name or self.order})"


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], f"Z/{n}")


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], "1")


def symmetric(k: int) -> tuple[FiniteGroup, list[tuple[int, ...]]]:
    """S_k with elements listed in lexicographic order; (gh)(i) = g(h(i))."""
    perms = list(permutations(range(k)))
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(g[h[i]] for i in range(k))] for h in perms] for g in perms]
    return FiniteGroup(table, f"S{k}"), perms


class GroupRep:
    def __init__(self, group: FiniteGroup, matrices: Sequence, field: Field | None = None):
        if len(matrices) != group.order:
            raise GroupError(f"need one matrix per element ({group.order}), got {len(matrices)}")
        mats = [m if isinstance(m, ExactMatrix) else ExactMatrix.from_rows(m, field) for m in matrices]
        r = mats[0].rows
        f = QQ if field is None else field
        for m in mats:
            if m.shape != (r, r):
                raise GroupError("representation matrices must be square of one size")
            f = f.join(m.field)
        self.group, self.rank, self.field, self.matrices = group, r, f, mats
        if not mats[group.identity].is_identity():
            raise GroupError("the identity must act trivially")
        for g in group.elements():
            for h in group.elements():
                if mats[g] @ mats[h] != mats[group.mul(g, h)]:
                    raise GroupError(f"rho({g}) rho({h}) != rho({g}*{h})")

    def act(self, g: int, v: Sequence) -> tuple:
        return tuple(self.matrices[g].apply(v))

    def right_act(self, g: int, v: Sequence) -> tuple:
        """v.g = rho(g^{-1}) v, the action used by the bar boundary."""
        return tuple(self.matrices[self.group.inv(g)].apply(v))

    @classmethod
    def trivial(cls, group: FiniteGroup, rank: int = 1) -> "GroupRep":
        return cls(group, [ExactMatrix.identity(rank)] * group.order)

    @classmethod
    def regular(cls, group: FiniteGroup) -> "GroupRep":
        n = group.order
        mats = [[[Fraction(int(group.mul(g, j) == i)) for j in range(n)] for i in range(n)] for g in range(n)]
        return cls(group, mats)

    def restrict(self, f: "Homomorphism") -> "GroupRep":
        if f.target is not self.group:
            raise GroupError("restriction needs a homomorphism into this group")
        return GroupRep(f.source, [self.matrices[f(g)] for g in f.source.elements()], self.field)

    def to_json(self) -> dict:
        return {"rank": self.rank, "field": self.field.to_json(), "matrices": [m.to_json() for m in self.matrices]}

    @classmethod
    def from_json(cls, group: FiniteGroup, data: dict) -> "GroupRep":
        field = Field.from_json(data.get("field", "Q"))
        rep = cls(group, [ExactMatrix.from_json(m, field) for m in data["matrices"]], field)
        if "rank" in data and int(data["rank"]) != rep.rank:
            raise GroupError("declared rank does not match the matrices")
        return rep


def sign_rep(group: FiniteGroup, sign: Sequence[int]) -> GroupRep:
    return GroupRep(group, [[[Fraction(s)]] for s in sign])


def cyclic_rotation_rep(n: int) -> GroupRep:
    """Z/3 acting on Q^2 through the companion matrix of x^2 + x + 1."""
    if n != 3:
        raise GroupError("only the 2-dimensional rational rep of Z/3 is provided")
    G = cyclic(3)
    r = ExactMatrix.from_rows([[0, -1], [1, -1]])
    return GroupRep(G, [ExactMatrix.identity(2), r, r @ r])


def s3_standard_rep() -> tuple[FiniteGroup, GroupRep]:
    """S3 on {x in Q^3 : sum x = 0} with basis (e0 - e1, e1 - e2)."""
    G, perms = symmetric(3)
    basis = [(1, -1, 0), (0, 1, -1)]
    mats = []
    for p in perms:
        cols = []
        for b in basis:
            img = [0, 0, 0]
            for i, x in enumerate(b):
                img[p[i]] += x
            # coordinates in the basis: img = a (e0-e1) + c (e1-e2)
            a = img[0]
            c = -img[2]
            cols.append((a, c))
        mats.append([[cols[j][i] for j in range(2)] for i in range(2)])
    return G, GroupRep(G, mats)


def s3_sign_rep() -> tuple[FiniteGroup, GroupRep]:
    G, perms = symmetric(3)
    from .schur import _perm_sign
    return G, sign_rep(G, [_perm_sign(p) for p in perms])


class Homomorphism:
    def __init__(self, source: FiniteGroup, target: FiniteGroup, images: Sequence[int]):
        images = [int(x) for x in images]
        if len(images) != source.order:
            raise GroupError("need one image per source element")
        for g in source.elements():
            for h in source.elements():
                if images[source.mul(g, h)] != target.mul(images[g], images[h]):
                    raise GroupError(f"not a homomorphism: f({g}*{h}) != f({g}) f({h})")
        self.source, self.target, self.images = source, target, images

    def __call__(self, g: int) -> int:
        return self.images[g]


@dataclass(frozen=True)
class Rejected:
    """A failed decomposable-cycle request; ``residual`` is g.v - v."""

    element: int
    residual: tuple

    def __bool__(self):
        return False


class BarChain:
    def __init__(self, rep: GroupRep, degree: int, terms: Mapping | None = None):
        self.rep, self.degree = rep, degree
        n, r = rep.group.order, rep.rank
        clean = {}
        for k, v in (terms or {}).items():
            k = tuple(int(g) for g in k)
            if len(k) != degree or any(not 0 <= g < n for g in k):
                raise GroupError(f"{k} is not a {degree}-tuple of group elements")
            v = tuple(v)
            if len(v) != r:
                raise ValueError(f"vector has length {len(v)}, rep rank is {r}")
            if any(x != 0 for x in v):
                clean[k] = v
        self.terms = clean

    def _add_into(self, out: dict, key: tuple, vec: tuple, sgn: int = 1):
        w = out.get(key)
        if sgn != 1:
            vec = tuple(sgn * x for x in vec)
        out[key] = vec if w is None else tuple(a + b for a, b in zip(w, vec))

    def __add__(self, other: "BarChain") -> "BarChain":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        out = dict(self.terms)
        for k, v in other.terms.items():
            self._add_into(out, k, v)
        return BarChain(self.rep, self.degree, out)

    def __neg__(self):
        return BarChain(self.rep, self.degree, {k: tuple(-x for x in v) for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return BarChain(self.rep, self.degree, {k: tuple(c * x for x in v) for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, BarChain) and self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def vector(self) -> tuple:
        """A degree-0 chain as a vector of V."""
        if self.degree != 0:
            raise ValueError("only degree-0 chains are vectors")
        return self.terms.get((), (Fraction(0),) * self.rep.rank)

    def to_json(self) -> dict:
        from .exactfield import format_scalar
        return {"degree": self.degree,
                "terms": [{"elements": list(k), "vector": [format_scalar(x) for x in v]}
                          for k, v in sorted(self.terms.items())]}

    def __repr__(self):
        return f"BarChain(deg={self.degree}, {len(self.terms)} terms)"


def bar_boundary(c: BarChain) -> BarChain:
    """(g1..gp) x v -> (g2..gp) x g1.v + sum (-1)^i (..g_i g_{i+1}..) x v + (-1)^p (g1..g_{p-1}) x v."""
    p = c.degree
    if p < 1:
        raise ValueError("the bar boundary starts in degree 1")
    G, rep = c.rep.group, c.rep
    out: dict = {}
    for k, v in c.terms.items():
        c._add_into(out, k[1:], rep.right_act(k[0], v))
        for i in range(1, p):
            merged = k[:i - 1] + (G.mul(k[i - 1], k[i]),) + k[i + 1:]
            c._add_into(out, merged, v, (-1) ** i)
        c._add_into(out, k[:-1], v, (-1) ** p)
    return BarChain(rep, p - 1, out)


def _index(key: tuple, n: int) -> int:
    i = 0
    for g in key:
        i = i * n + g
    return i


def boundary_rows(rep: GroupRep, p: int) -> list[dict]:
    """Sparse rows of the degree-p bar boundary in flat coordinates."""
    G, r = rep.group, rep.rank
    n = G.order
    rows: list[dict] = [dict() for _ in range(n ** (p - 1) * r)]

    def put(key, col, vec):
        base = _index(key, n) * r
        for a, x in enumerate(vec):
            if x != 0:
                row = rows[base + a]
                row[col] = row.get(col, 0) + x

    for k in product(range(n), repeat=p):
        cbase = _index(k, n) * r
        for j in range(r):
            e = tuple(Fraction(int(a == j)) for a in range(r))
            col = cbase + j
            put(k[1:], col, rep.right_act(k[0], e))
            for i in range(1, p):
                put(k[:i - 1] + (G.mul(k[i - 1], k[i]),) + k[i + 1:], col, tuple((-1) ** i * x for x in e))
            put(k[:-1], col, tuple((-1) ** p * x for x in e))
    return [{c: v for c, v in row.items() if v != 0} for row in rows]


def group_homology(group: FiniteGroup, rep: GroupRep, p: int, max_degree: int = DEFAULT_MAX_DEGREE,
                   max_cells: int = DEFAULT_MAX_CELLS) -> int:
    if rep.group is not group:
        raise GroupError("the representation belongs to a different group")
    if p < 0:
        raise ValueError("degree must be nonnegative")
    if p > max_degree:
        raise SizeLimitExceeded(f"degree {p} exceeds the configured maximum {max_degree}")
    n, r = group.order, rep.rank
    if n ** (p + 1) * r > max_cells:
        raise SizeLimitExceeded(
            f"the degree-{p + 1} bar complex has {n ** (p + 1) * r} cells (limit {max_cells})")
    dim_p = n ** p * r
    rank_out = sparse_rank(boundary_rows(rep, p), rep.field) if p >= 1 else 0
    rank_in = sparse_rank(boundary_rows(rep, p + 1), rep.field)
    return dim_p - rank_out - rank_in


def coinvariant_dim(rep: GroupRep) -> int:
    """rank - rank of the stacked rho(g) - I."""
    rows = []
    ident = ExactMatrix.identity(rep.rank)
    for m in rep.matrices:
        d = m - ident
        rows.extend(d.transpose().sparse_rows())
    return rep.rank - sparse_rank(rows, rep.field)


def decomposable_cycle(g: int, v: Sequence, rep: GroupRep):
    """The 1-cycle g (x) v when g fixes v, else a :class:`Rejected` value."""
    v = tuple(v)
    gv = rep.right_act(g, v)
    if gv == v:
        return BarChain(rep, 1, {(g,): v})
    return Rejected(g, tuple(a - b for a, b in zip(gv, v)))


def pushforward(f: Homomorphism, c: BarChain, target_rep: GroupRep) -> BarChain:
    """Replace every group element by its image; the coefficient module is restricted along f."""
    if target_rep.group is not f.target:
        raise GroupError("target representation must live on the target group")
    src = c.rep
    for g in f.source.elements():
        if src.matrices[g] != target_rep.matrices[f(g)]:
            raise GroupError("source representation is not the restriction of the target one")
    out: dict = {}
    for k, v in c.terms.items():
        key = tuple(f(g) for g in k)
        w = out.get(key)
        out[key] = v if w is None else tuple(a + b for a, b in zip(w, v))
    return BarChain(target_rep, c.degree, out)


def cyclic_inclusion(n: int, k: int) -> Homomorphism:
    """Z/n -> Z/(nk), 1 -> k."""
    return Homomorphism(cyclic(n), cyclic(n * k), [(g * k) % (n * k) for g in range(n)])
