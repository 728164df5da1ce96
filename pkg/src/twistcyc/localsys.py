"""Twisted (co)homology of finite simplicial complexes.

Simplices are sorted vertex tuples and the sorted order is the ordering used
by the face maps.  A local system assigns to every edge ``(a, b)`` with
``a < b`` an invertible matrix carrying the fiber at ``a`` to the fiber at
``b``.  Chains carry fiber vectors at the first vertex of each simplex; so do
cochain values.

Flat coordinates: the chain group ``C_p`` is identified with a vector of length
``rank * #p-simplices``; simplex number ``s`` occupies slots
``s*rank .. s*rank + rank - 1``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .exactfield import QQ, ExactMatrix, Field, RowReducer, sparse_kernel, sparse_rank, sparse_solve
from .exactfield.scalars import field_of


class ComplexError(ValueError):
    pass


class SystemError_(ValueError):
    """Invalid local system (non-invertible or incompatible transports)."""


class NoFundamentalClass(ComplexError):
    pass


class NotACycle(ValueError):
    pass


Simplex = tuple


def _faces(s: Simplex) -> list[Simplex]:
    return [s[:i] + s[i + 1:] for i in range(len(s))]


# complexes -------------------------------------------------------------------

class SimplicialComplex:
    """Finite simplicial complex closed under faces, optionally oriented."""

    def __init__(self, simplices: Iterable[Sequence[int]], orientation: Mapping | None = None,
                 n_vertices: int | None = None, name: str = ""):
        found: set = set()
        for s in simplices:
            t = tuple(sorted(int(v) for v in s))
            if len(set(t)) != len(t):
                raise ComplexError(f"simplex {tuple(s)} repeats a vertex")
            if not t:
                continue
            for k in range(1, len(t) + 1):
                found.update(combinations(t, k))
        verts = sorted({s[0] for s in found if len(s) == 1})
        if n_vertices is not None:
            if verts and verts[-1] >= n_vertices:
                raise ComplexError(f"vertex {verts[-1]} outside 0..{n_vertices - 1}")
            for v in range(n_vertices):
                found.add((v,))
        self.name = name
        self.dim = max((len(s) for s in found), default=0) - 1
        self.simplices: list[list[Simplex]] = [[] for _ in range(self.dim + 1)]
        for s in sorted(found):
            self.simplices[len(s) - 1].append(s)
        self.index = [{s: i for i, s in enumerate(level)} for level in self.simplices]
        self.orientation: dict | None = None
        if orientation is not None:
            self.set_orientation(orientation)
        self._trees: dict = {}

    # basic queries
    @property
    def vertices(self) -> list[int]:
        return [s[0] for s in self.simplices[0]] if self.simplices else []

    @property
    def edges(self) -> list[Simplex]:
        return self.simplices[1] if self.dim >= 1 else []

    def count(self, p: int) -> int:
        return len(self.simplices[p]) if 0 <= p <= self.dim else 0

    def level(self, p: int) -> list[Simplex]:
        return self.simplices[p] if 0 <= p <= self.dim else []

    def __contains__(self, s) -> bool:
        t = tuple(s)
        return 0 < len(t) <= self.dim + 1 and t in self.index[len(t) - 1]

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * self.count(p) for p in range(self.dim + 1))

    def star(self, v: int, p: int | None = None) -> list[Simplex]:
        levels = range(self.dim + 1) if p is None else [p]
        return [s for q in levels for s in self.level(q) if v in s]

    def neighbors(self) -> dict[int, list[int]]:
        adj: dict = {v: [] for v in self.vertices}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def is_connected(self) -> bool:
        vs = self.vertices
        if not vs:
            return True
        return len(self.spanning_tree(vs[0])) == len(vs)

    def spanning_tree(self, root: int) -> dict[int, int | None]:
        """BFS parent map of the 1-skeleton component containing ``root``."""
        if root in self._trees:
            return self._trees[root]
        if (root,) not in self.index[0]:
            raise ComplexError(f"vertex {root} not in complex")
        adj = self.neighbors()
        parent = {root: None}
        queue = deque([root])
        while queue:
            a = queue.popleft()
            for b in sorted(adj[a]):
                if b not in parent:
                    parent[b] = a
                    queue.append(b)
        self._trees[root] = parent
        return parent

    def path_to(self, v: int, root: int) -> list[int]:
        """Vertex path from ``v`` to ``root`` along the spanning tree."""
        parent = self.spanning_tree(root)
        if v not in parent:
            raise ComplexError(f"vertex {v} is not connected to {root}")
        path = [v]
        while path[-1] != root:
            path.append(parent[path[-1]])
        return path

    # orientation
    def set_orientation(self, orientation: Mapping):
        top = self.level(self.dim)
        orient = {}
        for s, e in orientation.items():
            t = tuple(sorted(s))
            if t not in self.index[self.dim]:
                raise ComplexError(f"oriented simplex {tuple(s)} is not a top simplex")
            if e not in (1, -1):
                raise ComplexError(f"orientation of {t} must be +1 or -1")
            orient[t] = e
        missing = [s for s in top if s not in orient]
        if missing:
            raise ComplexError(f"no orientation given for top simplex {missing[0]}")
        self.orientation = orient
        self._check_fundamental()

    def _check_fundamental(self):
        n = self.dim
        if n == 0:
            return
        acc: dict = {}
        count: dict = {}
        for s, e in self.orientation.items():
            for i, f in enumerate(_faces(s)):
                acc[f] = acc.get(f, 0) + (-1) ** i * e
                count[f] = count.get(f, 0) + 1
        for f in self.level(n - 1):
            if count.get(f, 0) != 2:
                raise NoFundamentalClass(
                    f"face {f} lies in {count.get(f, 0)} top simplices; a closed pseudomanifold needs 2")
            if acc[f] != 0:
                raise NoFundamentalClass(f"orientations do not cancel on face {f}")
        for p in range(n):
            for s in self.level(p):
                if not any(set(s) <= set(t) for t in self.star(s[0], n)):
                    raise NoFundamentalClass(f"simplex {s} is not a face of a top simplex")

    @property
    def has_fundamental_class(self) -> bool:
        return self.orientation is not None

    def oriented(self) -> "SimplicialComplex":
        """Copy with an orientation found by propagation across shared faces."""
        X = SimplicialComplex([s for lvl in self.simplices for s in lvl], name=self.name)
        X.set_orientation(orient_top_simplices(self))
        return X

    def fundamental_chain(self) -> "Chain":
        if self.orientation is None:
            raise NoFundamentalClass("complex carries no orientation")
        L = LocalSystem.trivial(self, 1)
        return Chain(L, self.dim, {s: (Fraction(e),) for s, e in self.orientation.items()})

    def subcomplex(self, simplices: Iterable[Sequence[int]]) -> "SimplicialComplex":
        ss = [tuple(sorted(s)) for s in simplices]
        for s in ss:
            if s not in self:
                raise ComplexError(f"simplex {s} is not in the ambient complex")
        return SimplicialComplex(ss)

    def to_json(self) -> dict:
        out = {
            "vertices": self.vertices,
            "simplices_by_dim": [[list(s) for s in lvl] for lvl in self.simplices],
        }
        if self.orientation is not None:
            out["orientation"] = [{"simplex": list(s), "sign": e} for s, e in sorted(self.orientation.items())]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SimplicialComplex":
        levels = data.get("simplices_by_dim")
        if levels is None:
            raise ComplexError("complex needs 'simplices_by_dim'")
        simplices = [s for lvl in levels for s in lvl]
        verts = data.get("vertices")
        simplices += [[v] for v in (verts or [])]
        X = cls(simplices)
        for lvl in levels:
            for s in lvl:
                if list(s) != sorted(s):
                    raise ComplexError(f"simplex {s} is not listed in increasing vertex order")
        orient = data.get("orientation")
        if orient is not None:
            if isinstance(orient, list) and orient and isinstance(orient[0], dict):
                X.set_orientation({tuple(o["simplex"]): int(o["sign"]) for o in orient})
            else:
                top = X.level(X.dim)
                if len(orient) != len(top):
                    raise ComplexError(f"orientation lists {len(orient)} signs for {len(top)} top simplices")
                X.set_orientation(dict(zip(top, (int(e) for e in orient))))
        return X

    def __repr__(self):
        counts = ", ".join(str(self.count(p)) for p in range(self.dim + 1))
        return f"SimplicialComplex({self.name or 'dim ' + str(self.dim)}: f=({counts}))"


def orient_top_simplices(X: SimplicialComplex) -> dict:
    """Coherent signs on the top simplices, or NoFundamentalClass."""
    n = X.dim
    top = X.level(n)
    if n == 0:
        return {s: 1 for s in top}
    by_face: dict = {}
    for s in top:
        for i, f in enumerate(_faces(s)):
            by_face.setdefault(f, []).append((s, i))
    for f, lst in by_face.items():
        if len(lst) != 2:
            raise NoFundamentalClass(f"face {f} lies in {len(lst)} top simplices")
    orient: dict = {}
    for start in top:
        if start in orient:
            continue
        orient[start] = 1
        queue = deque([start])
        while queue:
            s = queue.popleft()
            for i, f in enumerate(_faces(s)):
                (s1, i1), (s2, i2) = by_face[f]
                t, j = (s2, i2) if s1 == s else (s1, i1)
                want = -orient[s] * (-1) ** i * (-1) ** j
                if t in orient:
                    if orient[t] != want:
                        raise NoFundamentalClass("complex is not orientable")
                else:
                    orient[t] = want
                    queue.append(t)
    return orient


# local systems ---------------------------------------------------------------

class LocalSystem:
    """Flat vector bundle given by edge transports with triangle compatibility."""

    def __init__(self, X: SimplicialComplex, rank: int, transports: Mapping | None = None,
                 field: Field | None = None, check: bool = True):
        self.complex = X
        self.rank = rank
        f = QQ if field is None else field
        mats: dict = {}
        for (a, b), m in (transports or {}).items():
            if not isinstance(m, ExactMatrix):
                m = ExactMatrix.from_rows(m)
            if m.shape != (rank, rank):
                raise SystemError_(f"transport on edge ({a},{b}) is {m.shape}, expected {rank}x{rank}")
            if a > b:
                a, b, m = b, a, m.inverse()
            if (a, b) not in X:
                raise SystemError_(f"({a},{b}) is not an edge of the complex")
            f = f.join(m.field)
            mats[(a, b)] = m
        self.field = f
        ident = ExactMatrix.identity(rank, f)
        self._tau = {e: mats.get(e, ident) for e in X.edges}
        self._inv: dict = {}
        self._cache: dict = {}
        if check:
            self.validate()

    @classmethod
    def trivial(cls, X: SimplicialComplex, rank: int = 1, field: Field = QQ) -> "LocalSystem":
        return cls(X, rank, {}, field, check=False)

    def validate(self):
        for e, m in self._tau.items():
            if m.det() == 0:
                raise SystemError_(f"transport on edge {e} is not invertible")
        for a, b, c in self.complex.level(2):
            if self._tau[(b, c)] @ self._tau[(a, b)] != self._tau[(a, c)]:
                raise SystemError_(f"transports around triangle ({a},{b},{c}) are not compatible")

    def tau(self, a: int, b: int) -> ExactMatrix:
        """Transport from the fiber at ``a`` to the fiber at ``b`` along the edge."""
        if a == b:
            return ExactMatrix.identity(self.rank, self.field)
        if a < b:
            return self._tau[(a, b)]
        key = (b, a)
        if key not in self._inv:
            self._inv[key] = self._tau[key].inverse()
        return self._inv[key]

    def tau_inv(self, a: int, b: int) -> ExactMatrix:
        return self.tau(b, a)

    def path_transport(self, path: Sequence[int]) -> ExactMatrix:
        m = ExactMatrix.identity(self.rank, self.field)
        for a, b in zip(path, path[1:]):
            m = self.tau(a, b) @ m
        return m

    def transport(self, vec: Sequence, path: Sequence[int]) -> tuple:
        v = tuple(vec)
        for a, b in zip(path, path[1:]):
            v = tuple(self.tau(a, b).apply(v))
        return v

    def monodromy(self, loop: Sequence[int]) -> ExactMatrix:
        if loop[0] != loop[-1]:
            raise ValueError("a loop must start and end at the same vertex")
        return self.path_transport(loop)

    @property
    def edge_transports(self) -> dict:
        return dict(self._tau)

    def is_trivial(self) -> bool:
        return all(m.is_identity() for m in self._tau.values())

    def dual(self) -> "LocalSystem":
        """E*: transports are inverse transposes."""
        return LocalSystem(self.complex, self.rank,
                           {e: m.inverse().transpose() for e, m in self._tau.items()}, self.field, check=False)

    def tensor(self, other: "LocalSystem") -> "LocalSystem":
        if other.complex is not self.complex:
            raise SystemError_("systems live on different complexes")
        return LocalSystem(self.complex, self.rank * other.rank,
                           {e: kron(m, other._tau[e]) for e, m in self._tau.items()},
                           self.field.join(other.field), check=False)

    def gauge(self, g: Mapping[int, ExactMatrix]) -> "LocalSystem":
        """tau'_(a,b) = g_b tau_(a,b) g_a^{-1}; unlisted vertices keep g = 1."""
        ident = ExactMatrix.identity(self.rank, self.field)
        inv = {v: m.inverse() for v, m in g.items()}
        return LocalSystem(self.complex, self.rank,
                           {(a, b): g.get(b, ident) @ m @ inv.get(a, ident) for (a, b), m in self._tau.items()},
                           self.field, check=False)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "field": self.field.to_json(),
            "edges": [{"from": a, "to": b, "matrix": m.to_json()}
                      for (a, b), m in sorted(self._tau.items()) if not m.is_identity()],
        }

    @classmethod
    def from_json(cls, X: SimplicialComplex, data: dict) -> "LocalSystem":
        rank = int(data["rank"])
        field = Field.from_json(data.get("field", "Q"))
        trans = {}
        for e in data.get("edges", []):
            trans[(int(e["from"]), int(e["to"]))] = ExactMatrix.from_json(e["matrix"], field)
        return cls(X, rank, trans, field)

    # matrices of the chain complex
    def boundary_rows(self, p: int) -> list[dict]:
        """Sparse rows of the boundary map C_p -> C_{p-1} in flat coordinates."""
        key = ("d", p)
        if key in self._cache:
            return self._cache[key]
        X, r = self.complex, self.rank
        rows: list[dict] = [dict() for _ in range(X.count(p - 1) * r)]
        if p >= 1:
            idx = X.index[p - 1]
            for j, s in enumerate(X.level(p)):
                t = self.tau(s[0], s[1])
                for i, f in enumerate(_faces(s)):
                    fi = idx[f] * r
                    for k in range(r):
                        col = j * r + k
                        if i == 0:
                            for a in range(r):
                                v = t[a, k]
                                if v != 0:
                                    rows[fi + a][col] = rows[fi + a].get(col, 0) + v
                        else:
                            rows[fi + k][col] = rows[fi + k].get(col, 0) + (-1) ** i
        rows = [{c: v for c, v in row.items() if v != 0} for row in rows]
        self._cache[key] = rows
        return rows

    def coboundary_rows(self, p: int) -> list[dict]:
        """Sparse rows of delta: C^p -> C^{p+1}, the adjoint of the boundary."""
        key = ("delta", p)
        if key in self._cache:
            return self._cache[key]
        X, r = self.complex, self.rank
        rows: list[dict] = [dict() for _ in range(X.count(p + 1) * r)]
        if 0 <= p < X.dim:
            idx = X.index[p]
            for j, s in enumerate(X.level(p + 1)):
                tinv = self.tau_inv(s[0], s[1])
                for i, f in enumerate(_faces(s)):
                    fi = idx[f] * r
                    for a in range(r):
                        row = rows[j * r + a]
                        if i == 0:
                            for k in range(r):
                                v = tinv[a, k]
                                if v != 0:
                                    row[fi + k] = row.get(fi + k, 0) + v
                        else:
                            row[fi + a] = row.get(fi + a, 0) + (-1) ** i
        rows = [{c: v for c, v in row.items() if v != 0} for row in rows]
        self._cache[key] = rows
        return rows

    def __repr__(self):
        return f"LocalSystem(rank={self.rank}, field={self.field.name}, on {self.complex!r})"


def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    ra, ca = a.shape
    rb, cb = b.shape
    out = [[a[i // rb, j // cb] * b[i % rb, j % cb] for j in range(ca * cb)] for i in range(ra * rb)]
    return ExactMatrix.from_rows(out, a.field.join(b.field))


# chains and cochains ---------------------------------------------------------

def _zero_vec(r: int) -> tuple:
    return (Fraction(0),) * r


def _vec(v, r: int) -> tuple:
    v = tuple(v)
    if len(v) != r:
        raise ValueError(f"coefficient vector has length {len(v)}, system rank is {r}")
    return v


class _Cells:
    """Shared machinery for chains and cochains: sparse simplex -> fiber vector."""

    kind = "cells"

    def __init__(self, system: LocalSystem, degree: int, terms: Mapping | None = None):
        self.system = system
        self.degree = degree
        X, r = system.complex, system.rank
        clean = {}
        for s, v in (terms or {}).items():
            t = tuple(s)
            if t != tuple(sorted(t)):
                raise ComplexError(f"simplex {t} must be listed in increasing vertex order")
            if len(t) != degree + 1 or t not in X:
                raise ComplexError(f"{t} is not a {degree}-simplex of the complex")
            v = _vec(v, r)
            if any(x != 0 for x in v):
                clean[t] = v
        self.terms = clean

    @property
    def complex(self) -> SimplicialComplex:
        return self.system.complex

    @property
    def rank(self) -> int:
        return self.system.rank

    def _like(self, terms):
        return type(self)(self.system, self.degree, terms)

    def _check(self, other):
        if type(other) is not type(self) or other.degree != self.degree or other.system.rank != self.rank:
            raise ValueError(f"incompatible {self.kind}s")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for s, v in other.terms.items():
            w = out.get(s)
            out[s] = v if w is None else tuple(x + y for x, y in zip(w, v))
        return self._like(out)

    def __neg__(self):
        return self._like({s: tuple(-x for x in v) for s, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return self._like({s: tuple(c * x for x in v) for s, v in self.terms.items()})

    __rmul__ = scale

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.kind, self.degree, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def value(self, s) -> tuple:
        return self.terms.get(tuple(s), _zero_vec(self.rank))

    def flat(self) -> list:
        X, r = self.complex, self.rank
        out: list = [Fraction(0)] * (X.count(self.degree) * r)
        idx = X.index[self.degree] if self.degree <= X.dim else {}
        for s, v in self.terms.items():
            base = idx[s] * r
            for k, x in enumerate(v):
                out[base + k] = x
        return out

    @classmethod
    def from_flat(cls, system: LocalSystem, degree: int, vec: Sequence):
        r = system.rank
        level = system.complex.level(degree)
        if len(vec) != len(level) * r:
            raise ValueError("flat vector has the wrong length")
        return cls(system, degree, {s: tuple(vec[i * r:(i + 1) * r]) for i, s in enumerate(level)})

    def to_json(self) -> dict:
        from .exactfield import format_scalar
        return {
            "kind": self.kind,
            "degree": self.degree,
            "terms": [{"simplex": list(s), "coeff": [format_scalar(x) for x in v]}
                      for s, v in sorted(self.terms.items())],
        }

    def __repr__(self):
        return f"{type(self).__name__}(deg={self.degree}, {len(self.terms)} terms)"


class Chain(_Cells):
    kind = "chain"


class Cochain(_Cells):
    kind = "cochain"


def boundary(c: Chain, L: LocalSystem | None = None) -> Chain:
    """d(s x c) = s_0 x tau_(v0,v1)(c) + sum_{i>=1} (-1)^i s_i x c."""
    L = c.system if L is None else L
    out: dict = {}
    r = L.rank
    if c.degree == 0:
        return Chain(L, -1, {})
    for s, v in c.terms.items():
        for i, f in enumerate(_faces(s)):
            w = tuple(L.tau(s[0], s[1]).apply(v)) if i == 0 else tuple((-1) ** i * x for x in v)
            acc = out.get(f)
            out[f] = w if acc is None else tuple(x + y for x, y in zip(acc, w))
    return Chain(L, c.degree - 1, out)


def coboundary(a: Cochain, L: LocalSystem | None = None) -> Cochain:
    """Adjoint of the boundary: (da)(s) = tau_(v0,v1)^{-1} a(s_0) + sum_{i>=1} (-1)^i a(s_i)."""
    L = a.system if L is None else L
    X = L.complex
    p = a.degree
    out = {}
    for s in X.level(p + 1):
        fs = _faces(s)
        acc = list(L.tau_inv(s[0], s[1]).apply(a.value(fs[0])))
        for i in range(1, len(fs)):
            v = a.terms.get(fs[i])
            if v is not None:
                sg = (-1) ** i
                for k in range(len(acc)):
                    acc[k] = acc[k] + sg * v[k]
        out[s] = tuple(acc)
    return Cochain(L, p + 1, out)


# homology --------------------------------------------------------------------

@dataclass
class HomologyResult:
    degree: int
    dim: int
    basis: list = dc_field(default_factory=list)
    kind: str = "homology"

    def to_json(self) -> dict:
        return {"kind": self.kind, "degree": self.degree, "dim": self.dim,
                "basis": [b.to_json() for b in self.basis]}


def _as_dict(vec: Sequence) -> dict:
    return {i: x for i, x in enumerate(vec) if x != 0}


def _columns(rows: list[dict], ncols: int) -> list[dict]:
    cols: list[dict] = [dict() for _ in range(ncols)]
    for i, row in enumerate(rows):
        for j, v in row.items():
            cols[j][i] = v
    return cols


def _quotient(cycle_rows: list[dict], ncols: int, image_cols: list[dict], field: Field,
              want_basis: bool) -> tuple[int, list[list]]:
    """dim(ker A / im B) and representatives (kernel vectors in the fixed pivot order)."""
    k_rank = sparse_rank(cycle_rows, field) if cycle_rows else 0
    ker_dim = ncols - k_rank
    im_dim = sparse_rank(image_cols, field) if image_cols else 0
    dim = ker_dim - im_dim
    if not want_basis or dim == 0:
        return dim, []
    kernel = sparse_kernel(cycle_rows, ncols, field) if cycle_rows else \
        [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red = RowReducer(image_cols)
    reps = []
    for v in kernel:
        if red.add(_as_dict(v)):
            reps.append(v)
            if len(reps) == dim:
                break
    return dim, reps


def homology(X: SimplicialComplex, L: LocalSystem, p: int, basis: bool = True) -> HomologyResult:
    if p < 0:
        raise ValueError("degree must be nonnegative")
    r = L.rank
    if p > X.dim:
        return HomologyResult(p, 0, [])
    ncols = X.count(p) * r
    cyc = L.boundary_rows(p) if p >= 1 else []
    img = _columns(L.boundary_rows(p + 1), X.count(p + 1) * r) if p + 1 <= X.dim else []
    dim, reps = _quotient(cyc, ncols, img, L.field, basis)
    return HomologyResult(p, dim, [Chain.from_flat(L, p, v) for v in reps])


def cohomology(X: SimplicialComplex, L: LocalSystem, p: int, basis: bool = True) -> HomologyResult:
    if p < 0:
        raise ValueError("degree must be nonnegative")
    r = L.rank
    if p > X.dim:
        return HomologyResult(p, 0, [], "cohomology")
    ncols = X.count(p) * r
    cyc = L.coboundary_rows(p) if p < X.dim else []
    img = _columns(L.coboundary_rows(p - 1), X.count(p - 1) * r) if p >= 1 else []
    dim, reps = _quotient(cyc, ncols, img, L.field, basis)
    return HomologyResult(p, dim, [Cochain.from_flat(L, p, v) for v in reps], "cohomology")


def betti(X: SimplicialComplex, L: LocalSystem | None = None) -> list[int]:
    L = LocalSystem.trivial(X) if L is None else L
    return [homology(X, L, p, basis=False).dim for p in range(X.dim + 1)]


def is_cycle(c: Chain) -> bool:
    return c.degree == 0 or boundary(c).is_zero()


def is_cocycle(a: Cochain) -> bool:
    return coboundary(a).is_zero()


def is_boundary(c: Chain) -> bool:
    """True iff the chain lies in the image of the next boundary map."""
    L, X = c.system, c.complex
    p = c.degree
    if c.is_zero():
        return True
    if p + 1 > X.dim:
        return False
    rows = L.boundary_rows(p + 1)
    return sparse_solve(rows, X.count(p + 1) * L.rank, c.flat(), L.field) is not None


def homologous(a: Chain, b: Chain) -> bool:
    return is_boundary(a - b)


def is_coboundary(a: Cochain) -> bool:
    L, X = a.system, a.complex
    p = a.degree
    if a.is_zero():
        return True
    if p == 0:
        return False
    rows = L.coboundary_rows(p - 1)
    return sparse_solve(rows, X.count(p - 1) * L.rank, a.flat(), L.field) is not None


# pairings, cup and cap -------------------------------------------------------

class PairingRule:
    """A parallel bilinear map nu: E x F -> G given fiberwise by one matrix.

    ``matrix`` is r_G x (r_E * r_F); column ``a * r_F + b`` is nu(e_a, f_b).
    """

    def __init__(self, E: LocalSystem, F: LocalSystem, G: LocalSystem, matrix, check: bool = True):
        if not isinstance(matrix, ExactMatrix):
            matrix = ExactMatrix.from_rows(matrix)
        if matrix.shape != (G.rank, E.rank * F.rank):
            raise SystemError_(f"pairing matrix is {matrix.shape}, expected {(G.rank, E.rank * F.rank)}")
        if not (E.complex is F.complex is G.complex):
            raise SystemError_("pairing systems live on different complexes")
        self.E, self.F, self.G = E, F, G
        self.matrix = matrix
        self._cols = [[(g, matrix[g, c]) for g in range(G.rank) if matrix[g, c] != 0]
                      for c in range(E.rank * F.rank)]
        if check:
            self.check_parallel()

    def check_parallel(self):
        for (a, b), tg in G_edges(self.G):
            lhs = tg @ self.matrix
            rhs = self.matrix @ kron(self.E.tau(a, b), self.F.tau(a, b))
            if lhs != rhs:
                raise SystemError_(f"pairing is not parallel along edge ({a},{b})")

    def __call__(self, x: Sequence, y: Sequence) -> tuple:
        rF = self.F.rank
        out: list = [Fraction(0)] * self.G.rank
        for a, xa in enumerate(x):
            if xa == 0:
                continue
            for b, yb in enumerate(y):
                if yb == 0:
                    continue
                for g, m in self._cols[a * rF + b]:
                    out[g] = out[g] + m * xa * yb
        return tuple(out)

    def swapped(self) -> "PairingRule":
        """nu'(y, x) = nu(x, y) as a pairing F x E -> G."""
        rE, rF = self.E.rank, self.F.rank
        # column index for nu'(f_b, e_a) is b * rE + a
        cols = [[None] * (rE * rF) for _ in range(self.G.rank)]
        for g in range(self.G.rank):
            for a in range(rE):
                for b in range(rF):
                    cols[g][b * rE + a] = self.matrix[g, a * rF + b]
        return PairingRule(self.F, self.E, self.G, ExactMatrix.from_rows(cols, self.matrix.field), check=False)

    @classmethod
    def evaluation(cls, E: LocalSystem, Estar: LocalSystem | None = None, G: LocalSystem | None = None):
        """E* x E -> trivial line, (alpha, c) -> sum alpha_a c_a."""
        Estar = E.dual() if Estar is None else Estar
        G = LocalSystem.trivial(E.complex, 1, E.field) if G is None else G
        r = E.rank
        m = [[Fraction(1) if i // r == i % r else Fraction(0) for i in range(r * r)]]
        return cls(Estar, E, G, m, check=False)

    @classmethod
    def tensor(cls, E: LocalSystem, F: LocalSystem, G: LocalSystem | None = None):
        """E x F -> E (x) F, the identity on fibers."""
        G = E.tensor(F) if G is None else G
        return cls(E, F, G, ExactMatrix.identity(E.rank * F.rank, G.field), check=False)

    @classmethod
    def right_unit(cls, E: LocalSystem, trivial: LocalSystem | None = None):
        """E x Q -> E."""
        T = LocalSystem.trivial(E.complex, 1, E.field) if trivial is None else trivial
        return cls(E, T, E, ExactMatrix.identity(E.rank, E.field), check=False)

    @classmethod
    def left_unit(cls, E: LocalSystem, trivial: LocalSystem | None = None):
        T = LocalSystem.trivial(E.complex, 1, E.field) if trivial is None else trivial
        return cls(T, E, E, ExactMatrix.identity(E.rank, E.field), check=False)


def G_edges(G: LocalSystem):
    return G.edge_transports.items()


def kronecker(a: Cochain, c: Chain, nu: PairingRule | None = None, basepoint: int | None = None) -> tuple:
    """<a, c> = sum over simplices of nu(a(s), c(s)) carried to the basepoint.

    Transport uses the spanning-tree path; when the target system has trivial
    monodromy the answer does not depend on that choice.
    """
    if a.degree != c.degree:
        raise ValueError(f"cannot pair a {a.degree}-cochain with a {c.degree}-chain")
    nu = PairingRule.evaluation(c.system, a.system) if nu is None else nu
    X = c.complex
    base = X.vertices[0] if basepoint is None else basepoint
    G = nu.G
    total: list = [Fraction(0)] * G.rank
    for s, v in c.terms.items():
        av = a.terms.get(s)
        if av is None:
            continue
        w = nu(av, v)
        if s[0] != base:
            w = G.transport(w, X.path_to(s[0], base))
        for k in range(G.rank):
            total[k] = total[k] + w[k]
    return tuple(total)


def kronecker_scalar(a: Cochain, c: Chain):
    """Evaluation pairing of C^p(X, E*) with C_p(X, E) (a plain scalar)."""
    total = Fraction(0)
    for s, v in c.terms.items():
        av = a.terms.get(s)
        if av is not None:
            for x, y in zip(av, v):
                total = total + x * y
    return total


def cup(a: Cochain, b: Cochain, nu: PairingRule) -> Cochain:
    """(a u b)(v0..v_{p+q}) = nu(a(v0..vp), tau_(v0,vp)^{-1} b(vp..v_{p+q}))."""
    p, q = a.degree, b.degree
    X = a.complex
    if p + q > X.dim:
        return Cochain(nu.G, p + q, {})
    if a.rank != nu.E.rank or b.rank != nu.F.rank:
        raise ValueError("cochain ranks do not match the pairing")
    F = nu.F
    out = {}
    for s in X.level(p + q):
        av = a.terms.get(s[:p + 1])
        bv = b.terms.get(s[p:])
        if av is None or bv is None:
            continue
        if p > 0:
            bv = tuple(F.tau_inv(s[0], s[p]).apply(bv))
        out[s] = nu(av, bv)
    return Cochain(nu.G, p + q, out)


def cap(b: Cochain, c: Chain, nu: PairingRule) -> Chain:
    """b n (v0..vm x f) = (v0..v_{m-q}) x nu(tau_(v0,v_{m-q})^{-1} b(v_{m-q}..vm), f).

    With this back-face convention <a u b, c> = <a, b n c>.
    """
    q, m = b.degree, c.degree
    if m < q:
        raise ValueError(f"cannot cap a {q}-cochain with a {m}-chain")
    if b.rank != nu.E.rank or c.rank != nu.F.rank:
        raise ValueError("ranks do not match the pairing")
    E = nu.E
    k = m - q
    out: dict = {}
    for s, f in c.terms.items():
        bv = b.terms.get(s[k:])
        if bv is None:
            continue
        if k > 0:
            bv = tuple(E.tau_inv(s[0], s[k]).apply(bv))
        w = nu(bv, f)
        front = s[:k + 1]
        acc = out.get(front)
        out[front] = w if acc is None else tuple(x + y for x, y in zip(acc, w))
    return Chain(nu.G, k, out)


def unit_cochain(L: LocalSystem) -> Cochain:
    """The constant 1 in degree 0 of a rank-1 trivial system."""
    if L.rank != 1:
        raise ValueError("the unit cochain lives in a rank-1 system")
    return Cochain(L, 0, {(v,): (Fraction(1),) for v in L.complex.vertices})


# Poincare duality ------------------------------------------------------------

def cap_fundamental(a: Cochain) -> Chain:
    """D(a) = a n [X]."""
    X = a.complex
    fc = X.fundamental_chain()
    nu = PairingRule.right_unit(a.system, fc.system)
    return cap(a, fc, nu)


def poincare_dual(c: Chain, basis: list[Cochain] | None = None) -> Cochain:
    """A cocycle whose cap with [X] is homologous to the cycle ``c``."""
    X, L = c.complex, c.system
    if not X.has_fundamental_class:
        raise NoFundamentalClass("Poincare duality needs an oriented closed complex")
    if not is_cycle(c):
        raise NotACycle("the chain is not a cycle")
    n, k = X.dim, c.degree
    p = n - k
    if basis is None:
        basis = cohomology(X, L, p).basis
    r = L.rank
    ncols_b = X.count(k + 1) * r if k + 1 <= n else 0
    images = [cap_fundamental(h).flat() for h in basis]
    nrows = X.count(k) * r
    rows: list[dict] = [dict() for _ in range(nrows)]
    for j, img in enumerate(images):
        for i, x in enumerate(img):
            if x != 0:
                rows[i][j] = x
    if ncols_b:
        for i, row in enumerate(L.boundary_rows(k + 1)):
            for j, x in row.items():
                rows[i][len(images) + j] = x
    sol = sparse_solve(rows, len(images) + ncols_b, c.flat(), L.field)
    if sol is None:
        raise ArithmeticError("cap with the fundamental class is not surjective on this complex")
    out = Cochain(L, p, {})
    for j, h in enumerate(basis):
        if sol[j] != 0:
            out = out + h.scale(sol[j])
    return out


def pairing_matrix(X: SimplicialComplex, E: LocalSystem, p: int) -> list[list]:
    """Kronecker matrix between bases of H^p(X, E*) and H_p(X, E)."""
    Estar = E.dual()
    co = cohomology(X, Estar, p).basis
    ho = homology(X, E, p).basis
    return [[kronecker_scalar(a, c) for c in ho] for a in co]


def field_of_chain(c: _Cells) -> Field:
    f = QQ
    for v in c.terms.values():
        for x in v:
            f = f.join(field_of(x))
    return f
