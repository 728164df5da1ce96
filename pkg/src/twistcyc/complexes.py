"""Small triangulated spaces and flat systems on them."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations, product
from typing import Sequence

from .exactfield import QQ, ExactMatrix, Field
from .localsys import LocalSystem, SimplicialComplex


def circle(n: int = 3) -> SimplicialComplex:
    if n < 3:
        raise ValueError("a simplicial circle needs at least 3 vertices")
    X = SimplicialComplex([(i, (i + 1) % n) for i in range(n)], name=f"S1[{n}]")
    return X.oriented()


def boundary_of_simplex(k: int) -> SimplicialComplex:
    """The (k-1)-sphere as the boundary of the k-simplex."""
    verts = range(k + 1)
    faces = [tuple(v for v in verts if v != i) for i in verts]
    return SimplicialComplex(faces, name=f"dS{k}").oriented()


def octahedron() -> SimplicialComplex:
    """S^2 with vertices +x=0, -x=1, +y=2, -y=3, +z=4, -z=5."""
    tris = [(x, y, z) for x in (0, 1) for y in (2, 3) for z in (4, 5)]
    X = SimplicialComplex(tris, name="S2-octahedron")
    # outward normal orientation: (x, y, z) positively ordered iff the sign product is +
    sgn = {0: 1, 1: -1, 2: 1, 3: -1, 4: 1, 5: -1}
    X.set_orientation({t: sgn[t[0]] * sgn[t[1]] * sgn[t[2]] for t in tris})
    return X


OCTAHEDRON_EQUATOR = [(0, 2), (1, 2), (1, 3), (0, 3)]   # +x, +y, -x, -y
OCTAHEDRON_MERIDIAN = [(0, 4), (1, 4), (1, 5), (0, 5)]  # +x, +z, -x, -z


def seven_vertex_torus() -> SimplicialComplex:
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return SimplicialComplex(tris, name="T2[7]").oriented()


def _perm_sign(p: Sequence[int]) -> int:
    p = list(p)
    sgn = 1
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sgn = -sgn
    return sgn


class Torus:
    """Freudenthal triangulation of (Z/N)^k; vertex id = sum x_j N^j."""

    def __init__(self, k: int, N: int = 3):
        if N < 3:
            raise ValueError("need N >= 3 for a simplicial triangulation")
        self.k, self.N = k, N
        tops = {}
        for x in product(range(N), repeat=k):
            for pi in permutations(range(k)):
                cur = list(x)
                path = [self.vid(cur)]
                for j in pi:
                    cur[j] = (cur[j] + 1) % N
                    path.append(self.vid(cur))
                order = sorted(range(k + 1), key=lambda i: path[i])
                tops[tuple(sorted(path))] = _perm_sign(pi) * _perm_sign(order)
        X = SimplicialComplex(tops, name=f"T{k}[{N}]")
        X.set_orientation(tops)
        self.complex = X

    def vid(self, x: Sequence[int]) -> int:
        return sum((c % self.N) * self.N ** j for j, c in enumerate(x))

    def coords(self, v: int) -> tuple[int, ...]:
        return tuple((v // self.N ** j) % self.N for j in range(self.k))

    def wraps(self, a: int, b: int) -> tuple[int, ...]:
        """Winding of the short lift of the edge a -> b across the seam, per coordinate."""
        xa, xb = self.coords(a), self.coords(b)
        out = []
        for u, w in zip(xa, xb):
            d = (w - u) % self.N
            step = d if d <= 1 else d - self.N  # short representative in {-1, 0, 1}
            out.append((u + step - w) // self.N)
        return tuple(out)

    def coordinate_circle(self, axis: int, base: Sequence[int] | None = None) -> list[tuple[int, int]]:
        """Edges of the closed loop base + t e_axis, oriented in increasing t."""
        base = [0] * self.k if base is None else list(base)
        out = []
        cur = list(base)
        for _ in range(self.N):
            a = self.vid(cur)
            cur[axis] = (cur[axis] + 1) % self.N
            out.append((a, self.vid(cur)))
        return out

    def system(self, monodromy: Sequence, field: Field | None = None) -> LocalSystem:
        """Flat system with commuting monodromy matrices M_j around coordinate j."""
        mats = [m if isinstance(m, ExactMatrix) else
                (ExactMatrix.from_rows([[m]]) if not isinstance(m, (list, tuple)) else ExactMatrix.from_rows(m))
                for m in monodromy]
        if len(mats) != self.k:
            raise ValueError(f"need {self.k} monodromy matrices")
        r = mats[0].rows
        f = QQ if field is None else field
        for m in mats:
            f = f.join(m.field)
        for a in mats:
            for b in mats:
                if a @ b != b @ a:
                    raise ValueError("torus monodromies must commute")
        invs = [m.inverse() for m in mats]
        ident = ExactMatrix.identity(r, f)
        trans = {}
        for a, b in self.complex.edges:
            t = ident
            # crossing the seam from N-1 to 0 applies M_j
            for j, w in enumerate(self.wraps(a, b)):
                if w == 1:
                    t = mats[j] @ t
                elif w == -1:
                    t = invs[j] @ t
            trans[(a, b)] = t
        return LocalSystem(self.complex, r, trans, f)


def torus(k: int = 2, N: int = 3) -> SimplicialComplex:
    return Torus(k, N).complex


def circle_system(X: SimplicialComplex, monodromy, field: Field | None = None) -> LocalSystem:
    """Put the whole monodromy on the closing edge (0, n-1) of a vertex circle."""
    m = monodromy if isinstance(monodromy, ExactMatrix) else (
        ExactMatrix.from_rows(monodromy) if isinstance(monodromy, (list, tuple)) else
        ExactMatrix.from_rows([[monodromy]]))
    n = len(X.vertices)
    # going around 0 -> 1 -> ... -> n-1 -> 0 the last step is the edge (0, n-1) reversed
    return LocalSystem(X, m.rows, {(0, n - 1): m.inverse()}, field)


def random_invertible(r: int, rng: random.Random, entries=(-1, 0, 1, 2)) -> ExactMatrix:
    while True:
        m = ExactMatrix.from_rows([[Fraction(rng.choice(entries)) for _ in range(r)] for _ in range(r)])
        if m.det() != 0:
            return m


def random_unimodular(r: int, rng: random.Random, steps: int = 2) -> ExactMatrix:
    rows = [[Fraction(int(i == j)) for j in range(r)] for i in range(r)]
    for _ in range(steps if r > 1 else 0):
        i, j = rng.sample(range(r), 2)
        c = rng.choice((-1, 1))
        rows[i] = [x + c * y for x, y in zip(rows[i], rows[j])]
    if r == 1:
        rows = [[Fraction(rng.choice((1, -1, 2, Fraction(1, 2))))]]
    return ExactMatrix.from_rows(rows)


def random_gauge(L: LocalSystem, rng: random.Random, density: float = 0.3) -> LocalSystem:
    """Gauge-transform a system by small matrices at a random subset of vertices."""
    g = {v: random_unimodular(L.rank, rng) for v in L.complex.vertices if rng.random() < density}
    return L.gauge(g)


def random_commuting(r: int, k: int, rng: random.Random) -> list[ExactMatrix]:
    """k commuting invertible r x r matrices: polynomials in one random matrix."""
    if r == 1:
        return [ExactMatrix.from_rows([[Fraction(rng.choice((1, 2, -1, 3, Fraction(1, 2))))]]) for _ in range(k)]
    base = random_invertible(r, rng)
    ident = ExactMatrix.identity(r)
    out = []
    while len(out) < k:
        c0, c1 = rng.choice((0, 1, 2, -1)), rng.choice((0, 1, -1))
        m = ident.scale(c0) + base.scale(c1)
        if m.det() != 0:
            out.append(m)
    return out


def random_graph_system(X: SimplicialComplex, r: int, rng: random.Random) -> LocalSystem:
    """Arbitrary invertible transports on a 1-dimensional complex."""
    if X.dim > 1:
        raise ValueError("arbitrary edge transports are only flat on graphs")
    return LocalSystem(X, r, {e: random_invertible(r, rng) for e in X.edges})


def random_graph(n_vertices: int, n_edges: int, rng: random.Random) -> SimplicialComplex:
    pairs = [(a, b) for a in range(n_vertices) for b in range(a + 1, n_vertices)]
    edges = rng.sample(pairs, min(n_edges, len(pairs)))
    return SimplicialComplex(edges, n_vertices=n_vertices, name=f"graph[{n_vertices},{len(edges)}]")


BUILTINS = {
    "circle": lambda: circle(3),
    "circle4": lambda: circle(4),
    "sphere2": octahedron,
    "tetrahedron": lambda: boundary_of_simplex(3),
    "torus2": lambda: torus(2, 3),
    "torus7": seven_vertex_torus,
    "torus3": lambda: torus(3, 3),
}


def builtin(name: str) -> SimplicialComplex:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise ValueError(f"unknown builtin complex {name!r}; choose from {sorted(BUILTINS)}") from None
