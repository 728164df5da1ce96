"""Decomposable cycles Y (x) s and their transverse intersection product.

Geometric route: at each isolated intersection vertex P the frame sign compares
the orientation of Y1 followed by Y2 with the ambient orientation, and the
product is ``sum eps_P * P (x) nu(s1(P), s2(P))`` with ``eps_P`` the frame sign
times ``(-1)^(pq)``.

Cohomological route (``cup_intersection``): ``D(PD(b) u PD(a))``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Mapping, Sequence

from .localsys import (
    Chain,
    ComplexError,
    LocalSystem,
    NoFundamentalClass,
    PairingRule,
    SimplicialComplex,
    _faces,
    cap_fundamental,
    cup,
    homologous,
    poincare_dual,
)


class MonodromyObstruction(ValueError):
    """The seed is moved by the monodromy of the system along Y."""


class NotInGeneralPosition(ValueError):
    pass


class UnsupportedIntersection(ValueError):
    """Positive-dimensional intersections are only handled by the cup-product route."""


def _perm_sign_of(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (distinct entries)."""
    seq = list(seq)
    sgn = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sgn = -sgn
    return sgn


class DecomposableCycle:
    """A closed oriented subcomplex Y carrying a parallel section grown from a seed."""

    def __init__(self, X: SimplicialComplex, system: LocalSystem, simplices: Sequence[Sequence[int]],
                 orientation: Sequence[int] | Mapping | None, basepoint: int, seed: Sequence):
        if system.complex is not X:
            raise ComplexError("the local system lives on a different complex")
        top = [tuple(sorted(s)) for s in simplices]
        if not top:
            raise ComplexError("a decomposable cycle needs at least one simplex")
        dims = {len(s) - 1 for s in top}
        if len(dims) != 1:
            raise ComplexError("the simplices of Y must all have the same dimension")
        for s in top:
            if s not in X:
                raise ComplexError(f"{s} is not a simplex of the ambient complex")
        if len(set(top)) != len(top):
            raise ComplexError("simplices of Y are repeated")
        if orientation is None:
            orientation = [1] * len(top)
        if isinstance(orientation, Mapping):
            orient = {tuple(sorted(s)): int(e) for s, e in orientation.items()}
        else:
            orientation = list(orientation)
            if len(orientation) != len(top):
                raise ComplexError(f"{len(orientation)} orientation signs for {len(top)} simplices")
            orient = dict(zip(top, (int(e) for e in orientation)))
        if set(orient) != set(top) or any(e not in (1, -1) for e in orient.values()):
            raise ComplexError("orientation must give +1 or -1 on every simplex of Y")
        self.ambient = X
        self.system = system
        self.dim = dims.pop()
        self.simplices = top
        self.orientation = orient
        self.Y = SimplicialComplex(top)
        self._check_closed()
        if (basepoint,) not in self.Y:
            raise ComplexError(f"basepoint {basepoint} is not a vertex of Y")
        self.basepoint = basepoint
        seed = tuple(seed)
        if len(seed) != system.rank:
            raise ValueError(f"seed has {len(seed)} entries, system rank is {system.rank}")
        self.seed = seed
        self._section: dict | None = None

    def _check_closed(self):
        p = self.dim
        if p == 0:
            return
        acc: dict = {}
        for s, e in self.orientation.items():
            for i, f in enumerate(_faces(s)):
                acc[f] = acc.get(f, 0) + (-1) ** i * e
        bad = [f for f, v in acc.items() if v != 0]
        if bad:
            raise NoFundamentalClass(f"Y is not a closed oriented cycle: boundary is nonzero on {bad[0]}")

    def section(self) -> dict:
        """Values of the parallel section on the vertices of Y."""
        if self._section is not None:
            return self._section
        L, Y = self.system, self.Y
        vals = {self.basepoint: self.seed}
        adj = Y.neighbors()
        queue = deque([self.basepoint])
        while queue:
            a = queue.popleft()
            for b in sorted(adj[a]):
                if b not in vals:
                    vals[b] = tuple(L.tau(a, b).apply(vals[a]))
                    queue.append(b)
        if len(vals) != len(Y.vertices):
            raise ComplexError("Y is not connected; give one decomposable cycle per component")
        for a, b in Y.edges:
            if tuple(L.tau(a, b).apply(vals[a])) != vals[b]:
                raise MonodromyObstruction(
                    f"the seed is not fixed by the monodromy along Y (fails on edge ({a},{b}))")
        self._section = vals
        return vals

    def to_chain(self) -> Chain:
        vals = self.section()
        return Chain(self.system, self.dim,
                     {s: tuple(e * x for x in vals[s[0]]) for s, e in self.orientation.items()})

    def scaled(self, c) -> "DecomposableCycle":
        return DecomposableCycle(self.ambient, self.system, self.simplices,
                                 dict(self.orientation), self.basepoint, tuple(c * x for x in self.seed))

    def reversed(self) -> "DecomposableCycle":
        return DecomposableCycle(self.ambient, self.system, self.simplices,
                                 {s: -e for s, e in self.orientation.items()}, self.basepoint, self.seed)

    def vertex_set(self) -> set:
        return set(self.Y.vertices)

    def __repr__(self):
        return f"DecomposableCycle(dim={self.dim}, {len(self.simplices)} simplices, base={self.basepoint})"


def to_chain(d: DecomposableCycle) -> Chain:
    return d.to_chain()


@dataclass
class IntersectionData:
    """Common simplices of |Y1| and |Y2| and the general-position verdict."""

    p: int
    q: int
    n: int
    common: list = dc_field(default_factory=list)
    violations: list = dc_field(default_factory=list)
    signs: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def max_dim(self) -> int:
        return self.p + self.q - self.n

    @property
    def points(self) -> list[int]:
        return sorted(s[0] for s in self.common if len(s) == 1)

    def to_json(self) -> dict:
        return {
            "p": self.p, "q": self.q, "n": self.n,
            "general_position": self.ok,
            "common": [list(s) for s in self.common],
            "violations": [list(s) for s in self.violations],
            "signs": {str(k): v for k, v in sorted(self.signs.items())},
        }


def check_general_position(d1: DecomposableCycle, d2: DecomposableCycle) -> IntersectionData:
    if d1.ambient is not d2.ambient:
        raise ComplexError("cycles live in different complexes")
    n = d1.ambient.dim
    data = IntersectionData(d1.dim, d2.dim, n)
    s2 = {s for lvl in d2.Y.simplices for s in lvl}
    common = sorted((s for lvl in d1.Y.simplices for s in lvl if s in s2), key=lambda s: (len(s), s))
    data.common = common
    bound = d1.dim + d2.dim - n
    data.violations = [s for s in common if len(s) - 1 > bound]
    return data


def _oriented_tuple_sign(simplex: tuple, eps: int, lead: int) -> tuple[int, tuple]:
    """Sign of the oriented simplex written as (lead, rest in increasing order)."""
    rest = tuple(v for v in simplex if v != lead)
    return eps * _perm_sign_of((lead,) + rest), rest


def _frame_sign(P: int, d1: DecomposableCycle, d2: DecomposableCycle) -> int:
    X = d1.ambient
    tops = X.index[X.dim]
    found = set()
    for A, ea in d1.orientation.items():
        if P not in A:
            continue
        sa, ra = _oriented_tuple_sign(A, ea, P)
        for B, eb in d2.orientation.items():
            if P not in B:
                continue
            S = tuple(sorted(set(A) | set(B)))
            if len(S) != X.dim + 1 or S not in tops:
                continue
            sb, rb = _oriented_tuple_sign(B, eb, P)
            sx = X.orientation[S] * _perm_sign_of((P,) + ra + rb)
            found.add(sa * sb * sx)
    if not found:
        raise NotInGeneralPosition(
            f"no ambient simplex at vertex {P} spans a frame of both cycles; refine the triangulation")
    if len(found) > 1:
        raise NotInGeneralPosition(f"local frames at vertex {P} disagree; the cycles touch without crossing")
    return found.pop()


def _ends_at(P: int, d: DecomposableCycle) -> tuple[int, int]:
    """(previous, next) vertex of the oriented curve Y through P."""
    prev = nxt = None
    for (a, b), e in d.orientation.items():
        if P not in (a, b):
            continue
        u, w = (a, b) if e == 1 else (b, a)
        if w == P:
            if prev is not None:
                raise NotInGeneralPosition(f"curve passes through vertex {P} more than once")
            prev = u
        else:
            if nxt is not None:
                raise NotInGeneralPosition(f"curve passes through vertex {P} more than once")
            nxt = w
    if prev is None or nxt is None:
        raise NotInGeneralPosition(f"curve is not a simple loop at vertex {P}")
    return prev, nxt


def _link_sign(P: int, d1: DecomposableCycle, d2: DecomposableCycle) -> int:
    """Surfaces: read the crossing off the cyclically ordered link circle of P."""
    X = d1.ambient
    succ = {}
    for S in X.star(P, 2):
        sgn, (x, y) = _oriented_tuple_sign(S, X.orientation[S], P)
        if sgn == 1:
            succ[x] = y
        else:
            succ[y] = x
    a_minus, a_plus = _ends_at(P, d1)
    b_minus, b_plus = _ends_at(P, d2)
    arc = []
    v = succ[a_plus]
    while v != a_minus:
        arc.append(v)
        v = succ[v]
    plus_in, minus_in = b_plus in arc, b_minus in arc
    if plus_in == minus_in:
        raise NotInGeneralPosition(f"the curves touch at vertex {P} without crossing")
    return 1 if plus_in else -1


def intersection_sign(P: int, d1: DecomposableCycle, d2: DecomposableCycle,
                      X: SimplicialComplex | None = None) -> int:
    X = d1.ambient if X is None else X
    if not X.has_fundamental_class:
        raise NoFundamentalClass("the ambient complex must be oriented")
    if d1.dim + d2.dim != X.dim:
        raise UnsupportedIntersection("signs are defined for complementary dimensions only")
    if (P,) not in d1.Y or (P,) not in d2.Y:
        raise ValueError(f"vertex {P} is not on both cycles")
    s2 = {s for lvl in d2.Y.simplices for s in lvl}
    if any(P in s and s in s2 for lvl in d1.Y.simplices[1:] for s in lvl):
        raise NotInGeneralPosition(f"vertex {P} is not an isolated intersection point")
    if X.dim == 2 and d1.dim == 1:
        return _link_sign(P, d1, d2)
    return _frame_sign(P, d1, d2)


def intersect(d1: DecomposableCycle, d2: DecomposableCycle, nu: PairingRule) -> Chain:
    """sum over intersection points P of eps_P * P (x) nu(s1(P), s2(P)).

    ``eps_P`` is ``(-1)^(pq)`` times the frame sign of :func:`intersection_sign`.
    That factor makes the product equal ``D(PD(b) u PD(a))`` for the back-face
    cap used here; it only matters when p and q are both odd.
    """
    X = d1.ambient
    data = check_general_position(d1, d2)
    if not data.ok:
        raise NotInGeneralPosition(
            f"common simplex {data.violations[0]} exceeds dimension {data.max_dim}; re-triangulate")
    if data.max_dim != 0:
        raise UnsupportedIntersection("only complementary-dimensional intersections are computed geometrically")
    if nu.E.rank != d1.system.rank or nu.F.rank != d2.system.rank:
        raise ValueError("pairing ranks do not match the cycles")
    s1, s2 = d1.section(), d2.section()
    out: dict = {}
    for P in data.points:
        eps = intersection_sign(P, d1, d2, X) * (-1) ** (d1.dim * d2.dim)
        data.signs[P] = eps
        w = nu(s1[P], s2[P])
        out[(P,)] = tuple(eps * x for x in w)
    return Chain(nu.G, 0, out)


def intersection_data(d1: DecomposableCycle, d2: DecomposableCycle) -> IntersectionData:
    data = check_general_position(d1, d2)
    if data.ok and data.max_dim == 0:
        for P in data.points:
            data.signs[P] = intersection_sign(P, d1, d2) * (-1) ** (d1.dim * d2.dim)
    return data


def cup_intersection(a: Chain, b: Chain, nu: PairingRule) -> Chain:
    """[a].[b] = D(PD(b) u PD(a)) with nu: E_a x E_b -> G applied as nu(a-value, b-value)."""
    pa = poincare_dual(a)
    pb = poincare_dual(b)
    return cap_fundamental(cup(pb, pa, nu.swapped()))


def agrees_with_cup(d1: DecomposableCycle, d2: DecomposableCycle, nu: PairingRule) -> bool:
    geo = intersect(d1, d2, nu)
    alg = cup_intersection(d1.to_chain(), d2.to_chain(), nu)
    return homologous(geo, alg)


def scalar_value(c: Chain) -> Fraction:
    """Sum of the coefficients of a 0-chain in a trivial rank-1 system."""
    if c.degree != 0 or c.rank != 1:
        raise ValueError("expected a 0-chain of rank 1")
    return sum((v[0] for v in c.terms.values()), Fraction(0))
