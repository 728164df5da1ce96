"""Tensors over an exact quadratic space and the invariants tau_x.

A tensor of degree d is a sparse map from multi-indices ``(a_1, ..., a_d)``
(0-based basis labels) to exact scalars.  The operators follow Weyl's
construction for the orthogonal group:

* ``contract`` / ``insert`` pair two slots with the form, resp. insert the
  dual form into two slots;
* ``harmonic_project`` is the orthogonal projection onto the common kernel of
  all contractions;
* ``row_symmetrize`` / ``col_antisymmetrize`` are the Young symmetrizers of the
  row-reading standard tableau, normalized to be idempotents.

With that normalization the pairing of tau_e with tau_u equals 1/|Q_mu|,
where Q_mu is the column group; see :func:`column_group_order`.

Slot indices in the public operator signatures are 1-based, matching the
usual ``Phi_(i,j)`` notation; permutations are 0-based image tuples.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import factorial
from typing import Iterable, Sequence

from .exactfield import QQ, QQ_I, ExactMatrix, Field, LinearSolver, format_scalar, parse_scalar
from .exactfield.scalars import field_of
from .weights import normalize_partition


class TensorError(ValueError):
    pass


class InadmissibleTuple(ValueError):
    """Fewer vectors than nonzero parts of the partition (dim X < i(mu))."""


class NotAnIsometry(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class QuadraticSpace:
    gram: ExactMatrix
    field: Field = QQ
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        g = self.gram
        if g.rows != g.cols:
            raise TensorError("Gram matrix must be square")
        if g != g.transpose():
            raise TensorError("Gram matrix must be symmetric")
        if g.det() == 0:
            raise TensorError("Gram matrix must be nondegenerate")
        object.__setattr__(self, "field", self.field.join(g.field))

    @classmethod
    def standard(cls, n: int, field: Field = QQ) -> "QuadraticSpace":
        """V = Q^{n+1} with (e_i,e_i)=1 for i<=n and (e_{n+1},e_{n+1})=-1."""
        return cls(ExactMatrix.diagonal([1] * n + [-1]), field)

    @classmethod
    def diagonal(cls, diag: Sequence, field: Field | None = None) -> "QuadraticSpace":
        g = ExactMatrix.diagonal(list(diag))
        return cls(g, field.join(g.field) if field is not None else g.field)

    def with_field(self, field: Field) -> "QuadraticSpace":
        return QuadraticSpace(self.gram, field)

    @property
    def dim(self) -> int:
        return self.gram.rows

    def compatible(self, other: "QuadraticSpace") -> bool:
        return self is other or self.gram == other.gram

    @property
    def gram_entries(self) -> dict:
        if "g" not in self._cache:
            n = self.dim
            self._cache["g"] = {(a, b): self.gram[a, b] for a in range(n) for b in range(n)
                                if self.gram[a, b] != 0}
        return self._cache["g"]

    @property
    def inverse_gram_entries(self) -> dict:
        if "ginv" not in self._cache:
            inv = self.gram.inverse()
            n = self.dim
            self._cache["ginv"] = {(a, b): inv[a, b] for a in range(n) for b in range(n) if inv[a, b] != 0}
        return self._cache["ginv"]

    @property
    def is_diagonal(self) -> bool:
        return all(a == b for a, b in self.gram_entries)

    def form(self, x: Sequence, y: Sequence):
        s = Fraction(0)
        for (a, b), g in self.gram_entries.items():
            if x[a] != 0 and y[b] != 0:
                s = s + g * x[a] * y[b]
        return s

    def vector(self, coords: Sequence) -> "Tensor":
        if len(coords) != self.dim:
            raise TensorError(f"vector needs {self.dim} coordinates")
        return Tensor(self, 1, {(a,): parse_scalar(c) if isinstance(c, str) else c
                                for a, c in enumerate(coords)})

    def basis_vector(self, i: int) -> "Tensor":
        """e_i with 1-based i."""
        return Tensor(self, 1, {(i - 1,): Fraction(1)})

    def scalar(self, c=1) -> "Tensor":
        return Tensor(self, 0, {(): c})

    def is_isometry(self, g: ExactMatrix) -> bool:
        return g.shape == self.gram.shape and g.transpose() @ self.gram @ g == self.gram


class Tensor:
    """Sparse element of the d-fold tensor power of a quadratic space."""

    __slots__ = ("space", "degree", "coeffs")

    def __init__(self, space: QuadraticSpace, degree: int, coeffs: dict):
        self.space = space
        self.degree = degree
        clean = {}
        for k, v in coeffs.items():
            if v != 0:
                if len(k) != degree:
                    raise TensorError(f"multi-index {k} does not have length {degree}")
                clean[tuple(k)] = v
        self.coeffs = clean

    # vector space structure ---------------------------------------------
    def _check(self, other: "Tensor"):
        if not isinstance(other, Tensor):
            raise TypeError("expected a Tensor")
        if other.degree != self.degree:
            raise TensorError(f"degree mismatch {self.degree} vs {other.degree}")
        if not self.space.compatible(other.space):
            raise TensorError("tensors live in different quadratic spaces")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return Tensor(self.space, self.degree, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) - v
        return Tensor(self.space, self.degree, out)

    def __neg__(self):
        return Tensor(self.space, self.degree, {k: -v for k, v in self.coeffs.items()})

    def __mul__(self, c):
        if isinstance(c, Tensor):
            return NotImplemented
        return Tensor(self.space, self.degree, {k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.degree, frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def otimes(self, other: "Tensor") -> "Tensor":
        if not self.space.compatible(other.space):
            raise TensorError("tensors live in different quadratic spaces")
        return Tensor(self.space, self.degree + other.degree,
                      {a + b: x * y for a, x in self.coeffs.items() for b, y in other.coeffs.items()})

    def power(self, k: int) -> "Tensor":
        out = self.space.scalar(1)
        for _ in range(k):
            out = out.otimes(self)
        return out

    def scalar_value(self):
        if self.degree != 0:
            raise TensorError("only degree-0 tensors are scalars")
        return self.coeffs.get((), Fraction(0))

    def coords(self) -> list:
        if self.degree != 1:
            raise TensorError("coordinates are defined for vectors only")
        return [self.coeffs.get((a,), Fraction(0)) for a in range(self.space.dim)]

    def act(self, g: ExactMatrix) -> "Tensor":
        """Diagonal action g x g x ... x g."""
        n = self.space.dim
        cols = [[(a, g[a, b]) for a in range(n) if g[a, b] != 0] for b in range(n)]
        cur = self.coeffs
        for s in range(self.degree):
            nxt: dict = {}
            for k, v in cur.items():
                for a, gab in cols[k[s]]:
                    nk = k[:s] + (a,) + k[s + 1:]
                    nxt[nk] = nxt.get(nk, 0) + gab * v
            cur = {k: v for k, v in nxt.items() if v != 0}
        return Tensor(self.space, self.degree, cur)

    def field(self) -> Field:
        f = QQ
        for v in self.coeffs.values():
            f = f.join(field_of(v))
        return f

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "dim": self.space.dim,
            "coeffs": [{"index": [a + 1 for a in k], "value": format_scalar(v)}
                       for k, v in sorted(self.coeffs.items())],
        }

    def __repr__(self):
        terms = " + ".join(f"{format_scalar(v)}*e{[a + 1 for a in k]}" for k, v in sorted(self.coeffs.items()))
        return f"Tensor(d={self.degree}: {terms or '0'})"


# the quadratic structure ----------------------------------------------------

def bilinear_pair(s: Tensor, t: Tensor):
    """The d-fold tensor product of the form (bilinear, no conjugation)."""
    s._check(t)
    sp = s.space
    if sp.is_diagonal:
        g = {a: v for (a, _), v in sp.gram_entries.items()}
        total = Fraction(0)
        small, big = (s, t) if len(s.coeffs) <= len(t.coeffs) else (t, s)
        for k, v in small.coeffs.items():
            w = big.coeffs.get(k)
            if w is None:
                continue
            prod = v * w
            for a in k:
                prod = prod * g[a]
            total = total + prod
        return total
    gs = s.act(sp.gram)
    total = Fraction(0)
    for k, v in gs.coeffs.items():
        w = t.coeffs.get(k)
        if w is not None:
            total = total + v * w
    return total


def _check_pair(d: int, I: Sequence[int]) -> tuple[int, int]:
    i, j = I
    if not (1 <= i < j <= d):
        raise TensorError(f"slot pair {tuple(I)} out of range for degree {d}")
    return i - 1, j - 1


def contract(t: Tensor, I: Sequence[int]) -> Tensor:
    """Phi_I: pair slots i < j (1-based) with the form and remove them."""
    i, j = _check_pair(t.degree, I)
    g = t.space.gram_entries
    out: dict = {}
    for k, v in t.coeffs.items():
        gab = g.get((k[i], k[j]))
        if gab is None:
            continue
        nk = tuple(a for s, a in enumerate(k) if s != i and s != j)
        out[nk] = out.get(nk, 0) + gab * v
    return Tensor(t.space, t.degree - 2, out)


def insert(t: Tensor, I: Sequence[int]) -> Tensor:
    """Psi_I: insert sum g^{ab} e_a x e_b into slots i < j of the result."""
    i, j = _check_pair(t.degree + 2, I)
    ginv = t.space.inverse_gram_entries
    out: dict = {}
    for k, v in t.coeffs.items():
        rest = list(k)
        for (a, b), w in ginv.items():
            nk = rest[:i] + [a] + rest[i:j - 1] + [b] + rest[j - 1:]
            nk = tuple(nk)
            out[nk] = out.get(nk, 0) + w * v
    return Tensor(t.space, t.degree + 2, out)


def sym_act(p: Sequence[int], t: Tensor) -> Tensor:
    """Move the factor in slot k to slot p[k] (0-based images)."""
    p = tuple(p)
    if sorted(p) != list(range(t.degree)):
        raise TensorError(f"{p} is not a permutation of {t.degree} slots")
    out = {}
    for k, v in t.coeffs.items():
        nk = [0] * len(k)
        for s, a in enumerate(k):
            nk[p[s]] = a
        out[tuple(nk)] = v
    return Tensor(t.space, t.degree, out)


def _harmonic_data(space: QuadraticSpace, d: int):
    key = ("harmonic", d)
    if key in space._cache:
        return space._cache[key]
    n = space.dim
    pairs = list(combinations(range(1, d + 1), 2))
    lower = list(product(range(n), repeat=d - 2))
    lower_index = {k: i for i, k in enumerate(lower)}
    nb = len(lower)
    rows: dict = {}
    for pi, I in enumerate(pairs):
        for bi, beta in enumerate(lower):
            col = pi * nb + bi
            inserted = insert(Tensor(space, d - 2, {beta: Fraction(1)}), I)
            for pj, J in enumerate(pairs):
                for k, v in contract(inserted, J).coeffs.items():
                    r = pj * nb + lower_index[k]
                    row = rows.setdefault(r, {})
                    row[col] = row.get(col, 0) + v
    matrix = [{c: v for c, v in rows.get(r, {}).items() if v != 0} for r in range(len(pairs) * nb)]
    solver = LinearSolver(matrix, len(pairs) * nb, space.gram.field)
    data = (pairs, lower, lower_index, solver)
    space._cache[key] = data
    return data


def harmonic_project(t: Tensor) -> Tensor:
    """Orthogonal projection onto the tensors killed by every contraction.

    Solves for ``w`` in the span of the images of the insertions with
    ``Phi_J(t - w) = 0`` for all J; the answer is ``t - w``.
    """
    d = t.degree
    if d < 2 or t.is_zero():
        return t
    pairs, lower, lower_index, solver = _harmonic_data(t.space, d)
    nb = len(lower)
    b: list = [Fraction(0)] * (len(pairs) * nb)
    for pj, J in enumerate(pairs):
        for k, v in contract(t, J).coeffs.items():
            b[pj * nb + lower_index[k]] = v
    c = solver.solve(b)
    # the orthogonal decomposition guarantees consistency for a nondegenerate form
    assert c is not None, "harmonic projection system is inconsistent"
    w = Tensor(t.space, d, {})
    for pi, I in enumerate(pairs):
        part = {lower[bi]: c[pi * nb + bi] for bi in range(nb) if c[pi * nb + bi] != 0}
        if part:
            w = w + insert(Tensor(t.space, d - 2, part), I)
    return t - w


def is_harmonic(t: Tensor) -> bool:
    return all(contract(t, I).is_zero() for I in combinations(range(1, t.degree + 1), 2))


# Young symmetrizers -------------------------------------------------------

@dataclass(frozen=True)
class StandardTableau:
    """Row-reading filling of a partition: 1..b1 in the first row, and so on."""

    shape: tuple[int, ...]

    def __post_init__(self):
        shape = tuple(b for b in self.shape if b != 0)
        if any(a < b for a, b in zip(shape, shape[1:])) or any(b < 0 for b in shape):
            raise TensorError(f"{self.shape} is not a partition")
        object.__setattr__(self, "shape", shape)

    @property
    def size(self) -> int:
        return sum(self.shape)

    @property
    def rows(self) -> list[list[int]]:
        """Slots (0-based) in each row."""
        out, start = [], 0
        for b in self.shape:
            out.append(list(range(start, start + b)))
            start += b
        return out

    @property
    def columns(self) -> list[list[int]]:
        rows = self.rows
        width = self.shape[0] if self.shape else 0
        return [[r[c] for r in rows if len(r) > c] for c in range(width)]

    def conjugate(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.columns)


def column_group_order(mu: Sequence[int]) -> int:
    """|Q_mu| = product of factorials of the column lengths."""
    out = 1
    for c in StandardTableau(tuple(mu)).conjugate():
        out *= factorial(c)
    return out


def _perm_sign(p: Sequence[int]) -> int:
    p = list(p)
    sgn = 1
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sgn = -sgn
    return sgn


def _average_over_block(t: Tensor, block: list[int], signed: bool) -> Tensor:
    if len(block) < 2:
        return t
    perms = list(permutations(range(len(block))))
    scale = Fraction(1, len(perms))
    out: dict = {}
    for k, v in t.coeffs.items():
        vals = [k[s] for s in block]
        for q in perms:
            nk = list(k)
            for src, dst in enumerate(q):
                nk[block[dst]] = vals[src]
            coef = v * scale
            if signed and _perm_sign(q) < 0:
                coef = -coef
            nk = tuple(nk)
            out[nk] = out.get(nk, 0) + coef
    return Tensor(t.space, t.degree, out)


def _check_shape(T: StandardTableau, t: Tensor):
    if T.size != t.degree:
        raise TensorError(f"tableau of size {T.size} cannot act on degree {t.degree}")


def row_symmetrize(T: StandardTableau, t: Tensor) -> Tensor:
    """(1/|P|) sum over the row group; an idempotent."""
    _check_shape(T, t)
    for row in T.rows:
        t = _average_over_block(t, row, signed=False)
    return t


def col_antisymmetrize(T: StandardTableau, t: Tensor) -> Tensor:
    """(1/|Q|) sum of sign(q) q over the column group; an idempotent."""
    _check_shape(T, t)
    for col in T.columns:
        t = _average_over_block(t, col, signed=True)
    return t


# invariants ---------------------------------------------------------------

def _as_vectors(space: QuadraticSpace, x) -> list[Tensor]:
    out = []
    for v in x:
        if isinstance(v, Tensor):
            if v.degree != 1:
                raise TensorError("expected vectors (degree-1 tensors)")
            out.append(v)
        else:
            out.append(space.vector(list(v)))
    return out


def seed_tensor(x: Sequence[Tensor], mu: Sequence[int], space: QuadraticSpace | None = None) -> Tensor:
    """sigma_x = x_1^{b_1} x ... x x_k^{b_k}."""
    parts = [b for b in mu if b != 0]
    if space is None:
        if not x:
            raise TensorError("need a space or at least one vector")
        space = x[0].space if isinstance(x[0], Tensor) else None
    vecs = _as_vectors(space, x)
    if len(parts) > len(vecs):
        raise InadmissibleTuple(
            f"partition {tuple(mu)} has {len(parts)} nonzero parts but only {len(vecs)} vectors "
            f"were given; an invariant needs dim X >= i(mu)")
    out = space.scalar(1)
    for v, b in zip(vecs, parts):
        out = out.otimes(v.power(b))
    return out


def tau(x: Sequence, mu: Sequence[int], space: QuadraticSpace | None = None) -> Tensor:
    """tau_x = Q P H (x_1^{b_1} x ... x x_k^{b_k}) for the row-reading tableau of mu."""
    sigma = seed_tensor(x, mu, space)
    T = StandardTableau(tuple(mu))
    return col_antisymmetrize(T, row_symmetrize(T, harmonic_project(sigma)))


def pair_invariants(x: Sequence, y: Sequence, mu: Sequence[int], space: QuadraticSpace | None = None):
    return bilinear_pair(tau(x, mu, space), tau(y, mu, space))


def schur_module_nonzero(mu: Sequence[int], dim_v: int) -> bool:
    """Nonzero iff the first two column lengths of mu sum to at most dim V."""
    cols = StandardTableau(tuple(mu)).conjugate()
    first_two = sum(cols[:2])
    return first_two <= dim_v


def witt_basis(space: QuadraticSpace, n: int) -> list[Tensor]:
    """(u_1, ..., u_m, v_m, ..., v_1) for the standard signature-(n,1) space.

    u_i = e_i - i e_{m+i}, v_i = e_i + i e_{m+i}; when n = 2m-1 the last pair is
    u_m = e_m - e_{2m}, v_m = e_m + e_{2m}.
    """
    if space.dim != n + 1 or space.gram != ExactMatrix.diagonal([1] * n + [-1]):
        raise TensorError(f"witt_basis needs the standard signature ({n},1) space")
    m = (n + 1) // 2
    needs_i = n % 2 == 0 or m > 1
    if needs_i and space.field.d != -1:
        raise TensorError(f"the Witt basis for n={n} needs Q(i); space field is {space.field.name}")
    us, vs = [], []
    for i in range(1, m + 1):
        a, b = i - 1, m + i - 1
        if n % 2 == 1 and i == m:
            cu, cv = Fraction(-1), Fraction(1)
        else:
            cu, cv = -QQ_I.gen(), QQ_I.gen()
        us.append(Tensor(space, 1, {(a,): Fraction(1), (b,): cu}))
        vs.append(Tensor(space, 1, {(a,): Fraction(1), (b,): cv}))
    return us + vs[::-1]


def witt_u(space: QuadraticSpace, n: int, k: int | None = None) -> list[Tensor]:
    m = (n + 1) // 2
    return witt_basis(space, n)[: (m if k is None else k)]


def torus_element(n: int, ts: Sequence, field: Field = QQ_I) -> ExactMatrix:
    """Isometry u_i -> t_i u_i, v_i -> v_i / t_i (e_{n+1} fixed when n is even)."""
    m = (n + 1) // 2
    if len(ts) != m:
        raise TensorError(f"need {m} torus parameters")
    N = n + 1
    g = [[Fraction(0)] * N for _ in range(N)]
    gen = QQ_I.gen()
    for i in range(1, m + 1):
        t = Fraction(ts[i - 1])
        a, b = i - 1, m + i - 1
        c = (t + 1 / t) / 2
        s = (t - 1 / t) / 2
        # u = e_a - w e_b, v = e_a + w e_b with w = i (or 1 for the real pair)
        w = Fraction(1) if (n % 2 == 1 and i == m) else gen
        # g e_a = c e_a - s w e_b ; g e_b = -s/w e_a + c e_b
        g[a][a] = c
        g[b][a] = -s * w
        g[a][b] = -s / w
        g[b][b] = c
    if n % 2 == 0:
        g[n][n] = Fraction(1)
    return ExactMatrix.from_rows(g, field)


def invariance_check(t: Tensor, g: ExactMatrix) -> bool:
    """True iff the diagonal action of the isometry g fixes t exactly."""
    if not t.space.is_isometry(g):
        raise NotAnIsometry("g does not preserve the Gram form")
    return t.act(g) == t


def act_on_vectors(g: ExactMatrix, x: Iterable[Tensor]) -> list[Tensor]:
    return [v.act(g) for v in x]


def partition_of(mu) -> tuple[int, ...]:
    return normalize_partition(mu)
