"""Quadratic spaces over Q(sqrt m) for the standard arithmetic examples.

The form is ``x_1^2 + ... + x_n^2 - sqrt(m) x_{n+1}^2``.  At the embedding
``sqrt m -> +sqrt m`` it has signature (n, 1); at the other embedding it is
positive definite.  Global facts about the lattices (neat congruence subgroups,
one-point intersections of totally geodesic cycles) are taken as given; this
module only produces the local data: subspaces, reflections, stabilizer
elements, and rational tuples meeting the nonvanishing conditions.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .exactfield import ExactMatrix, Field, format_scalar, sign, sparse_kernel, sparse_rank
from .schur import QuadraticSpace, pair_invariants
from .weights import rank_of, support_count


class InvalidForm(ValueError):
    pass


class DegenerateSubspace(ValueError):
    pass


class PreconditionError(ValueError):
    pass


class TrialsExhausted(RuntimeError):
    """Randomized search gave up; this is not a proof that no tuple exists."""


DEFAULT_TRIALS = 10 ** 4


def _squarefree(m: int) -> bool:
    if m < 2:
        return False
    k = 2
    while k * k <= m:
        if m % (k * k) == 0:
            return False
        k += 1
    return True


class RationalQuadraticForm:
    def __init__(self, n: int, m: int = 2):
        if n < 1:
            raise InvalidForm("n must be positive")
        if not isinstance(m, int) or not _squarefree(m):
            raise InvalidForm(f"m={m} must be a square-free integer > 1 (sqrt m must be irrational)")
        self.n, self.m = n, m
        self.field = Field(m)
        root = self.field.gen()
        self.gram = ExactMatrix.diagonal([Fraction(1)] * n + [-root], self.field)
        self.space = QuadraticSpace(self.gram, self.field)

    @property
    def dim(self) -> int:
        return self.n + 1

    def form(self, x: Sequence, y: Sequence):
        return self.space.form(list(x), list(y))

    def gram_of(self, vectors: Sequence[Sequence]) -> ExactMatrix:
        return ExactMatrix.from_rows([[self.form(a, b) for b in vectors] for a in vectors], self.field)

    def __repr__(self):
        return f"RationalQuadraticForm(n={self.n}, m={self.m})"


def signature_at_embeddings(f: RationalQuadraticForm) -> tuple[tuple[int, int], tuple[int, int]]:
    out = []
    for emb in (1, -1):
        diag = [f.gram[i, i] for i in range(f.dim)]
        pos = sum(1 for x in diag if sign(x, emb) > 0)
        neg = sum(1 for x in diag if sign(x, emb) < 0)
        out.append((pos, neg))
    return out[0], out[1]


def _is_positive_definite(gram: ExactMatrix, embedding: int = 1) -> bool:
    """Symmetric elimination: every pivot must be positive."""
    n = gram.rows
    a = gram.tolist()
    for i in range(n):
        piv = a[i][i]
        if sign(piv, embedding) <= 0:
            return False
        for r in range(i + 1, n):
            if a[r][i] != 0:
                c = a[r][i] / piv
                for s in range(i, n):
                    a[r][s] = a[r][s] - c * a[i][s]
    return True


def _span_rank(vectors: Sequence[Sequence], field: Field) -> int:
    rows = [{j: x for j, x in enumerate(v) if x != 0} for v in vectors]
    return sparse_rank(rows, field) if rows else 0


class PositiveSubspace:
    def __init__(self, form: RationalQuadraticForm, vectors: Sequence[Sequence]):
        vecs = [tuple(form.field.coerce(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != form.dim:
                raise DegenerateSubspace(f"vectors must have {form.dim} coordinates")
        if _span_rank(vecs, form.field) != len(vecs):
            raise DegenerateSubspace("spanning vectors are linearly dependent")
        if vecs and not _is_positive_definite(form.gram_of(vecs)):
            raise DegenerateSubspace("the form restricted to the span is not positive definite")
        self.form, self.vectors = form, vecs

    @property
    def k(self) -> int:
        return len(self.vectors)

    @classmethod
    def coordinate(cls, form: RationalQuadraticForm, k: int) -> "PositiveSubspace":
        """E_k = span(e_1, ..., e_k)."""
        return cls(form, [[int(i == j) for i in range(form.dim)] for j in range(k)])

    def orthogonal_basis(self) -> list[list]:
        """A basis of the form-orthogonal complement."""
        g = self.form.gram
        rows = [{j: x for j, x in enumerate(g.apply(v)) if x != 0} for v in self.vectors]
        return sparse_kernel(rows, self.form.dim, self.form.field)


def reflection(X: PositiveSubspace) -> ExactMatrix:
    """r_X = I - 2 B (B^T G B)^{-1} B^T G with B the matrix of spanning columns."""
    f = X.form
    if not X.vectors:
        return ExactMatrix.identity(f.dim, f.field)
    B = ExactMatrix.from_rows([list(col) for col in zip(*X.vectors)], f.field)
    G = f.gram
    small = B.transpose() @ G @ B
    if small.det() == 0:
        raise DegenerateSubspace("the form is degenerate on X")
    corr = B @ small.inverse() @ B.transpose() @ G
    return ExactMatrix.identity(f.dim, f.field) - corr.scale(2)


def _outer(a: Sequence, b: Sequence) -> list[list]:
    return [[x * y for y in b] for x in a]


def sample_pointwise_stabilizer(X: PositiveSubspace, seed: int = 0, terms: int = 2,
                                max_retries: int = 50) -> ExactMatrix:
    """Cayley transform (I - A)(I + A)^{-1} of a random A with A^T G + G A = 0 and A|X = 0."""
    f = X.form
    N = f.dim
    rng = random.Random(seed)
    perp = X.orthogonal_basis()
    G = f.gram
    Ginv = G.inverse()
    ident = ExactMatrix.identity(N, f.field)
    if len(perp) < 2:
        return ident
    for _ in range(max_retries):
        S = [[Fraction(0)] * N for _ in range(N)]
        for _ in range(terms):
            c1 = [rng.randint(-2, 2) for _ in perp]
            c2 = [rng.randint(-2, 2) for _ in perp]
            y1 = [sum((c * v[j] for c, v in zip(c1, perp)), Fraction(0)) for j in range(N)]
            y2 = [sum((c * v[j] for c, v in zip(c2, perp)), Fraction(0)) for j in range(N)]
            a, b = G.apply(y1), G.apply(y2)
            coef = Fraction(rng.randint(1, 3), rng.randint(1, 3))
            ab, ba = _outer(a, b), _outer(b, a)
            for i in range(N):
                for j in range(N):
                    S[i][j] = S[i][j] + coef * (ab[i][j] - ba[i][j])
        A = Ginv @ ExactMatrix.from_rows(S, f.field)
        if all(x == 0 for row in A.tolist() for x in row):
            continue
        M = ident + A
        if M.det() == 0:
            continue
        return (ident - A) @ M.inverse()
    raise RuntimeError("could not sample a nontrivial stabilizer element")


# tuple searches ---------------------------------------------------------------

def _partition(mu) -> tuple[int, ...]:
    entries = mu.entries if hasattr(mu, "entries") else tuple(mu)
    return tuple(int(b) for b in entries)


def _random_vector(rng: random.Random, dim: int, height: int) -> list[Fraction]:
    v = [Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(dim - 1)]
    # stay mostly in the positive part; a small timelike component keeps condition 3 honest
    last = Fraction(rng.randint(-1, 1), rng.randint(1, height) + 1) if rng.random() < 0.5 else Fraction(0)
    return v + [last]


@dataclass
class SearchResult:
    vectors: list
    seed: int
    trials: int
    height: int
    pairings: list = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "vectors": [[format_scalar(x) for x in v] for v in self.vectors],
            "seed": self.seed,
            "trials": self.trials,
            "height": self.height,
            "pairings": [format_scalar(p) for p in self.pairings],
        }


def _check_span_positive(form: RationalQuadraticForm, vectors: list) -> bool:
    if _span_rank(vectors, form.field) != form.n:
        return False
    return _is_positive_definite(form.gram_of(vectors))


def complementary_tuple_search(x: Sequence[Sequence], mu, trials: int = DEFAULT_TRIALS, seed: int = 0,
                               form: RationalQuadraticForm | None = None) -> SearchResult:
    """Find y in V^(n-k) with (tau_x, tau_y') != 0, dim span(x, y) = n and the span positive definite."""
    if form is None:
        form = RationalQuadraticForm(len(x[0]) - 1 if x else 2)
    n = form.n
    k = len(x)
    mu = _partition(mu)
    i_mu = support_count(mu)
    if len(mu) > rank_of(n):
        raise PreconditionError(f"a weight for n={n} has at most {rank_of(n)} entries")
    if i_mu > n // 2:
        raise PreconditionError(
            f"i(mu)={i_mu} exceeds floor(n/2)={n // 2}: both tuples need at least i(mu) vectors, and a "
            f"positive definite X+Y has dimension at most n, so X and Y would have to meet")
    if not (i_mu <= k <= n // 2):
        raise PreconditionError(f"need i(mu) <= k <= floor(n/2); got i(mu)={i_mu}, k={k}, n={n}")
    X = PositiveSubspace(form, x)
    xs = [list(v) for v in X.vectors]
    rng = random.Random(seed)
    height = 1
    for t in range(1, trials + 1):
        if t % 64 == 0 and height < 1024:
            height *= 2
        y = [_random_vector(rng, form.dim, height) for _ in range(n - k)]
        if not _check_span_positive(form, xs + y):
            continue
        val = pair_invariants(xs, y[:k], mu, form.space)
        if val != 0:
            return SearchResult(y, seed, t, height, [val])
    raise TrialsExhausted(f"no tuple found in {trials} trials (seed {seed})")


def cup_tuple_search(q1: int, q2: int, mu1, mu2, trials: int = DEFAULT_TRIALS, seed: int = 0,
                     form: RationalQuadraticForm | None = None, n: int | None = None) -> SearchResult:
    """Find w in V^(n-q1-q2) meeting the four cup-product conditions.

    x' = (e_1..e_p1), y' = (e_{q1+1}..e_{q1+p2}), w' = (w_1..w_p1),
    w'' = (w_{q1+1}..w_{q1+p2}).  Returned pairings are
    [(tau_x', tau_w'), (tau_y', tau_w'')]; an empty invariant pairs to 1.
    """
    if form is None:
        if n is None:
            raise PreconditionError("give either a form or n")
        form = RationalQuadraticForm(n)
    n = form.n
    mu1, mu2 = _partition(mu1), _partition(mu2)
    p1, p2 = support_count(mu1), support_count(mu2)
    for mu in (mu1, mu2):
        if len(mu) > rank_of(n):
            raise PreconditionError(f"a weight for n={n} has at most {rank_of(n)} entries")
    if p1 > q1 or p2 > q2:
        raise PreconditionError(f"need p1 <= q1 and p2 <= q2; got p=({p1},{p2}), q=({q1},{q2})")
    if q1 + q2 > n // 2:
        raise PreconditionError(f"need q1 + q2 <= floor(n/2); got {q1 + q2} > {n // 2}")
    e = [[Fraction(int(i == j)) for i in range(form.dim)] for j in range(n)]
    xp, yp = e[:p1], e[q1:q1 + p2]
    z = e[:q1 + q2]
    rng = random.Random(seed)
    height = 1
    for t in range(1, trials + 1):
        if t % 64 == 0 and height < 1024:
            height *= 2
        w = [_random_vector(rng, form.dim, height) for _ in range(n - q1 - q2)]
        if not _check_span_positive(form, z + w):
            continue
        a = pair_invariants(xp, w[:p1], mu1, form.space) if p1 else Fraction(1)
        if a == 0:
            continue
        b = pair_invariants(yp, w[q1:q1 + p2], mu2, form.space) if p2 else Fraction(1)
        if b == 0:
            continue
        return SearchResult(w, seed, t, height, [a, b])
    raise TrialsExhausted(f"no tuple found in {trials} trials (seed {seed})")
