"""Exact matrices and the rank / kernel / solve engine.

Rational systems are cleared of denominators and reduced with the
fraction-free integer kernel (compiled when available).  Matrices over Q(i) or
Q(sqrt m) go through the generic field kernel, except that a rational matrix
with an irrational right-hand side is solved one coordinate at a time.

Pivot columns are always the leftmost columns independent of the columns
before them, and kernels are read off the reduced row echelon form, which is
unique; results are therefore deterministic.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from . import _backend
from .scalars import QQ, ExactScalar, Field, Scalar, field_of, format_scalar, parse_scalar


class ExactMatrix:
    """Dense row-major matrix over one exact field."""

    __slots__ = ("rows", "cols", "entries", "field")

    def __init__(self, rows: int, cols: int, entries: Sequence, field: Field | None = None):
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        entries = [parse_scalar(x) if isinstance(x, str) else x for x in entries]
        if field is None:
            field = QQ
            for x in entries:
                field = field.join(field_of(x))
        self.rows = rows
        self.cols = cols
        self.entries = tuple(field.coerce(x) for x in entries)
        self.field = field

    # construction ---------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field | None = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [x for r in rows for x in r], field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "ExactMatrix":
        return cls(n, n, [Fraction(int(i == j)) for i in range(n) for j in range(n)], field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field = QQ) -> "ExactMatrix":
        return cls(rows, cols, [Fraction(0)] * (rows * cols), field)

    @classmethod
    def diagonal(cls, diag: Sequence, field: Field | None = None) -> "ExactMatrix":
        n = len(diag)
        return cls(n, n, [diag[i] if i == j else 0 for i in range(n) for j in range(n)], field)

    # access ---------------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def col(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def tolist(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    @property
    def shape(self):
        return self.rows, self.cols

    def sparse_rows(self) -> list[dict]:
        out = []
        for i in range(self.rows):
            base = i * self.cols
            out.append({j: self.entries[base + j] for j in range(self.cols) if self.entries[base + j] != 0})
        return out

    # algebra --------------------------------------------------------------
    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows,
                           [self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)],
                           self.field)

    T = property(transpose)

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            field = self.field.join(other.field)
            out = []
            ocols = [other.col(j) for j in range(other.cols)]
            for i in range(self.rows):
                r = self.row(i)
                for c in ocols:
                    out.append(_dot(r, c))
            return ExactMatrix(self.rows, other.cols, out, field)
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return [_dot(self.row(i), vec) for i in range(self.rows)]

    def apply(self, vec: Sequence) -> list:
        return self @ vec

    def _zip(self, other, op):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix(self.rows, self.cols, [op(a, b) for a, b in zip(self.entries, other.entries)],
                           self.field.join(other.field))

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return ExactMatrix(self.rows, self.cols, [-a for a in self.entries], self.field)

    def scale(self, c) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, [c * a for a in self.entries], self.field.join(field_of(c)))

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.shape == other.shape
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(
            self.entries[i * self.cols + j] == (1 if i == j else 0)
            for i in range(self.rows) for j in range(self.cols))

    def inverse(self) -> "ExactMatrix":
        if self.rows != self.cols:
            raise ValueError("only square matrices are invertible")
        n = self.rows
        rows = []
        for i in range(n):
            r = {j: v for j, v in enumerate(self.row(i)) if v != 0}
            r[n + i] = Fraction(1)
            rows.append(r)
        piv = _echelon(rows, self.field, full=True)
        if any(i not in piv for i in range(n)):
            raise ZeroDivisionError("matrix is singular")
        out = []
        for i in range(n):
            r = piv[i]
            p = r[i]
            out.extend(_div(r.get(n + j, 0), p) for j in range(n))
        return ExactMatrix(n, n, out, self.field)

    def det(self):
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        m = [self.row(i) for i in range(n)]
        d = Fraction(1)
        for c in range(n):
            p = next((r for r in range(c, n) if m[r][c] != 0), None)
            if p is None:
                return Fraction(0)
            if p != c:
                m[c], m[p] = m[p], m[c]
                d = -d
            piv = m[c][c]
            d = d * piv
            inv = 1 / piv
            for r in range(c + 1, n):
                f = m[r][c] * inv
                if f != 0:
                    m[r] = [a - f * b for a, b in zip(m[r], m[c])]
        return d

    def to_json(self):
        return [[format_scalar(x) for x in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, data, field: Field | None = None) -> "ExactMatrix":
        return cls.from_rows([[parse_scalar(x, field) for x in r] for r in data], field)

    def __repr__(self):
        return f"ExactMatrix({self.to_json()!r}, field={self.field.name})"


def _dot(a, b):
    s = Fraction(0)
    for x, y in zip(a, b):
        if x != 0 and y != 0:
            s = s + x * y
    return s


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


# sparse engine ----------------------------------------------------------

def rows_field(rows: Iterable[dict]) -> Field:
    f = QQ
    for r in rows:
        for v in r.values():
            if isinstance(v, ExactScalar):
                f = f.join(field_of(v))
    return f


def _to_int_rows(rows):
    out = []
    for r in rows:
        den = 1
        for v in r.values():
            if isinstance(v, Fraction):
                den = lcm(den, v.denominator)
        out.append({k: int(v * den) for k, v in r.items() if v != 0})
    return out


def _echelon(rows, field: Field | None = None, full=False):
    rows = list(rows)
    if field is None:
        field = rows_field(rows)
    if field.is_rational:
        return _backend.echelon_int(_to_int_rows(rows), full)
    return _backend.echelon_field(rows, full)


def sparse_rank(rows: Iterable[dict], field: Field | None = None) -> int:
    return len(_echelon(rows, field, full=False))


def sparse_kernel(rows: Iterable[dict], ncols: int, field: Field | None = None) -> list[list]:
    """Basis of the right null space, one vector per free column (ascending)."""
    piv = _echelon(rows, field, full=True)
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        v: list = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for c, r in piv.items():
            if f in r:
                v[c] = -_div(r[f], r[c])
        basis.append(v)
    return basis


def _split_components(b, d):
    re_ = [x.re if isinstance(x, ExactScalar) else Fraction(x) for x in b]
    ir = [x.ir if isinstance(x, ExactScalar) else Fraction(0) for x in b]
    return re_, ir


def sparse_solve(rows: Sequence[dict], ncols: int, b: Sequence, field: Field | None = None):
    """Some ``x`` with ``A x = b`` or ``None``; free variables are set to zero."""
    rows = list(rows)
    if len(b) != len(rows):
        raise ValueError("right-hand side length must equal the number of rows")
    mfield = rows_field(rows) if field is None else field
    bfield = QQ
    for x in b:
        bfield = bfield.join(field_of(x))
    if mfield.is_rational and not bfield.is_rational:
        re_, ir = _split_components(b, bfield.d)
        xr = sparse_solve(rows, ncols, re_, QQ)
        xi = sparse_solve(rows, ncols, ir, QQ)
        if xr is None or xi is None:
            return None
        g = bfield.gen()
        return [a + c * g for a, c in zip(xr, xi)]
    field = mfield.join(bfield)
    aug = []
    for r, bi in zip(rows, b):
        row = dict(r)
        if bi != 0:
            row[ncols] = bi
        aug.append(row)
    piv = _echelon(aug, field, full=True)
    if ncols in piv:
        return None
    x: list = [Fraction(0)] * ncols
    for c, r in piv.items():
        if ncols in r:
            x[c] = _div(r[ncols], r[c])
    return x


# public dense API ---------------------------------------------------------

def rank(m: ExactMatrix) -> int:
    return sparse_rank(m.sparse_rows(), m.field)


def kernel_basis(m: ExactMatrix) -> list[list]:
    return sparse_kernel(m.sparse_rows(), m.cols, m.field)


def solve(m: ExactMatrix, b: Sequence):
    b = [parse_scalar(x) if isinstance(x, str) else x for x in b]
    return sparse_solve(m.sparse_rows(), m.cols, b, m.field)


def rref(m: ExactMatrix) -> tuple[ExactMatrix, list[int]]:
    """Reduced row echelon form (pivots scaled to 1) and the pivot columns."""
    piv = _echelon(m.sparse_rows(), m.field, full=True)
    cols = sorted(piv)
    out = []
    for c in cols:
        r = piv[c]
        out.append([_div(r.get(j, 0), r[c]) for j in range(m.cols)])
    for _ in range(m.rows - len(cols)):
        out.append([Fraction(0)] * m.cols)
    return ExactMatrix(m.rows, m.cols, [x for r in out for x in r], m.field), cols


def mat_vec(rows: Sequence[dict], x: Sequence) -> list:
    out = []
    for r in rows:
        s = Fraction(0)
        for k, v in r.items():
            if x[k] != 0:
                s = s + v * x[k]
        out.append(s)
    return out



class LinearSolver:
    """Factor ``A`` once, then solve ``A x = b`` for many right-hand sides.

    The factorization is the reduced echelon form of ``[A | I]``: its rows give
    ``E`` with ``E A = R``.  Rows of ``E`` whose ``R`` part vanishes are the
    consistency conditions on ``b``.
    """

    def __init__(self, rows: Sequence[dict], ncols: int, field: Field | None = None):
        rows = list(rows)
        self.nrows = len(rows)
        self.ncols = ncols
        self.field = rows_field(rows) if field is None else field
        aug = []
        for i, r in enumerate(rows):
            row = dict(r)
            row[ncols + i] = Fraction(1)
            aug.append(row)
        piv = _echelon(aug, self.field, full=True)
        self._solution_rows = []  # (pivot col, pivot entry, E-row)
        self._conditions = []
        for c, r in piv.items():
            e_row = {k - ncols: v for k, v in r.items() if k >= ncols}
            if c < ncols:
                # free variables are set to zero
                self._solution_rows.append((c, r[c], e_row))
            else:
                self._conditions.append(e_row)
        self.rank = len(self._solution_rows)

    def solve(self, b: Sequence):
        if len(b) != self.nrows:
            raise ValueError("right-hand side length must equal the number of rows")
        for cond in self._conditions:
            s = Fraction(0)
            for k, v in cond.items():
                if b[k] != 0:
                    s = s + v * b[k]
            if s != 0:
                return None
        x: list = [Fraction(0)] * self.ncols
        for c, p, e_row in self._solution_rows:
            s = Fraction(0)
            for k, v in e_row.items():
                if b[k] != 0:
                    s = s + v * b[k]
            if s != 0:
                x[c] = s / p
        return x


class RowReducer:
    """Incrementally maintained row space; ``add`` reports whether a row was new."""

    def __init__(self, rows: Iterable[dict] = ()):
        self._piv: dict = {}
        for r in rows:
            self.add(r)

    @property
    def rank(self) -> int:
        return len(self._piv)

    def reduce(self, row: dict) -> dict:
        r = {k: v for k, v in row.items() if v != 0}
        while r:
            c = min(r)
            prow = self._piv.get(c)
            if prow is None:
                break
            r = _backend.combine_field(r, prow, c)
        return r

    def add(self, row: dict) -> bool:
        r = self.reduce(row)
        if not r:
            return False
        self._piv[min(r)] = _backend.normalize_field(r)
        return True

    def contains(self, row: dict) -> bool:
        # full reduction: later pivots may sit to the right of the current lead
        r = {k: v for k, v in row.items() if v != 0}
        for c in sorted(self._piv):
            if c in r:
                r = _backend.combine_field(r, self._piv[c], c)
        return not r
