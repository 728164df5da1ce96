from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from twistcyc.exactfield import (QQ, QQ_I, ExactMatrix, Field, FieldMismatch, LinearSolver, RowReducer,
                                 format_scalar, parse_scalar, sign, sparse_kernel, sparse_rank, sparse_solve)
from twistcyc.exactfield import _backend
from twistcyc.exactfield._elim_py import echelon_int as echelon_py
from twistcyc.exactfield.linalg import mat_vec

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
SQ2 = Field(2)


def elem(field):
    return st.builds(lambda a, b: field.element(a, b), rationals, rationals)


@given(elem(QQ_I), elem(QQ_I), elem(QQ_I))
def test_gaussian_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    if a != 0:
        assert a * (1 / a) == 1


@given(elem(SQ2), elem(SQ2))
def test_quadratic_field_mul_inverse(a, b):
    if b != 0:
        assert (a / b) * b == a
    assert a - a == 0


@given(elem(QQ_I))
def test_format_parse_roundtrip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(elem(Field(5)))
def test_format_parse_roundtrip_sqrt(x):
    assert parse_scalar(format_scalar(x)) == x


def test_format_examples():
    assert format_scalar(Fraction(3, 2)) == "3/2"
    assert format_scalar(QQ_I.element(Fraction(1, 2), 3)) == "1/2+3*i"
    assert format_scalar(Field(5).element(-1, 2)) == "-1+2*sqrt(5)"


def test_mixing_fields_rejected():
    with pytest.raises(FieldMismatch):
        QQ_I.gen() + SQ2.gen()
    with pytest.raises(ValueError):
        Field(4)


def test_sign_at_both_embeddings():
    r = SQ2.gen()
    x = 1 - r
    assert sign(x, 1) == -1 and sign(x, -1) == 1
    assert sign(Fraction(0)) == 0


def test_sign_of_close_value():
    # 99/70 is a continued-fraction convergent of sqrt 2, just above it
    x = Fraction(99, 70) - SQ2.gen()
    assert sign(x) == 1
    y = Fraction(140, 99) - SQ2.gen()
    assert sign(y) == -1


def test_matrix_inverse_and_det():
    m = ExactMatrix.from_rows([[2, 1], [1, 1]])
    assert m.det() == 1
    assert m @ m.inverse() == ExactMatrix.identity(2)
    g = ExactMatrix.from_rows([[1, QQ_I.gen()], [0, 2]])
    assert g @ g.inverse() == ExactMatrix.identity(2, QQ_I)


int_rows = st.lists(st.dictionaries(st.integers(0, 7), st.integers(-5, 5), max_size=5), max_size=8)


@given(int_rows)
def test_backends_agree(rows):
    a = echelon_py([dict(r) for r in rows], full=True)
    b = _backend.echelon_int([dict(r) for r in rows], full=True)
    clean = lambda p: {c: {k: v for k, v in r.items() if v} for c, r in p.items()}
    assert clean(a) == clean(b)


@given(int_rows)
def test_kernel_vectors_are_killed(rows):
    rows = [{k: Fraction(v) for k, v in r.items() if v} for r in rows]
    ker = sparse_kernel(rows, 8)
    assert len(ker) == 8 - sparse_rank(rows)
    for v in ker:
        assert all(x == 0 for x in mat_vec(rows, v))


@settings(max_examples=50)
@given(int_rows, st.lists(st.integers(-3, 3), min_size=8, max_size=8))
def test_linear_solver_matches_sparse_solve(rows, x0):
    rows = [{k: Fraction(v) for k, v in r.items() if v} for r in rows]
    b = mat_vec(rows, [Fraction(v) for v in x0]) if rows else []
    s = LinearSolver(rows, 8)
    x = s.solve(b)
    assert x is not None
    assert mat_vec(rows, x) == list(b)
    y = sparse_solve(rows, 8, b)
    assert mat_vec(rows, y) == list(b)


def test_solver_detects_inconsistency():
    rows = [{0: Fraction(1)}, {0: Fraction(2)}]
    assert LinearSolver(rows, 1).solve([1, 1]) is None
    assert sparse_solve(rows, 1, [1, 1]) is None


def test_solver_over_gaussian_field():
    i = QQ_I.gen()
    rows = [{0: i, 1: Fraction(1)}, {1: 1 + i}]
    x = LinearSolver(rows, 2, QQ_I).solve([1, 2])
    assert mat_vec(rows, x) == [1, 2]


@given(int_rows)
def test_row_reducer_rank(rows):
    rows = [{k: Fraction(v) for k, v in r.items() if v} for r in rows]
    rr = RowReducer()
    for r in rows:
        rr.add(r)
    assert rr.rank == sparse_rank(rows)
    for r in rows:
        assert rr.contains(r)
