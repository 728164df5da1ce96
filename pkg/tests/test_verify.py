import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from twistcyc import verify
from twistcyc.exactfield import ExactMatrix, Field
from twistcyc.geometry import RationalQuadraticForm, _is_positive_definite
from twistcyc.schur import pair_invariants, tau

small = st.integers(-3, 3).map(Fraction)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=2, max_size=2),
       st.sampled_from([(1,), (2,), (1, 1), (2, 1)]))
def test_oracle_tau_matches_production_over_quadratic_field(x, mu):
    f = RationalQuadraticForm(3, 2)
    if sum(1 for b in mu if b) > len(x):
        return
    assert tau(x, mu, f.space).coeffs == verify.oracle_tau(x, mu, f.gram)


@settings(max_examples=40)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_minor_test_agrees_with_elimination(rows):
    a = ExactMatrix.from_rows(rows)
    g = a.transpose() @ ExactMatrix.diagonal([1, 1, Fraction(-1, 2)]) @ a
    assert verify.leading_minors_positive(g) == _is_positive_definite(g)


def test_minor_test_in_quadratic_field():
    F = Field(2)
    r = F.gen()
    g = ExactMatrix.from_rows([[1, 0], [0, 2 - r]], F)
    assert verify.leading_minors_positive(g, 1)
    g2 = ExactMatrix.from_rows([[1, 0], [0, 1 - r]], F)
    assert not verify.leading_minors_positive(g2, 1)
    assert verify.leading_minors_positive(g2, -1)


def test_span_dimension():
    assert verify.span_dimension_is([[1, 0, 0], [0, 1, 0]], 2)
    assert not verify.span_dimension_is([[1, 0, 0], [2, 0, 0]], 2)
    assert not verify.span_dimension_is([[1, 0, 0]], 2)


def test_oracle_pairing_values():
    f = RationalQuadraticForm(4, 2)
    e = [[int(i == j) for i in range(5)] for j in range(2)]
    y = [[1, 1, 0, 0, 0], [0, 1, 1, 0, 0]]
    for mu in [(1, 0), (1, 1), (2, 1)]:
        assert verify.oracle_pairing(e, y, mu, f.gram) == pair_invariants(e, y, mu, f.space)
    assert verify.oracle_pairing(e, y, (0, 0), f.gram) == 1
