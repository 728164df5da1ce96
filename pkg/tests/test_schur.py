from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from twistcyc import verify
from twistcyc.exactfield import QQ, QQ_I, ExactMatrix
from twistcyc.geometry import PositiveSubspace, RationalQuadraticForm, sample_pointwise_stabilizer
from twistcyc.schur import (InadmissibleTuple, NotAnIsometry, QuadraticSpace, StandardTableau, Tensor,
                            bilinear_pair, col_antisymmetrize, column_group_order, contract,
                            harmonic_project, insert, invariance_check, is_harmonic, pair_invariants,
                            row_symmetrize, schur_module_nonzero, sym_act, tau, torus_element, witt_basis,
                            witt_u)

LOR3 = QuadraticSpace.diagonal([1, 1, 1, -1])
SKEW = QuadraticSpace(ExactMatrix.from_rows([[2, 1, 0], [1, 1, 0], [0, 0, -1]]), QQ)
small = st.integers(-2, 2)


def tensors(space, d):
    keys = list(product(range(space.dim), repeat=d))
    return st.dictionaries(st.sampled_from(keys), small.map(Fraction), max_size=6).map(
        lambda c: Tensor(space, d, c))


@given(tensors(SKEW, 3), tensors(SKEW, 1), st.sampled_from([(1, 2), (1, 3), (2, 3)]))
def test_insert_is_adjoint_of_contract(t, s, I):
    assert bilinear_pair(contract(t, I), s) == bilinear_pair(t, insert(s, I))


@settings(max_examples=30, deadline=None)
@given(tensors(LOR3, 3))
def test_harmonic_projection(t):
    h = harmonic_project(t)
    assert is_harmonic(h)
    assert harmonic_project(h) == h
    assert bilinear_pair(h, t - h) == 0


@settings(max_examples=20, deadline=None)
@given(tensors(SKEW, 2))
def test_harmonic_projection_nondiagonal_form(t):
    h = harmonic_project(t)
    assert is_harmonic(h)
    assert h == verify_harmonic(t)


def verify_harmonic(t):
    coeffs = verify.harmonic_part(t.coeffs, t.space.gram)
    return Tensor(t.space, t.degree, coeffs)


@given(tensors(LOR3, 3), st.sampled_from([(2, 1), (1, 1, 1), (3,)]))
def test_young_symmetrizers_are_idempotent(t, mu):
    T = StandardTableau(mu)
    p = row_symmetrize(T, t)
    assert row_symmetrize(T, p) == p
    q = col_antisymmetrize(T, t)
    assert col_antisymmetrize(T, q) == q


def test_tableau_shape():
    T = StandardTableau((2, 1))
    assert T.rows == [[0, 1], [2]] and T.columns == [[0, 2], [1]]
    assert T.conjugate() == (2, 1)
    assert column_group_order((2, 1)) == 2
    assert column_group_order((1, 1, 1)) == 6


def test_sym_act_moves_slots():
    t = Tensor(LOR3, 3, {(0, 1, 2): Fraction(1)})
    assert sym_act((1, 2, 0), t).coeffs == {(2, 0, 1): 1}


def test_pairing_examples():
    for n in (2, 3, 4):
        sp = QuadraticSpace.diagonal([1] * n + [-1], QQ_I)
        e1 = [[int(i == 0) for i in range(n + 1)]]
        assert pair_invariants(e1, witt_u(sp, n, 1), (1,), sp) == 1
    sp = QuadraticSpace.diagonal([1, 1, 1, 1, -1], QQ_I)
    e = [[int(i == j) for i in range(5)] for j in range(2)]
    assert pair_invariants(e, witt_u(sp, 4, 2), (1, 1), sp) == Fraction(1, 2)


def test_witt_basis_is_isotropic():
    n = 5
    sp = QuadraticSpace.diagonal([1] * n + [-1], QQ_I)
    basis = witt_basis(sp, n)
    m = 3
    us, vs = basis[:m], basis[m:][::-1]
    for a in us:
        for b in us:
            assert sp.form(a.coords(), b.coords()) == 0
    for i, a in enumerate(us):
        for j, b in enumerate(vs):
            assert (sp.form(a.coords(), b.coords()) != 0) == (i == j)


def test_inadmissible_tuple():
    with pytest.raises(InadmissibleTuple):
        tau([[1, 0, 0, 0]], (1, 1), LOR3)


def test_tau_matches_oracle():
    sp = QuadraticSpace.diagonal([1, 1, 1, 1, -1], QQ)
    x = [[1, 0, 0, 0, 0], [Fraction(1, 2), 1, 0, 0, 1]]
    for mu in [(1,), (2,), (1, 1), (2, 1), (3,)]:
        t = tau(x, mu, sp)
        assert t.coeffs == verify.oracle_tau(x, mu, sp.gram)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_tau_is_equivariant(seed):
    f = RationalQuadraticForm(3, 2)
    X = PositiveSubspace.coordinate(f, 1)
    g = sample_pointwise_stabilizer(X, seed)
    x = [[1, 1, 0, 0], [0, 1, 2, 0]]
    gx = [g.apply(v) for v in x]
    mu = (2, 1)
    assert tau(gx, mu, f.space) == tau(x, mu, f.space).act(g)


def test_torus_element_scales_weight_vectors():
    n = 4
    sp = QuadraticSpace.diagonal([1] * n + [-1], QQ_I)
    g = torus_element(n, [2, Fraction(1, 3)])
    assert sp.is_isometry(g)
    u = witt_u(sp, n)
    t = tau(u, (2, 1), sp)
    assert t.act(g) == t * (Fraction(2) ** 2 * Fraction(1, 3))


def test_invariance_check_rejects_non_isometry():
    t = Tensor(LOR3, 1, {(0,): Fraction(1)})
    with pytest.raises(NotAnIsometry):
        invariance_check(t, ExactMatrix.diagonal([2, 1, 1, 1]))


def test_schur_module_nonzero():
    assert schur_module_nonzero((1, 1, 1), 3)
    assert not schur_module_nonzero((1, 1, 1, 1), 3)
    assert not schur_module_nonzero((2, 2), 3)
