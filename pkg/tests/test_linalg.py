from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st
from sympy.polys.domains import GF as SymGF
from sympy.polys.matrices import DomainMatrix

from lyat.fields import GF, QQ
from lyat.linalg import (
    ShapeError,
    Subspace,
    complement,
    image,
    inverse,
    is_direct_sum,
    kernel,
    nonmembers,
    nullspace,
    rank,
    rref,
    solve,
    subspace_contains,
    subspace_equal,
    subspace_intersect,
    subspace_sum,
)

small_q = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def rational_matrices(draw, max_rows=5, max_cols=6):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    # mix of sparse and dense rows so that rank deficiency is common
    entries = draw(st.lists(st.one_of(st.just(Fraction(0)), small_q), min_size=r * c, max_size=r * c))
    return np.array(entries, dtype=object).reshape(r, c) if r else np.zeros((0, c), dtype=object)


@st.composite
def prime_matrices(draw, p):
    r = draw(st.integers(1, 5))
    c = draw(st.integers(1, 6))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(entries, dtype=np.int64).reshape(r, c)


def _sym(m):
    return sp.Matrix(m.shape[0], m.shape[1], [sp.Rational(str(x)) for x in m.ravel()])


def test_rref_examples():
    R, piv = rref([[2, 4], [1, 2]])
    assert R.tolist() == [[1, 2]] and piv == [0]
    R, piv = rref(np.eye(3, dtype=int))
    assert np.array_equal(R, np.eye(3, dtype=int)) and piv == [0, 1, 2]
    R, piv = rref([[1, 1], [1, 0]], GF(2))
    assert R.tolist() == [[1, 0], [0, 1]]


def test_nullspace_examples():
    assert nullspace(np.zeros((2, 3), dtype=int)).dim == 3
    assert nullspace(np.eye(3, dtype=int)).dim == 0
    N = nullspace([[1, 1, 0]])
    assert N.dim == 2
    assert [1, -1, 0] in N and [0, 0, 1] in N


def test_solve_examples():
    b = QQ.array([3, Fraction(1, 2), -1])
    assert np.array_equal(solve(np.eye(3, dtype=int), b), b)
    # free variable set to zero
    assert solve([[1, 1]], [2]).tolist() == [2, 0]
    assert solve([[1, 0], [1, 0]], [1, 2]) is None
    with pytest.raises(ShapeError):
        solve([[1, 1]], [1, 2])


def test_subspace_examples():
    u = Subspace.span([[1, 2, 3], [0, 1, 1]], QQ, 3)
    z = Subspace.zero(QQ, 3)
    assert subspace_equal(subspace_intersect(u, u), u)
    assert subspace_equal(subspace_sum(u, z), u)
    e1, e2 = Subspace.span([[1, 0]], QQ, 2), Subspace.span([[0, 1]], QQ, 2)
    assert is_direct_sum(e1, e2) and subspace_sum(e1, e2).dim == 2
    with pytest.raises(ShapeError):
        subspace_sum(u, Subspace.zero(QQ, 2))


def test_complement_examples():
    assert complement(Subspace.zero(QQ, 3)).dim == 3
    assert complement(Subspace.full(QQ, 3)).dim == 0
    c = complement(Subspace.span([[1, 1]], QQ, 2))
    assert c.basis.tolist() == [[0, 1]]


@given(rational_matrices())
def test_rref_matches_sympy(m):
    R, piv = rref(m)
    S, spiv = _sym(m).rref() if m.shape[0] else (sp.zeros(0, m.shape[1]), ())
    assert list(piv) == list(spiv)
    assert _sym(np.asarray(R).reshape(len(piv), m.shape[1])) == S[: len(spiv), :]


@given(rational_matrices())
def test_rref_idempotent_and_rank(m):
    R, piv = rref(m)
    R2, piv2 = rref(R) if len(piv) else (R, [])
    assert list(piv2) == list(piv)
    assert np.array_equal(np.asarray(R2), np.asarray(R))
    assert rank(m) == len(piv) == (_sym(m).rank() if m.shape[0] else 0)


@given(rational_matrices())
def test_nullspace_annihilated_and_dimension(m):
    N = nullspace(m)
    assert N.dim == m.shape[1] - rank(m)
    for v in N.basis:
        assert not np.any(QQ.matmul(m, v) != 0) if m.shape[0] else True


@pytest.mark.parametrize("p", [5, 7, 2_147_483_647])
def test_prime_field_rank_matches_sympy(p):
    rng = np.random.default_rng(p % 1000)
    for _ in range(60):
        r, c = rng.integers(1, 6, size=2)
        m = rng.integers(0, min(p, 50), size=(r, c)) % p
        if rng.random() < 0.5 and r > 1:
            m[-1] = (m[0] * 2) % p
        dm = DomainMatrix([[SymGF(p)(int(x)) for x in row] for row in m], (int(r), int(c)), SymGF(p))
        R_s, piv_s = dm.rref()
        R, piv = rref(m, GF(p))
        assert list(piv) == list(piv_s)
        ours = np.asarray(R).reshape(len(piv), c) % p
        theirs = np.array([[int(x) % p for x in row] for row in R_s.to_Matrix().tolist()[: len(piv_s)]], dtype=np.int64)
        assert np.array_equal(ours, theirs.reshape(len(piv), c))


@given(prime_matrices(7))
def test_prime_field_nullspace(m):
    F = GF(7)
    N = nullspace(m, F)
    assert N.dim == m.shape[1] - rank(m, F)
    for v in N.basis:
        assert not np.any(F.matmul(m, v) != 0)


@st.composite
def subspace_pairs(draw):
    amb = draw(st.integers(1, 5))
    def sub():
        k = draw(st.integers(0, 4))
        vals = draw(st.lists(st.integers(-2, 2), min_size=k * amb, max_size=k * amb))
        return Subspace.span(np.array(vals, dtype=np.int64).reshape(k, amb), QQ, amb)
    return sub(), sub()


@given(subspace_pairs())
def test_grassmann_identity(pair):
    u, w = pair
    assert subspace_sum(u, w).dim + subspace_intersect(u, w).dim == u.dim + w.dim
    I = subspace_intersect(u, w)
    for v in I.basis:
        assert subspace_contains(u, v) and subspace_contains(w, v)


@given(subspace_pairs())
def test_complement_is_direct_and_spanning(pair):
    u, _ = pair
    for rev in (False, True):
        c = complement(u, reverse=rev)
        assert u.dim + c.dim == u.ambient_dim
        assert is_direct_sum(u, c)
        assert subspace_sum(u, c).is_full()


@given(subspace_pairs())
def test_subspace_basis_is_canonical_rref(pair):
    u, w = pair
    B = u.basis
    if u.dim:
        R, piv = rref(B)
        assert np.array_equal(R, B)
        assert list(piv) == sorted(piv) and list(piv) == list(u.pivots)
    s = subspace_sum(u, w)
    assert subspace_equal(s, subspace_sum(w, u))
    assert np.array_equal(s.basis, subspace_sum(w, u).basis)


@given(subspace_pairs())
def test_nonmembers_agrees_with_containment(pair):
    u, w = pair
    vecs = np.concatenate([u.basis, w.basis]) if u.dim + w.dim else np.zeros((0, u.ambient_dim), dtype=object)
    bad = set(nonmembers(u, vecs).tolist())
    for i, v in enumerate(vecs):
        assert (i in bad) == (not subspace_contains(u, v))


def test_image_kernel_inverse():
    m = [[1, 2], [2, 4]]
    assert image(m).dim == 1 and kernel(m).dim == 1
    a = QQ.array([[2, 1], [Fraction(1, 3), 1]])
    inv = inverse(a)
    assert np.array_equal(QQ.matmul(a, inv), QQ.eye(2))
    with pytest.raises(ZeroDivisionError):
        inverse(m)


def test_large_entries_stay_exact():
    # entries beyond int64 force the object path
    big = 3**50
    m = np.array([[big, 1], [big + 1, 1]], dtype=object)
    assert rank(m) == 2
    assert solve(m, [1, 1]) is not None
    assert nullspace(np.array([[big, big]], dtype=object)).basis.tolist() == [[1, -1]]


@pytest.mark.parametrize("fld", [QQ, GF(7), GF(5)], ids=repr)
def test_rref_idempotent_thousand_random(fld):
    rng = np.random.default_rng(1000)
    for _ in range(1000):
        r, c = rng.integers(1, 5, size=2)
        m = rng.integers(-3, 4, size=(r, c))
        R, piv = rref(m, fld)
        if not piv:
            assert not np.any(fld.array(m) != 0)
            continue
        R2, piv2 = rref(R, fld)
        assert piv2 == piv and np.array_equal(R2, R)
        # row space preserved: every original row is a combination of R's rows
        assert not nonmembers(Subspace.span(R, fld, c), m).size
