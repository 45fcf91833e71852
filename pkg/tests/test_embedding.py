import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lyat.algebra import AxiomError, abelian, center, check_axioms, derived_algebra
from lyat.audits import FAIL, PASS, UNMET
from lyat.catalog import example_2_9, example_2_10, random_ly_algebra
from lyat.derivations import operator_space, qder, satisfies
from lyat.embedding import (
    build_check,
    phi,
    phi_image,
    phi_of,
    rechoose_complements,
    sample_zder_construction,
    verify_phi,
    verify_der_decomposition,
)
from lyat.fields import QQ
from lyat.linalg import Subspace, subspace_equal

from oracles import axiom_failures, oracle_space, oracle_zder, to_sympy


def _status(results, prefix):
    return [r.status for r in results if r.name.startswith(prefix)]


@pytest.fixture(scope="module")
def ca29():
    return build_check(example_2_9(strict=False))


def test_abelian_base_gives_abelian_check():
    CA = build_check(abelian(2))
    assert CA.total.n == 6 and CA.total.is_abelian()
    assert CA.grading == (1, 1, 2, 2, 3, 3)
    assert all(r.status == PASS for r in verify_phi(CA))
    assert _status(verify_der_decomposition(CA), "Der(check) =") == [UNMET]


def test_example_2_9_check_products(ca29):
    T = ca29.total
    xt, yt = 0, 1
    # [xt, yt] = y t^2 and {xt, yt, yt} = y t^3
    assert T.c[xt, yt].tolist() == [0, 0, 0, 1, 0, 0]
    assert T.d[xt, yt, yt].tolist() == [0, 0, 0, 0, 0, 1]
    # nothing else is nonzero
    assert sum(1 for v in T.c.ravel() if v != 0) == 2
    assert sum(1 for v in T.d.ravel() if v != 0) == 2
    assert check_axioms(T).ok and axiom_failures(T) == set()


def test_grading_rules():
    A = random_ly_algebra(np.random.default_rng(4), max_dim=3)
    CA = build_check(A, strict=False)
    deg = CA.grading
    T = CA.total
    for i, j, k in zip(*np.nonzero(T.c != 0)):
        assert deg[i] + deg[j] == 2 and deg[k] == 2
    for i, j, k, l in zip(*np.nonzero(T.d != 0)):
        assert deg[i] + deg[j] + deg[k] == 3 and deg[l] == 3
    # degree-two elements bracket to zero
    n = A.n
    assert not np.any(T.c[n : 2 * n, n : 2 * n] != 0)


def test_derived_algebra_of_check_is_graded(ca29):
    n = ca29.n
    D = derived_algebra(ca29.total)
    assert subspace_equal(D, Subspace.span([[0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 0, 1]], QQ, 3 * n))


def test_phi_examples(ca29):
    n = 2
    Z = np.zeros((n, n), dtype=int)
    assert not np.any(phi(ca29, Z, Z, Z).matrix != 0)
    I = np.eye(n, dtype=int)
    M = phi(ca29, I, 2 * I, 3 * I).matrix
    e = np.eye(3 * n, dtype=int)
    # identity on Tt
    assert np.array_equal(M[:, :n], e[:, :n])
    # [T,T] = span{y}, U = span{x}: 2 on y t^2, 0 on x t^2
    assert QQ.matmul(M, e[3]).tolist() == (2 * e[3]).tolist()
    assert not np.any(QQ.matmul(M, e[2]) != 0)
    assert QQ.matmul(M, e[5]).tolist() == (3 * e[5]).tolist()
    assert not np.any(QQ.matmul(M, e[4]) != 0)
    with pytest.raises(ValueError):
        phi(ca29, I, I, I)


def test_phi_of_quasi_derivation_in_der_check(ca29):
    D = np.array([[0, 1], [0, 0]])
    P = phi_of(ca29, D)
    assert np.array_equal(P.matrix[:2, :2], QQ.array(D))
    assert satisfies(ca29.total, "der", P.matrix)


def test_phi_and_decomposition_on_example_2_9(ca29):
    assert all(r.status == PASS for r in verify_phi(ca29))
    res = verify_der_decomposition(ca29, np.random.default_rng(0))
    assert all(r.status == PASS for r in res), res
    dims = next(r for r in res if r.name.startswith("Der(check) =")).data
    for choice in ("pivot", "reversed"):
        assert dims[choice] == {"der_check": 19, "qder": 3, "zder_check": 16, "phi_image": 3}


def test_check_spaces_against_independent_oracle(ca29):
    T = ca29.total
    der_o = oracle_space(T, "der")
    zder_o = oracle_zder(T)
    assert der_o.rows == 19 and zder_o.rows == 16
    assert to_sympy(QQ, operator_space(T, "der").space.basis, 36) == der_o
    assert to_sympy(QQ, operator_space(T, "zder").space.basis, 36) == zder_o
    assert der_o.rows == qder(ca29.base).dim + zder_o.rows


def test_center_of_check_for_centerless_base(ca29):
    n = ca29.n
    Z = center(ca29.total)
    assert subspace_equal(Z, Subspace.span(np.eye(3 * n, dtype=int)[n:], QQ, 3 * n))


def test_complement_choice_does_not_change_image(ca29):
    other = rechoose_complements(ca29)
    assert phi_image(other).dim == phi_image(ca29).dim
    assert phi_image(other).dim == qder(ca29.base).dim


def test_zder_sampling(ca29):
    assert sample_zder_construction(ca29, np.random.default_rng(1), samples=5)


def test_strict_construction_and_example_2_10():
    A = example_2_10(strict=False)
    with pytest.raises(AxiomError):
        build_check(A)
    CA = build_check(A, strict=False)
    assert not CA.report.ok
    assert all(r.status == PASS for r in verify_phi(CA))


@settings(max_examples=12)
@given(st.integers(0, 100_000))
def test_embedding_statements_on_random_algebras(seed):
    A = random_ly_algebra(np.random.default_rng(seed), max_dim=3)
    CA = build_check(A, strict=False)
    assert all(r.status != FAIL for r in verify_phi(CA))
    assert all(r.status != FAIL for r in verify_der_decomposition(CA, np.random.default_rng(seed)))
