from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from lyat.algebra import (
    AxiomError,
    LeibnizError,
    StructureError,
    abelian,
    bracket,
    center,
    centralizer,
    check_axioms,
    derived_algebra,
    from_leibniz,
    from_products,
    image_of,
    is_ideal,
    is_left_leibniz,
    kernel_of,
    left_multiplication,
    perturb,
    require_axioms,
    triple,
)
from lyat.catalog import catalog, example_2_9, example_2_10, random_leibniz_table, random_ly_algebra
from lyat.derivations import centroid, satisfies
from lyat.fields import GF, QQ, CharacteristicError
from lyat.linalg import ShapeError, Subspace, subspace_equal

from oracles import axiom_failures, oracle_center, oracle_derived, to_sympy

X, Y = [1, 0], [0, 1]


def test_example_2_9_products():
    A = example_2_9(strict=False)
    assert A.n == 2
    assert bracket(A, X, Y).tolist() == Y
    assert bracket(A, Y, X).tolist() == [0, -1]
    nonzero_pairs = {(i, j) for i in range(2) for j in range(2) if i < j and np.any(A.c[i, j] != 0)}
    assert nonzero_pairs == {(0, 1)}
    assert triple(A, X, Y, Y).tolist() == Y


def test_example_2_10_products():
    A = example_2_10(strict=False)
    e = np.eye(6, dtype=int)
    assert A.n == 6
    assert triple(A, e[3], e[1], e[1]).tolist() == e[5].tolist()
    # L(x0, x1) sends x0 to x1
    L = left_multiplication(A, e[0], e[1])
    assert L[:, 0].tolist() == e[1].tolist()


def test_bracket_alternating_on_random_vectors(cat):
    rng = np.random.default_rng(0)
    for A in cat.values():
        v = rng.integers(-3, 4, size=A.n)
        assert not np.any(bracket(A, v, v) != 0)
        assert not np.any(triple(A, v, v, rng.integers(-3, 4, size=A.n)) != 0)


def test_multilinearity():
    A = example_2_10(strict=False)
    rng = np.random.default_rng(1)
    x, y, z, w = (QQ.array(rng.integers(-3, 4, size=6)) for _ in range(4))
    a, b = Fraction(2, 3), Fraction(-5, 2)
    lhs = triple(A, x, QQ.array(a * y + b * w), z)
    rhs = QQ.array(a * triple(A, x, y, z) + b * triple(A, x, w, z))
    assert np.array_equal(lhs, rhs)
    assert np.array_equal(bracket(A, QQ.array(a * x + b * w), y), QQ.array(a * bracket(A, x, y) + b * bracket(A, w, y)))


def test_dimension_mismatch():
    with pytest.raises(ShapeError):
        bracket(example_2_9(strict=False), [1, 0, 0], [0, 1])


def test_abelian_passes_axioms():
    for n in range(1, 5):
        assert check_axioms(abelian(n)).ok


def test_example_tables_fail_axioms_against_oracle():
    # zero-completed tables are not LY-algebras; the independent evaluator agrees
    A9 = example_2_9(strict=False)
    rep = check_axioms(A9)
    assert {c.axiom for c in rep.failures()} == axiom_failures(A9) == {"LY6"}
    ch = rep["LY6"]
    assert ch.counterexample == (0, 1, 0, 1, 1)
    assert ch.defect.tolist() == [0, -1]
    A10 = example_2_10(strict=False)
    assert {c.axiom for c in check_axioms(A10).failures()} == axiom_failures(A10) == {"LY3", "LY4", "LY5", "LY6"}
    with pytest.raises(AxiomError):
        example_2_9()
    with pytest.raises(AxiomError):
        example_2_10()
    with pytest.raises(AxiomError):
        require_axioms(A9)


def test_axiom_checker_agrees_with_oracle_on_random_tables():
    rng = np.random.default_rng(7)
    for _ in range(12):
        n = int(rng.integers(2, 4))
        brackets = {(0, 1): rng.integers(-1, 2, size=n)}
        triples = {(0, 1, int(rng.integers(n))): rng.integers(-1, 2, size=n), (0, n - 1, 0): rng.integers(-1, 2, size=n)}
        A = from_products(QQ, [f"e{i}" for i in range(n)], brackets, triples)
        assert {c.axiom for c in check_axioms(A).failures()} == axiom_failures(A)


def test_from_products_rejects_bad_tables():
    with pytest.raises(StructureError):
        from_products(QQ, ["a", "b"], brackets={(0, 0): [0, 1]})
    with pytest.raises(StructureError):
        from_products(QQ, ["a", "b"], triples={(1, 1, 0): [1, 0]})
    with pytest.raises(StructureError):
        from_products(QQ, ["a", "b"], brackets={(0, 1): [0, 1], (1, 0): [0, 1]})
    # consistent double listing is accepted
    A = from_products(QQ, ["a", "b"], brackets={(0, 1): [0, 1], (1, 0): [0, -1]})
    assert A.c[1, 0].tolist() == [0, -1]


def test_structure_tensor_invariants_enforced():
    from lyat.algebra import LYAlgebra

    c = QQ.zeros((2, 2, 2))
    c[0, 1, 1] = QQ.scalar(1)
    with pytest.raises(StructureError):
        LYAlgebra(QQ, c, QQ.zeros((2, 2, 2, 2)))


def test_derived_algebra_against_oracle(cat, random_algebras):
    for A in list(cat.values()) + random_algebras:
        D = derived_algebra(A)
        assert to_sympy(QQ, D.basis, A.n) == oracle_derived(A)
        assert is_ideal(A, D)
    assert derived_algebra(abelian(3)).dim == 0
    A10 = example_2_10(strict=False)
    assert subspace_equal(derived_algebra(A10), Subspace.span(np.eye(6, dtype=int)[[1, 3, 5]], QQ, 6))
    assert derived_algebra(example_2_9(strict=False)).basis.tolist() == [[0, 1]]


def test_center_against_oracle(cat, random_algebras):
    for A in list(cat.values()) + random_algebras:
        Z = center(A)
        assert to_sympy(QQ, Z.basis, A.n) == oracle_center(A)
        for z in Z.basis:
            for i in range(A.n):
                e = np.eye(A.n, dtype=int)[i]
                assert not np.any(bracket(A, z, e) != 0)
                for k in range(A.n):
                    f = np.eye(A.n, dtype=int)[k]
                    assert not np.any(triple(A, z, e, f) != 0)
                    assert not np.any(triple(A, f, e, z) != 0)
    assert center(abelian(3)).dim == 3
    assert center(example_2_9(strict=False)).dim == 0


def test_centralizer_of_zero_keeps_bracket_condition():
    assert centralizer(abelian(3), Subspace.zero(QQ, 3)).dim == 3
    A = example_2_9(strict=False)
    assert centralizer(A, Subspace.zero(QQ, 2)).dim == 0
    assert subspace_equal(centralizer(A, Subspace.full(QQ, 2)), center(A))


def test_ideals():
    A = example_2_9(strict=False)
    assert is_ideal(A, Subspace.zero(QQ, 2)) and is_ideal(A, Subspace.full(QQ, 2))
    assert not is_ideal(A, Subspace.span([[1, 0]], QQ, 2))
    assert is_ideal(A, Subspace.span([[0, 1]], QQ, 2))


def test_left_multiplication():
    assert not np.any(left_multiplication(abelian(3), [1, 2, 3], [0, 1, 0]) != 0)
    A = example_2_10(strict=False)
    e = np.eye(6, dtype=int)
    for i in range(6):
        assert not np.any(left_multiplication(A, e[i], e[i]) != 0)


def test_left_multiplications_are_derivations(random_algebras):
    for A in random_algebras:
        e = np.eye(A.n, dtype=int)
        for i in range(A.n):
            for j in range(A.n):
                assert satisfies(A, "der", left_multiplication(A, e[i], e[j]))


def test_from_leibniz_examples():
    assert from_leibniz(np.zeros((3, 3, 3), dtype=int)).is_abelian()
    # 2-dim: e1.e1 = e2
    p = np.zeros((2, 2, 2), dtype=int)
    p[0, 0, 1] = 1
    A = from_leibniz(p)
    assert not np.any(A.c != 0)
    assert check_axioms(A).ok
    # sl2 Lie table: bracket equals the product, triple is -1/4 (x.y).z
    e, f, h = range(3)
    q = np.zeros((3, 3, 3), dtype=int)
    for a, b, k, v in ((h, e, e, 2), (h, f, f, -2), (e, f, h, 1)):
        q[a, b, k] += v
        q[b, a, k] -= v
    L = from_leibniz(q)
    assert np.array_equal(L.c, QQ.array(q))
    # (h.e).f = 2 e.f = 2h
    assert L.d[h, e, f].tolist() == [0, 0, Fraction(-1, 2)]
    assert check_axioms(L).ok


def test_from_leibniz_errors():
    p = np.zeros((2, 2, 2), dtype=int)
    p[0, 1, 0] = 1
    p[1, 0, 1] = 1
    assert not is_left_leibniz(p)
    with pytest.raises(LeibnizError):
        from_leibniz(p)
    with pytest.raises(CharacteristicError):
        from_leibniz(np.zeros((2, 2, 2), dtype=int), GF(2))


@given(st.integers(0, 10_000))
def test_from_leibniz_output_passes_axioms(seed):
    rng = np.random.default_rng(seed)
    p, desc = random_leibniz_table(rng, max_dim=4)
    assert is_left_leibniz(p)
    A = from_leibniz(p)
    assert check_axioms(A).ok, desc


def test_random_algebras_pass_oracle_axioms(random_algebras):
    for A in random_algebras[:6]:
        assert axiom_failures(A) == set()


def test_perturb_examples(cat):
    A = example_2_9(strict=False)
    P = perturb(A, np.eye(2, dtype=int))
    assert np.array_equal(P.c, A.c) and np.array_equal(P.d, A.d)
    assert perturb(A, np.zeros((2, 2), dtype=int)).is_abelian()
    with pytest.raises(ShapeError):
        perturb(A, np.eye(3, dtype=int))


def test_perturb_by_nonsingular_centroid_stays_ly(random_algebras):
    for A in random_algebras:
        for c in centroid(A).maps():
            f = QQ.array(c + 3 * np.eye(A.n, dtype=int))
            if sp.Matrix(f.tolist()).det() != 0:
                assert check_axioms(perturb(A, f)).ok


def test_kernel_image_of_maps():
    A = abelian(3)
    assert kernel_of(A, np.eye(3, dtype=int)).dim == 0
    assert image_of(A, np.zeros((3, 3), dtype=int)).dim == 0


def test_prime_field_algebra():
    A = example_2_9(strict=False, fld=GF(7))
    assert A.c[0, 1, 1] == 1 and A.c[1, 0, 1] == 6
    assert not check_axioms(A).ok
