"""Example algebras: abelian algebras, the two tables from the literature, and
random LY-algebras built from left Leibniz algebras."""

from __future__ import annotations

import numpy as np

from .algebra import (
    AxiomError,
    LYAlgebra,
    abelian,
    check_axioms,
    from_leibniz,
    from_products,
    is_left_leibniz,
)
from .fields import QQ, Field
from .linalg import inverse

__all__ = [
    "abelian",
    "example_2_9",
    "example_2_10",
    "random_leibniz_table",
    "random_ly_algebra",
    "catalog",
]


def _vec(n: int, k: int, coef: int = 1) -> list[int]:
    v = [0] * n
    v[k] = coef
    return v


def _finish(A: LYAlgebra, strict: bool) -> LYAlgebra:
    report = check_axioms(A)
    if strict and not report.ok:
        raise AxiomError(f"{A.name} (zero-completed) is not an LY-algebra: {report.summary()}", report)
    return A


def example_2_9(strict: bool = True, fld: Field = QQ) -> LYAlgebra:
    """Span{x, y} with [x,y] = y, {x,y,y} = y, {y,x,x} = 0; other products 0.

    The zero-completed table violates LY6 at (x, y, x, y, y), so ``strict``
    construction raises :class:`AxiomError`. ``strict=False`` returns the table
    for the purely linear computations.
    """
    A = from_products(
        fld,
        ["x", "y"],
        brackets={(0, 1): _vec(2, 1)},
        triples={(0, 1, 1): _vec(2, 1), (1, 0, 0): [0, 0]},
        name="example_2_9",
    )
    return _finish(A, strict)


EXAMPLE_2_10_BRACKETS = [(0, 1, 1), (0, 3, 3), (0, 5, 5), (1, 2, 5), (3, 4, 5)]
EXAMPLE_2_10_TRIPLES = [
    (0, 1, 0, 1), (0, 3, 0, 3),
    (0, 1, 1, 5), (0, 1, 3, 5), (0, 3, 1, 5), (3, 1, 1, 5),
    (1, 3, 3, 5), (0, 3, 3, 5), (1, 2, 0, 5), (0, 1, 2, 5), (3, 4, 0, 5), (3, 0, 4, 5),
]


def example_2_10(strict: bool = True, fld: Field = QQ) -> LYAlgebra:
    """Basis x0..x5 with the listed products; every other product is 0.

    The zero-completed table violates LY3-LY6, so ``strict`` construction raises.
    """
    n = 6
    brackets = {(i, j): _vec(n, k) for i, j, k in EXAMPLE_2_10_BRACKETS}
    triples = {(i, j, k): _vec(n, l) for i, j, k, l in EXAMPLE_2_10_TRIPLES}
    A = from_products(fld, [f"x{i}" for i in range(n)], brackets, triples, name="example_2_10")
    return _finish(A, strict)


# ---------------------------------------------------------------------------
# random left Leibniz algebras


def _lie_table(n: int, entries) -> np.ndarray:
    p = np.zeros((n, n, n), dtype=np.int64)
    for i, j, k, v in entries:
        p[i, j, k] += v
        p[j, i, k] -= v
    return p


def _lie_algebras() -> list[tuple[np.ndarray, list[np.ndarray]]]:
    """Small Lie algebras with a faithful-ish matrix representation each."""
    out = []
    # sl2: [h,e] = 2e, [h,f] = -2f, [e,f] = h, natural 2-dim module
    sl2 = _lie_table(3, [(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)])
    rep = [np.array([[1, 0], [0, -1]]), np.array([[0, 1], [0, 0]]), np.array([[0, 0], [1, 0]])]
    out.append((sl2, rep))
    # r2: [x, y] = y
    r2 = _lie_table(2, [(0, 1, 1, 1)])
    out.append((r2, [np.array([[1, 0], [0, 0]]), np.array([[0, 1], [0, 0]])]))
    # Heisenberg: [x, y] = z, trivial-ish module through the strictly upper triangular rep
    h3 = _lie_table(3, [(0, 1, 2, 1)])
    rep = [np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]]),
           np.array([[0, 0, 0], [0, 0, 1], [0, 0, 0]]),
           np.array([[0, 0, 1], [0, 0, 0], [0, 0, 0]])]
    out.append((h3, rep))
    return out


def _hemisemidirect(lie: np.ndarray, rep: list[np.ndarray], vdim: int) -> np.ndarray:
    """g + V with (x + v).(y + w) = [x, y] + x.w (a left Leibniz algebra)."""
    g = lie.shape[0]
    n = g + vdim
    p = np.zeros((n, n, n), dtype=np.int64)
    p[:g, :g, :g] = lie
    for i in range(g):
        # e_i . v_b = sum_a rep[i][a, b] v_a
        p[i, g:, g:] = rep[i].T
    return p


def _null_filiform(n: int) -> np.ndarray:
    p = np.zeros((n, n, n), dtype=np.int64)
    for i in range(1, n - 1):
        p[0, i, i + 1] = 1
    p[0, 0, 1] = 1
    return p


def _change_basis(p: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Structure constants in the basis given by the columns of P."""
    Pinv = inverse(P, QQ)
    t = np.einsum("ai,bj,abc->ijc", P.astype(object), P.astype(object), QQ.array(p))
    return QQ.array(np.einsum("kc,ijc->ijk", Pinv, t))


def _random_invertible(rng: np.random.Generator, n: int) -> np.ndarray:
    while True:
        P = rng.integers(-1, 2, size=(n, n))
        P = P + np.eye(n, dtype=np.int64) * rng.integers(1, 3)
        if round(np.linalg.det(P)) != 0:
            return P


def random_leibniz_table(rng: np.random.Generator, max_dim: int = 5) -> tuple[np.ndarray, str]:
    """A random left Leibniz product table over QQ (exact) with a short description.

    Every table has dimension at most ``max_dim`` (which must be at least 2).
    """
    if max_dim < 2:
        raise ValueError("max_dim must be at least 2")
    choice = int(rng.integers(0, 6))
    if choice == 0:
        n = int(rng.integers(2, max_dim + 1))
        p, desc = _null_filiform(n), f"null-filiform({n})"
    elif choice == 1:
        lies = [lr for lr in _lie_algebras() if lr[0].shape[0] <= max_dim]
        lie, rep = lies[int(rng.integers(0, len(lies)))]
        p, desc = lie, f"lie({lie.shape[0]})"
    elif choice == 2:
        lies = [lr for lr in _lie_algebras() if lr[0].shape[0] <= max_dim]
        k = int(rng.integers(0, len(lies)))
        lie, rep = lies[k]
        vdim = rep[0].shape[0]
        if lie.shape[0] + vdim > max_dim:
            p, desc = lie, f"lie({lie.shape[0]})"
        else:
            p, desc = _hemisemidirect(lie, rep, vdim), f"hemisemidirect({lie.shape[0]}+{vdim})"
    elif choice == 3:
        # one-dimensional Lie algebra acting on V by an arbitrary matrix
        vdim = int(rng.integers(1, max_dim))
        M = rng.integers(-2, 3, size=(vdim, vdim))
        p, desc = _hemisemidirect(np.zeros((1, 1, 1), dtype=np.int64), [M], vdim), f"line+module({vdim})"
    elif choice == 4 and max_dim < 4:
        p, desc = _lie_table(2, [(0, 1, 1, 1)]), "lie(2)"
    elif choice == 4:
        a = _lie_table(2, [(0, 1, 1, 1)])
        b = _null_filiform(min(3, max_dim - 2))
        n = a.shape[0] + b.shape[0]
        p = np.zeros((n, n, n), dtype=np.int64)
        p[:2, :2, :2] = a
        p[2:, 2:, 2:] = b
        desc = f"r2+null-filiform({b.shape[0]})"
    else:
        n = int(rng.integers(1, max_dim + 1))
        p, desc = np.zeros((n, n, n), dtype=np.int64), f"abelian({n})"
    n = p.shape[0]
    P = _random_invertible(rng, n)
    q = _change_basis(p, P)
    assert is_left_leibniz(q, QQ)
    return q, desc


def random_ly_algebra(rng: np.random.Generator, max_dim: int = 5) -> LYAlgebra:
    p, desc = random_leibniz_table(rng, max_dim)
    return from_leibniz(p, QQ, name=f"leibniz:{desc}")


def catalog(strict: bool = False) -> dict[str, LYAlgebra]:
    """Abelian algebras of dimension 2..5 and the two literature tables."""
    out = {f"abelian_{n}": abelian(n) for n in range(2, 6)}
    out["example_2_9"] = example_2_9(strict=strict)
    out["example_2_10"] = example_2_10(strict=strict)
    return out
