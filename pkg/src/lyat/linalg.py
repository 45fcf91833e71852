"""Exact linear algebra over QQ and GF(p) with a canonical subspace calculus.

Over GF(p) everything is a direct modular elimination. Over QQ the integer
matrix is eliminated modulo word-sized primes, the result is lifted by CRT and
rational reconstruction, and the lift is then *certified* with exact integer
arithmetic before it is returned:

* row spaces: every input row equals ``row[pivots] @ R``; together with
  ``rank_p <= rank_QQ`` this pins ``span(R) == span(M)``;
* kernels: ``M @ v == 0`` for each of the ``nullity_p`` reconstructed vectors;
  since ``nullity_QQ <= nullity_p`` the lift is the whole kernel.

If certification keeps failing, a plain Fraction Gauss-Jordan is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .fields import QQ, Field, as_int_array
from .kernels import rref_mod

PRIMES = (
    2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549,
    2147483543, 2147483497, 2147483489, 2147483477, 2147483423, 2147483399,
    2147483353, 2147483323, 2147483269, 2147483249, 2147483237, 2147483179,
    2147483171, 2147483137, 2147483123, 2147483077, 2147483069, 2147483059,
)
_SAFE = 2**62


class ShapeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer helpers


def _absmax(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return max(abs(int(a.max())), abs(int(a.min())))


def exact_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Integer matrix product without silent int64 overflow."""
    inner = a.shape[-1] if a.ndim else 1
    if a.dtype != object and b.dtype != object:
        if _absmax(a) * _absmax(b) * max(inner, 1) < _SAFE:
            return a @ b
    return as_int_array(a.astype(object) @ b.astype(object))


def _reduce_mod(m: np.ndarray, p: int) -> np.ndarray:
    if m.dtype == object:
        return np.ascontiguousarray(np.mod(m, p).astype(np.int64))
    return np.ascontiguousarray(np.mod(m, p), dtype=np.int64)


def compress_rows(m: np.ndarray, modulus: int = 0) -> np.ndarray:
    """Drop zero rows and duplicate rows of an integer matrix.

    Over the integers rows are first normalised by content and sign; with a
    ``modulus`` rows are only reduced, since dividing by content is invalid there.
    """
    if m.shape[0] == 0:
        return m
    if modulus:
        m = _reduce_mod(m, modulus)
        m = m[np.any(m != 0, axis=1)]
        return np.unique(m, axis=0) if m.shape[0] > 1 else m
    m = m[np.any(m != 0, axis=1)]
    if m.shape[0] <= 1 or m.dtype == object:
        return m
    g = np.gcd.reduce(np.abs(m), axis=1)
    m = m // g[:, None]
    first = np.argmax(m != 0, axis=1)
    sign = np.sign(m[np.arange(m.shape[0]), first])
    m = m * sign[:, None]
    return np.unique(m, axis=0)


def _ratrecon(a: int, m: int, bound: int) -> Fraction | None:
    """Rational n/d with n == a*d (mod m), |n| <= bound, 0 < d <= bound."""
    a %= m
    if a == 0:
        return Fraction(0)
    r0, r1 = m, a
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or math.gcd(r1, abs(t1)) != 1:
        return None
    return Fraction(r1, t1)


def _reconstruct(res: np.ndarray, modulus: int) -> np.ndarray | None:
    bound = math.isqrt(modulus // 2)
    out = np.empty(res.shape, dtype=object)
    cache: dict[int, Fraction] = {}
    for idx, v in np.ndenumerate(res):
        v = int(v)
        q = cache.get(v)
        if q is None:
            q = _ratrecon(v, modulus, bound)
            if q is None:
                return None
            cache[v] = q
        out[idx] = q
    return out


class _CRT:
    """Chinese-remainder accumulator for one residue matrix pattern."""

    def __init__(self, res: np.ndarray, p: int):
        self.value = res.astype(object)
        self.modulus = p

    def add(self, res: np.ndarray, p: int) -> None:
        m = self.modulus
        inv = pow(m % p, -1, p)
        cur = np.mod(self.value, p).astype(np.int64)
        t = (np.mod(res - cur, p) * inv) % p
        self.value = self.value + m * t.astype(object)
        self.modulus = m * p


def _rational_rows_to_int(r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Scale each row of a Fraction matrix to integers; return (ints, row_scales)."""
    scales = []
    rows = []
    for row in r:
        s = math.lcm(*(q.denominator for q in row)) if row.size else 1
        scales.append(s)
        rows.append([q.numerator * (s // q.denominator) for q in row])
    ints = np.array(rows, dtype=object).reshape(r.shape)
    return as_int_array(ints), np.array(scales, dtype=object)


# ---------------------------------------------------------------------------
# fallback (only reached if modular certification fails repeatedly)


def _rref_fraction(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    a = [[Fraction(int(v)) if not isinstance(v, Fraction) else v for v in row] for row in m]
    rows = len(a)
    cols = m.shape[1]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    out = np.array(a[:r], dtype=object).reshape(r, cols)
    return out, pivots


# ---------------------------------------------------------------------------
# modular cores


def _rref_qq_integer(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    rows, cols = m.shape
    if rows == 0 or not np.any(m != 0):
        return np.empty((0, cols), dtype=object), []
    states: dict[tuple, _CRT] = {}
    best: tuple[int, tuple] | None = None
    for p in PRIMES:
        a = _reduce_mod(m, p)
        rank, piv = rref_mod(a, p)
        key = (rank, tuple(int(c) for c in piv))
        if best is not None:
            # higher rank first, then elementwise-earlier pivots
            if rank < best[0] or (rank == best[0] and key[1] > best[1]):
                continue
        best = (rank, key[1])
        state = states.get(key)
        if state is None:
            state = states[key] = _CRT(a[:rank], p)
        else:
            state.add(a[:rank], p)
        r = _reconstruct(state.value, state.modulus)
        if r is None:
            continue
        pivots = list(key[1])
        rn, scales = _rational_rows_to_int(r)
        big = math.lcm(*(int(s) for s in scales)) if len(scales) else 1
        coef = m[:, pivots].astype(object) * np.array([big // int(s) for s in scales], dtype=object)
        lhs = as_int_array(m.astype(object) * big)
        if np.array_equal(exact_matmul(as_int_array(coef), rn), lhs):
            return r, pivots
    return _rref_fraction(m)


def _nullspace_basis_mod(a: np.ndarray, rank: int, piv: np.ndarray, p: int) -> np.ndarray:
    cols = a.shape[1]
    pivset = set(int(c) for c in piv)
    free = [c for c in range(cols) if c not in pivset]
    n = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        n[k, f] = 1
        n[k, piv] = (-a[:rank, f]) % p
    return n


def _nullspace_qq_integer(m: np.ndarray) -> np.ndarray:
    rows, cols = m.shape
    if cols == 0:
        return np.empty((0, 0), dtype=object)
    if rows == 0:
        return QQ.eye(cols)
    states: dict[tuple, _CRT] = {}
    best_nullity = None
    for p in PRIMES:
        a = _reduce_mod(m, p)
        rank, piv = rref_mod(a, p)
        nb = _nullspace_basis_mod(a, rank, piv, p)
        k, npiv = rref_mod(nb, p)
        nullity = cols - rank
        if best_nullity is not None and nullity > best_nullity:
            continue
        best_nullity = nullity
        key = (nullity, tuple(int(c) for c in npiv))
        state = states.get(key)
        if state is None:
            state = states[key] = _CRT(nb[:k], p)
        else:
            state.add(nb[:k], p)
        v = _reconstruct(state.value, state.modulus)
        if v is None:
            continue
        if v.shape[0] == 0:
            return np.empty((0, cols), dtype=object)
        vn, _ = _rational_rows_to_int(v)
        if not np.any(exact_matmul(m, as_int_array(vn).T) != 0):
            return v
    r, pivots = _rref_fraction(m)
    return _nullspace_from_rref(r, pivots, cols, QQ)


def _nullspace_from_rref(r: np.ndarray, pivots: Sequence[int], cols: int, fld: Field) -> np.ndarray:
    free = [c for c in range(cols) if c not in set(pivots)]
    out = fld.zeros((len(free), cols))
    for k, f in enumerate(free):
        out[k, f] = fld.scalar(1)
        for i, c in enumerate(pivots):
            out[k, c] = -r[i, f]
    out = fld.array(out)
    res, _ = rref(out, fld)
    return res


# ---------------------------------------------------------------------------
# public API


def rref(m, fld: Field = QQ) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form (zero rows dropped) and pivot columns."""
    raw = np.asarray(m)
    if raw.ndim != 2:
        raise ShapeError("rref expects a 2-d matrix")
    cols = raw.shape[1]
    if fld.characteristic == 0:
        ints = compress_rows(fld.integer_rows(raw)) if raw.size else np.zeros((0, cols), np.int64)
        r, piv = _rref_qq_integer(ints)
        return QQ.array(r).reshape(len(piv), cols), list(piv)
    a = np.ascontiguousarray(fld.array(raw).copy(), dtype=np.int64)
    rank, piv = rref_mod(a, fld.p)
    return a[:rank].copy(), [int(c) for c in piv]


def rank(m, fld: Field = QQ) -> int:
    return len(rref(m, fld)[1])


def nullspace_of_integer_matrix(m: np.ndarray, cols: int, fld: Field) -> "Subspace":
    """Kernel of an integer condition matrix (entries are integers, or residues over GF(p))."""
    if m.shape[0] == 0:
        return Subspace.full(fld, cols)
    if fld.characteristic == 0:
        basis = _nullspace_qq_integer(compress_rows(as_int_array(m)))
        return Subspace._from_rref(fld, cols, QQ.array(basis).reshape(-1, cols))
    a = _reduce_mod(m, fld.p)
    rank_, piv = rref_mod(a, fld.p)
    nb = _nullspace_basis_mod(a, rank_, piv, fld.p)
    k, _ = rref_mod(nb, fld.p)
    return Subspace._from_rref(fld, cols, nb[:k].copy())


def nullspace(m, fld: Field = QQ) -> "Subspace":
    """Right kernel ``{v : m @ v == 0}`` as a canonical subspace."""
    raw = np.asarray(m)
    if raw.ndim != 2:
        raise ShapeError("nullspace expects a 2-d matrix")
    return nullspace_of_integer_matrix(fld.integer_rows(raw), raw.shape[1], fld)


def solve(a, b, fld: Field = QQ):
    """One solution of ``a @ x == b`` (free variables zero), or ``None``."""
    a = fld.array(a)
    b = fld.array(b)
    if a.ndim != 2 or b.ndim != 1 or a.shape[0] != b.shape[0]:
        raise ShapeError(f"incompatible shapes {a.shape} and {b.shape}")
    cols = a.shape[1]
    aug = np.concatenate([a, b.reshape(-1, 1)], axis=1) if a.shape[0] else fld.zeros((0, cols + 1))
    r, piv = rref(aug, fld)
    if piv and piv[-1] == cols:
        return None
    x = fld.zeros(cols)
    for i, c in enumerate(piv):
        x[c] = r[i, cols]
    return fld.array(x)


def inverse(m, fld: Field = QQ) -> np.ndarray:
    m = fld.array(m)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ShapeError("inverse of a non-square matrix")
    r, piv = rref(np.concatenate([m, fld.eye(n)], axis=1), fld)
    if piv[:n] != list(range(n)) or r.shape[0] < n:
        raise ZeroDivisionError("matrix is singular")
    return fld.array(r[:n, n:])


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of K^m stored by the RREF of a basis (one basis vector per row)."""

    field: Field
    ambient_dim: int
    basis: np.ndarray
    pivots: tuple[int, ...] = dc_field(default=())

    @classmethod
    def _from_rref(cls, fld: Field, ambient: int, r: np.ndarray) -> "Subspace":
        r = fld.array(r).reshape(-1, ambient)
        pivots = tuple(int(np.flatnonzero(row != 0)[0]) for row in r)
        return cls(fld, ambient, r, pivots)

    @classmethod
    def span(cls, vectors, fld: Field, ambient: int) -> "Subspace":
        vs = fld.array(vectors)
        if vs.size == 0:
            return cls.zero(fld, ambient)
        vs = vs.reshape(-1, ambient)
        r, piv = rref(vs, fld)
        return cls(fld, ambient, r, tuple(piv))

    @classmethod
    def zero(cls, fld: Field, ambient: int) -> "Subspace":
        return cls(fld, ambient, fld.zeros((0, ambient)), ())

    @classmethod
    def full(cls, fld: Field, ambient: int) -> "Subspace":
        return cls(fld, ambient, fld.eye(ambient), tuple(range(ambient)))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __len__(self) -> int:
        return self.dim

    def __iter__(self):
        return iter(self.basis)

    def __eq__(self, other) -> bool:
        return subspace_equal(self, other)

    def __hash__(self):
        return hash((self.ambient_dim, self.pivots))

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, field={self.field})"

    def coordinates(self, v):
        """Coefficients ``c`` with ``v == c @ basis``, or ``None``."""
        v = self.field.array(v).reshape(-1)
        if v.shape[0] != self.ambient_dim:
            raise ShapeError("vector length does not match ambient dimension")
        c = v[list(self.pivots)] if self.pivots else self.field.zeros(0)
        recon = self.field.matmul(c, self.basis) if self.dim else self.field.zeros(self.ambient_dim)
        if np.array_equal(recon, v):
            return c
        return None

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim


def _check_ambient(u: Subspace, w: Subspace) -> None:
    if u.ambient_dim != w.ambient_dim or u.field != w.field:
        raise ShapeError(
            f"ambient mismatch: {u.ambient_dim} over {u.field} vs {w.ambient_dim} over {w.field}"
        )


def subspace_sum(u: Subspace, w: Subspace) -> Subspace:
    _check_ambient(u, w)
    if u.dim == 0:
        return w
    if w.dim == 0:
        return u
    return Subspace.span(np.concatenate([u.basis, w.basis]), u.field, u.ambient_dim)


def subspace_intersect(u: Subspace, w: Subspace) -> Subspace:
    _check_ambient(u, w)
    fld = u.field
    if u.dim == 0 or w.dim == 0:
        return Subspace.zero(fld, u.ambient_dim)
    # a @ U == b @ W  <=>  [U; -W]^T [a; b] == 0
    stacked = np.concatenate([u.basis, -w.basis]).T
    ker = nullspace(stacked, fld)
    if ker.dim == 0:
        return Subspace.zero(fld, u.ambient_dim)
    coeffs = ker.basis[:, : u.dim]
    return Subspace.span(fld.matmul(coeffs, u.basis), fld, u.ambient_dim)


def subspace_contains(u: Subspace, v) -> bool:
    """``v`` may be a vector or a Subspace (containment of subspaces)."""
    if isinstance(v, Subspace):
        _check_ambient(u, v)
        return all(row in u for row in v.basis)
    return v in u


def subspace_equal(u: Subspace, w: Subspace) -> bool:
    if not isinstance(w, Subspace):
        return NotImplemented
    return (
        u.ambient_dim == w.ambient_dim
        and u.field == w.field
        and u.pivots == w.pivots
        and np.array_equal(u.basis, w.basis)
    )


def is_direct_sum(u: Subspace, w: Subspace) -> bool:
    return subspace_intersect(u, w).dim == 0


def complement(u: Subspace, reverse: bool = False) -> Subspace:
    """Span of standard basis vectors at the non-pivot coordinates of ``u``.

    With ``reverse=True`` pivots are taken in the reversed coordinate order,
    which gives a second, generally different, complement.
    """
    fld = u.field
    m = u.ambient_dim
    if reverse and u.dim:
        _, piv = rref(u.basis[:, ::-1], fld)
        pivots = {m - 1 - c for c in piv}
    else:
        pivots = set(u.pivots)
    free = [c for c in range(m) if c not in pivots]
    e = fld.zeros((len(free), m))
    for k, c in enumerate(free):
        e[k, c] = fld.scalar(1)
    return Subspace.span(e, fld, m) if free else Subspace.zero(fld, m)


def image(m, fld: Field = QQ) -> Subspace:
    """Column space of ``m``."""
    m = fld.array(m)
    return Subspace.span(m.T, fld, m.shape[0])


def kernel(m, fld: Field = QQ) -> Subspace:
    return nullspace(m, fld)


def stack_vectors(vectors: Iterable[np.ndarray], fld: Field, ambient: int) -> np.ndarray:
    vs = [fld.array(v).reshape(-1) for v in vectors]
    if not vs:
        return fld.zeros((0, ambient))
    return fld.array(np.stack(vs))


def nonmembers(u: Subspace, vectors) -> np.ndarray:
    """Row indices of ``vectors`` that are not in ``u`` (one batched reduction).

    Membership is scale invariant, so rows are integerized independently.
    """
    fld = u.field
    V = fld.integer_rows(np.asarray(vectors).reshape(-1, u.ambient_dim))
    if V.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    if u.dim:
        B, scale = fld.integerize(u.basis)
        R = exact_matmul(V[:, list(u.pivots)], B)
        V = V.astype(object) * scale - R.astype(object)
        if fld.characteristic:
            V = np.mod(V, fld.characteristic)
    return np.flatnonzero(np.any(V != 0, axis=1))
