"""Operator spaces of an LY-algebra as exact kernels of stacked linear systems.

Every space is described by equation *families*. A family is either the
bracket identity (rows indexed by basis pairs and an output coordinate) or the
triple identity (basis triples and an output coordinate), and is a signed sum
of terms "block ``b`` applied in slot ``s``" or "block ``b`` applied to the
output". Unknowns are ``nblocks`` endomorphisms flattened row-major, block
after block.

A tuple ``(f, f1, f2, f3, f4, f5)`` lies in the constraint set when

    [f x, y] + [x, f1 y] = f2 [x, y]
    {f x, y, z} + {x, f3 y, z} + {x, y, f4 z} = f5 {x, y, z}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .algebra import LYAlgebra, center, derived_algebra
from .fields import Field
from .linalg import Subspace, compress_rows, nullspace_of_integer_matrix, solve
from .tensor import iein

OUT = "out"
KINDS = ("zder", "der", "qder", "gder", "centroid", "qcentroid", "s_space")


@dataclass(frozen=True)
class Family:
    product: str  # "bracket" or "triple"
    terms: tuple[tuple[int, int | str, Fraction], ...]


def delta_families(spec: Sequence[tuple[int, Fraction] | None]) -> list[Family]:
    """Families for one six-slot tuple; ``spec[k]`` is ``(block, coef)`` or ``None``."""
    f, f1, f2, f3, f4, f5 = spec
    br = []
    for entry, slot, sign in ((f, 0, 1), (f1, 1, 1), (f2, OUT, -1)):
        if entry is not None:
            br.append((entry[0], slot, Fraction(entry[1]) * sign))
    tr = []
    for entry, slot, sign in ((f, 0, 1), (f3, 1, 1), (f4, 2, 1), (f5, OUT, -1)):
        if entry is not None:
            tr.append((entry[0], slot, Fraction(entry[1]) * sign))
    return [Family("bracket", tuple(br)), Family("triple", tuple(tr))]


_ID = (0, 1)
SYSTEMS: dict[str, tuple[int, list[Family]]] = {
    "der": (1, delta_families([_ID] * 6)),
    "centroid": (1, delta_families([_ID, None, _ID, None, None, _ID])),
    "qcentroid": (
        1,
        delta_families([_ID, (0, -1), None, (0, -1), None, None])
        + delta_families([_ID, (0, -1), None, None, (0, -1), None]),
    ),
    "qder": (3, delta_families([_ID, _ID, (1, 1), _ID, _ID, (2, 1)])),
    "gder": (6, delta_families([(k, 1) for k in range(6)])),
    "s_space": (2, delta_families([_ID, _ID, (1, 1), _ID, _ID, (1, Fraction(3, 2))])),
    # image in the center, derived algebra killed
    "zder": (
        1,
        [
            Family("bracket", ((0, 0, Fraction(1)),)),
            Family("bracket", ((0, OUT, Fraction(1)),)),
            Family("triple", ((0, 0, Fraction(1)),)),
            Family("triple", ((0, 2, Fraction(1)),)),
            Family("triple", ((0, OUT, Fraction(1)),)),
        ],
    ),
}


def _integer_coefs(fld: Field, terms) -> list[tuple[int, int | str, int]]:
    scale = math.lcm(*(t[2].denominator for t in terms)) if terms else 1
    if fld.characteristic and scale % fld.characteristic == 0:
        raise ZeroDivisionError(f"coefficients not defined in {fld}")
    return [(b, s, int(c * scale)) for b, s, c in terms]


def _bracket_rows(A: LYAlgebra, terms, nblocks: int, i: int) -> np.ndarray:
    n = A.n
    C = A.c_int
    M = np.zeros((n, n, nblocks, n, n), dtype=np.int64 if C.dtype != object else object)
    for blk, slot, coef in terms:
        if slot == 0:
            M[:, :, blk, :, i] += coef * C.transpose(1, 2, 0)
        elif slot == 1:
            for j in range(n):
                M[j, :, blk, :, j] += coef * C[i].T
        else:
            for k in range(n):
                M[:, k, blk, k, :] += coef * C[i]
    return M.reshape(n * n, nblocks * n * n)


def _triple_rows(A: LYAlgebra, terms, nblocks: int, i: int) -> np.ndarray:
    n = A.n
    D = A.d_int
    M = np.zeros((n, n, n, nblocks, n, n), dtype=np.int64 if D.dtype != object else object)
    for blk, slot, coef in terms:
        if slot == 0:
            M[:, :, :, blk, :, i] += coef * D.transpose(1, 2, 3, 0)
        elif slot == 1:
            Di = D[i].transpose(1, 2, 0)
            for j in range(n):
                M[j, :, :, blk, :, j] += coef * Di
        elif slot == 2:
            Di = D[i].transpose(0, 2, 1)
            for k in range(n):
                M[:, k, :, blk, :, k] += coef * Di
        else:
            for l in range(n):
                M[:, :, l, blk, l, :] += coef * D[i]
    return M.reshape(n**3, nblocks * n * n)


def condition_matrix(A: LYAlgebra, families: Sequence[Family], nblocks: int) -> np.ndarray:
    """Stacked integer condition rows (zero and repeated rows removed)."""
    fld = A.field
    n = A.n
    cols = nblocks * n * n
    modulus = fld.characteristic
    chunks = []
    for fam in families:
        terms = _integer_coefs(fld, fam.terms)
        if not terms:
            continue
        build = _bracket_rows if fam.product == "bracket" else _triple_rows
        for i in range(n):
            rows = compress_rows(build(A, terms, nblocks, i), modulus)
            if rows.shape[0]:
                chunks.append(rows)
    if not chunks:
        return np.zeros((0, cols), dtype=np.int64)
    return compress_rows(np.concatenate(chunks), modulus)


def solve_system(A: LYAlgebra, families: Sequence[Family], nblocks: int) -> Subspace:
    cols = nblocks * A.n * A.n
    return nullspace_of_integer_matrix(condition_matrix(A, families, nblocks), cols, A.field)


# ---------------------------------------------------------------------------
# independent evaluation path (direct tensor contraction)


def _joint_integerize(fld: Field, mats: Sequence[np.ndarray]) -> list[np.ndarray]:
    stacked, _ = fld.integerize(np.stack([fld.array(m) for m in mats]))
    return list(stacked)


def _is_zero(fld: Field, arr: np.ndarray) -> bool:
    if fld.characteristic:
        arr = np.mod(arr, fld.characteristic)
    return not np.any(arr != 0)


def delta_defects(A: LYAlgebra, tup: Sequence[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Integer-scaled defects of both tuple identities on all basis tuples."""
    fld = A.field
    f, f1, f2, f3, f4, f5 = _joint_integerize(fld, tup)
    C, D = A.c_int, A.d_int
    eb = iein("ai,ajk->ijk", f, C) + iein("aj,iak->ijk", f1, C) - iein("ka,ija->ijk", f2, C)
    et = (
        iein("ai,ajkl->ijkl", f, D)
        + iein("aj,iakl->ijkl", f3, D)
        + iein("ak,ijal->ijkl", f4, D)
        - iein("la,ijka->ijkl", f5, D)
    )
    return eb, et


def in_delta(A: LYAlgebra, tup: Sequence[np.ndarray]) -> bool:
    eb, et = delta_defects(A, tup)
    return _is_zero(A.field, eb) and _is_zero(A.field, et)


@dataclass(frozen=True)
class DeltaTuple:
    f: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    f3: np.ndarray
    f4: np.ndarray
    f5: np.ndarray

    def as_tuple(self) -> tuple[np.ndarray, ...]:
        return (self.f, self.f1, self.f2, self.f3, self.f4, self.f5)

    def holds(self, A: LYAlgebra) -> bool:
        return in_delta(A, self.as_tuple())

    def swapped(self) -> "DeltaTuple":
        """(f1, f, f2, f, f4, f5); stays in the set when f3 == f1."""
        return DeltaTuple(self.f1, self.f, self.f2, self.f, self.f4, self.f5)


def is_central_derivation(A: LYAlgebra, f) -> bool:
    fld = A.field
    (F,) = _joint_integerize(fld, [f])
    C, D = A.c_int, A.d_int
    checks = (
        iein("ai,ajk->ijk", F, C),
        iein("ka,ija->ijk", F, C),
        iein("ai,ajkl->ijkl", F, D),
        iein("ak,ijal->ijkl", F, D),
        iein("la,ijka->ijkl", F, D),
    )
    return all(_is_zero(fld, x) for x in checks)


# ---------------------------------------------------------------------------
# operator spaces


@dataclass(frozen=True, eq=False)
class OperatorSpace:
    kind: str
    algebra: LYAlgebra
    space: Subspace
    witness_space: Subspace | None = None
    nblocks: int = 1

    @property
    def dim(self) -> int:
        return self.space.dim

    def maps(self) -> list[np.ndarray]:
        n = self.algebra.n
        return [row.reshape(n, n) for row in self.space.basis]

    def __contains__(self, f) -> bool:
        return self.algebra.field.array(f).reshape(-1) in self.space

    def witnesses(self, f) -> list[np.ndarray] | None:
        """All blocks ``[f, w1, ...]`` of one solution whose first block is ``f``."""
        n = self.algebra.n
        fld = self.algebra.field
        f = fld.array(f).reshape(-1)
        if self.witness_space is None:
            return [f.reshape(n, n)] if f in self.space else None
        W = self.witness_space.basis
        if W.shape[0] == 0:
            return [fld.zeros((n, n))] * self.nblocks if not np.any(f != 0) else None
        alpha = solve(W[:, : n * n].T, f, fld)
        if alpha is None:
            return None
        w = fld.matmul(alpha, W)
        return [w[b * n * n : (b + 1) * n * n].reshape(n, n) for b in range(self.nblocks)]

    def witness_kernel(self) -> Subspace:
        """Solutions with vanishing first block (the freedom in the witnesses)."""
        n2 = self.algebra.n ** 2
        fld = self.algebra.field
        W = self.witness_space
        if W is None or W.dim == 0:
            return Subspace.zero(fld, self.nblocks * n2)
        from .linalg import nullspace

        ker = nullspace(W.basis[:, :n2].T, fld)
        if ker.dim == 0:
            return Subspace.zero(fld, W.ambient_dim)
        return Subspace.span(fld.matmul(ker.basis, W.basis), fld, W.ambient_dim)


def _project_first_block(A: LYAlgebra, W: Subspace) -> Subspace:
    n2 = A.n * A.n
    if W.dim == 0:
        return Subspace.zero(A.field, n2)
    return Subspace.span(W.basis[:, :n2], A.field, n2)


@lru_cache(maxsize=256)
def operator_space(A: LYAlgebra, kind: str, allow_positive_characteristic: bool = False) -> OperatorSpace:
    if kind not in SYSTEMS:
        raise KeyError(f"unknown operator space {kind!r}; choose from {KINDS}")
    if kind == "s_space":
        A.field.require_char_zero("S", override=allow_positive_characteristic)
    nblocks, fams = SYSTEMS[kind]
    W = solve_system(A, fams, nblocks)
    if nblocks == 1:
        return OperatorSpace(kind, A, W)
    return OperatorSpace(kind, A, _project_first_block(A, W), W, nblocks)


def der(A: LYAlgebra) -> OperatorSpace:
    return operator_space(A, "der")


def zder(A: LYAlgebra) -> OperatorSpace:
    return operator_space(A, "zder")


def centroid(A: LYAlgebra) -> OperatorSpace:
    return operator_space(A, "centroid")


def qcentroid(A: LYAlgebra) -> OperatorSpace:
    return operator_space(A, "qcentroid")


def qder(A: LYAlgebra) -> OperatorSpace:
    return operator_space(A, "qder")


def gder(A: LYAlgebra) -> OperatorSpace:
    return operator_space(A, "gder")


def s_space(A: LYAlgebra, allow_positive_characteristic: bool = False) -> OperatorSpace:
    return operator_space(A, "s_space", allow_positive_characteristic)


def all_spaces(A: LYAlgebra) -> dict[str, OperatorSpace]:
    out = {k: operator_space(A, k) for k in KINDS if k != "s_space"}
    if A.field.characteristic == 0:
        out["s_space"] = s_space(A)
    return out


# ---------------------------------------------------------------------------
# membership via the independent evaluation path


def satisfies(A: LYAlgebra, kind: str, f, witnesses: Sequence[np.ndarray] = ()) -> bool:
    """Re-check the defining identities of ``kind`` for ``f`` by contraction."""
    fld = A.field
    f = fld.array(f)
    z = fld.zeros(f.shape)
    if kind == "der":
        return in_delta(A, [f] * 6)
    if kind == "zder":
        return is_central_derivation(A, f)
    if kind == "centroid":
        return in_delta(A, [f, z, f, z, z, f])
    if kind == "qcentroid":
        m = fld.array(-f)
        return in_delta(A, [f, m, z, m, z, z]) and in_delta(A, [f, m, z, z, m, z])
    if kind == "qder":
        d1, d2 = witnesses
        return in_delta(A, [f, f, d1, f, f, d2])
    if kind == "gder":
        return in_delta(A, [f, *witnesses])
    if kind == "s_space":
        (d1,) = witnesses
        return in_delta(A, [f, f, d1, f, f, fld.array(d1 * fld.scalar(Fraction(3, 2)))])
    raise KeyError(kind)


def reverify(space: OperatorSpace) -> list[int]:
    """Indices of basis elements that fail their identities (empty when sound)."""
    A = space.algebra
    bad = []
    for idx, f in enumerate(space.maps()):
        wit = ()
        if space.witness_space is not None:
            blocks = space.witnesses(f)
            if blocks is None:
                bad.append(idx)
                continue
            wit = blocks[1:]
        if not satisfies(A, space.kind, f, wit):
            bad.append(idx)
    return bad


def preserves(A: LYAlgebra, f, S: Subspace) -> bool:
    fld = A.field
    f = fld.array(f)
    return all(fld.matmul(f, v) in S for v in S.basis)


def center_subspace(A: LYAlgebra) -> Subspace:
    return center(A)


def derived(A: LYAlgebra) -> Subspace:
    return derived_algebra(A)
