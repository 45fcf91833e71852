"""Exact contractions of integer structure tensors.

Integer einsum is slow without BLAS, so when every partial sum provably stays
below 2**52 the contraction runs in float64 (exact for such integers) and is
cast back. Larger magnitudes use int64, and beyond that Python integers.
"""

from __future__ import annotations

import math

import numpy as np

_FLOAT_EXACT = 2**52
_INT_SAFE = 2**62


def _absmax(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return max(abs(int(a.max())), abs(int(a.min())))


def _summed_size(subscripts: str, operands) -> int:
    inputs, output = subscripts.replace(" ", "").split("->")
    sizes: dict[str, int] = {}
    for spec, op in zip(inputs.split(","), operands):
        for ch, dim in zip(spec, op.shape):
            sizes[ch] = dim
    return math.prod(sizes[ch] for ch in sizes if ch not in output)


def iein(subscripts: str, *operands: np.ndarray) -> np.ndarray:
    """Exact einsum for integer arrays (int64 or object)."""
    if any(op.size == 0 for op in operands):
        return np.einsum(subscripts, *[op.astype(np.int64) for op in operands])
    bound = math.prod(_absmax(op) for op in operands) * max(_summed_size(subscripts, operands), 1)
    if bound < _FLOAT_EXACT:
        out = np.einsum(subscripts, *[op.astype(np.float64) for op in operands], optimize=True)
        return np.rint(out).astype(np.int64)
    if bound < _INT_SAFE and all(op.dtype != object for op in operands):
        return np.einsum(subscripts, *operands, optimize=True)
    return np.einsum(subscripts, *[op.astype(object) for op in operands])


def contract(fld, subscripts: str, *operands: np.ndarray) -> np.ndarray:
    """Exact einsum over a field: integerize each operand, contract, rescale."""
    ints, scale = [], 1
    for op in operands:
        i, s = fld.integerize(op)
        ints.append(i)
        scale *= s
    return fld.from_integers(iein(subscripts, *ints), scale)


def combination(fld, terms) -> tuple[np.ndarray, int]:
    """Exact ``sum(sign * einsum(subs, *ops))`` as ``(ints, scale)``.

    ``terms`` holds ``(sign, subscripts, operands)``; operands are field arrays.
    Each term is contracted in integers and brought to a common denominator.
    """
    parts = []
    for sign, subs, ops in terms:
        ints, scale = [], 1
        for op in ops:
            i, s = fld.integerize(op)
            ints.append(i)
            scale *= s
        parts.append((sign, iein(subs, *ints), scale))
    common = math.lcm(*(s for _, _, s in parts))
    total = None
    for sign, val, s in parts:
        k = sign * (common // s)
        term = val * k if k == 1 or val.dtype == object or abs(k) * max(_absmax(val), 1) < _INT_SAFE else val.astype(object) * k
        total = term if total is None else _add(total, term)
    if fld.characteristic:
        total = np.mod(total, fld.characteristic)
    return total, common


def _add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object and b.dtype != object and _absmax(a) + _absmax(b) < _INT_SAFE:
        return a + b
    return a.astype(object) + b.astype(object)
