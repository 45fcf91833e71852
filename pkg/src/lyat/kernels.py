"""Modular Gauss-Jordan elimination, the hot loop behind every exact kernel.

Two implementations share one contract: ``rref_mod(a, p)`` reduces the int64
matrix ``a`` (entries in ``[0, p)``, ``p < 2**31``) to reduced row-echelon form
in place and returns ``(rank, pivots)``.

The numba version is used when numba imports cleanly and the environment
variable ``LYAT_DISABLE_NUMBA`` is unset or ``0``; otherwise the vectorised
numpy version is used. Both are always importable for benchmarking.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False

NUMBA_DISABLED = os.environ.get("LYAT_DISABLE_NUMBA", "0") not in ("", "0")


def _modinv_py(x: int, p: int) -> int:
    return pow(int(x), -1, int(p))


def rref_mod_numpy(a: np.ndarray, p: int) -> tuple[int, np.ndarray]:
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = _modinv_py(a[r, c], p)
        a[r, c:] = (a[r, c:] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit, c:] = (a[hit, c:] - (col[hit, None] * a[r, c:]) % p) % p
        pivots.append(c)
        r += 1
    return r, np.array(pivots, dtype=np.int64)


if HAS_NUMBA:

    @numba.njit(cache=True, nogil=True)
    def _modinv_nb(x, p):
        t, new_t = 0, 1
        r, new_r = p, x % p
        while new_r != 0:
            q = r // new_r
            t, new_t = new_t, t - q * new_t
            r, new_r = new_r, r - q * new_r
        if t < 0:
            t += p
        return t

    @numba.njit(cache=True, nogil=True)
    def _rref_mod_nb(a, p):
        rows, cols = a.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(c, cols):
                    tmp = a[r, j]
                    a[r, j] = a[piv, j]
                    a[piv, j] = tmp
            inv = _modinv_nb(a[r, c], p)
            for j in range(c, cols):
                a[r, j] = (a[r, j] * inv) % p
            for i in range(rows):
                if i == r:
                    continue
                f = a[i, c]
                if f == 0:
                    continue
                for j in range(c, cols):
                    v = a[r, j]
                    if v != 0:
                        a[i, j] = (a[i, j] - f * v) % p
            pivots[r] = c
            r += 1
        return r, pivots[:r].copy()

    def rref_mod_numba(a: np.ndarray, p: int) -> tuple[int, np.ndarray]:
        rank, piv = _rref_mod_nb(a, np.int64(p))
        return int(rank), piv

else:  # pragma: no cover
    rref_mod_numba = None


USING_NUMBA = HAS_NUMBA and not NUMBA_DISABLED


def rref_mod(a: np.ndarray, p: int) -> tuple[int, np.ndarray]:
    """In-place modular RREF of a C-contiguous int64 matrix."""
    if a.shape[0] == 0 or a.shape[1] == 0:
        return 0, np.zeros(0, dtype=np.int64)
    if USING_NUMBA:
        return rref_mod_numba(a, p)
    return rref_mod_numpy(a, p)


def backend() -> str:
    return "numba" if USING_NUMBA else "numpy"
