import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lyat import kernels
from lyat.tensor import combination, contract, iein
from lyat.fields import GF, QQ


@st.composite
def mod_matrices(draw):
    p = draw(st.sampled_from([2, 3, 7, 101, 2_147_483_647]))
    r = draw(st.integers(1, 7))
    c = draw(st.integers(1, 7))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(vals, dtype=np.int64).reshape(r, c), p


@pytest.mark.skipif(kernels.rref_mod_numba is None, reason="numba unavailable")
@given(mod_matrices())
def test_numba_and_numpy_kernels_agree(mp):
    m, p = mp
    a, b = m.copy(), m.copy()
    ra, pa = kernels.rref_mod_numba(a, p)
    rb, pb = kernels.rref_mod_numpy(b, p)
    assert ra == rb and list(pa) == list(pb)
    assert np.array_equal(a, b)


@given(mod_matrices())
def test_kernel_output_is_rref(mp):
    m, p = mp
    a = m.copy()
    r, piv = kernels.rref_mod(a, p)
    assert list(piv) == sorted(set(piv.tolist()))
    for i, c in enumerate(piv):
        assert a[i, c] == 1
        assert not np.any(np.delete(a[:, c], i))
    assert not np.any(a[r:])


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, LYAT_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from lyat import kernels; print(kernels.backend())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_pipeline_identical_under_both_backends():
    code = (
        "from lyat.catalog import example_2_10\n"
        "from lyat.derivations import all_spaces\n"
        "A = example_2_10(strict=False)\n"
        "print({k: v.space.basis.tolist() for k, v in all_spaces(A).items()})\n"
    )
    runs = []
    for flag in ("0", "1"):
        env = dict(os.environ, LYAT_DISABLE_NUMBA=flag)
        runs.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout)
    assert runs[0] == runs[1]


def test_iein_exact_across_dtype_paths():
    a = np.array([[2**40, 1], [3, 2**40]], dtype=np.int64)
    want = np.einsum("ij,jk->ik", a.astype(object), a.astype(object))
    assert np.array_equal(iein("ij,jk->ik", a, a), want)
    small = np.array([[1, 2], [3, 4]], dtype=np.int64)
    assert np.array_equal(iein("ij,jk->ik", small, small), small @ small)
    huge = np.array([[3**45]], dtype=object)
    assert iein("ij,jk->ik", huge, huge)[0, 0] == 3**90


def test_contract_and_combination():
    from fractions import Fraction

    x = QQ.array([[Fraction(1, 2), 0], [0, Fraction(1, 3)]])
    got = contract(QQ, "ij,jk->ik", x, x)
    assert got.tolist() == [[Fraction(1, 4), 0], [0, Fraction(1, 9)]]
    ints, scale = combination(QQ, [(1, "ij,jk->ik", (x, x)), (-1, "ij,jk->ik", (x, x))])
    assert not np.any(ints != 0)
    F = GF(5)
    y = F.array([[2, 3], [4, 1]])
    assert np.array_equal(contract(F, "ij,jk->ik", y, y), F.matmul(y, y))
