"""Univariate polynomials over a field and exact minimal polynomials."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import QQ, Field
from .linalg import ShapeError, solve


@dataclass(frozen=True)
class Polynomial:
    """Coefficients low-to-high; the zero polynomial has no coefficients."""

    coeffs: tuple
    field: Field = QQ

    def __post_init__(self):
        cs = list(self.coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(self.field.scalar(c) for c in cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def x_adic_valuation(self) -> int:
        """Largest k with X^k dividing self (infinite for zero, reported as -1)."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return -1

    def divisible_by_x_power(self, k: int) -> bool:
        v = self.x_adic_valuation()
        return v == -1 or v >= k

    def __call__(self, m: np.ndarray) -> np.ndarray:
        fld = self.field
        m = fld.array(m)
        n = m.shape[0]
        acc = fld.zeros((n, n))
        for c in reversed(self.coeffs):
            acc = fld.array(fld.matmul(acc, m) + fld.eye(n) * c)
        return acc

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            cs = self.field.format(c)
            if mono and cs == "1":
                terms.append(mono)
            elif mono and cs == "-1":
                terms.append("-" + mono)
            elif mono:
                terms.append(f"{cs}*{mono}")
            else:
                terms.append(cs)
        return " + ".join(terms).replace("+ -", "- ")


def minimal_polynomial(m, fld: Field = QQ) -> Polynomial:
    """Monic polynomial of least degree annihilating the square matrix ``m``.

    The first power ``m^k`` that is a linear combination of ``I, m, ..., m^(k-1)``
    gives the relation; the relation is found by an exact solve.
    """
    m = fld.array(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError("minimal polynomial of a non-square matrix")
    n = m.shape[0]
    if n == 0:
        return Polynomial((1,), fld)
    powers = [fld.eye(n).reshape(-1)]
    cur = fld.eye(n)
    for k in range(1, n + 1):
        cur = fld.matmul(cur, m)
        target = cur.reshape(-1)
        a = fld.array(np.stack(powers, axis=1))
        x = solve(a, target, fld)
        if x is not None:
            coeffs = [-c for c in x] + [fld.scalar(1)]
            return Polynomial(tuple(coeffs), fld)
        powers.append(target)
    raise AssertionError("Cayley-Hamilton bound exceeded")  # pragma: no cover
