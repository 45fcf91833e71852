"""Base fields: the rationals and prime fields.

Matrices and tensors are plain numpy arrays. Over ``QQ`` they hold
:class:`fractions.Fraction` objects (``dtype=object``); over ``GF(p)`` they
hold ``int64`` residues in ``[0, p)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

_INT64_SAFE = 2**62


class CharacteristicError(ValueError):
    """Raised when an operation is not defined in the field's characteristic."""


class Field:
    characteristic: int
    dtype: type | np.dtype

    def scalar(self, x):
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, x) -> str:
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def array(self, data) -> np.ndarray:
        raise NotImplementedError

    def integer_rows(self, m: np.ndarray) -> np.ndarray:
        """Integer matrix with the same row space and kernel as ``m``."""
        raise NotImplementedError

    def integerize(self, t: np.ndarray) -> tuple[np.ndarray, int]:
        """Return ``(ints, scale)`` with ``t == ints / scale`` in this field."""
        raise NotImplementedError

    def from_integers(self, ints: np.ndarray, scale: int = 1) -> np.ndarray:
        raise NotImplementedError

    # shared helpers

    def zeros(self, shape) -> np.ndarray:
        return self.array(np.zeros(shape, dtype=np.int64))

    def eye(self, n: int) -> np.ndarray:
        return self.array(np.eye(n, dtype=np.int64))

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.array(a @ b)

    def require_char_not(self, *chars: int, what: str = "operation") -> None:
        if self.characteristic in chars:
            raise CharacteristicError(
                f"{what} is undefined in characteristic {self.characteristic}"
            )

    def require_char_zero(self, what: str = "operation", override: bool = False) -> None:
        if self.characteristic != 0 and not override:
            raise CharacteristicError(
                f"{what} requires characteristic zero (field is {self})"
            )

    def is_zero(self, a) -> bool:
        return not np.any(np.asarray(a) != 0)


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floating point values are not exact scalars")
    return Fraction(x)


_fraction_ufunc = np.frompyfunc(_to_fraction, 1, 1)
_denominator = np.frompyfunc(lambda q: q.denominator, 1, 1)
_numerator = np.frompyfunc(lambda q: q.numerator, 1, 1)


def _fits_int64(a: np.ndarray) -> bool:
    if a.size == 0:
        return True
    return max(abs(int(a.max())), abs(int(a.min()))) < _INT64_SAFE


def as_int_array(a: np.ndarray) -> np.ndarray:
    """Cast an integer-valued array to int64 when safe, else keep Python ints."""
    a = np.asarray(a)
    if a.dtype == object:
        if _fits_int64(a):
            return a.astype(np.int64)
        return a
    return a.astype(np.int64, copy=False)


class RationalField(Field):
    characteristic = 0
    dtype = object

    def __repr__(self) -> str:
        return "QQ"

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")

    def scalar(self, x) -> Fraction:
        return _to_fraction(x)

    def parse(self, text: str) -> Fraction:
        return Fraction(text.strip())

    def format(self, x) -> str:
        return str(Fraction(x))

    def inv(self, x) -> Fraction:
        return 1 / Fraction(x)

    def array(self, data) -> np.ndarray:
        raw = np.asarray(data)
        if raw.dtype.kind in "iu" and raw.size:
            # few distinct values in structure tensors: convert each once
            vals, inv = np.unique(raw, return_inverse=True)
            fr = np.empty(len(vals), dtype=object)
            fr[:] = [Fraction(int(v)) for v in vals]
            return fr[inv.reshape(-1)].reshape(raw.shape)
        a = np.asarray(data, dtype=object)
        if a.size == 0:
            return a
        return _fraction_ufunc(a).astype(object)

    def zeros(self, shape) -> np.ndarray:
        return np.full(shape, Fraction(0), dtype=object)

    def integerize(self, t: np.ndarray) -> tuple[np.ndarray, int]:
        raw = np.asarray(t)
        if raw.dtype.kind in "iu":
            return raw.astype(np.int64), 1
        t = self.array(t)
        if t.size == 0:
            return np.zeros(t.shape, dtype=np.int64), 1
        nums, dens = _numerator(t).astype(object), _denominator(t).astype(object)
        scale = math.lcm(*set(dens.ravel().tolist()))
        if scale == 1:
            return as_int_array(nums), 1
        # integer arithmetic only: n/d * scale = n * (scale // d)
        return as_int_array(nums * (scale // dens)), scale

    def integer_rows(self, m: np.ndarray) -> np.ndarray:
        raw = np.asarray(m)
        if raw.dtype.kind in "iu":
            return raw.astype(np.int64)
        m = self.array(m)
        if m.size == 0:
            return np.zeros(m.shape, dtype=np.int64)
        nums, dens = _numerator(m).astype(object), _denominator(m).astype(object)
        scales = np.array([math.lcm(*set(row)) for row in dens.tolist()], dtype=object)
        if all(x == 1 for x in scales):
            return as_int_array(nums)
        return as_int_array(nums * (scales[:, None] // dens))

    def from_integers(self, ints: np.ndarray, scale: int = 1) -> np.ndarray:
        if scale == 1:
            return self.array(ints)
        ints = np.asarray(ints, dtype=object)
        out = np.empty(ints.shape, dtype=object)
        flat = out.reshape(-1)
        flat[:] = [Fraction(int(v), scale) for v in ints.reshape(-1)]
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.asarray(a), np.asarray(b)
        if a.size == 0 or b.size == 0 or a.ndim == 0 or b.ndim == 0:
            return self.array(a @ b)
        ai, sa = self.integerize(a)
        bi, sb = self.integerize(b)
        inner = a.shape[-1]
        bound = max(abs(int(ai.max())), abs(int(ai.min()))) * max(abs(int(bi.max())), abs(int(bi.min()))) * inner
        if ai.dtype == object or bi.dtype == object or bound >= _INT64_SAFE:
            prod = ai.astype(object) @ bi.astype(object)
        else:
            prod = ai @ bi
        return self.from_integers(prod, sa * sb)


class PrimeField(Field):
    dtype = np.int64

    def __init__(self, p: int):
        if p < 2 or p >= 2**31 or not _is_prime(p):
            raise ValueError(f"{p} is not a supported prime (need prime p < 2**31)")
        self.p = int(p)
        self.characteristic = self.p

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))

    def scalar(self, x) -> int:
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in {self}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, float):
            raise TypeError("floating point values are not exact scalars")
        return int(x) % self.p

    def parse(self, text: str) -> int:
        return self.scalar(text)

    def format(self, x) -> str:
        return str(int(x) % self.p)

    def inv(self, x) -> int:
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def array(self, data) -> np.ndarray:
        a = np.asarray(data)
        if a.dtype == object:
            if a.size and any(isinstance(v, (Fraction, str, float)) for v in a.flat):
                flat = [self.scalar(v) for v in a.flat]
                return np.array(flat, dtype=np.int64).reshape(a.shape)
            a = np.mod(a, self.p)
        elif a.dtype.kind == "f":
            raise TypeError("floating point values are not exact scalars")
        return np.mod(a.astype(np.int64, copy=False), self.p).astype(np.int64)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        inner = a.shape[-1] if a.ndim else 1
        if inner * (self.p - 1) ** 2 < _INT64_SAFE:
            return np.mod(a @ b, self.p)
        return self.array(a.astype(object) @ b.astype(object))

    def integerize(self, t: np.ndarray) -> tuple[np.ndarray, int]:
        return self.array(t), 1

    def integer_rows(self, m: np.ndarray) -> np.ndarray:
        return self.array(m)

    def from_integers(self, ints: np.ndarray, scale: int = 1) -> np.ndarray:
        out = self.array(np.mod(np.asarray(ints, dtype=object), self.p))
        if scale != 1:
            out = np.mod(out * self.inv(scale), self.p)
        return out


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d, s = d // 2, s + 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_spec(spec: str) -> Field:
    """Parse ``"Q"``, ``"QQ"``, ``"Fp:7"`` or ``"Fp 7"``."""
    s = spec.strip()
    if s in ("Q", "QQ"):
        return QQ
    for sep in (":", " "):
        if s.startswith("Fp" + sep):
            return GF(int(s[3:].strip()))
    raise ValueError(f"unknown field {spec!r}; expected Q or Fp:<p>")
