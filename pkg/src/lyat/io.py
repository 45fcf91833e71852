"""Reading and writing algebra definition files and matrix files.

Algebra files are line oriented::

    # comments start with '#'
    field Q                 # or: field Fp 7
    dim 2
    basis x y               # optional; defaults to e1 ... en
    [x,y] = y
    {x,y,y} = y
    {y,x,x} = 0

A file whose first directive is ``leibniz`` lists a left Leibniz product
``(a,b) = ...`` instead, and is converted with the skew-symmetrization
construction. Right-hand sides are sums of ``coef*label`` terms with integer
or ``p/q`` coefficients.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algebra import LYAlgebra, StructureError, format_vector, from_leibniz, from_products
from .fields import QQ, Field, field_from_spec

DATA_DIR = Path(__file__).parent / "data"


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = ""):
        where = f"{source}:{line}: " if line is not None else (f"{source}: " if source else "")
        super().__init__(where + message)
        self.line = line


_PRODUCT = re.compile(r"^([\[\{\(])\s*([^\]\}\)]*)\s*([\]\}\)])\s*=\s*(.*)$")
_TERM = re.compile(r"^(?:(?P<coef>[0-9]+(?:/[0-9]+)?)\s*\*?\s*)?(?P<label>[A-Za-z_][A-Za-z0-9_']*)?$")


def _parse_expr(text: str, fld: Field, index: dict[str, int], lineno: int, source: str) -> np.ndarray:
    vec = fld.zeros(len(index))
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ParseError("empty right-hand side", lineno, source)
    if s[0] not in "+-":
        s = "+" + s
    terms = re.findall(r"([+-])([^+-]*)", s)
    if "".join(a + b for a, b in terms) != s:
        raise ParseError(f"malformed expression {text.strip()!r}", lineno, source)
    for sign, body in terms:
        m = _TERM.match(body)
        if not body or not m or (m.group("coef") is None and m.group("label") is None):
            raise ParseError(f"cannot read term {sign}{body!r}", lineno, source)
        try:
            coef = fld.scalar(m.group("coef") or "1")
        except ZeroDivisionError as exc:
            raise ParseError(f"bad coefficient ({exc})", lineno, source) from None
        if sign == "-":
            coef = fld.scalar(-coef)
        label = m.group("label")
        if label is None:
            if coef != 0:
                raise ParseError(f"constant term {body!r} needs a basis label", lineno, source)
            continue
        if label not in index:
            raise ParseError(f"unknown basis label {label!r}", lineno, source)
        vec[index[label]] = fld.scalar(vec[index[label]] + coef)
    return fld.array(vec)


@dataclass
class _Header:
    field: Field | None = None
    dim: int | None = None
    labels: list[str] | None = None
    leibniz: bool = False


def parse_algebra(text: str, field: Field | None = None, name: str = "", source: str = "") -> LYAlgebra:
    """Parse an algebra definition. ``field`` overrides the file's header."""
    head = _Header()
    products: list[tuple[int, str, list[str], str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _PRODUCT.match(line)
        if m:
            op, inner, close, rhs = m.groups()
            if {"[": "]", "{": "}", "(": ")"}[op] != close:
                raise ParseError(f"mismatched brackets in {line!r}", lineno, source)
            args = [a.strip() for a in inner.split(",")]
            products.append((lineno, op, args, rhs))
            continue
        words = line.split()
        key = words[0].lower()
        if key == "leibniz" and len(words) == 1:
            head.leibniz = True
        elif key == "field":
            spec = " ".join(words[1:])
            try:
                head.field = field_from_spec(spec)
            except ValueError as exc:
                raise ParseError(str(exc), lineno, source) from None
        elif key == "dim" and len(words) == 2:
            try:
                head.dim = int(words[1])
            except ValueError:
                raise ParseError(f"dimension {words[1]!r} is not an integer", lineno, source) from None
            if head.dim < 0:
                raise ParseError("dimension must be nonnegative", lineno, source)
        elif key == "basis":
            head.labels = words[1:]
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno, source)

    fld = field or head.field or QQ
    if head.labels is None:
        if head.dim is None:
            raise ParseError("missing 'dim' or 'basis'", None, source)
        head.labels = [f"e{i + 1}" for i in range(head.dim)]
    if head.dim is not None and head.dim != len(head.labels):
        raise ParseError(f"dim {head.dim} does not match {len(head.labels)} basis labels", None, source)
    if len(set(head.labels)) != len(head.labels):
        raise ParseError("repeated basis label", None, source)
    index = {lab: i for i, lab in enumerate(head.labels)}
    n = len(index)

    def idx(args, lineno):
        out = []
        for a in args:
            if a not in index:
                raise ParseError(f"unknown basis label {a!r}", lineno, source)
            out.append(index[a])
        return tuple(out)

    if head.leibniz:
        p = fld.zeros((n, n, n))
        seen = {}
        for lineno, op, args, rhs in products:
            if op != "(" or len(args) != 2:
                raise ParseError("Leibniz files list products as (a,b) = ...", lineno, source)
            key = idx(args, lineno)
            v = _parse_expr(rhs, fld, index, lineno, source)
            if key in seen and not np.array_equal(seen[key], v):
                raise ParseError(f"conflicting entries for ({args[0]},{args[1]})", lineno, source)
            seen[key] = v
            p[key] = v
        try:
            return from_leibniz(p, fld, head.labels, name)
        except ValueError as exc:
            raise ParseError(str(exc), None, source) from None

    brackets: dict = {}
    triples: dict = {}
    oriented: dict = {}
    for lineno, op, args, rhs in products:
        want = {"[": 2, "{": 3}.get(op)
        if want is None or len(args) != want:
            raise ParseError(f"expected [a,b] or {{a,b,c}} products, got {op}...", lineno, source)
        key = idx(args, lineno)
        v = _parse_expr(rhs, fld, index, lineno, source)
        if key[0] == key[1] and np.any(v != 0):
            axiom = "LY1" if want == 2 else "LY2"
            raise ParseError(f"product with a repeated first pair must be 0 ({axiom})", lineno, source)
        canon = (want, min(key[0], key[1]), max(key[0], key[1]), *key[2:])
        signed = v if key[0] <= key[1] else fld.array(-v)
        if canon in oriented and not np.array_equal(oriented[canon], signed):
            raise ParseError("conflicting entries for the same product", lineno, source)
        oriented[canon] = signed
        (brackets if want == 2 else triples)[key] = v
    try:
        return from_products(fld, head.labels, brackets, triples, name)
    except StructureError as exc:
        raise ParseError(str(exc), None, source) from None


def resolve_path(path: str | Path) -> Path:
    """A path as given, or a bundled example by bare file name."""
    p = Path(path)
    if p.exists():
        return p
    bundled = DATA_DIR / p.name
    if bundled.exists():
        return bundled
    raise FileNotFoundError(f"no such file: {path}")


def load_algebra(path: str | Path, field: Field | None = None) -> LYAlgebra:
    p = resolve_path(path)
    return parse_algebra(p.read_text(encoding="utf-8"), field, name=p.stem, source=str(path))


def format_algebra(A: LYAlgebra) -> str:
    """Definition file text listing each nonzero product once (first index < second)."""
    fld = A.field
    field = "Q" if fld.characteristic == 0 else f"Fp {fld.characteristic}"
    lines = [f"field {field}", f"dim {A.n}", "basis " + " ".join(A.labels)]
    L = A.labels
    for i in range(A.n):
        for j in range(i + 1, A.n):
            if np.any(A.c[i, j] != 0):
                lines.append(f"[{L[i]},{L[j]}] = {format_vector(fld, A.c[i, j], L)}")
    for i in range(A.n):
        for j in range(i + 1, A.n):
            for k in range(A.n):
                if np.any(A.d[i, j, k] != 0):
                    lines.append(f"{{{L[i]},{L[j]},{L[k]}}} = {format_vector(fld, A.d[i, j, k], L)}")
    return "\n".join(lines) + "\n"


def parse_matrix(text: str, fld: Field = QQ, source: str = "") -> np.ndarray:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([fld.scalar(tok) for tok in line.split()])
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad scalar ({exc})", lineno, source) from None
    if not rows:
        raise ParseError("empty matrix", None, source)
    if any(len(r) != len(rows[0]) for r in rows):
        raise ParseError("rows have different lengths", None, source)
    return fld.array(rows)


def load_matrix(path: str | Path, fld: Field = QQ, n: int | None = None) -> np.ndarray:
    """Matrix file, or the keyword ``id`` for the identity (needs ``n``)."""
    if str(path) == "id" and n is not None:
        return fld.eye(n)
    p = resolve_path(path)
    m = parse_matrix(p.read_text(encoding="utf-8"), fld, str(path))
    if n is not None and m.shape != (n, n):
        raise ParseError(f"matrix is {m.shape[0]}x{m.shape[1]}, expected {n}x{n}", None, str(path))
    return m


def format_matrix(fld: Field, m) -> str:
    return "\n".join(" ".join(fld.format(x) for x in row) for row in np.asarray(m)) + "\n"


__all__ = [
    "DATA_DIR",
    "ParseError",
    "parse_algebra",
    "load_algebra",
    "resolve_path",
    "format_algebra",
    "parse_matrix",
    "load_matrix",
    "format_matrix",
]
