"""Lie-Yamaguti algebras given by structure constants.

``c[i, j, k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]`` and
``d[i, j, k, l]`` the coefficient of ``e_l`` in ``{e_i, e_j, e_k}``.
Endomorphisms are ``n x n`` matrices acting on coordinate columns, so
``F[a, b]`` is the coefficient of ``e_a`` in ``F(e_b)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

import numpy as np

from .fields import QQ, Field
from .linalg import ShapeError, Subspace, nonmembers, nullspace_of_integer_matrix
from .tensor import iein

AXIOMS = ("LY1", "LY2", "LY3", "LY4", "LY5", "LY6")


class StructureError(ValueError):
    """Structure constants violate skew-symmetry (LY1/LY2) or are inconsistent."""


class LeibnizError(ValueError):
    pass


class AxiomError(ValueError):
    """An algebra failed one of LY3-LY6; ``report`` holds the counterexample."""

    def __init__(self, message: str, report: "AxiomReport"):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True, eq=False)
class LYAlgebra:
    field: Field
    c: np.ndarray
    d: np.ndarray
    labels: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        fld = self.field
        c = fld.array(self.c)
        d = fld.array(self.d)
        n = c.shape[0]
        if c.shape != (n, n, n) or d.shape != (n, n, n, n):
            raise ShapeError(f"structure tensors have shapes {c.shape} and {d.shape}")
        if not self.labels:
            labels = tuple(f"e{i}" for i in range(n))
        else:
            labels = tuple(self.labels)
        if len(labels) != n or len(set(labels)) != n:
            raise StructureError("basis labels must be n distinct strings")
        ci, sc = fld.integerize(c)
        di, sd = fld.integerize(d)
        mod = fld.characteristic

        def nonzero(t):
            return np.mod(t, mod) != 0 if mod else t != 0

        bad = nonzero(ci + ci.transpose(1, 0, 2))
        if np.any(bad):
            i, j, _ = np.argwhere(bad)[0]
            raise StructureError(f"[{labels[i]},{labels[j]}] is not skew (LY1)")
        bad = nonzero(di + di.transpose(1, 0, 2, 3))
        if np.any(bad):
            i, j, k, _ = np.argwhere(bad)[0]
            raise StructureError(
                f"{{{labels[i]},{labels[j]},{labels[k]}}} is not skew in its first two slots (LY2)"
            )
        idx = np.arange(n)
        if np.any(nonzero(ci[idx, idx])):
            raise StructureError("[a,a] != 0 (LY1)")
        if np.any(nonzero(di[idx, idx])):
            raise StructureError("{a,a,b} != 0 (LY2)")
        object.__setattr__(self, "_ints", (ci, sc, di, sd))
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @property
    def dim(self) -> int:
        return self.n

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"<LYAlgebra{tag} dim={self.n} over {self.field}>"

    # integer forms used by every linear-condition builder
    @property
    def c_int(self) -> np.ndarray:
        return self._ints[0]

    @property
    def c_scale(self) -> int:
        return self._ints[1]

    @property
    def d_int(self) -> np.ndarray:
        return self._ints[2]

    @property
    def d_scale(self) -> int:
        return self._ints[3]

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.n)
        v[i] = self.field.scalar(1)
        return v

    def element(self, coords) -> np.ndarray:
        v = self.field.array(coords).reshape(-1)
        if v.shape[0] != self.n:
            raise ShapeError(f"element has {v.shape[0]} coordinates, algebra has dimension {self.n}")
        return v

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def format(self, v) -> str:
        return format_vector(self.field, v, self.labels)

    def is_abelian(self) -> bool:
        return not np.any(self.c != 0) and not np.any(self.d != 0)


def format_vector(fld: Field, v, labels: Sequence[str]) -> str:
    parts = []
    for coef, lab in zip(np.asarray(v).reshape(-1), labels):
        if coef == 0:
            continue
        s = fld.format(coef)
        if s == "1":
            parts.append(lab)
        elif s == "-1":
            parts.append("-" + lab)
        else:
            parts.append(f"{s}*{lab}")
    if not parts:
        return "0"
    return " + ".join(parts).replace("+ -", "- ")


def from_products(
    fld: Field,
    labels: Sequence[str],
    brackets: Mapping[tuple[int, int], Sequence] | None = None,
    triples: Mapping[tuple[int, int, int], Sequence] | None = None,
    name: str = "",
) -> LYAlgebra:
    """Build an algebra from listed products, antisymmetrizing and zero-filling.

    Listing both ``[i,j]`` and ``[j,i]`` is allowed only when they are negatives
    of each other; likewise for ``{i,j,k}`` and ``{j,i,k}``.
    """
    n = len(labels)
    c = fld.zeros((n, n, n))
    d = fld.zeros((n, n, n, n))
    seen_c: dict[tuple[int, int], np.ndarray] = {}
    for (i, j), vec in (brackets or {}).items():
        v = fld.array(vec).reshape(n)
        if i == j:
            if np.any(v != 0):
                raise StructureError(f"[{labels[i]},{labels[i]}] must be 0 (LY1)")
            continue
        key = (min(i, j), max(i, j))
        oriented = v if i < j else fld.array(-v)
        if key in seen_c and not np.array_equal(seen_c[key], oriented):
            raise StructureError(f"conflicting entries for [{labels[i]},{labels[j]}]")
        seen_c[key] = oriented
    for (i, j), v in seen_c.items():
        c[i, j] = v
        c[j, i] = fld.array(-v)
    seen_d: dict[tuple[int, int, int], np.ndarray] = {}
    for (i, j, k), vec in (triples or {}).items():
        v = fld.array(vec).reshape(n)
        if i == j:
            if np.any(v != 0):
                raise StructureError(
                    f"{{{labels[i]},{labels[i]},{labels[k]}}} must be 0 (LY2)"
                )
            continue
        key = (min(i, j), max(i, j), k)
        oriented = v if i < j else fld.array(-v)
        if key in seen_d and not np.array_equal(seen_d[key], oriented):
            raise StructureError(
                f"conflicting entries for {{{labels[i]},{labels[j]},{labels[k]}}}"
            )
        seen_d[key] = oriented
    for (i, j, k), v in seen_d.items():
        d[i, j, k] = v
        d[j, i, k] = fld.array(-v)
    return LYAlgebra(fld, c, d, tuple(labels), name)


def abelian(n: int, fld: Field = QQ) -> LYAlgebra:
    return LYAlgebra(fld, fld.zeros((n, n, n)), fld.zeros((n, n, n, n)), name=f"abelian_{n}")


# ---------------------------------------------------------------------------
# evaluation


def _check_element(A: LYAlgebra, *vs) -> list[np.ndarray]:
    return [A.element(v) for v in vs]


def bracket(A: LYAlgebra, x, y) -> np.ndarray:
    x, y = _check_element(A, x, y)
    return A.field.array(np.einsum("i,j,ijk->k", x, y, A.c))


def triple(A: LYAlgebra, x, y, z) -> np.ndarray:
    x, y, z = _check_element(A, x, y, z)
    return A.field.array(np.einsum("i,j,k,ijkl->l", x, y, z, A.d))


def left_multiplication(A: LYAlgebra, x, y) -> np.ndarray:
    """Matrix of ``z -> {x, y, z}``."""
    x, y = _check_element(A, x, y)
    return A.field.array(np.einsum("i,j,ijkl->lk", x, y, A.d))


# ---------------------------------------------------------------------------
# axioms


@dataclass
class AxiomCheck:
    axiom: str
    passed: bool
    counterexample: tuple[int, ...] | None = None
    defect: np.ndarray | None = None

    def to_dict(self, A: LYAlgebra) -> dict:
        out = {"axiom": self.axiom, "passed": self.passed}
        if not self.passed:
            out["counterexample"] = [A.labels[i] for i in self.counterexample]
            out["defect"] = A.format(self.defect)
            out["defect_coordinates"] = [A.field.format(x) for x in self.defect]
        return out


@dataclass
class AxiomReport:
    checks: dict[str, AxiomCheck] = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(ch.passed for ch in self.checks.values())

    def failures(self) -> list[AxiomCheck]:
        return [ch for ch in self.checks.values() if not ch.passed]

    def __getitem__(self, axiom: str) -> AxiomCheck:
        return self.checks[axiom]

    def summary(self) -> str:
        if self.ok:
            return "all axioms LY1-LY6 hold"
        parts = []
        for ch in self.failures():
            parts.append(f"{ch.axiom} fails at basis tuple {ch.counterexample}")
        return "; ".join(parts)


def _first_defect(fld: Field, defect: np.ndarray, scale: int, offset: tuple = ()):
    nz = np.argwhere(defect != 0)
    if nz.size == 0:
        return None
    idx = tuple(int(i) for i in nz[0][:-1])
    vec = fld.from_integers(defect[idx], scale)
    if not np.any(vec != 0):
        # over GF(p) a nonzero integer defect may vanish; recheck after reduction
        return None
    return offset + idx, vec


def _scan(fld: Field, chunks, scale: int):
    """Return the first (tuple, defect) over chunked integer defect arrays."""
    for offset, arr in chunks:
        if fld.characteristic:
            arr = np.mod(arr, fld.characteristic)
        hit = _first_defect(fld, arr, scale, offset)
        if hit is not None:
            return hit
    return None


def check_axioms(A: LYAlgebra) -> AxiomReport:
    """Check LY1-LY6 on basis tuples (sufficient by multilinearity)."""
    fld = A.field
    n = A.n
    C, D = A.c_int, A.d_int
    sc, sd = A.c_scale, A.d_scale
    report = AxiomReport()
    report.checks["LY1"] = AxiomCheck("LY1", True)
    report.checks["LY2"] = AxiomCheck("LY2", True)

    def record(name, hit):
        if hit is None:
            report.checks[name] = AxiomCheck(name, True)
        else:
            report.checks[name] = AxiomCheck(name, False, hit[0], hit[1])

    if n == 0:
        for ax in AXIOMS[2:]:
            record(ax, None)
        return report

    # LY3: cyclic {a,b,c} + cyclic [[a,b],c]; scaled by sd*sc^2
    cyc_t = D + D.transpose(2, 0, 1, 3) + D.transpose(1, 2, 0, 3)
    cc = iein("abm,mcl->abcl", C, C)
    cyc_b = cc + cc.transpose(2, 0, 1, 3) + cc.transpose(1, 2, 0, 3)
    if cyc_t.dtype == object or cyc_b.dtype == object or max(sc, sd) > 2**20:
        cyc_t, cyc_b = cyc_t.astype(object), cyc_b.astype(object)
    ly3 = cyc_t * (sc * sc) + cyc_b * sd
    record("LY3", _scan(fld, [((), ly3)], sd * sc * sc))

    # LY4: {[a,b],c,d} cyclic in a,b,c
    def ly4_chunks():
        t = iein("abm,mcdl->abcdl", C, D)
        yield (), t + t.transpose(2, 0, 1, 3, 4) + t.transpose(1, 2, 0, 3, 4)

    record("LY4", _scan(fld, ly4_chunks(), sc * sd))

    # LY5: {a,b,[c,d]} - [{a,b,c},d] - [c,{a,b,d}]
    def ly5_chunks():
        for a in range(n):
            t1 = iein("cdm,bml->bcdl", C, D[a])
            t2 = iein("bcm,mdl->bcdl", D[a], C)
            t3 = iein("bdm,cml->bcdl", D[a], C)
            yield (a,), t1 - t2 - t3

    record("LY5", _scan(fld, ly5_chunks(), sc * sd))

    # LY6: L(a,b) is a derivation of the triple product
    def ly6_chunks():
        for a in range(n):
            Da = D[a]
            t1 = iein("cdem,bml->bcdel", D, Da)
            t2 = iein("bcm,mdel->bcdel", Da, D)
            t3 = iein("bdm,cmel->bcdel", Da, D)
            t4 = iein("bem,cdml->bcdel", Da, D)
            yield (a,), t1 - t2 - t3 - t4

    record("LY6", _scan(fld, ly6_chunks(), sd * sd))
    return report


def require_axioms(A: LYAlgebra) -> AxiomReport:
    report = check_axioms(A)
    if not report.ok:
        raise AxiomError(f"{A.name or 'algebra'} is not an LY-algebra: {report.summary()}", report)
    return report


# ---------------------------------------------------------------------------
# subspaces attached to an algebra


def bracket_span(A: LYAlgebra) -> Subspace:
    """[T, T]."""
    return Subspace.span(A.c.reshape(-1, A.n), A.field, A.n)


def triple_span(A: LYAlgebra) -> Subspace:
    """{T, T, T}."""
    return Subspace.span(A.d.reshape(-1, A.n), A.field, A.n)


def derived_algebra(A: LYAlgebra) -> Subspace:
    vs = np.concatenate([A.c.reshape(-1, A.n), A.d.reshape(-1, A.n)])
    return Subspace.span(vs, A.field, A.n)


def centralizer(A: LYAlgebra, I: Subspace) -> Subspace:
    """``{x : {x,a,y} = {y,a,x} = 0 for a in I, y in T, and [x,y] = 0 for y in T}``."""
    fld = A.field
    n = A.n
    if I.ambient_dim != n:
        raise ShapeError("subspace is not in this algebra")
    # rows indexed by (y, output) with unknown coordinates of x as columns
    blocks = [A.c_int.transpose(1, 2, 0).reshape(n * n, n)]
    if I.dim:
        a_int, _ = fld.integerize(I.basis)
        for a in a_int:
            blocks.append(iein("m,imjl->jli", a, A.d_int).reshape(n * n, n))
            blocks.append(iein("m,jmil->jli", a, A.d_int).reshape(n * n, n))
    return nullspace_of_integer_matrix(np.concatenate(blocks), n, fld)


def center(A: LYAlgebra) -> Subspace:
    return centralizer(A, Subspace.full(A.field, A.n))


def is_centerless(A: LYAlgebra) -> bool:
    return center(A).dim == 0


def is_ideal(A: LYAlgebra, I: Subspace) -> bool:
    """Closure of I under brackets with T and under triples in every slot."""
    fld = A.field
    n = A.n
    if I.dim == 0:
        return True
    U, _ = fld.integerize(I.basis)
    C, D = A.c_int, A.d_int
    images = np.concatenate(
        [
            iein("uj,ijk->uik", U, C).reshape(-1, n),
            iein("uk,ijkl->uijl", U, D).reshape(-1, n),
            iein("uj,ijkl->uikl", U, D).reshape(-1, n),
            iein("ui,ijkl->ujkl", U, D).reshape(-1, n),
        ]
    )
    return nonmembers(I, images).size == 0


def kernel_of(A: LYAlgebra, f) -> Subspace:
    from .linalg import nullspace

    return nullspace(f, A.field)


def image_of(A: LYAlgebra, f) -> Subspace:
    f = A.field.array(f)
    return Subspace.span(f.T, A.field, A.n)


# ---------------------------------------------------------------------------
# constructions


def is_left_leibniz(p: np.ndarray, fld: Field = QQ) -> bool:
    p = fld.array(p)
    # x.(y.z) - (x.y).z - y.(x.z) on basis triples
    lhs = np.einsum("jkm,iml->ijkl", p, p)
    r1 = np.einsum("ijm,mkl->ijkl", p, p)
    r2 = np.einsum("ikm,jml->ijkl", p, p)
    return not np.any(fld.array(lhs - r1 - r2) != 0)


def from_leibniz(p, fld: Field = QQ, labels: Sequence[str] = (), name: str = "") -> LYAlgebra:
    """LY-algebra of a left Leibniz algebra: skew-symmetrized bracket and
    ``{x, y, z} = -1/4 (x.y).z``."""
    fld.require_char_not(2, what="the Leibniz construction")
    p = fld.array(p)
    n = p.shape[0]
    if p.shape != (n, n, n):
        raise ShapeError("Leibniz product table must be n x n x n")
    if not is_left_leibniz(p, fld):
        raise LeibnizError("product table does not satisfy x.(y.z) = (x.y).z + y.(x.z)")
    half = fld.inv(fld.scalar(2))
    quarter = fld.inv(fld.scalar(4))
    c = fld.array((p - p.transpose(1, 0, 2)) * half)
    d = fld.array(-np.einsum("ijm,mkl->ijkl", p, p) * quarter)
    return LYAlgebra(fld, c, d, tuple(labels), name)


def compose_output(fld: Field, f: np.ndarray, t: np.ndarray) -> np.ndarray:
    """``f o t`` for a multilinear map stored with its output index last."""
    f = fld.array(f)
    return fld.array(np.tensordot(t, f, axes=([t.ndim - 1], [1])))


def perturb(A: LYAlgebra, f) -> LYAlgebra:
    """Structure ``(f o mu1, f o mu2)``; the axioms are not asserted."""
    fld = A.field
    f = fld.array(f)
    if f.shape != (A.n, A.n):
        raise ShapeError(f"perturbation map must be {A.n} x {A.n}")
    return LYAlgebra(
        fld,
        compose_output(fld, f, A.c),
        compose_output(fld, f, A.d),
        A.labels,
        f"{A.name}_perturbed" if A.name else "",
    )
