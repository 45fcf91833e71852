"""The graded enlargement Ť = Tt + Tt² + Tt³ and the embedding of
quasi-derivations of T as derivations of Ť.

Basis order of Ť: e_1 t, ..., e_n t, e_1 t², ..., e_n t², e_1 t³, ..., e_n t³.
Only [Tt, Tt] (into degree 2) and {Tt, Tt, Tt} (into degree 3) are nonzero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    AxiomError,
    AxiomReport,
    LYAlgebra,
    bracket_span,
    center,
    check_axioms,
    derived_algebra,
    triple_span,
)
from .audits import FAIL, PASS, UNMET, AuditResult
from .derivations import OperatorSpace, in_delta, operator_space, satisfies
from .linalg import (
    Subspace,
    complement,
    inverse,
    is_direct_sum,
    subspace_equal,
    subspace_intersect,
    subspace_sum,
)


@dataclass(frozen=True, eq=False)
class CheckAlgebra:
    base: LYAlgebra
    total: LYAlgebra
    grading: tuple[int, ...]
    U: Subspace  # complement of [T, T] in T
    V: Subspace  # complement of {T, T, T} in T
    report: AxiomReport
    P_bracket: np.ndarray = field(repr=False)  # projection onto [T, T] along U
    P_triple: np.ndarray = field(repr=False)  # projection onto {T, T, T} along V

    @property
    def n(self) -> int:
        return self.base.n

    def degree_block(self, k: int) -> slice:
        return slice((k - 1) * self.n, k * self.n)


def _projection(fld, keep: Subspace, along: Subspace) -> np.ndarray:
    """Matrix of the projection onto ``keep`` along ``along`` (they must be complementary)."""
    n = keep.ambient_dim
    if keep.dim == 0:
        return fld.zeros((n, n))
    M = fld.array(np.concatenate([along.basis, keep.basis]).T)
    Minv = inverse(M, fld)
    k = along.dim
    return fld.matmul(M[:, k:], Minv[k:, :])


def check_tensors(A: LYAlgebra) -> tuple[np.ndarray, np.ndarray]:
    fld = A.field
    n = A.n
    c = fld.zeros((3 * n, 3 * n, 3 * n))
    d = fld.zeros((3 * n,) * 4)
    c[:n, :n, n : 2 * n] = A.c
    d[:n, :n, :n, 2 * n :] = A.d
    return c, d


def build_check(A: LYAlgebra, reverse: bool = False, strict: bool = True) -> CheckAlgebra:
    """Construct Ť with pivot complements U, V (``reverse`` uses the last-available
    coordinates instead). With ``strict``, a failing axiom check raises."""
    fld = A.field
    n = A.n
    c, d = check_tensors(A)
    labels = [f"{lab}t{k}" for k in (1, 2, 3) for lab in A.labels]
    total = LYAlgebra(fld, c, d, tuple(labels), f"{A.name}_check" if A.name else "check")
    report = check_axioms(total)
    if strict and not report.ok:
        raise AxiomError(f"enlarged algebra fails the axioms: {report.summary()}", report)
    grading = tuple(k for k in (1, 2, 3) for _ in range(n))
    return _with_complements(A, total, grading, report, reverse)


def _with_complements(A, total, grading, report, reverse: bool) -> CheckAlgebra:
    fld = A.field
    B, Cs = bracket_span(A), triple_span(A)
    U, V = complement(B, reverse=reverse), complement(Cs, reverse=reverse)
    return CheckAlgebra(A, total, grading, U, V, report, _projection(fld, B, U), _projection(fld, Cs, V))


def rechoose_complements(CA: CheckAlgebra, reverse: bool = True) -> CheckAlgebra:
    """The same enlarged algebra with the other deterministic choice of U and V."""
    return _with_complements(CA.base, CA.total, CA.grading, CA.report, reverse)


@dataclass(frozen=True, eq=False)
class PhiMap:
    matrix: np.ndarray

    def flat(self) -> np.ndarray:
        return self.matrix.reshape(-1)


def phi(CA: CheckAlgebra, D, Dp, Dpp, check: bool = True) -> PhiMap:
    """φ(D): D on Tt, D'∘(projection to [T,T]) on Tt², D''∘(projection to {T,T,T}) on Tt³."""
    A = CA.base
    fld = A.field
    n = A.n
    D, Dp, Dpp = fld.array(D), fld.array(Dp), fld.array(Dpp)
    if check and not in_delta(A, [D, D, Dp, D, D, Dpp]):
        raise ValueError("(D, D, D', D, D, D'') does not satisfy the quasi-derivation identities")
    M = fld.zeros((3 * n, 3 * n))
    M[:n, :n] = D
    M[n : 2 * n, n : 2 * n] = fld.matmul(Dp, CA.P_bracket)
    M[2 * n :, 2 * n :] = fld.matmul(Dpp, CA.P_triple)
    return PhiMap(M)


def phi_of(CA: CheckAlgebra, D, qd: OperatorSpace | None = None) -> PhiMap:
    """φ(D) using the witnesses recovered from the quasi-derivation solution space."""
    qd = qd or operator_space(CA.base, "qder")
    blocks = qd.witnesses(D)
    if blocks is None:
        raise ValueError("map is not a quasi-derivation")
    return phi(CA, blocks[0], blocks[1], blocks[2], check=False)


def phi_image(CA: CheckAlgebra) -> Subspace:
    fld = CA.base.field
    m = (3 * CA.n) ** 2
    qd = operator_space(CA.base, "qder")
    vecs = [phi_of(CA, D, qd).flat() for D in qd.maps()]
    return Subspace.span(vecs, fld, m) if vecs else Subspace.zero(fld, m)


def _derived_check(CA: CheckAlgebra) -> Subspace:
    """[T,T]t² + {T,T,T}t³ inside Ť."""
    fld = CA.base.field
    n = CA.n
    vecs = []
    for v in bracket_span(CA.base).basis:
        w = fld.zeros(3 * n)
        w[n : 2 * n] = v
        vecs.append(w)
    for v in triple_span(CA.base).basis:
        w = fld.zeros(3 * n)
        w[2 * n :] = v
        vecs.append(w)
    return Subspace.span(vecs, fld, 3 * n) if vecs else Subspace.zero(fld, 3 * n)


def _upper_degrees(CA: CheckAlgebra) -> Subspace:
    """Tt² + Tt³."""
    fld = CA.base.field
    n = CA.n
    return Subspace.span(fld.eye(3 * n)[n:], fld, 3 * n)


def verify_phi(CA: CheckAlgebra) -> list[AuditResult]:
    A = CA.base
    fld = A.field
    n = A.n
    qd = operator_space(A, "qder")
    maps = qd.maps()
    phis = [phi_of(CA, D, qd) for D in maps]
    out = []

    span = Subspace.span([p.flat() for p in phis], fld, 9 * n * n) if phis else Subspace.zero(fld, 9 * n * n)
    out.append(
        AuditResult(
            "phi injective",
            PASS if span.dim == qd.dim else FAIL,
            f"rank {span.dim} of {qd.dim}",
            {"qder": qd.dim, "rank": span.dim},
        )
    )
    # degree-one block of φ(D) is D itself
    restrict = all(np.array_equal(p.matrix[:n, :n], fld.array(D)) for p, D in zip(phis, maps))
    out.append(AuditResult("phi restricts to D on Tt", PASS if restrict else FAIL))

    K = qd.witness_kernel()
    n2 = n * n
    independent = True
    for D, p in zip(maps, phis):
        base = qd.witnesses(D)
        for kvec in K.basis:
            alt = [fld.array(base[b] + kvec[b * n2 : (b + 1) * n2].reshape(n, n)) for b in range(3)]
            if not np.array_equal(phi(CA, *alt).matrix, p.matrix):
                independent = False
                break
    out.append(
        AuditResult(
            "phi independent of witnesses",
            PASS if independent else FAIL,
            f"{K.dim} free witness directions tested",
            {"witness_freedom": K.dim},
        )
    )
    lands = all(satisfies(CA.total, "der", p.matrix) for p in phis)
    out.append(AuditResult("phi(QDer) <= Der(check)", PASS if lands else FAIL))
    return out


def sample_zder_construction(CA: CheckAlgebra, rng: np.random.Generator, samples: int = 3) -> bool:
    """Maps Tt + Ut² + Vt³ -> Tt² + Tt³, zero on the derived part, are central derivations."""
    fld = CA.base.field
    n = CA.n
    total = CA.total
    dom = [np.eye(3 * n, dtype=np.int64)[i] for i in range(n)]
    for u in CA.U.basis:
        w = fld.zeros(3 * n)
        w[n : 2 * n] = u
        dom.append(w)
    for v in CA.V.basis:
        w = fld.zeros(3 * n)
        w[2 * n :] = v
        dom.append(w)
    dom_sp = Subspace.span(dom, fld, 3 * n)
    full = subspace_sum(dom_sp, _derived_check(CA))
    if full.dim != 3 * n:
        return False
    basis = fld.array(np.concatenate([dom_sp.basis, _derived_check(CA).basis]).T)
    Binv = inverse(basis, fld)
    k = dom_sp.dim
    for _ in range(samples):
        images = fld.zeros((3 * n, 3 * n))
        images[n:, :k] = fld.array(rng.integers(-2, 3, size=(2 * n, k)))
        f = fld.matmul(images, Binv)
        if not satisfies(total, "zder", f):
            return False
    return True


def verify_der_decomposition(CA: CheckAlgebra, rng: np.random.Generator | None = None, samples: int = 3) -> list[AuditResult]:
    A = CA.base
    fld = A.field
    name = "Der(check) = phi(QDer) + ZDer(check)"
    out = []
    derived_ok = subspace_equal(derived_algebra(CA.total), _derived_check(CA))
    out.append(AuditResult("derived algebra of check is graded", PASS if derived_ok else FAIL))
    if center(A).dim:
        out.append(AuditResult(name, UNMET, "base center is nonzero"))
        return out
    Z = center(CA.total)
    out.append(AuditResult("center of check is Tt2 + Tt3", PASS if subspace_equal(Z, _upper_degrees(CA)) else FAIL))

    dims = {}
    ok = True
    for label, reverse in (("pivot", False), ("reversed", True)):
        ca = rechoose_complements(CA, reverse)
        im = phi_image(ca)
        der_t = operator_space(CA.total, "der").space
        zder_t = operator_space(CA.total, "zder").space
        qd = operator_space(A, "qder").dim
        direct = is_direct_sum(im, zder_t)
        equal = subspace_equal(subspace_sum(im, zder_t), der_t)
        identity = der_t.dim == qd + zder_t.dim
        dims[label] = {"der_check": der_t.dim, "qder": qd, "zder_check": zder_t.dim, "phi_image": im.dim}
        ok = ok and direct and equal and identity
    out.append(AuditResult(name, PASS if ok else FAIL, "both complement choices", dims))
    rng = rng or np.random.default_rng(0)
    out.append(
        AuditResult(
            "zder construction sample",
            PASS if sample_zder_construction(CA, rng, samples) else FAIL,
        )
    )
    return out


__all__ = [
    "CheckAlgebra",
    "PhiMap",
    "build_check",
    "rechoose_complements",
    "check_tensors",
    "phi",
    "phi_of",
    "phi_image",
    "verify_phi",
    "verify_der_decomposition",
    "sample_zder_construction",
]
