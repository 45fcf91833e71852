"""Structural audits of the operator spaces.

Each audit recomputes the relevant spaces and checks a containment or identity
exactly on computed basis elements. Audits never raise on a failed claim; they
return an :class:`AuditResult` whose status is ``pass``, ``fail`` or ``unmet``
(hypothesis not satisfied, nothing asserted).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable

import numpy as np

from .algebra import LYAlgebra, center, derived_algebra, image_of, is_ideal, kernel_of
from .derivations import delta_families, in_delta, operator_space, solve_system
from .fields import CharacteristicError
from .linalg import Subspace, is_direct_sum, nonmembers, subspace_contains, subspace_equal, subspace_intersect, subspace_sum
from .poly import minimal_polynomial
from .tensor import iein

PASS, FAIL, UNMET = "pass", "fail", "unmet"
# recorded for inspection, never fails a run
INFO = "info"


@dataclass
class AuditResult:
    name: str
    status: str
    detail: str = ""
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail, "data": self.data}


def _result(name: str, ok: bool, detail: str = "", **data) -> AuditResult:
    return AuditResult(name, PASS if ok else FAIL, detail, data)


def _flat(m) -> np.ndarray:
    return np.asarray(m).reshape(-1)


def _stack(fld, maps, n: int) -> np.ndarray:
    """Integer stack of maps; a common positive scale does not affect membership."""
    if not len(maps):
        return np.zeros((0, n, n), dtype=np.int64)
    ints, _ = fld.integerize(np.stack([fld.array(m) for m in maps]))
    return ints


def _compose(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """All products X[i] @ Y[j], shape (len X, len Y, n, n)."""
    return iein("iab,jbc->ijac", X, Y)


def pair_products(fld, xs, ys, n: int, op: str) -> np.ndarray:
    """Integer multiples of ``op(x_i, y_j)`` for all pairs, shape (|xs|, |ys|, n, n).

    ``op`` is ``compose``, ``commutator`` or ``jordan``.
    """
    X, Y = _stack(fld, xs, n), _stack(fld, ys, n)
    P = _compose(X, Y)
    if op == "compose":
        return P
    Q = _compose(Y, X).transpose(1, 0, 2, 3)
    return P - Q if op == "commutator" else P + Q


def _escape(space: Subspace, P: np.ndarray):
    """First pair index (i, j) whose product lies outside ``space``, else None."""
    if P.size == 0:
        return None
    bad = nonmembers(space, P.reshape(-1, space.ambient_dim))
    if bad.size == 0:
        return None
    return tuple(int(t) for t in np.unravel_index(int(bad[0]), P.shape[:2]))


def _all_zero(fld, P: np.ndarray) -> bool:
    if fld.characteristic:
        P = np.mod(P, fld.characteristic)
    return not np.any(P != 0)


def commutator(fld, a, b) -> np.ndarray:
    return fld.array(fld.matmul(a, b) - fld.matmul(b, a))


def jordan_product(fld, a, b) -> np.ndarray:
    """``a b + b a``."""
    return fld.array(fld.matmul(a, b) + fld.matmul(b, a))


def _space(A: LYAlgebra, kind: str):
    return operator_space(A, kind)


# ---------------------------------------------------------------------------


def audit_inclusion_chain(A: LYAlgebra) -> AuditResult:
    chain = ["zder", "der", "qder", "gder"]
    spaces = [_space(A, k).space for k in chain]
    broken = [f"{a} <= {b}" for a, b, u, w in zip(chain, chain[1:], spaces, spaces[1:]) if not subspace_contains(w, u)]
    dims = {k: s.dim for k, s in zip(chain, spaces)}
    return _result("inclusion_chain", not broken, "; ".join(broken) or "ZDer <= Der <= QDer <= GDer", dims=dims)


def audit_product_closures(A: LYAlgebra) -> list[AuditResult]:
    fld, n = A.field, A.n
    S = {k: _space(A, k) for k in ("der", "qder", "gder", "centroid", "qcentroid")}
    M = {k: v.maps() for k, v in S.items()}
    out = []

    def item(name, target, P):
        bad = _escape(S[target].space, P)
        out.append(_result(name, bad is None, "" if bad is None else f"basis pair {bad} escapes"))

    item("[Der,C] <= C", "centroid", pair_products(fld, M["der"], M["centroid"], n, "commutator"))
    item("[QDer,QC] <= QC", "qcentroid", pair_products(fld, M["qder"], M["qcentroid"], n, "commutator"))
    item("C.Der <= Der", "der", pair_products(fld, M["centroid"], M["der"], n, "compose"))
    item("C <= QDer", "qder", _stack(fld, M["centroid"], n)[:, None])
    item("[QC,QC] <= QDer", "qder", pair_products(fld, M["qcentroid"], M["qcentroid"], n, "commutator"))
    ok = subspace_contains(S["gder"].space, subspace_sum(S["qder"].space, S["qcentroid"].space))
    out.append(_result("QDer+QC <= GDer", ok))
    return out


def qc_lie_hull(A: LYAlgebra) -> Subspace:
    """``QC + [QC, QC]`` as a subspace of flattened endomorphisms."""
    fld, n = A.field, A.n
    maps = _space(A, "qcentroid").maps()
    if not maps:
        return Subspace.zero(fld, n * n)
    vecs = np.concatenate(
        [_stack(fld, maps, n).reshape(-1, n * n), pair_products(fld, maps, maps, n, "commutator").reshape(-1, n * n)]
    )
    return Subspace.span(fld.integer_rows(vecs), fld, n * n)


def audit_qc_hull(A: LYAlgebra) -> AuditResult:
    fld, n = A.field, A.n
    L = qc_lie_hull(A)
    inside = subspace_contains(_space(A, "gder").space, L)
    maps = [v.reshape(n, n) for v in L.basis]
    bad = _escape(L, pair_products(fld, maps, maps, n, "commutator"))
    detail = "" if inside else "not inside GDer"
    if bad is not None:
        detail = f"commutator of hull basis pair {bad} escapes"
    return _result("QC+[QC,QC] subalgebra of GDer", inside and bad is None, detail, dim=L.dim)


def audit_centroid_qc_commutators(A: LYAlgebra) -> AuditResult:
    fld, n = A.field, A.n
    Z = center(A)
    name = "[C,QC] maps into Z"
    P = pair_products(fld, _space(A, "centroid").maps(), _space(A, "qcentroid").maps(), n, "commutator")
    # columns of every commutator must lie in Z
    cols = P.transpose(0, 1, 3, 2)
    bad = _escape(Z, cols.reshape(P.shape[0], -1, n)) if P.size else None
    if bad is not None:
        i, k = bad
        j = k // n
        return _result(name, False, f"basis pair {(i, j)} leaves the center")
    return _result(name, True, "centerless: all vanish" if Z.dim == 0 else "", center_dim=Z.dim)


def audit_centroid_in_qder_qc(A: LYAlgebra) -> AuditResult:
    C = _space(A, "centroid").space
    ok = subspace_contains(subspace_intersect(_space(A, "qder").space, _space(A, "qcentroid").space), C)
    return _result("C <= QDer & QC", ok)


def audit_closure(A: LYAlgebra) -> list[AuditResult]:
    """Der, QDer, GDer closed under commutator; C closed under composition and
    commutative when the center vanishes; GDer preserves the center."""
    fld, n = A.field, A.n
    out = []
    for kind in ("der", "qder", "gder"):
        sp = _space(A, kind)
        bad = _escape(sp.space, pair_products(fld, sp.maps(), sp.maps(), n, "commutator"))
        out.append(_result(f"{kind} closed under commutator", bad is None))
    C = _space(A, "centroid")
    bad = _escape(C.space, pair_products(fld, C.maps(), C.maps(), n, "compose"))
    out.append(_result("centroid closed under composition", bad is None))
    Z = center(A)
    if Z.dim == 0:
        comm = _all_zero(fld, pair_products(fld, C.maps(), C.maps(), n, "commutator"))
        out.append(_result("centroid commutative (centerless)", comm))
    else:
        out.append(AuditResult("centroid commutative (centerless)", UNMET, "center is nonzero"))
    G = _stack(fld, _space(A, "gder").maps(), n)
    pres = True
    if Z.dim and G.size:
        imgs = iein("gab,bz->gza", G, fld.integerize(Z.basis)[0].T)
        pres = nonmembers(Z, imgs.reshape(-1, n)).size == 0
    out.append(_result("gder preserves the center", pres))
    return out


def audit_swap_symmetry(A: LYAlgebra, rng: np.random.Generator | None = None, samples: int = 4) -> AuditResult:
    """Tuples (f, f1, f2, f1, f4, f5) stay in the constraint set after swapping f and f1.

    Samples random elements of the solution space restricted to f3 = f1 and
    checks the swapped tuple by direct contraction.
    """
    fld = A.field
    n2 = A.n * A.n
    fams = delta_families([(0, 1), (1, 1), (2, 1), (1, 1), (3, 1), (4, 1)])
    W = solve_system(A, fams, 5)
    rng = rng or np.random.default_rng(0)
    for _ in range(samples if W.dim else 0):
        coef = fld.array(rng.integers(-3, 4, size=W.dim))
        w = fld.matmul(coef, W.basis)
        f, f1, f2, f4, f5 = (w[b * n2 : (b + 1) * n2].reshape(A.n, A.n) for b in range(5))
        if not in_delta(A, [f1, f, f2, f, f4, f5]):
            return _result("swap symmetry", False, "swapped tuple leaves the constraint set")
    return _result("swap symmetry", True, solution_dim=W.dim)


# ---------------------------------------------------------------------------


def audit_sliding(A: LYAlgebra, D, Dp) -> AuditResult:
    """Both identities of the sliding lemma, for a pair (D, D') meeting its hypotheses."""
    fld = A.field
    fld.require_char_zero("the sliding lemma")
    name = "sliding identities"
    D, Dp = fld.array(D), fld.array(Dp)
    z = fld.zeros(D.shape)
    m = fld.array(-D)
    hyp = (
        in_delta(A, [D, D, Dp, D, D, fld.array(Dp * fld.scalar(3) * fld.inv(fld.scalar(2)))])
        and in_delta(A, [D, m, z, m, z, z])
        and in_delta(A, [D, m, z, z, m, z])
    )
    if not hyp:
        return AuditResult(name, UNMET, "hypothesis tuples not satisfied")
    # both sides of each identity are homogeneous of the same degree, so the
    # integer-scaled tensors compare exactly
    Di = _stack(fld, [D], A.n)[0]
    c, d = A.c_int, A.d_int
    lhs = iein("yza,ka,xkb->xyzb", c, Di, c)
    rhs = iein("ay,azb,xbk->xyzk", Di, c, c)
    first = _all_zero(fld, lhs - rhs)
    lhs = iein("uvyb,ab,axzk->uvyxzk", d, Di, d)
    rhs = iein("au,avyb,bxzk->uvyxzk", Di, d, d)
    second = _all_zero(fld, lhs - rhs)
    return _result(name, first and second, f"bracket identity {first}, triple identity {second}")


def sliding_pairs(A: LYAlgebra) -> list[tuple[np.ndarray, np.ndarray]]:
    """(D, D') pairs from S whose D also lies in QC."""
    fld = A.field
    S = operator_space(A, "s_space")
    QC = operator_space(A, "qcentroid")
    both = subspace_intersect(S.space, QC.space)
    out = []
    for v in both.basis:
        D = v.reshape(A.n, A.n)
        blocks = S.witnesses(D)
        out.append((D, blocks[1]))
    return out


def audit_centroid_as_intersection(A: LYAlgebra) -> AuditResult:
    A.field.require_char_zero("S")
    name = "C = S & QC (centerless)"
    if center(A).dim:
        return AuditResult(name, UNMET, "center is nonzero")
    C = _space(A, "centroid").space
    rhs = subspace_intersect(operator_space(A, "s_space").space, _space(A, "qcentroid").space)
    return _result(name, subspace_equal(C, rhs), dim_c=C.dim, dim_rhs=rhs.dim)


def audit_jordan(A: LYAlgebra) -> AuditResult:
    fld, n = A.field, A.n
    fld.require_char_not(2, what="the Jordan audit")
    QC = _space(A, "qcentroid")
    maps = QC.maps()
    name = "QC Jordan-closed"
    XY = pair_products(fld, maps, maps, n, "jordan")
    bad = _escape(QC.space, XY)
    if bad is not None:
        return _result(name, False, f"basis pair {bad} escapes")
    X = _stack(fld, maps, n)
    if X.size:
        XX = iein("iab,ibc->iac", X, X) * 2
        # (x*y)*(x*x) against x*(y*(x*x)), all scaled integer forms of equal degree
        lhs = iein("ijab,ibc->ijac", XY, XX) + iein("iab,ijbc->ijac", XX, XY)
        YXX = iein("jab,ibc->ijac", X, XX) + iein("iab,jbc->ijac", XX, X)
        rhs = iein("iab,ijbc->ijac", X, YXX) + iein("ijab,ibc->ijac", YXX, X)
        if not _all_zero(fld, lhs - rhs):
            return _result(name, False, "Jordan identity fails")
    return _result(name, True, dim=QC.dim)


def audit_qc_lie_criteria(A: LYAlgebra) -> list[AuditResult]:
    fld, n = A.field, A.n
    QC = _space(A, "qcentroid")
    maps = QC.maps()
    out = []
    lie = _escape(QC.space, pair_products(fld, maps, maps, n, "commutator")) is None
    if fld.characteristic == 2:
        out.append(AuditResult("QC composition-closed iff commutator-closed", UNMET, "characteristic 2"))
    else:
        comp = _escape(QC.space, pair_products(fld, maps, maps, n, "compose")) is None
        out.append(
            _result("QC composition-closed iff commutator-closed", comp == lie, composition=comp, commutator=lie)
        )
    if fld.characteristic in (2, 3):
        out.append(AuditResult("QC Lie iff [QC,QC] = 0", UNMET, f"characteristic {fld.characteristic}"))
    elif center(A).dim:
        out.append(AuditResult("QC Lie iff [QC,QC] = 0", UNMET, "center is nonzero"))
    else:
        commuting = _all_zero(fld, pair_products(fld, maps, maps, n, "commutator"))
        out.append(_result("QC Lie iff [QC,QC] = 0", lie == commuting, commutator_closed=lie, commuting=commuting))
    return out


def audit_centroid_ideals(A: LYAlgebra, D) -> AuditResult:
    name = "Ker D, Im D ideals"
    if D not in _space(A, "centroid"):
        return AuditResult(name, UNMET, "map is not in the centroid")
    ok = is_ideal(A, kernel_of(A, D)) and is_ideal(A, image_of(A, D))
    return _result(name, ok)


def audit_fitting_split(A: LYAlgebra, D) -> AuditResult:
    fld = A.field
    name = "T = Ker D + Im D"
    if center(A).dim:
        return AuditResult(name, UNMET, "center is nonzero")
    if D not in _space(A, "qcentroid"):
        return AuditResult(name, UNMET, "map is not in the quasi-centroid")
    pi = minimal_polynomial(D, fld)
    if pi.divisible_by_x_power(3):
        return AuditResult(name, UNMET, f"X^3 divides the minimal polynomial {pi}")
    K, I = kernel_of(A, D), image_of(A, D)
    ok = is_direct_sum(K, I) and subspace_sum(K, I).dim == A.n
    return _result(name, ok, f"minimal polynomial {pi}", ker=K.dim, im=I.dim)


def audit_all(A: LYAlgebra) -> list[AuditResult]:
    """Every structural audit that needs no extra input; per-map audits run on
    each centroid/quasi-centroid basis element."""
    fld = A.field
    out = [audit_inclusion_chain(A), *audit_product_closures(A), audit_qc_hull(A), audit_centroid_qc_commutators(A)]
    out.append(audit_centroid_in_qder_qc(A))
    out.extend(audit_closure(A))
    out.append(audit_swap_symmetry(A))
    if fld.characteristic == 0:
        out.append(audit_centroid_as_intersection(A))
        for D, Dp in sliding_pairs(A):
            out.append(audit_sliding(A, D, Dp))
    if fld.characteristic != 2:
        out.append(audit_jordan(A))
    out.extend(audit_qc_lie_criteria(A))
    for D in _space(A, "centroid").maps():
        out.append(audit_centroid_ideals(A, D))
    for D in _space(A, "qcentroid").maps():
        out.append(audit_fitting_split(A, D))
    return out


__all__ = [
    "AuditResult",
    "PASS",
    "FAIL",
    "UNMET",
    "INFO",
    "CharacteristicError",
    "commutator",
    "jordan_product",
    "qc_lie_hull",
    "audit_inclusion_chain",
    "audit_product_closures",
    "audit_qc_hull",
    "audit_centroid_qc_commutators",
    "audit_centroid_in_qder_qc",
    "audit_closure",
    "audit_swap_symmetry",
    "audit_sliding",
    "sliding_pairs",
    "audit_centroid_as_intersection",
    "audit_jordan",
    "audit_qc_lie_criteria",
    "audit_centroid_ideals",
    "audit_fitting_split",
    "audit_all",
]
