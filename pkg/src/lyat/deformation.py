"""Perturbations, the degree-one coboundary and the coboundary subspaces.

A cochain pair ``(g, h)`` is a bilinear map skew in its two slots and a
trilinear map skew in its first two slots, stored as tensors with the output
index last and flattened as ``concat(g.ravel(), h.ravel())``.

The coboundary of an endomorphism ``f`` is

    δ_I(f)(x, y)     = [f x, y] + [x, f y] - f[x, y]
    δ_II(f)(x, y, z) = {f x, y, z} + {x, f y, z} + {x, y, f z} - f{x, y, z}
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import LYAlgebra, check_axioms, compose_output, perturb
from .audits import FAIL, INFO, PASS, UNMET, AuditResult
from .derivations import in_delta, operator_space
from .linalg import Subspace, nullspace, rank, solve, subspace_contains, subspace_equal, subspace_intersect, subspace_sum
from .tensor import combination, contract, iein


@dataclass(frozen=True, eq=False)
class CochainPair:
    g: np.ndarray  # n x n x n
    h: np.ndarray  # n x n x n x n

    @property
    def n(self) -> int:
        return self.g.shape[0]

    def flat(self) -> np.ndarray:
        return np.concatenate([self.g.reshape(-1), self.h.reshape(-1)])

    @classmethod
    def from_flat(cls, v: np.ndarray, n: int) -> "CochainPair":
        return cls(v[: n**3].reshape(n, n, n), v[n**3 :].reshape(n, n, n, n))

    def is_skew(self, fld) -> bool:
        g = fld.array(self.g + self.g.transpose(1, 0, 2))
        h = fld.array(self.h + self.h.transpose(1, 0, 2, 3))
        return not (np.any(g != 0) or np.any(h != 0))

    def is_zero(self) -> bool:
        return not (np.any(self.g != 0) or np.any(self.h != 0))


def _ambient(A: LYAlgebra) -> int:
    return A.n**3 + A.n**4


def _guard(A: LYAlgebra, override: bool) -> None:
    A.field.require_char_zero("coboundary computations", override=override)


def delta1(A: LYAlgebra, f, allow_positive_characteristic: bool = False) -> CochainPair:
    _guard(A, allow_positive_characteristic)
    fld = A.field
    f = fld.array(f)
    c, d = A.c, A.d
    g = (
        contract(fld, "ai,ajk->ijk", f, c)
        + contract(fld, "aj,iak->ijk", f, c)
        - contract(fld, "ka,ija->ijk", f, c)
    )
    h = (
        contract(fld, "ai,ajkl->ijkl", f, d)
        + contract(fld, "aj,iakl->ijkl", f, d)
        + contract(fld, "ak,ijal->ijkl", f, d)
        - contract(fld, "la,ijka->ijkl", f, d)
    )
    return CochainPair(fld.array(g), fld.array(h))


def _elementary(n: int) -> np.ndarray:
    """E[m] = elementary matrix with a single 1 at row-major position m."""
    return np.eye(n * n, dtype=np.int64).reshape(n * n, n, n)


def _pair_rows(A: LYAlgebra, g_int: np.ndarray, h_int: np.ndarray) -> np.ndarray:
    """Stack integer g-parts (scale c_scale) and h-parts (scale d_scale) on a common scale."""
    sc, sd = A.c_scale, A.d_scale
    m = g_int.shape[0]
    G = g_int.reshape(m, -1)
    H = h_int.reshape(m, -1)
    if sc != sd:
        G = G.astype(object) * sd
        H = H.astype(object) * sc
    return np.concatenate([G, H], axis=1)


def delta_matrix(A: LYAlgebra) -> np.ndarray:
    """Integer matrix whose row m is (a multiple of) delta1 of the m-th elementary map."""
    C, D = A.c_int, A.d_int
    E = _elementary(A.n)
    g = iein("mai,ajk->mijk", E, C) + iein("maj,iak->mijk", E, C) - iein("mka,ija->mijk", E, C)
    h = (
        iein("mai,ajkl->mijkl", E, D)
        + iein("maj,iakl->mijkl", E, D)
        + iein("mak,ijal->mijkl", E, D)
        - iein("mla,ijka->mijkl", E, D)
    )
    return _pair_rows(A, g, h), g, h


def _span(A: LYAlgebra, rows) -> Subspace:
    fld = A.field
    rows = np.asarray(rows)
    if rows.size == 0:
        return Subspace.zero(fld, _ambient(A))
    return Subspace.span(fld.integer_rows(rows), fld, _ambient(A))


def b2b3_regular(A: LYAlgebra, allow_positive_characteristic: bool = False) -> Subspace:
    """Diagonal coboundaries {delta1(f) : f in End(T)}."""
    _guard(A, allow_positive_characteristic)
    M, _, _ = delta_matrix(A)
    return _span(A, M)


def b2b3_regular_pairs(A: LYAlgebra, allow_positive_characteristic: bool = False) -> Subspace:
    """Pair coboundaries {(δ_I f, δ_II g) : f, g in End(T)}."""
    _guard(A, allow_positive_characteristic)
    _, g, h = delta_matrix(A)
    return _span(A, np.concatenate([_pair_rows(A, g, 0 * h), _pair_rows(A, 0 * g, h)]))


def _compose_rows(A: LYAlgebra):
    C, D = A.c_int, A.d_int
    E = _elementary(A.n)
    return iein("mkb,ijb->mijk", E, C), iein("mlb,ijkb->mijkl", E, D)


def b2b3_trivial(A: LYAlgebra) -> Subspace:
    """(End(T) o mu1) x (End(T) o mu2)."""
    g, h = _compose_rows(A)
    return _span(A, np.concatenate([_pair_rows(A, g, 0 * h), _pair_rows(A, 0 * g, h)]))


def composed_pair(A: LYAlgebra, f, k1=1, k2=1) -> CochainPair:
    """(k1 f o mu1, k2 f o mu2)."""
    fld = A.field
    f = fld.array(f)
    return CochainPair(
        fld.array(compose_output(fld, f, A.c) * fld.scalar(k1)),
        fld.array(compose_output(fld, f, A.d) * fld.scalar(k2)),
    )


def centroid_pairs(A: LYAlgebra) -> Subspace:
    """{(c o mu1, 2 c o mu2) : c in C(T)}."""
    fld = A.field
    vecs = [composed_pair(A, c, 1, 2).flat() for c in operator_space(A, "centroid").maps()]
    return Subspace.span(vecs, fld, _ambient(A)) if vecs else Subspace.zero(fld, _ambient(A))


def delta_kernel(A: LYAlgebra) -> Subspace:
    """Endomorphisms with vanishing coboundary."""
    M, _, _ = delta_matrix(A)
    from .linalg import nullspace_of_integer_matrix

    return nullspace_of_integer_matrix(np.ascontiguousarray(M.T), A.n * A.n, A.field)


def audit_delta_kernel(A: LYAlgebra, allow_positive_characteristic: bool = False) -> AuditResult:
    """ker delta1 = Der(T)."""
    _guard(A, allow_positive_characteristic)
    K = delta_kernel(A)
    D = operator_space(A, "der").space
    return AuditResult(
        "kernel of delta1 is Der",
        PASS if subspace_equal(K, D) else FAIL,
        f"dim ker = {K.dim}, dim Der = {D.dim}",
        {"kernel": K.dim, "der": D.dim},
    )


def audit_centroid_coboundaries(A: LYAlgebra, allow_positive_characteristic: bool = False) -> AuditResult:
    """delta1(c) = (c o mu1, 2 c o mu2) on the centroid basis."""
    _guard(A, allow_positive_characteristic)
    maps = operator_space(A, "centroid").maps()
    bad = [
        i
        for i, c in enumerate(maps)
        if not np.array_equal(delta1(A, c, allow_positive_characteristic).flat(), composed_pair(A, c, 1, 2).flat())
    ]
    return AuditResult(
        "delta1 on the centroid",
        FAIL if bad else PASS,
        f"centroid basis element {bad[0]} differs" if bad else f"{len(maps)} basis elements",
        {"checked": len(maps)},
    )


# ---------------------------------------------------------------------------
# the two identities satisfied by coboundaries of quasi-derivations


def identity_bracket(A: LYAlgebra, g1, g2) -> np.ndarray:
    """Integer multiple of the first identity's defect for a bilinear g1 and
    trilinear g2, indexed (x1, x2, x3, x4, out)."""
    fld = A.field
    c, d = A.c, A.d
    ints, _ = combination(
        fld,
        [
            (-1, "abdm,cml->abcdl", (g2, c)),
            (-1, "abcm,mdl->abcdl", (g2, c)),
            (1, "cdm,abml->abcdl", (c, g2)),
            (1, "cdm,abml->abcdl", (g1, d)),
            (-1, "abcm,mdl->abcdl", (d, g1)),
            (-1, "abdm,cml->abcdl", (d, g1)),
        ],
    )
    return ints


def identity_triple(A: LYAlgebra, g2, bare) -> np.ndarray:
    """Integer multiple of the second identity's defect, indexed (x1..x5, out).
    ``bare`` is the map in the term -{x3, x4, bare(x1, x2, x5)}."""
    fld = A.field
    d = A.d
    ints, _ = combination(
        fld,
        [
            (-1, "abcm,mdel->abcdel", (g2, d)),
            (1, "abdm,mcel->abcdel", (g2, d)),
            (1, "cdem,abml->abcdel", (g2, d)),
            (-1, "abem,cdml->abcdel", (bare, d)),
            (-1, "abcm,mdel->abcdel", (d, g2)),
            (-1, "abdm,cmel->abcdel", (d, g2)),
            (-1, "abem,cdml->abcdel", (d, g2)),
            (1, "cdem,abml->abcdel", (d, g2)),
        ],
    )
    return ints


def _first_nonzero(defect: np.ndarray):
    nz = np.argwhere(defect != 0)
    return None if nz.size == 0 else tuple(int(i) for i in nz[0][:-1])


def audit_witness_identities(A: LYAlgebra, f, fp, fpp) -> list[AuditResult]:
    """Evaluate both identities for (f, f', f''). The second identity uses
    ``(f'' - f) o mu2`` in its last term; the variant with a bare ``f o mu2``
    there is recorded as INFO."""
    fld = A.field
    f, fp, fpp = fld.array(f), fld.array(fp), fld.array(fpp)
    if not check_axioms(A).ok:
        return [AuditResult("witness identities", UNMET, "the algebra fails the LY axioms")]
    if not in_delta(A, [f, f, fp, f, f, fpp]):
        return [AuditResult("witness identities", UNMET, "(f, f, f', f, f, f'') fails the tuple identities")]
    g1 = compose_output(fld, fld.array(fp - f), A.c)
    g2 = compose_output(fld, fld.array(fpp - f), A.d)
    out = []
    hit = _first_nonzero(identity_bracket(A, g1, g2))
    out.append(AuditResult("witness bracket identity", PASS if hit is None else FAIL, "" if hit is None else f"fails at {hit}"))
    hit = _first_nonzero(identity_triple(A, g2, g2))
    out.append(
        AuditResult(
            "witness triple identity",
            PASS if hit is None else FAIL,
            "" if hit is None else f"fails at {hit}",
        )
    )
    # the bare f o mu2 term does not hold in general; kept for comparison
    hit = _first_nonzero(identity_triple(A, g2, compose_output(fld, f, A.d)))
    out.append(
        AuditResult(
            "witness triple identity with bare f term",
            INFO,
            "holds" if hit is None else f"fails at {hit}",
            {"holds": hit is None},
        )
    )
    return out


def audit_qder_coboundary(A: LYAlgebra, maps=None, allow_positive_characteristic: bool = False) -> AuditResult:
    """delta1(f) lies in the trivial-coefficient coboundaries iff f is a quasi-derivation.

    Defaults to the quasi-derivation basis plus all n² elementary maps.
    """
    _guard(A, allow_positive_characteristic)
    fld = A.field
    n = A.n
    qd = operator_space(A, "qder")
    B = b2b3_trivial(A)
    if maps is None:
        maps = list(qd.maps()) + list(_elementary(n))
    if not len(maps):
        return AuditResult("coboundary test for QDer", PASS, "no maps", {"maps": 0})
    F = fld.integer_rows(np.stack([fld.array(f).reshape(-1) for f in maps]))
    M, _, _ = delta_matrix(A)
    # rows of M are delta1 of elementary maps on a common scale, so F @ M is a
    # row-wise positive multiple of delta1(f)
    from .linalg import exact_matmul, nonmembers

    lhs = np.ones(len(maps), dtype=bool)
    lhs[nonmembers(B, exact_matmul(F, M))] = False
    rhs = np.ones(len(maps), dtype=bool)
    rhs[nonmembers(qd.space, F)] = False
    bad = np.flatnonzero(lhs != rhs)
    if bad.size:
        i = int(bad[0])
        return AuditResult("coboundary test for QDer", FAIL, f"map {i}: coboundary test {lhs[i]}, quasi-derivation {rhs[i]}")
    return AuditResult(
        "coboundary test for QDer", PASS, f"{len(maps)} maps agree", {"maps": len(maps), "quasi_derivations": int(rhs.sum())}
    )


def is_inessential(A: LYAlgebra, f):
    """A centroid element c with f o mu_i = c o mu_i (i = 1, 2), or None."""
    fld = A.field
    C = operator_space(A, "centroid").maps()
    target = composed_pair(A, f).flat()
    if not C:
        return fld.zeros((A.n, A.n)) if not np.any(target != 0) else None
    cols = fld.array(np.stack([composed_pair(A, c).flat() for c in C]).T)
    alpha = solve(cols, target, fld)
    if alpha is None:
        return None
    return fld.array(sum(a * c for a, c in zip(alpha, C)))


def audit_perturbation_criterion(A: LYAlgebra, f, allow_positive_characteristic: bool = False) -> AuditResult:
    """Perturbation validity (direct axiom check) next to the implemented cocycle
    identities for the pair (f o mu1, 2 f o mu2). Full cocycle membership is not decided."""
    _guard(A, allow_positive_characteristic)
    fld = A.field
    f = fld.array(f)
    ly = check_axioms(perturb(A, f)).ok
    g1 = compose_output(fld, f, A.c)
    g2 = fld.array(compose_output(fld, f, A.d) * fld.scalar(2))
    ids = _first_nonzero(identity_bracket(A, g1, g2)) is None and _first_nonzero(identity_triple(A, g2, g2)) is None
    return AuditResult(
        "perturbation criterion (partial)",
        INFO,
        "reported only: full cocycle membership is not computed",
        {"perturbation_is_ly": ly, "cocycle_identities_hold": ids},
    )


@dataclass
class DeformationReport:
    results: list[AuditResult] = field(default_factory=list)
    dims: dict = field(default_factory=dict)
    samples: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "results": [r.to_dict() for r in self.results],
            "dims": self.dims,
            "samples": self.samples,
            "notes": self.notes,
        }


def qder_splits(A: LYAlgebra) -> bool:
    """QDer(T) = Der(T) + C(T)."""
    return subspace_equal(
        operator_space(A, "qder").space,
        subspace_sum(operator_space(A, "der").space, operator_space(A, "centroid").space),
    )


def audit_robustness(A: LYAlgebra, allow_positive_characteristic: bool = False) -> DeformationReport:
    _guard(A, allow_positive_characteristic)
    rep = DeformationReport()
    hyp = qder_splits(A)
    reg = b2b3_regular(A, allow_positive_characteristic)
    pairs = b2b3_regular_pairs(A, allow_positive_characteristic)
    triv = b2b3_trivial(A)
    cp = centroid_pairs(A)
    inter = subspace_intersect(reg, triv)
    inter_pairs = subspace_intersect(pairs, triv)
    concl = subspace_equal(inter, cp)
    rep.dims = {
        "b2b3_regular": reg.dim,
        "b2b3_regular_pairs": pairs.dim,
        "b2b3_trivial": triv.dim,
        "intersection": inter.dim,
        "intersection_pairs": inter_pairs.dim,
        "centroid_pairs": cp.dim,
    }
    easy = subspace_contains(inter, cp)
    rep.results.append(AuditResult("centroid pairs inside both coboundary spaces", PASS if easy else FAIL))
    if hyp:
        rep.results.append(
            AuditResult("robustness criterion", PASS if concl else FAIL, "QDer = Der + C holds", {"conclusion": concl})
        )
    else:
        rep.results.append(
            AuditResult("robustness criterion", UNMET, "QDer != Der + C", {"conclusion": concl})
        )
    rep.results.append(
        AuditResult(
            "centroid pair reading",
            INFO,
            "reported only",
            {"conclusion": subspace_equal(inter_pairs, cp), "hypothesis": hyp},
        )
    )
    return rep


def random_nonsingular(rng: np.random.Generator, A: LYAlgebra, bound: int = 2) -> np.ndarray:
    fld = A.field
    while True:
        f = fld.array(rng.integers(-bound, bound + 1, size=(A.n, A.n)))
        if rank(f, fld) == A.n:
            return f


def classify_perturbation(A: LYAlgebra, f) -> dict:
    fld = A.field
    f = fld.array(f)
    ly = check_axioms(perturb(A, f)).ok
    c = is_inessential(A, f)
    out = {"map": [[fld.format(x) for x in row] for row in f], "ly": ly, "inessential": c is not None}
    if c is not None:
        out["c"] = [[fld.format(x) for x in row] for row in c]
    return out


def robustness_report(
    A: LYAlgebra,
    maps=(),
    samples: int = 0,
    seed: int = 0,
    allow_positive_characteristic: bool = False,
) -> DeformationReport:
    """Checkable ingredients of robustness; robustness itself is never decided."""
    _guard(A, allow_positive_characteristic)
    rep = audit_robustness(A, allow_positive_characteristic)
    rep.dims["qder_eq_der_plus_c"] = qder_splits(A)
    rng = np.random.default_rng(seed)
    todo = [A.field.array(m) for m in maps] + [random_nonsingular(rng, A) for _ in range(samples)]
    rep.samples = [classify_perturbation(A, f) for f in todo]
    rep.notes.append("robustness over all nonsingular maps and vanishing of H2 x H3 are not decided")
    return rep


__all__ = [
    "CochainPair",
    "audit_delta_kernel",
    "audit_centroid_coboundaries",
    "DeformationReport",
    "delta1",
    "delta_matrix",
    "delta_kernel",
    "b2b3_regular",
    "b2b3_regular_pairs",
    "b2b3_trivial",
    "composed_pair",
    "centroid_pairs",
    "identity_bracket",
    "identity_triple",
    "audit_qder_coboundary",
    "audit_witness_identities",
    "is_inessential",
    "audit_perturbation_criterion",
    "qder_splits",
    "audit_robustness",
    "random_nonsingular",
    "classify_perturbation",
    "robustness_report",
]
