"""Command-line front end.

    lyat <command> [file] [--field Q|Fp:<p>] [--out path] [--format text|json]
         [--samples N] [--seed S] [--which der,qder,...] [--map matrixfile]

Commands: verify, spaces, audit, embed, deform, perturb, report. The file may
be a path or the bare name of a bundled example (``ly_2_9.alg``); ``--abelian
N`` replaces the file with the abelian algebra of dimension N.

Exit codes: 0 every asserted check passed, 1 usage or parse error, 2 the input
fails the LY axioms (unless ``--lenient``), 3 an audit failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import deformation as dfm
from .algebra import LYAlgebra, abelian, center, check_axioms, derived_algebra, format_vector
from .audits import FAIL, AuditResult, audit_all
from .derivations import KINDS, operator_space, qder
from .embedding import build_check, verify_phi, verify_der_decomposition
from .fields import CharacteristicError, Field, field_from_spec
from .io import ParseError, load_algebra, load_matrix, parse_algebra  # noqa: F401  (re-exported)

COMMANDS = ("verify", "spaces", "audit", "embed", "deform", "perturb", "report")
SUBSPACES = ("center", "derived_algebra")
DISPLAY = {
    "der": "Der",
    "zder": "ZDer",
    "qder": "QDer",
    "gder": "GDer",
    "centroid": "C",
    "qcentroid": "QC",
    "s_space": "S",
    "center": "Z",
    "derived_algebra": "T^(1)",
}

EXIT_OK, EXIT_PARSE, EXIT_AXIOM, EXIT_AUDIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lyat", description="Exact operator spaces and audits for Lie-Yamaguti algebras.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", nargs="?", help="algebra definition file or bundled example name")
    p.add_argument("--field", help="Q or Fp:<p>; overrides the file header")
    p.add_argument("--out", help="write the report here instead of standard output")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--samples", type=int, default=3, help="random samples for embed and perturb")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--which", help="comma-separated spaces for 'spaces' (default: all)")
    p.add_argument("--map", action="append", default=[], help="matrix file or 'id' (repeatable)")
    p.add_argument("--abelian", type=int, metavar="N", help="use the N-dimensional abelian algebra")
    p.add_argument("--lenient", action="store_true", help="do not fail the run when the LY axioms fail")
    p.add_argument(
        "--allow-positive-characteristic",
        action="store_true",
        help="run characteristic-zero computations over Fp anyway",
    )
    return p


# ---------------------------------------------------------------------------
# serialization helpers


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, AuditResult):
        return _jsonable(x.to_dict())
    return x


def _matrix(fld: Field, m) -> list[list[str]]:
    return [[fld.format(v) for v in row] for row in np.asarray(m)]


def _vector(fld: Field, v) -> list[str]:
    return [fld.format(x) for x in np.asarray(v).reshape(-1)]


def describe_map(A: LYAlgebra, m) -> str:
    """``f(x0) = x2, f(x1) = -x5``; listing only nonzero images."""
    fld = A.field
    m = np.asarray(m)
    if np.array_equal(m, fld.eye(A.n)):
        return "id"
    parts = [f"f({lab}) = {format_vector(fld, m[:, j], A.labels)}" for j, lab in enumerate(A.labels) if np.any(m[:, j] != 0)]
    return ", ".join(parts) if parts else "0"


def _skipped(exc: Exception) -> dict:
    return {"skipped": str(exc)}


# ---------------------------------------------------------------------------
# report sections


def algebra_section(A: LYAlgebra) -> dict:
    rep = check_axioms(A)
    return {
        "name": A.name,
        "dim": A.n,
        "field": repr(A.field),
        "labels": list(A.labels),
        "axioms": {"ok": rep.ok, "checks": [ch.to_dict(A) for ch in rep.checks.values()]},
    }


def space_section(A: LYAlgebra, kind: str, allow_pc: bool = False) -> dict:
    fld = A.field
    if kind in SUBSPACES:
        S = center(A) if kind == "center" else derived_algebra(A)
        return {"dim": S.dim, "basis": [_vector(fld, v) for v in S.basis]}
    try:
        sp = operator_space(A, kind, allow_pc)
    except CharacteristicError as exc:
        return _skipped(exc)
    return {"dim": sp.dim, "basis": [_matrix(fld, m) for m in sp.maps()]}


def parse_which(text: str | None) -> list[str]:
    allowed = KINDS + SUBSPACES
    if not text:
        return list(allowed)
    out = []
    for w in text.split(","):
        w = w.strip()
        if w not in allowed:
            raise UsageError(f"unknown space {w!r}; choose from {', '.join(allowed)}")
        if w not in out:
            out.append(w)
    return out


def embed_section(A: LYAlgebra, samples: int, seed: int) -> dict:
    CA = build_check(A, strict=False)
    fld = A.field
    total = CA.total
    return {
        "check_algebra": {
            "dim": total.n,
            "axioms_ok": CA.report.ok,
            "axiom_failures": [ch.to_dict(total) for ch in CA.report.failures()],
            "U": [_vector(fld, v) for v in CA.U.basis],
            "V": [_vector(fld, v) for v in CA.V.basis],
            "der": operator_space(total, "der").dim,
            "zder": operator_space(total, "zder").dim,
            "qder_base": qder(A).dim,
        },
        "phi": verify_phi(CA),
        "prop_4_2": verify_der_decomposition(CA, np.random.default_rng(seed), samples),
    }


def deform_section(A: LYAlgebra, allow_pc: bool) -> dict:
    try:
        out = {
            "delta_kernel": dfm.audit_delta_kernel(A, allow_pc),
            "centroid_coboundaries": dfm.audit_centroid_coboundaries(A, allow_pc),
            "qder_coboundary": dfm.audit_qder_coboundary(A, None, allow_pc),
        }
        qd = qder(A)
        witness = []
        for D in qd.maps():
            f, fp, fpp = qd.witnesses(D)
            witness.extend(dfm.audit_witness_identities(A, f, fp, fpp))
        out["witness_identities"] = witness
        out["prop_5_6"] = dfm.audit_robustness(A, allow_pc).to_dict()
    except CharacteristicError as exc:
        return {"deformation": _skipped(exc), "prop_5_6": _skipped(exc)}
    p56 = out.pop("prop_5_6")
    return {"deformation": out, "prop_5_6": p56}


def perturb_section(A: LYAlgebra, maps: list[str], samples: int, seed: int) -> list[dict]:
    fld = A.field
    todo = [(m, load_matrix(m, fld, A.n)) for m in maps]
    rng = np.random.default_rng(seed)
    todo += [(f"random {i}", dfm.random_nonsingular(rng, A)) for i in range(samples)]
    out = []
    for source, f in todo:
        info = dfm.classify_perturbation(A, f)
        c = dfm.is_inessential(A, f)
        info["source"] = source
        info["c_description"] = describe_map(A, c) if c is not None else None
        out.append(info)
    return out


# ---------------------------------------------------------------------------
# status


def _results(x):
    if isinstance(x, AuditResult):
        yield x
    elif isinstance(x, dict):
        if set(x) >= {"name", "status"} and x.get("status") in ("pass", "fail", "unmet", "info"):
            yield AuditResult(x["name"], x["status"])
        for v in x.values():
            yield from _results(v)
    elif isinstance(x, list):
        for v in x:
            yield from _results(v)


def finish(report: dict, lenient: bool) -> int:
    axioms_ok = report["algebra"]["axioms"]["ok"]
    failed = sorted({r.name for r in _results({k: v for k, v in report.items() if k != "algebra"}) if r.status == FAIL})
    report["failed_checks"] = failed
    if not axioms_ok and not lenient:
        code = EXIT_AXIOM
    elif failed:
        code = EXIT_AUDIT
    else:
        code = EXIT_OK
    report["status"] = "pass" if code == EXIT_OK else "fail"
    report["exit_code"] = code
    return code


def run(args: argparse.Namespace) -> tuple[dict, int]:
    try:
        fld = field_from_spec(args.field) if args.field else None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.abelian is not None:
        if args.file:
            raise UsageError("give either a file or --abelian, not both")
        if args.abelian < 0:
            raise UsageError("--abelian needs a nonnegative dimension")
        from .fields import QQ

        A = abelian(args.abelian, fld or QQ)
        source = f"abelian {args.abelian}"
    elif args.file:
        A = load_algebra(args.file, fld)
        source = args.file
    else:
        raise UsageError("an algebra file (or --abelian N) is required")
    if args.samples < 0:
        raise UsageError("--samples must be nonnegative")

    cmd = args.command
    allow_pc = args.allow_positive_characteristic
    report: dict = {"command": cmd, "input": source, "algebra": algebra_section(A)}
    if cmd in ("spaces", "report"):
        which = parse_which(args.which) if cmd == "spaces" else list(KINDS + SUBSPACES)
        for kind in which:
            report[kind] = space_section(A, kind, allow_pc)
    if cmd in ("audit", "report"):
        report["audits"] = audit_all(A)
    if cmd in ("embed", "report"):
        report.update(embed_section(A, args.samples, args.seed))
    if cmd in ("deform", "report"):
        report.update(deform_section(A, allow_pc))
    if cmd in ("perturb", "report"):
        try:
            report["perturbations"] = perturb_section(A, args.map, args.samples, args.seed)
        except CharacteristicError as exc:
            report["perturbations"] = _skipped(exc)
    report = _jsonable(report)
    code = finish(report, args.lenient)
    return report, code


# ---------------------------------------------------------------------------
# text rendering


def _yes(b) -> str:
    return "yes" if b else "no"


def _audit_lines(items) -> list[str]:
    lines = []
    for r in items:
        detail = f": {r['detail']}" if r.get("detail") else ""
        lines.append(f"  [{r['status']}] {r['name']}{detail}")
    return lines


def _labels_of(report):
    return report["algebra"]["labels"]


def _describe_json_map(labels, m) -> str:
    n = len(labels)
    if all(m[i][j] == ("1" if i == j else "0") for i in range(n) for j in range(n)):
        return "id"
    parts = []
    for j, lab in enumerate(labels):
        terms = []
        for i in range(n):
            v = m[i][j]
            if v == "0":
                continue
            terms.append(labels[i] if v == "1" else f"-{labels[i]}" if v == "-1" else f"{v}*{labels[i]}")
        if terms:
            parts.append(f"f({lab}) = " + " + ".join(terms).replace("+ -", "- "))
    return ", ".join(parts) if parts else "0"


def render_text(report: dict) -> str:
    alg = report["algebra"]
    labels = _labels_of(report)
    out = [f"command: {report['command']}", f"input: {report['input']}"]
    out.append(f"algebra: {alg['name'] or 'unnamed'}, dim {alg['dim']} over {alg['field']}, basis {' '.join(labels)}")
    ax = alg["axioms"]
    if ax["ok"]:
        out.append("axioms: LY1-LY6 hold")
    else:
        out.append("axioms: FAIL")
        for ch in ax["checks"]:
            if not ch["passed"]:
                out.append(f"  {ch['axiom']} fails at ({', '.join(ch['counterexample'])}), defect {ch['defect']}")
    for kind in KINDS + SUBSPACES:
        if kind not in report:
            continue
        sec = report[kind]
        if "skipped" in sec:
            out.append(f"dim {DISPLAY[kind]}: skipped ({sec['skipped']})")
            continue
        out.append(f"dim {DISPLAY[kind]} = {sec['dim']}")
        for b in sec["basis"]:
            if kind in SUBSPACES:
                terms = [f"{v}*{lab}" if v not in ("1", "-1") else ("-" if v == "-1" else "") + lab for v, lab in zip(b, labels) if v != "0"]
                out.append("  " + " + ".join(terms).replace("+ -", "- "))
            else:
                out.append("  " + _describe_json_map(labels, b))
    if "audits" in report:
        out.append("audits:")
        out.extend(_audit_lines(report["audits"]))
    if "check_algebra" in report:
        ch = report["check_algebra"]
        out.append(f"check algebra: dim {ch['dim']}, LY axioms {'hold' if ch['axioms_ok'] else 'fail'}")
        for f in ch["axiom_failures"]:
            out.append(f"  {f['axiom']} fails at ({', '.join(f['counterexample'])})")
        out.append(f"  dim Der(check) = {ch['der']}, dim ZDer(check) = {ch['zder']}, dim QDer = {ch['qder_base']}")
        out.append("phi:")
        out.extend(_audit_lines(report["phi"]))
        out.append("Der(check) decomposition:")
        out.extend(_audit_lines(report["prop_4_2"]))
    if "deformation" in report:
        sec = report["deformation"]
        out.append("coboundaries:")
        if "skipped" in sec:
            out.append(f"  skipped ({sec['skipped']})")
        else:
            out.extend(_audit_lines([sec["delta_kernel"], sec["centroid_coboundaries"], sec["qder_coboundary"], *sec["witness_identities"]]))
        p = report["prop_5_6"]
        if "skipped" not in p:
            out.append("robustness: " + ", ".join(f"{k} {v}" for k, v in p["dims"].items()))
            out.extend(_audit_lines(p["results"]))
    if "perturbations" in report:
        pert = report["perturbations"]
        out.append("perturbations:")
        if isinstance(pert, dict):
            out.append(f"  skipped ({pert['skipped']})")
        else:
            for s in pert:
                c = f" (c = {s['c_description']})" if s["inessential"] else ""
                out.append(f"  {s['source']}: LY: {_yes(s['ly'])}, inessential: {_yes(s['inessential'])}{c}")
    if report.get("failed_checks"):
        out.append("failed: " + ", ".join(report["failed_checks"]))
    out.append(f"status: {report['status']}")
    return "\n".join(out) + "\n"


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    return render_text(report)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = run(args)
    except (ParseError, UsageError, FileNotFoundError) as exc:
        print(f"lyat: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    text = render(report, args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
