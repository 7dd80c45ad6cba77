"""Command line entry point: run verification suites and emit JSON reports.

    qsymalg pbw --target quantum-plane
    qsymalg run --target quantum-matrices(2,2) --suites pbw,bk --max-degree 5
    qsymalg all --target relations.json --out report.json

Exit codes: 0 pass, 1 verification failure, 2 parse error, 3 dependency error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from math import comb
from pathlib import Path

from .quadratic import (
    FilteredAlgebra,
    SpecError,
    algebra_from_spec,
    algebra_preset,
    associated_graded,
    graded_dim,
    parse_preset,
    RewriteError,
    confluent_order,
    pbw_check,
    search_pbw_orders,
)
from .uqact import CONVENTION, action_from_spec, action_preset, check_relations_submodule
from .uqact import invariants_of_degree, module_algebra_check

SCHEMA_VERSION = "1.0"
SUITES = ("pbw", "koszul", "equivariance", "rmatrix", "bk", "kzero", "homog")
DEPENDS = {"koszul": ("pbw",), "kzero": ("pbw", "equivariance")}
HOMOG_TARGET = "oq-sl2"

EXIT_PASS, EXIT_FAIL, EXIT_PARSE, EXIT_DEPENDENCY = 0, 1, 2, 3


class ParseFailure(Exception):
    pass


class DependencyFailure(Exception):
    pass


@dataclass
class JobSpec:
    target: str
    suites: list
    max_degree: int | None = None
    order: str | None = None
    out: str | None = None
    search_orders: bool = False
    action: str | None = None
    rmatrix: str | None = None


@dataclass
class Target:
    label: str
    algebra: object = None
    action: object = None
    rmatrix: object = None
    notes: list = field(default_factory=list)


def default_degree(d):
    if d <= 2:
        return 8
    return 5 if d <= 4 else 4


def _default_action(family, args):
    if family == "quantum-plane":
        n = int(args[0]) if args else 2
        return f"sln-natural({n})"
    if family == "weyl-q":
        return "sl2-natural"
    if family == "quantum-matrices":
        return f"sln-columns({args[0]},{args[1]})"
    if family == "so-even" and args and int(args[0]) == 2:
        return "so4-natural"
    return None


def _default_rmatrix(action):
    if action is None:
        return None
    try:
        name, args = parse_preset(action.name)
    except SpecError:
        return None
    if name == "sl2-natural":
        return "rhat-sln(2)", 1
    if name == "sln-natural":
        return f"rhat-sln({args[0]})", 1
    if name == "sln-columns":
        return f"rhat-sln({args[1]})", int(args[0])
    if name == "sl2xsl2-natural":
        return "rhat-sl2xsl2", 1
    if name == "so4-natural":
        return "rhat-so4", 1
    return None


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseFailure(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise ParseFailure(f"{path}: {exc.strerror}") from exc


def _load_action(text):
    if text is None:
        return None
    try:
        if text.endswith(".json") or Path(text).is_file():
            return action_from_spec(_load_json(text))
        return action_preset(text)
    except SpecError as exc:
        raise ParseFailure(f"action {text}: {exc}") from exc


def _load_rmatrix(text, action):
    from .rmatrix import rmatrix_from_spec, rmatrix_preset

    try:
        if text.endswith(".json") or Path(text).is_file():
            return rmatrix_from_spec(_load_json(text), action)
        return rmatrix_preset(text).verify()
    except SpecError as exc:
        raise ParseFailure(f"rmatrix {text}: {exc}") from exc


def load_target(job: JobSpec) -> Target:
    text = job.target
    if text == HOMOG_TARGET:
        return Target(text)
    action_text = job.action
    rmatrix_text = job.rmatrix
    if text.endswith(".json") or Path(text).is_file():
        raw = _load_json(text)
        spec = raw.get("algebra", raw) if isinstance(raw, dict) else raw
        try:
            A = algebra_from_spec(spec)
        except SpecError as exc:
            raise ParseFailure(f"{text}: {exc}") from exc
        if isinstance(raw, dict) and action_text is None and "action" in raw:
            act = raw["action"]
            try:
                action = action_preset(act) if isinstance(act, str) else action_from_spec(act)
            except SpecError as exc:
                raise ParseFailure(f"{text}: action: {exc}") from exc
        else:
            action = _load_action(action_text)
        if isinstance(raw, dict) and rmatrix_text is None and isinstance(raw.get("rmatrix"), str):
            rmatrix_text = raw["rmatrix"]
        label = A.name if A.name != "custom" else Path(text).stem
    else:
        try:
            A = algebra_preset(text)
            family, args = parse_preset(text)
        except SpecError as exc:
            raise ParseFailure(f"target {text}: {exc}") from exc
        action = _load_action(action_text or _default_action(family, args))
        label = text
    if action is not None and action.dim != A.ngens:
        raise ParseFailure(f"action dimension {action.dim} does not match {A.ngens} generators")
    tgt = Target(label, A, action)
    if rmatrix_text is not None:
        tgt.rmatrix = (_load_rmatrix(rmatrix_text, action), 1)
    else:
        default = _default_rmatrix(action)
        if default is not None:
            tgt.rmatrix = (_load_rmatrix(default[0], None), default[1])
    return tgt


def _resolve_order(A, text):
    if text is None:
        return None
    parts = [p.strip() for p in text.split(",") if p.strip()]
    try:
        parts = [int(p) if p.isdigit() else p for p in parts]
        order = A.resolve_order(parts)
    except (SpecError, ValueError, IndexError) as exc:
        raise ParseFailure(f"--order {text}: {exc}") from exc
    return order


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def _graded(A):
    return associated_graded(A) if isinstance(A, FilteredAlgebra) else A


def _basis_order(gr, order, out):
    """Order used only to pick normal-form bases; falls back when the pinned one is not confluent."""
    used = confluent_order(gr, order)
    if used != order:
        out["basis_order"] = [gr.names[g] for g in used]
    return used


def suite_pbw(tgt, N, order, job, ctx):
    gr = _graded(tgt.algebra)
    res = pbw_check(gr, order, N)
    out = res.to_dict(gr.names)
    if isinstance(tgt.algebra, FilteredAlgebra):
        out["checked_on"] = "associated graded"
    if not res.flat and job.search_orders:
        found = search_pbw_orders(gr, N)
        out["searched_order"] = None if found is None else [gr.names[g] for g in found.order]
        res = found or res
    out["pass"] = res.flat
    return out


def suite_koszul(tgt, N, order, job, ctx):
    from .koszul import dual_algebra, hilbert_identity_check, koszul_report, tor_dims, trivial_module

    gr = _graded(tgt.algebra)
    d = gr.ngens
    dual = dual_algebra(gr)
    dual_dims = [dual.graded_dim(i) for i in range(d + 2)]
    hil = hilbert_identity_check(gr, N, dual)
    out = {}
    order = _basis_order(gr, order, out)
    top = min(N, 6)
    rows = koszul_report(gr, range(1, top + 1), "right", order)
    k = trivial_module(gr, order)
    tor = [tor_dims(gr, k, i, i, dual) for i in range(d + 2)]
    tor_ok = tor == [comb(d, i) for i in range(d + 2)]
    out.update({
        "dual_dims": dual_dims,
        "hilbert_identity": hil.to_dict(),
        "complex": rows,
        "tor_trivial": tor,
        "pass": hil.holds and all(r["pass"] for r in rows) and tor_ok,
    })
    return out


def _need_action(tgt, suite):
    if tgt.action is None:
        raise DependencyFailure(f"suite {suite} needs a U_q action (use --action or a spec file with 'action')")


def suite_equivariance(tgt, N, order, job, ctx):
    from .kzero import equivariant_hilbert

    _need_action(tgt, "equivariance")
    gr = _graded(tgt.algebra)
    spec = tgt.action
    out = {"action": spec.name}
    order = _basis_order(gr, order, out)
    sub = check_relations_submodule(gr, spec)
    ma = module_algebra_check(gr, spec, N, order)
    inv = [invariants_of_degree(gr, spec, n, order).dim for n in range(N + 1)]
    hilb = equivariant_hilbert(gr, spec, N, order)
    table = [{"n": n, "decomposition": h.to_dict(), "dim": h.dim(), "dim_check": h.dim() == graded_dim(gr, n)}
             for n, h in enumerate(hilb)]
    out.update({
        "relations_submodule": sub.to_dict(),
        "module_algebra": ma.to_dict(),
        "invariant_dims": inv,
        "equivariant_hilbert": table,
        "pass": sub.passed and ma.passed and all(r["dim_check"] for r in table),
    })
    return out


def suite_rmatrix(tgt, N, order, job, ctx):
    from .rmatrix import quantum_symmetric_algebra, sq_power

    if tgt.rmatrix is None:
        raise DependencyFailure("suite rmatrix needs an R-matrix (use --rmatrix)")
    R, m = tgt.rmatrix
    out = {"source": R.source, "checks": dict(R.checks), "eigenvalues": R.eigenvalues}
    ok = R.ok
    A = tgt.algebra
    if A is not None and not isinstance(A, FilteredAlgebra):
        if m == 1 and R.n == A.ngens:
            S = quantum_symmetric_algebra(R)
            out["relations_match_target"] = S.relations == A.relations
            ok = ok and out["relations_match_target"]
        elif m > 1 and m * R.n == A.ngens:
            P = sq_power(R, m)
            out["braided_power"] = m
            out["relations_match_target"] = P.algebra.relations == A.relations
            out["braided_dims"] = [graded_dim(P.algebra, n) for n in range(min(N, 4) + 1)]
            ok = ok and out["relations_match_target"]
    out["pass"] = ok
    return out


def suite_bk(tgt, N, order, job, ctx):
    from .rmatrix import bk_form_check, bk_search

    A = tgt.algebra
    res = bk_form_check(A, order)
    searched = False
    # an unpinned order is free to be searched; a pinned one only with --search-orders
    if not res.certified and (job.search_orders or job.order is None) and not isinstance(A, FilteredAlgebra):
        res = bk_search(A)
        searched = True
    ctx["bk"] = res
    out = res.to_dict(A.names)
    out["searched"] = searched
    out["pass"] = res.certified
    return out


def suite_kzero(tgt, N, order, job, ctx):
    from .kzero import k0_report

    _need_action(tgt, "kzero")
    rep = k0_report(tgt.algebra, tgt.action, min(N, 4), order=order, noetherian=ctx.get("bk"))
    rep["pass"] = rep["status"] == "verified-hypotheses" and all(r["dim_check"] for r in rep["equivariant_hilbert_table"])
    return rep


def suite_homog(tgt, N, order, job, ctx):
    from .homog import homog_report

    rep = homog_report(levels=(min(N, 4),))
    rep["pass"] = (
        not rep["pairing_failures"]
        and not rep["product_law_failures"]
        and rep["translations_commute"]
        and rep["invariant_closure"]
        and all(rep["splitting"].values())
        and not rep["splitting_negative_control"]
        and all(rep["roundtrip"].values())
    )
    return rep


RUNNERS = {
    "pbw": suite_pbw,
    "koszul": suite_koszul,
    "equivariance": suite_equivariance,
    "rmatrix": suite_rmatrix,
    "bk": suite_bk,
    "kzero": suite_kzero,
    "homog": suite_homog,
}


def _check_dependencies(suites):
    for s in suites:
        for dep in DEPENDS.get(s, ()):
            if dep not in suites:
                raise DependencyFailure(f"suite {s} requires suite {dep}")


def _ordered(suites):
    return [s for s in SUITES if s in suites]


def run(job: JobSpec):
    """Execute a job; returns (payload dict, exit code)."""
    suites = list(dict.fromkeys(job.suites))
    if not suites:
        raise ParseFailure("no suites selected")
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise ParseFailure(f"unknown suite(s): {', '.join(unknown)}")
    _check_dependencies(suites)
    tgt = load_target(job)
    if tgt.algebra is None and any(s != "homog" for s in suites):
        raise DependencyFailure(f"target {HOMOG_TARGET} only supports the homog suite")
    if tgt.algebra is not None:
        N = job.max_degree if job.max_degree is not None else default_degree(tgt.algebra.ngens)
        order = _resolve_order(tgt.algebra, job.order)
        order_names = None if order is None else [tgt.algebra.names[g] for g in order]
    else:
        N = job.max_degree if job.max_degree is not None else 4
        order, order_names = None, None
    if N < 2:
        raise ParseFailure("--max-degree must be at least 2")
    results = {}
    ctx = {}
    for s in _ordered(suites):
        failed = [d for d in DEPENDS.get(s, ()) if not results[d]["pass"]]
        if failed:
            results[s] = {"pass": False, "skipped": f"dependency failed: {', '.join(failed)}"}
            continue
        try:
            results[s] = RUNNERS[s](tgt, N, order, job, ctx)
        except RewriteError as exc:
            results[s] = {"pass": False, "error": str(exc)}
    code = EXIT_PASS if all(r["pass"] for r in results.values()) else EXIT_FAIL
    payload = {
        "schema_version": SCHEMA_VERSION,
        "target": tgt.label,
        "generators": None if tgt.algebra is None else list(tgt.algebra.names),
        "max_degree": N,
        "order": order_names,
        "convention_header": CONVENTION,
        "suites": results,
        "failed_suites": [s for s, r in results.items() if not r["pass"]],
        "exit_status": code,
    }
    return payload, code


def dump_payload(payload):
    return json.dumps(payload, indent=2, default=str)


def _applicable_suites(job):
    tgt_text = job.target
    if tgt_text == HOMOG_TARGET:
        return ["homog"]
    tgt = load_target(job)
    out = ["pbw", "koszul", "bk"]
    if tgt.action is not None:
        out += ["equivariance", "kzero"]
    if tgt.rmatrix is not None:
        out.append("rmatrix")
    return _ordered(out)


def build_parser():
    p = argparse.ArgumentParser(prog="qsymalg", description="Exact checks for quadratic quantum algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--target", required=True, help="preset name, JSON spec file, or oq-sl2")
        sp.add_argument("--max-degree", type=int, default=None)
        sp.add_argument("--order", default=None, help="comma-separated generator names or indices")
        sp.add_argument("--out", default=None, help="write the JSON report here")
        sp.add_argument("--search-orders", action="store_true")
        sp.add_argument("--action", default=None, help="action preset or JSON file")
        sp.add_argument("--rmatrix", default=None, help="R-matrix preset or JSON file")

    r = sub.add_parser("run", help="run selected suites")
    common(r)
    r.add_argument("--suites", required=True, help="comma-separated subset of " + ",".join(SUITES))
    common(sub.add_parser("all", help="run every suite applicable to the target"))
    for s in SUITES:
        common(sub.add_parser(s, help=f"run the {s} suite (with its dependencies)"))
    return p


def _job_from_args(args):
    if args.command == "run":
        suites = [s.strip() for s in args.suites.split(",") if s.strip()]
    elif args.command == "all":
        suites = []
    else:
        suites = [*DEPENDS.get(args.command, ()), args.command]
    return JobSpec(args.target, suites, args.max_degree, args.order, args.out,
                   args.search_orders, args.action, args.rmatrix)


def _summary(payload):
    lines = [f"target: {payload['target']}  (N = {payload['max_degree']})"]
    for s, r in payload["suites"].items():
        extra = ""
        if "skipped" in r:
            extra = f"  [{r['skipped']}]"
        elif s == "pbw" and not r["pass"]:
            extra = f"  [degree {r.get('failing_degree')}: {r.get('reason')}]"
        elif s == "bk":
            extra = f"  [{r['status']}]"
        lines.append(f"  {s:<13}{'PASS' if r['pass'] else 'FAIL'}{extra}")
    return "\n".join(lines)


def main(argv=None):
    args = build_parser().parse_args(argv)
    job = _job_from_args(args)
    try:
        if args.command == "all":
            job.suites = _applicable_suites(job)
        payload, code = run(job)
    except ParseFailure as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DependencyFailure as exc:
        print(f"dependency error: {exc}", file=sys.stderr)
        return EXIT_DEPENDENCY
    doc = {"payload": payload, "meta": {"generated_at": datetime.now(timezone.utc).isoformat()}}
    text = json.dumps(doc, indent=2, default=str)
    if job.out:
        Path(job.out).write_text(text + "\n")
        print(_summary(payload))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
