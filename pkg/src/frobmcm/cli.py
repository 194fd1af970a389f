"""Command-line front end.

A problem document is JSON::

    {"p": 3, "variables": ["x", "y"], "weights": [3, 2], "relations": ["x^2-y^3"],
     "modules": {"m": {"ideal": ["x", "y"]},
                 "FR": {"pushforward": "R", "q": 3},
                 "N": {"matrix": [["x", "y"]], "generator_degrees": [0, 0]},
                 "k": {"quotient": ["x", "y"]}}}

The module ``R`` (the ring itself) is always available.  Exit codes: 0 ok,
1 error, 2 undecided, 3 discrepancy.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Any

from .canonical import PreconditionError, TheoremViolation, h_invariant, mcm_from_module, para_canonical
from .frobenius import nabla_matrix, pushforward
from .modmath import (GradedModule, ModuleError, cyclic_module, depth, dimension, ideal_module, lambda0,
                      minimal_presentation, resolution)
from .ring_core import GradedRing, RingError
from .splitting import (decompose, fedder_check, indecomposables_isomorphic, is_direct_summand, is_fsplit,
                        mcm_search, net_explore)

EXIT_OK, EXIT_ERROR, EXIT_UNDECIDED, EXIT_DISCREPANCY = 0, 1, 2, 3


class DocumentError(ValueError):
    pass


# ---------------------------------------------------------------------------
# documents


def load_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    for key in ("p", "variables"):
        if key not in doc:
            raise DocumentError(f"missing field {key!r}")
    return doc


def build_ring(doc: dict) -> GradedRing:
    variables = doc["variables"]
    if isinstance(variables, str):
        variables = list(variables)
    try:
        return GradedRing.from_strings(int(doc["p"]), variables, doc.get("weights"), doc.get("relations", []))
    except RingError as exc:
        raise DocumentError(f"ring: {exc}") from None


def build_modules(doc: dict, ring: GradedRing) -> dict[str, GradedModule]:
    specs = doc.get("modules", {})
    out: dict[str, GradedModule] = {"R": GradedModule.free(ring, [0], "R")}
    pending = dict(specs)
    while pending:
        progressed = False
        for name, entry in list(pending.items()):
            src = entry.get("pushforward") if isinstance(entry, dict) else None
            if src is not None and src not in out:
                if src not in pending:
                    raise DocumentError(f"module {name!r}: unknown source module {src!r}")
                continue
            try:
                out[name] = _build_module(name, entry, ring, out)
            except (RingError, ModuleError) as exc:
                raise DocumentError(f"module {name!r}: {exc}") from None
            del pending[name]
            progressed = True
        if not progressed:
            raise DocumentError(f"cyclic pushforward definitions: {sorted(pending)}")
    return out


def _build_module(name: str, entry: Any, ring: GradedRing, known: dict[str, GradedModule]) -> GradedModule:
    if not isinstance(entry, dict):
        raise DocumentError(f"module {name!r} must be an object")
    if "matrix" in entry:
        degs = entry.get("generator_degrees")
        degs = [Fraction(str(d)) for d in degs] if degs is not None else None
        M = GradedModule.from_matrix(ring, entry["matrix"], degs, name=name)
        return M
    if "ideal" in entry:
        return ideal_module(ring, entry["ideal"], name)
    if "quotient" in entry:
        return cyclic_module(ring, entry["quotient"], Fraction(str(entry.get("degree", 0))), name)
    if "pushforward" in entry:
        q = int(entry.get("q", ring.p))
        return pushforward(known[entry["pushforward"]], q).renamed(name)
    raise DocumentError(f"module {name!r}: expected one of matrix, ideal, quotient, pushforward")


# ---------------------------------------------------------------------------
# serialisation


def module_json(M: GradedModule) -> dict:
    ring = M.ring
    return {
        "name": M.name,
        "generators": M.ngens,
        "relations": M.nrels,
        "generator_degrees": [str(d) for d in M.gen_degrees],
        "matrix": [[ring.fmt(f) for f in row] for row in M.matrix()],
    }


def map_json(phi) -> dict:
    return {"shift": str(phi.shift), "images": phi.matrix_strings()}


def _label(N: GradedModule, known: dict[str, GradedModule]) -> str | None:
    for name, K in known.items():
        K = minimal_presentation(K)
        if K.ngens == N.ngens and indecomposables_isomorphic(K, N) is not None:
            return name
    return None


# ---------------------------------------------------------------------------
# tasks


def task_pushforward(args, ring, mods) -> tuple[dict, int]:
    M = _module(args, mods)
    q = args.q or ring.p
    res: dict[str, Any] = {}
    if args.raw:
        P = nabla_matrix(M.ambient_rows(), M.gen_degrees, ring, q)
        res["nabla"] = {
            "block_size": P.block,
            "generator_degrees": [str(d) for d in P.gen_degrees],
            "matrix": [[ring.fmt(f) for f in row] for row in P.dense(ring)],
        }
    N = pushforward(M, q)
    res["pushforward"] = module_json(N)
    res["free"] = N.nrels == 0
    return res, EXIT_OK


def task_decompose(args, ring, mods) -> tuple[dict, int]:
    M = _module(args, mods)
    dec = decompose(M, seed=args.seed, deadline=_deadline(args))
    known = {k: v for k, v in mods.items() if k != args.module}
    comps = []
    for c in dec.components:
        comps.append({
            "label": _label(c.module, known),
            "multiplicity": c.multiplicity,
            "shifts": [str(s) for s in c.shifts],
            "module": module_json(c.module),
        })
    certs = [{"summand": module_json(s.module), "projection": map_json(s.projection),
              "inclusion": map_json(s.inclusion)} for s in dec.summands]
    res = {"components": comps, "verified": dec.verified, "certificates": certs}
    return res, EXIT_OK if dec.status == "ok" else EXIT_UNDECIDED


def task_summand(args, ring, mods) -> tuple[dict, int]:
    Q = _module(args, mods)
    if not args.target or args.target not in mods:
        raise DocumentError("--target must name a module of the document")
    ok, cert = is_direct_summand(Q, mods[args.target], certificate=True, seed=args.seed)
    res: dict[str, Any] = {"summand": bool(ok)}
    if cert is not None:
        res["certificate"] = {"shift": str(cert.shift), "phi": map_json(cert.phi), "psi": map_json(cert.psi)}
    return res, EXIT_OK


def task_fsplit(args, ring, mods) -> tuple[dict, int]:
    Q = _module(args, mods)
    ok, cert = is_fsplit(Q, args.q or ring.p, certificate=True, seed=args.seed)
    res: dict[str, Any] = {"fsplit": bool(ok)}
    if cert is not None:
        res["certificate"] = {"shift": str(cert.shift), "phi": map_json(cert.phi), "psi": map_json(cert.psi)}
    return res, EXIT_OK


def task_fedder(args, ring, mods) -> tuple[dict, int]:
    return {"fpure": fedder_check(ring)}, EXIT_OK


def task_net(args, ring, mods) -> tuple[dict, int]:
    M = _module(args, mods)
    net = net_explore(M, max_steps=args.max_steps, q=args.q, rng_seed=args.seed, deadline=_deadline(args))
    census = net.census()
    known = {k: v for k, v in mods.items() if k != args.module}
    for entry, C in zip(census["classes"], net.classes):
        entry["label"] = _label(C, known)
    code = EXIT_UNDECIDED if net.status == "undecided" else EXIT_OK
    return census, code


def task_mcm_search(args, ring, mods) -> tuple[dict, int]:
    res = mcm_search(ring, max_steps=args.max_steps, rng_seed=args.seed, deadline=_deadline(args))
    out: dict[str, Any] = {"status": res.status, "h_values": res.h_values, "notes": res.notes}
    if res.module is not None:
        out["module"] = module_json(res.module)
        out["depth"] = int(depth(res.module))
        out["source"] = module_json(res.source)
    if res.net is not None:
        out["net"] = res.net.census()
    return out, EXIT_OK


def task_paracanonical(args, ring, mods) -> tuple[dict, int]:
    M = _module(args, mods)
    W = minimal_presentation(para_canonical(M, args.index))
    res: dict[str, Any] = {"index": args.index, "module": module_json(W)}
    if W.ngens:
        res["dimension"] = dimension(W)
        res["depth"] = int(depth(W))
        res["lambda0"] = lambda0(W)
        res["hilbert_series"] = W.hilbert_series().to_json()
    if args.index == 1:
        res["h"] = h_invariant(M)
    return res, EXIT_OK


def task_mcm(args, ring, mods) -> tuple[dict, int]:
    M = _module(args, mods)
    W = mcm_from_module(M)
    return {"module": module_json(W), "depth": int(depth(W)), "betti": resolution(W).format_betti()}, EXIT_OK


def task_examples(args, ring, mods) -> tuple[dict, int]:
    from .suite import example_suite

    targets = example_suite(include_slow=not args.quick, samples=args.samples, seed=args.seed)
    rows = [t.to_json() for t in targets]
    if any(t.status == "error" for t in targets):
        code = EXIT_ERROR
    elif any(t.status == "discrepancy" for t in targets):
        code = EXIT_DISCREPANCY
    else:
        code = EXIT_OK
    return {"targets": rows}, code


TASKS = {
    "pushforward": task_pushforward,
    "decompose": task_decompose,
    "summand": task_summand,
    "fsplit": task_fsplit,
    "fedder": task_fedder,
    "net-explore": task_net,
    "mcm-search": task_mcm_search,
    "paracanonical": task_paracanonical,
    "mcm": task_mcm,
    "paper-suite": task_examples,
}

STATUS = {EXIT_OK: "ok", EXIT_UNDECIDED: "undecided", EXIT_DISCREPANCY: "discrepancy", EXIT_ERROR: "error"}


def _module(args, mods: dict[str, GradedModule]) -> GradedModule:
    name = args.module or "R"
    if name not in mods:
        raise DocumentError(f"unknown module {name!r}; document defines {sorted(mods)}")
    return mods[name]


def _deadline(args) -> float | None:
    return time.monotonic() + args.budget_ms / 1000 if args.budget_ms else None


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="frobmcm", description="Frobenius pushforwards and MCM modules over F_p.")
    sub = ap.add_subparsers(dest="task", required=True)
    for name in TASKS:
        sp = sub.add_parser(name)
        if name != "paper-suite":
            sp.add_argument("document", help="problem document (JSON); '-' for stdin")
        sp.add_argument("--module", help="module name from the document (default R)")
        sp.add_argument("--target", help="ambient module for 'summand'")
        sp.add_argument("--q", type=int, default=None)
        sp.add_argument("--index", type=int, default=0)
        sp.add_argument("--max-steps", type=int, default=10)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is sequential")
        sp.add_argument("--budget-ms", type=int, default=0)
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--timing", action="store_true", help="include wall-clock time in JSON reports")
        sp.add_argument("--raw", action="store_true", help="pushforward: also emit the block matrix")
        sp.add_argument("--quick", action="store_true", help="paper-suite: skip the three-variable pushforward")
        sp.add_argument("--samples", type=int, default=200, help="paper-suite: random samples per property")
    return ap


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    report: dict[str, Any] = {"task": args.task, "seed": args.seed}
    t0 = time.monotonic()
    try:
        if args.task == "paper-suite":
            doc, ring, mods = None, None, {}
        else:
            text = sys.stdin.read() if args.document == "-" else open(args.document, encoding="utf-8").read()
            doc = load_document(text)
            ring = build_ring(doc)
            mods = build_modules(doc, ring)
        report["document"] = doc
        report["options"] = {k: getattr(args, k) for k in ("module", "target", "q", "index", "max_steps", "budget_ms")}
        results, code = TASKS[args.task](args, ring, mods)
        report["results"] = results
    except (DocumentError, RingError, ModuleError, OSError, PreconditionError) as exc:
        report["error"] = f"{type(exc).__name__}: {exc}"
        code = EXIT_ERROR
    except TheoremViolation as exc:
        report["error"] = str(exc)
        report["bundle"] = exc.bundle
        code = EXIT_ERROR
    report["status"] = STATUS[code]
    elapsed = time.monotonic() - t0
    if args.json:
        if args.timing:
            report["seconds"] = round(elapsed, 3)
        json.dump(report, out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        _print_text(report, out, elapsed)
    return code


def _print_text(report: dict, out, elapsed: float) -> None:
    out.write(f"task: {report['task']}  status: {report['status']}  ({elapsed:.2f}s)\n")
    if "error" in report:
        out.write(f"error: {report['error']}\n")
        return
    res = report["results"]
    if report["task"] == "paper-suite":
        for t in res["targets"]:
            mark = {"pass": "PASS", "discrepancy": "DISC", "error": "ERR "}[t["status"]]
            out.write(f"  {mark} [{t['group']}] {t['name']}: expected {t['expected']}, computed {t['computed']}"
                      f" ({t['seconds']:.2f}s)\n")
        return
    if report["task"] == "decompose":
        for c in res["components"]:
            label = c["label"] or f"<{c['module']['generators']} generators>"
            out.write(f"  {label} x{c['multiplicity']}  shifts {', '.join(c['shifts'])}\n")
        out.write(f"  split maps verified: {res['verified']}\n")
        return
    out.write(json.dumps(res, indent=2, sort_keys=True) + "\n")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
