"""Command-line front end.

Exit codes: 0 holds/valid, 1 fails, 2 input error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

from . import corpus
from .coverage import DEFAULT_MAX_ENUM, GrothendieckTopology, _all_masks, enumerate_topologies
from .criteria import (gd_factorization, gd_site_criterion, is_groupoid, is_indecomposable_bruteforce,
                       is_indecomposable_char, kp_presheaf_criterion, right_ore, stably_nonempty_covers)
from .documents import dump, frame_document, load, site_document
from .errors import CapExceeded, SheafcalcError
from .fincat import DEFAULT_MAX_FANIN, Sieve
from .frames import (DEFAULT_MAX_FRAME, FiniteFrame, demorganization_direct, filter_generated,
                     gd_sublocale_direct, l_sublocale, nucleus_checks, nucleus_from_topology,
                     quotient_by_filter, site_from_frame)
from .logic import HornSequent, as_logic, holds_in, lookup, parse_sequent, parse_term, to_text
from .ltop import l_topology, l_topology_maximality_check, l_topology_report
from .omega import Site, holds_internally

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3
CONFIG_KEYS = {"max_fanin": DEFAULT_MAX_FANIN, "max_enum": DEFAULT_MAX_ENUM,
               "max_frame": DEFAULT_MAX_FRAME, "jobs": 1}
ADMISSIBLE = ("classical", "demorgan", "goedel_dummett")
REGISTRY = ADMISSIBLE + ("kreisel_putnam",)

# a fixed battery of Horn sequents for the frame/site bridge
BATTERY = (
    "x & x = x",
    "x & y = 0 |- y = y & ~x",
    "x = ~~x |- x | ~x = 1",
    "p | ~p",
    "~p | ~~p",
    "(p -> q) | (q -> p)",
    "(~p -> q | r) -> (~p -> q) | (~p -> r)",
)


class InputError(SheafcalcError):
    pass


def load_config(path: str | None) -> dict:
    cfg = dict(CONFIG_KEYS)
    path = path or os.environ.get("SHEAFCALC_CONFIG")
    if not path:
        return cfg
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"config {path}: {e}") from e
    if not isinstance(data, dict):
        raise InputError(f"config {path}: top level must be an object")
    for k, v in data.items():
        if k not in CONFIG_KEYS:
            raise InputError(f"config {path}: unknown key {k!r}")
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise InputError(f"config {path}: {k} must be a positive integer")
        cfg[k] = v
    return cfg


def _show(x) -> str:
    if isinstance(x, Sieve):
        return "{" + ", ".join(sorted(x.members)) + "}"
    return str(x)


def _witness(v) -> dict:
    return {k: _show(x) for k, x in (v.witness or {}).items()}


def _emit(args, payload: dict, text: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        print("\n".join(text))


def _load(args, path):
    return load(path, max_fanin=args.max_fanin, max_frame=args.max_frame)


# -- commands --------------------------------------------------------------

def cmd_validate(args) -> int:
    obj = _load(args, args.path)
    if isinstance(obj, Site):
        C, J = obj.category, obj.topology
        cov = {o: len(J.covering(o)) for o in C.objects}
        payload = {"kind": "site", "valid": True, "objects": len(C.objects), "arrows": len(C.arrows),
                   "covering_sieves": cov}
        text = [f"valid site: {len(C.objects)} objects, {len(C.arrows)} arrows",
                "covering sieves: " + ", ".join(f"{o}:{n}" for o, n in cov.items())]
    else:
        payload = {"kind": "frame", "valid": True, "elements": len(obj), "boolean": obj.is_boolean()}
        text = [f"valid frame: {len(obj)} elements, boolean: {'yes' if obj.is_boolean() else 'no'}"]
    _emit(args, payload, text)
    return EXIT_OK


def _sequent_from_args(args) -> tuple[str, HornSequent]:
    if args.logic:
        spec = as_logic(args.logic)
        return spec.name, spec.sequent()
    if args.sequent:
        return args.sequent, parse_sequent(args.sequent)
    return args.term, HornSequent.axiom(parse_term(args.term))


def cmd_check(args) -> int:
    obj = _load(args, args.path)
    label, seq = _sequent_from_args(args)
    if isinstance(obj, Site):
        v = holds_internally(obj, seq)
    else:
        v = holds_in(seq, obj)
    payload = {"check": label, "sequent": str(seq), "holds": v.holds}
    if v.holds:
        text = [f"holds: {label}"]
    else:
        payload["witness"] = _witness(v)
        if v.where is not None:
            payload["object"] = v.where
        at = f" at {v.where}" if v.where is not None else ""
        text = [f"fails: {label}", f"witness{at}: " + ", ".join(f"{k} = {x}" for k, x in _witness(v).items())]
    _emit(args, payload, text)
    return EXIT_OK if v.holds else EXIT_FAIL


def cmd_ltop(args) -> int:
    site = _load(args, args.path)
    if not isinstance(site, Site):
        raise InputError("ltop needs a site document")
    rep = l_topology_report(site, args.logic)
    doc = site_document(site, rep.topology)
    props = {"logic": rep.logic.name, "axiom": to_text(rep.logic.axiom), "guaranteed": rep.guaranteed,
             "dense": rep.dense, "satisfies": rep.satisfies, "idempotent": rep.idempotent}
    if args.output:
        dump(doc, args.output)
    if args.json:
        print(json.dumps({"report": props, "document": doc}, indent=2))
    else:
        if not args.output:
            print(json.dumps(doc, indent=2))
        note = "" if rep.guaranteed else " (not guaranteed: axiom is not a join of disjunction-free terms)"
        print(f"logic {props['logic']}: dense={rep.dense} satisfies={rep.satisfies} "
              f"idempotent={rep.idempotent}{note}", file=sys.stderr)
    return EXIT_OK


def _frame(args):
    A = _load(args, args.path)
    if not isinstance(A, FiniteFrame):
        raise InputError("this command needs a frame document")
    return A


def _nucleus_table(A, q) -> tuple[dict, list[str]]:
    j = q.nucleus
    rep = nucleus_checks(A, j)
    payload = {"nucleus": {str(x): str(j(x)) for x in A.elements()},
               "fixset": [str(x) for x in j.fixset],
               "classes": {str(r): [str(x) for x in xs] for r, xs in q.classes.items()},
               "dense": rep.dense, "weakly_open": rep.weakly_open,
               "implicationally_open": rep.implicationally_open}
    text = [f"  {x} -> {j(x)}" for x in A.elements()]
    text.append("fixset: {" + ", ".join(str(x) for x in j.fixset) + "}")
    text.append(f"dense={rep.dense} weakly_open={rep.weakly_open} implicationally_open={rep.implicationally_open}")
    return payload, text


def cmd_quotient(args) -> int:
    A = _frame(args)
    seeds = [s.strip() for s in args.seeds.split(",") if s.strip()] if args.seeds else []
    for s in seeds:
        if s not in A:
            raise InputError(f"unknown element {s!r}")
    F = filter_generated(A, seeds)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        q = quotient_by_filter(A, F)
    payload, text = _nucleus_table(A, q)
    payload["filter"] = [str(x) for x in A.elements() if x in F]
    payload["proper"] = F.proper
    head = ["filter: {" + ", ".join(payload["filter"]) + "}" + ("" if F.proper else " (improper)"),
            "projection:"]
    _emit(args, payload, head + text)
    return EXIT_OK


def cmd_lsub(args) -> int:
    A = _frame(args)
    spec = as_logic(args.logic)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        q = l_sublocale(A, spec)
    payload, text = _nucleus_table(A, q)
    payload["logic"] = spec.name
    head = [f"{spec.name}-sublocale nucleus:"]
    direct = {"demorgan": demorganization_direct, "goedel_dummett": gd_sublocale_direct}.get(spec.name)
    if args.direct and direct is not None:
        d = direct(A)
        agree = sorted(map(str, d.fixset)) == sorted(payload["fixset"])
        payload["direct_fixset"] = [str(x) for x in d.fixset]
        payload["direct_agrees"] = agree
        text.append("direct description: {" + ", ".join(map(str, d.fixset)) + "}"
                    + (" (agrees)" if agree else " (DISAGREES)"))
    _emit(args, payload, head + text)
    return EXIT_OK


# -- corpus suites -----------------------------------------------------------

def _row_presheaf(i: int) -> tuple[str, dict]:
    C = corpus.categories()[i]
    s = Site.presheaf(C)
    oracles = {"classical": is_groupoid, "demorgan": right_ore, "goedel_dummett": gd_factorization,
               "kreisel_putnam": kp_presheaf_criterion}
    return C.name, {k: holds_internally(s, lookup(k).sequent()).holds == f(C) for k, f in oracles.items()}


def _row_indecomposable(i: int) -> tuple[str, dict]:
    C = corpus.categories()[i]
    ok = all(is_indecomposable_bruteforce(C, Sieve(C, c, m)) == is_indecomposable_char(C, Sieve(C, c, m))
             for c in range(len(C.objects)) for m in _all_masks(C, c))
    return C.name, {"bruteforce=char": ok}


def _row_sites(i: int) -> tuple[str, dict]:
    name, s = corpus.sites()[i]
    row = {"gd_criterion": gd_site_criterion(s) == holds_internally(s, lookup("goedel_dummett").sequent()).holds}
    for k in ADMISSIBLE:
        r = l_topology_report(s, k)
        row[k] = r.dense and r.satisfies and r.idempotent
    if name.endswith("/trivial"):
        C = s.category
        row["boolean=dense"] = l_topology(s, "classical") == GrothendieckTopology(C, stably_nonempty_covers(C))
    return name, row


def _row_frames(i: int) -> tuple[str, dict]:
    name, A = corpus.frames()[i]
    s = site_from_frame(A)
    row = {"bridge": all(holds_in(q, A).holds == holds_internally(s, q).holds for q in BATTERY)}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for k in ADMISSIBLE:
            row[k] = nucleus_from_topology(A, s, l_topology(s, k)) == l_sublocale(A, k).nucleus
        row["direct"] = all(sorted(map(str, f(A).fixset)) == sorted(map(str, l_sublocale(A, k).nucleus.fixset))
                            for k, f in (("demorgan", demorganization_direct),
                                         ("goedel_dummett", gd_sublocale_direct)))
    return name, row


def _row_maximality(i: int, max_enum: int = DEFAULT_MAX_ENUM) -> tuple[str, dict]:
    C = corpus.small_categories(max_enum)[i]
    row = {}
    tops = enumerate_topologies(C, max_enum)
    for k in ADMISSIBLE:
        row[k] = all(l_topology_maximality_check(Site(C, J, check=False), k, max_enum).ok for J in tops)
    return f"{C.name} ({len(tops)} topologies)", row


SUITES = {
    "presheaf": (_row_presheaf, lambda: len(corpus.categories())),
    "maximality": (_row_maximality, None),
    "indecomposable": (_row_indecomposable, lambda: len(corpus.categories())),
    "sites": (_row_sites, lambda: len(corpus.sites())),
    "frames": (_row_frames, lambda: len(corpus.frames())),
}


def run_suite(name: str, jobs: int = 1, max_enum: int = DEFAULT_MAX_ENUM) -> list[tuple[str, dict]]:
    fn, count = SUITES[name]
    if count is None:
        fn = partial(fn, max_enum=max_enum)
        idx = range(len(corpus.small_categories(max_enum)))
    else:
        idx = range(count())
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, idx))
    return [fn(i) for i in idx]


def export_corpus(directory: str | Path) -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    out = []
    for name, s in corpus.sites():
        p = d / (name.replace("/", "__") + ".site")
        dump(site_document(s, name=name), p)
        out.append(p)
    for name, A in corpus.frames():
        p = d / f"{name}.frame"
        dump(frame_document(A, name=name), p)
        out.append(p)
    return out


def cmd_corpus(args) -> int:
    if args.export:
        paths = export_corpus(args.export)
        if not args.json:
            print(f"exported {len(paths)} documents to {args.export}")
    suites = list(SUITES) if args.suite == "all" else [args.suite]
    payload, text, ok = {}, [], True
    for name in suites:
        rows = run_suite(name, args.jobs, args.max_enum)
        passed = all(all(r.values()) for _, r in rows)
        ok &= passed
        payload[name] = {"passed": passed, "rows": [{"entry": e, "checks": r} for e, r in rows]}
        text.append(f"[{name}] {'PASS' if passed else 'FAIL'} ({len(rows)} entries)")
        for e, r in rows:
            cells = " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in r.items())
            text.append(f"  {e:<40} {cells}")
    _emit(args, {"passed": ok, "suites": payload}, text)
    return EXIT_OK if ok else EXIT_FAIL


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sheafcalc", description="Intermediate logics of finite sites and frames.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--config", help="JSON config file (default: $SHEAFCALC_CONFIG)")
    p.add_argument("--max-fanin", type=int, help=f"fan-in cap per object (default {DEFAULT_MAX_FANIN})")
    p.add_argument("--max-enum", type=int, help=f"arrow cap for topology enumeration (default {DEFAULT_MAX_ENUM})")
    p.add_argument("--max-frame", type=int, help=f"frame size cap (default {DEFAULT_MAX_FRAME})")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="load and validate a site or frame document")
    v.add_argument("path")
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("check", help="check a logic, sequent or term")
    c.add_argument("path")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--logic", help="registry name or axiom text")
    g.add_argument("--sequent", help="Horn sequent, e.g. 'x & y = 0 |- y = y & ~x'")
    g.add_argument("--term", help="term t, checked as '|- 1 = t'")
    c.set_defaults(func=cmd_check)

    lt = sub.add_parser("ltop", help="compute the L-topology of a site")
    lt.add_argument("path")
    lt.add_argument("--logic", required=True)
    lt.add_argument("--output", "-o", help="write the resulting site document here")
    lt.set_defaults(func=cmd_ltop)

    q = sub.add_parser("quotient", help="quotient a frame by the filter generated by seeds")
    q.add_argument("path")
    q.add_argument("--seeds", default="", help="comma-separated elements")
    q.set_defaults(func=cmd_quotient)

    ls = sub.add_parser("lsub", help="L-sublocale of a frame")
    ls.add_argument("path")
    ls.add_argument("--logic", required=True)
    ls.add_argument("--direct", action="store_true", help="compare with the direct description")
    ls.set_defaults(func=cmd_lsub)

    cp = sub.add_parser("corpus", help="run the built-in corpus suites")
    cp.add_argument("--suite", choices=["all", *SUITES], default="all")
    cp.add_argument("--jobs", type=int, help="worker processes")
    cp.add_argument("--export", help="write corpus documents to this directory")
    cp.set_defaults(func=cmd_corpus)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        cfg = load_config(args.config)
        for k in ("max_fanin", "max_enum", "max_frame"):
            if getattr(args, k) is None:
                setattr(args, k, cfg[k])
        if getattr(args, "jobs", 1) is None:
            args.jobs = cfg["jobs"]
        return args.func(args)
    except CapExceeded as e:
        print(f"sheafcalc: cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except (SheafcalcError, OSError) as e:
        print(f"sheafcalc: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
