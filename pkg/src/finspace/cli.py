"""Command line interface.

Exit codes: 0 when every check passes (or the queried property holds),
1 on a failed check, 2 on an input error. With ``--json`` stdout carries a
single JSON document; diagnostics always go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import formats
from .chains import cokernel_complex
from .contraction import (
    contract_edge,
    decompose,
    is_g_minimal,
    whe_criterion,
)
from .errors import FinSpaceError, NotMonotone
from .homology import homological_dimension_of, homology, space_homology
from .poset import (
    beat_points,
    core,
    is_continuous,
    is_minimal,
    is_monotone,
    monotonicity_witness,
    unrealized_pair,
)
from .verify import (
    DEFAULT_CHECKS,
    ALL_CHECKS,
    betti_report_for_trace,
    factorization_report,
    random_trace_suite,
    sweep,
    verify_trace,
)


class InputError(Exception):
    pass


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _load_map(args):
    dom = formats.read_poset(args.domain)
    cod = formats.read_poset(args.codomain)
    return formats.read_map(args.map, dom, cod)


def cmd_info(args) -> int:
    X = formats.read_poset(args.poset)
    beats = sorted(X.labels[x] for x in beat_points(X))
    C, removed = core(X)
    payload = {
        "poset": formats.poset_to_json(X),
        "elements": len(X),
        "relations": X.relation_count(),
        "hasse_edges": len(X.covers),
        "beat_points": beats,
        "minimal": not beats,
        "core_size": len(C),
        "core_removed": removed,
    }
    text = "\n".join(
        [
            f"elements:    {len(X)} ({', '.join(X.labels)})",
            f"relations:   {X.relation_count()}",
            f"hasse edges: {len(X.covers)}",
            f"beat points: {', '.join(beats) or '-'}",
            f"minimal:     {'yes' if not beats else 'no'}",
            f"core size:   {len(C)}",
        ]
    )
    _emit(args, payload, text)
    return 0


def cmd_homology(args) -> int:
    X = formats.read_poset(args.poset)
    h = space_homology(X)
    payload = {**h.to_dict(), "hdim": homological_dimension_of(h)}
    _emit(args, payload, f"betti: {list(h.betti)}\ntorsion: {[list(t) for t in h.torsion]}")
    return 0


def cmd_contract(args) -> int:
    X = formats.read_poset(args.poset)
    parts = args.edge.split(",")
    if len(parts) != 2:
        raise InputError("--edge expects A,B with A covering B")
    a, b = (X.index(p.strip()) for p in parts)
    ec = contract_edge(X, (a, b))
    K = cokernel_complex(ec)
    hk = homology(K)
    payload = {
        "result": formats.poset_to_json(ec.result),
        "merged": ec.result.labels[ec.merged],
        "cokernel_sizes": K.dims(),
        "cokernel": hk.to_dict(),
        "quasi_iso": hk.is_zero(),
        "whe_criterion": whe_criterion(X, (a, b)).value,
    }
    text = "\n".join(
        [
            "result:         " + formats.format_poset(ec.result).replace("\n", "; ").rstrip("; "),
            f"cokernel sizes: {K.dims()}",
            f"H(K_e) betti:   {list(hk.betti)} torsion: {[list(t) for t in hk.torsion]}",
            f"quasi-iso:      {hk.is_zero()}",
            f"whe criterion:  {payload['whe_criterion']}",
        ]
    )
    _emit(args, payload, text)
    return 0


def cmd_decompose(args) -> int:
    f = _load_map(args)
    try:
        trace = decompose(f)
    except NotMonotone as exc:
        _emit(args, {"error": str(exc), "witness": exc.witness}, f"not decomposable: {exc}")
        return 1
    report = betti_report_for_trace(trace)
    payload = report.to_dict()
    text = "\n".join(
        [f"steps: {len(trace)}"]
        + [f"  contract {a} > {b}" for a, b in trace.edge_labels()]
        + [
            f"b(X) = {list(report.source.betti)}  b(Y) = {list(report.target.betti)}",
            f"residuals: {report.residuals}",
        ]
    )
    _emit(args, payload, text)
    return 0 if report.passed else 1


def cmd_verify(args) -> int:
    f = _load_map(args)
    try:
        trace = decompose(f)
    except NotMonotone as exc:
        _emit(args, {"error": str(exc), "witness": exc.witness}, f"not decomposable: {exc}")
        return 1
    report = betti_report_for_trace(trace)
    ledger = verify_trace(trace)
    payload = {**report.to_dict(), "ledger": ledger.to_dict()}
    lines = [f"residuals: {report.residuals}"]
    lines += [f"  {'PASS' if c.passed else 'FAIL'}  {name}" for name, c in ledger]
    _emit(args, payload, "\n".join(lines))
    return 0 if report.passed and ledger.passed else 1


def cmd_monotone(args) -> int:
    f = _load_map(args)
    witness = None
    if f.is_surjective() and is_continuous(f):
        try:
            decompose(f)
        except NotMonotone as exc:
            witness = exc.witness
        else:
            pair = unrealized_pair(f)
            if pair is not None:
                witness = {"kind": "pair", "pair": [f.cod.labels[y] for y in pair]}
        monotone = witness is None
    else:
        monotone = is_monotone(f)
        if not monotone:
            S = monotonicity_witness(f)
            witness = {"kind": "subset", "subset": sorted(f.cod.labels[y] for y in S)}
    payload = {"monotone": monotone, "witness": witness}
    text = f"monotone: {monotone}"
    if witness is not None:
        text += f"\nwitness: {json.dumps(witness)}"
    _emit(args, payload, text)
    return 0 if monotone else 1


def cmd_factorize(args) -> int:
    f = _load_map(args)
    ledger = factorization_report(f)
    payload = {"ledger": ledger.to_dict()}
    fact = ledger.observations["factorization"]
    lines = [
        f"Z: {fact['Z']}",
        f"g contracts: {fact['g_steps']}",
        f"h: {fact['h']}",
    ]
    lines += [f"  {'PASS' if c.passed else 'FAIL'}  {name}" for name, c in ledger]
    _emit(args, payload, "\n".join(lines))
    return 0 if ledger.passed else 1


def cmd_gminimal(args) -> int:
    X = formats.read_poset(args.poset)
    g = is_g_minimal(X)
    payload = {"g_minimal": g, "minimal": is_minimal(X)}
    _emit(args, payload, f"g-minimal: {g}\nminimal:   {payload['minimal']}")
    return 0 if g else 1


def cmd_sweep(args) -> int:
    summary = sweep(args.max_n, args.checks, jobs=args.jobs)
    failed = summary["failures"]
    if args.random_traces:
        rt = random_trace_suite(args.random_traces, args.max_size, seed=args.seed)
        summary["random_traces"] = rt
        failed += rt["failures"]
    lines = [
        f"posets by size: {summary['posets_by_n']}",
        f"edges: {summary['edges']}",
        f"failures: {summary['failures']} {summary['failures_by_check'] or ''}",
    ]
    if args.random_traces:
        lines.append(
            f"random traces: {summary['random_traces']['traces']}, "
            f"failures: {summary['random_traces']['failures']}"
        )
    _emit(args, summary, "\n".join(lines))
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="finspace",
        description="Homology of finite T0-spaces and monotone maps between them.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--json", action="store_true", help="emit JSON on stdout")
        sp.set_defaults(func=func)
        return sp

    def map_args(sp):
        sp.add_argument("--domain", required=True, help="poset file of the domain")
        sp.add_argument("--codomain", required=True, help="poset file of the codomain")
        sp.add_argument("--map", required=True, help="map file")

    add("info", cmd_info, "order data, beat points and core").add_argument("poset")
    add("homology", cmd_homology, "Betti numbers and torsion").add_argument("poset")
    sp = add("contract", cmd_contract, "contract one Hasse edge")
    sp.add_argument("poset")
    sp.add_argument("--edge", required=True, help="A,B where A covers B")
    map_args(add("decompose", cmd_decompose, "edge contraction decomposition of a map"))
    map_args(add("verify", cmd_verify, "Betti report and check ledger for a map"))
    map_args(add("monotone", cmd_monotone, "Kuratowski monotonicity of a map"))
    map_args(add("factorize", cmd_factorize, "f = h o g with g monotone, h discrete-fibred"))
    add("gminimal", cmd_gminimal, "no quasi-isomorphic edge contraction").add_argument("poset")
    sp = add("sweep", cmd_sweep, "exhaustive checks over all small labeled posets")
    sp.add_argument("--max-n", type=int, default=4)
    sp.add_argument(
        "--checks",
        default=",".join(DEFAULT_CHECKS),
        help=f"comma separated, 'all' or 'default'; available: {', '.join(ALL_CHECKS)}",
    )
    sp.add_argument("--seed", type=int, default=0, help="seed for --random-traces")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--random-traces", type=int, default=0, metavar="N",
                    help="also verify N random full contraction traces")
    sp.add_argument("--max-size", type=int, default=10, help="largest random poset")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FinSpaceError, InputError, ValueError, OSError) as exc:
        print(f"finspace: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
