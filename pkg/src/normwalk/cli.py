"""Command-line entry point.

Exit codes: 0 success, 1 a checked property was falsified (the computation
itself succeeded), 2 usage or input error, 3 a resource cap or bit budget was
hit.  Identical inputs and flags produce byte-identical outputs.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import serialize
from .continuous import is_pyramidal_extension, search_pyramidal_chain
from .generators import (
    BitSource,
    BitsExhausted,
    ClusterSpec,
    generate_cluster,
    hexagon_from_params,
    hexagon_params_from_bits,
    survey,
)
from .lattice import LatticePolytope
from .limits import ResourceCapError
from .normality import (
    caratheodory_bounds,
    icp_check_bounded,
    is_smooth,
    is_unimodular_simplex,
    normality_report,
    ucp_falsify,
)
from .poset import build_atlas, enumerate_jumps_up, walk

EXIT_OK = 0
EXIT_FALSIFIED = 1
EXIT_USAGE = 2
EXIT_CAP = 3


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read JSON from {path}: {exc}") from exc


def _emit(text: str, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text)


def _load_polytope(path) -> LatticePolytope:
    return serialize.polytope_from_json(_read_json(path))


def _bit_source(args) -> BitSource | None:
    if getattr(args, "bits", None):
        return BitSource.from_file(args.bits)
    if getattr(args, "os_entropy", None):
        return BitSource.from_os_entropy(args.os_entropy, cache_path=args.cache)
    if getattr(args, "fetch", None):
        if not args.cache:
            raise ValueError("--fetch needs --cache for replayable runs")
        return BitSource.fetch(args.fetch, args.fetch_bytes, args.cache)
    return None


# --- subcommands ------------------------------------------------------------------

def cmd_check(args) -> int:
    P = _load_polytope(args.polytope)
    report = normality_report(P)
    payload = serialize.normality_report_json(report)
    payload["unimodular_simplex"] = is_unimodular_simplex(P)
    if P.is_full_dimensional:
        smooth, offender = is_smooth(P)
        payload["smooth"] = smooth
        payload["smooth_offender"] = (
            serialize.vec_str(offender) if offender is not None else None
        )
    else:
        payload["smooth"] = None
        payload["smooth_offender"] = None
    falsified = not report.integrally_closed
    if args.icp_r is not None:
        if report.integrally_closed:
            check = icp_check_bounded(P, args.icp_r, args.icp_cmax)
            payload["icp"] = serialize.icp_check_json(check)
            payload["caratheodory"] = serialize.cr_certificate_json(
                caratheodory_bounds(P, args.icp_cmax)
            )
            if not check.holds:
                falsified = True
        else:
            payload["icp"] = None
            payload["caratheodory"] = None
    if args.ucp_trials is not None:
        bits = BitSource.from_file(args.seed_file) if args.seed_file else None
        point = ucp_falsify(P, trials=args.ucp_trials, bits=bits)
        payload["ucp_counterexample"] = (
            [serialize.rat_str(a) for a in point] if point is not None else None
        )
        if point is not None:
            falsified = True
    _emit(serialize.canonical_dumps(payload), args.output)
    return EXIT_FALSIFIED if falsified else EXIT_OK


def cmd_jumps(args) -> int:
    P = _load_polytope(args.polytope)
    jumps = enumerate_jumps_up(P)
    payload = {
        "base": serialize.polytope_to_json(P),
        "jumps": [serialize.jump_json(j) for j in jumps],
    }
    _emit(serialize.canonical_dumps(payload), args.output)
    return EXIT_OK


def cmd_walk(args) -> int:
    P = _load_polytope(args.polytope)
    bits = _bit_source(args)
    trace = walk(P, strategy=args.strategy, budget=args.budget, bits=bits)
    lines = []
    header = {
        "type": "header",
        "strategy": args.strategy,
        "budget": serialize.int_str(args.budget),
        "start": serialize.polytope_to_json(P),
        "provenance": serialize.bit_provenance(bits) if bits else None,
    }
    lines.append(serialize.compact_line(header))
    for i, jump in enumerate(trace.jumps):
        row = serialize.jump_json(jump)
        row["type"] = "jump"
        row["step"] = serialize.int_str(i + 1)
        lines.append(serialize.compact_line(row))
    summary = {
        "type": "summary",
        "terminated_reason": trace.terminated_reason,
        "steps": serialize.int_str(len(trace.jumps)),
        "zeta_partial_1": serialize.rat_str(trace.zeta_partial(1)),
        "zeta_partial_1_with_start": serialize.rat_str(
            trace.zeta_partial(1, include_initial=True)
        ),
        "zeta_partial_2": serialize.rat_str(trace.zeta_partial(2)),
    }
    lines.append(serialize.compact_line(summary))
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_atlas(args) -> int:
    atlas = build_atlas(args.dim, args.radius)
    payload = serialize.atlas_json(atlas)
    payload["dim"] = args.dim
    payload["radius"] = args.radius
    _emit(serialize.canonical_dumps(payload), args.output)
    return EXIT_OK


def _generate_stream(args):
    src = _bit_source(args)
    if src is None:
        raise ValueError("gen needs a bit source (--bits, --os-entropy or --fetch)")
    items = []
    if args.mode == "cluster":
        for n in range(args.n_start, args.n_end + 1):
            spec = ClusterSpec(n=n, d=args.dim, v=args.max_vertices, c=args.c_exponent)
            items.extend(generate_cluster(src, spec))
    else:
        for _ in range(args.count):
            params = hexagon_params_from_bits(
                src, d=args.dim, bound=args.bound, systematic=not args.random_positions
            )
            items.append(hexagon_from_params(params))
    return src, items


def cmd_gen(args) -> int:
    src, items = _generate_stream(args)
    lines = [
        serialize.compact_line(
            {
                "type": "header",
                "mode": args.mode,
                "provenance": serialize.bit_provenance(src),
            }
        )
    ]
    for item in items:
        if hasattr(item, "polytope"):
            row = serialize.polytope_to_json(item.polytope)
            row.update(
                type="polytope",
                cluster_n=item.cluster_n,
                index=item.index,
                bit_offset=serialize.int_str(item.bit_offset),
                degenerate=item.degenerate,
            )
        else:
            row = serialize.polytope_to_json(item)
            row["type"] = "polytope"
        lines.append(serialize.compact_line(row))
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_survey(args) -> int:
    _, items = _generate_stream(args)
    checks = tuple(args.checks.split(","))
    stats = survey(items, checks=checks)
    if args.format == "csv":
        _emit(serialize.survey_csv(stats), args.output)
    else:
        _emit(serialize.canonical_dumps(serialize.survey_counts_json(stats)), args.output)
    return EXIT_OK


def cmd_pyramid(args) -> int:
    P = serialize.rational_polytope_from_json(_read_json(args.inner))
    Q = serialize.rational_polytope_from_json(_read_json(args.outer))
    if args.search_chain:
        found = search_pyramidal_chain(P, Q, budget=args.budget)
        payload = {
            "found": found is not None,
            "chain": None
            if found is None
            else [
                serialize.rational_polytope_to_json(step)["vertices"]
                for step in found.chain
            ],
        }
        _emit(serialize.canonical_dumps(payload), args.output)
        return EXIT_OK
    result = is_pyramidal_extension(P, Q)
    payload = {
        "holds": result.holds,
        "apex": [serialize.rat_str(a) for a in result.apex] if result.apex else None,
        "reason": result.reason,
    }
    _emit(serialize.canonical_dumps(payload), args.output)
    return EXIT_OK if result.holds else EXIT_FALSIFIED


# --- parser ------------------------------------------------------------------------

def _add_bits_flags(sp):
    sp.add_argument("--bits", help="bit file consumed MSB-first")
    sp.add_argument("--os-entropy", type=int, metavar="BYTES",
                    help="draw BYTES of OS entropy (record with --cache)")
    sp.add_argument("--fetch", metavar="URL",
                    help="fetch bytes from a true-random HTTP source into --cache")
    sp.add_argument("--fetch-bytes", type=int, default=1024)
    sp.add_argument("--cache", help="cache file for entropy dumps and fetches")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="normwalk",
        description="Exact-arithmetic analysis of normal lattice polytopes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("check", help="normality battery for one polytope")
    sp.add_argument("polytope")
    sp.add_argument("--icp-r", type=int, default=None)
    sp.add_argument("--icp-cmax", type=int, default=5)
    sp.add_argument("--ucp-trials", type=int, default=None)
    sp.add_argument("--seed-file", default=None)
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("jumps", help="enumerate quantum jumps out of a polytope")
    sp.add_argument("polytope")
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_jumps)

    sp = sub.add_parser("walk", help="ascend by quantum jumps")
    sp.add_argument("polytope")
    sp.add_argument("--strategy", choices=("greedy_volume", "random"),
                    default="greedy_volume")
    sp.add_argument("--budget", type=int, default=10)
    _add_bits_flags(sp)
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_walk)

    sp = sub.add_parser("atlas", help="all normal polytopes in a coordinate box")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_atlas)

    for name, fn in (("gen", cmd_gen), ("survey", cmd_survey)):
        sp = sub.add_parser(name, help=f"{name} random polytopes from bits")
        sp.add_argument("--dim", type=int, required=True)
        sp.add_argument("--max-vertices", type=int, default=4)
        sp.add_argument("--n-start", type=int, default=1)
        sp.add_argument("--n-end", type=int, default=1)
        sp.add_argument("--c-exponent", type=int, default=1)
        sp.add_argument("--mode", choices=("cluster", "hexagon"), default="cluster")
        sp.add_argument("--bound", type=int, default=2,
                        help="|a_k| bound for hexagon exponents")
        sp.add_argument("--count", type=int, default=1,
                        help="number of hexagon polytopes")
        sp.add_argument("--random-positions", action="store_true")
        _add_bits_flags(sp)
        if name == "survey":
            sp.add_argument("--checks", default="normal,minimal,maximal")
            sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("-o", "--output", default=None)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("pyramid", help="pyramidal extension checks and chain search")
    sp.add_argument("inner")
    sp.add_argument("outer")
    sp.add_argument("--search-chain", action="store_true")
    sp.add_argument("--budget", type=int, default=64)
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_pyramid)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ResourceCapError, BitsExhausted) as exc:
        print(f"normwalk: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        print(f"normwalk: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
