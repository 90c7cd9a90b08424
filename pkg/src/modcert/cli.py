"""Command-line interface.

Subcommands: score, optimize, bound, certify, verify, bench, gen.
Network inputs are edge-list files; corpus names (karate, knoki, ...) are
accepted wherever a file path is expected.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .bench import format_csv, format_table, run_benchmark
from .datasets import CORPUS, load_network
from .document import CertificateDocument, document_to_certificate, network_fingerprint
from .edgelist import parse_edge_list
from .graph import GraphError
from .optimizer import OptimizerConfig, optimize
from .pipeline import certify
from .scores import score_matrix, trivial_upper_bound
from .generator import generate_planted
from .verify import verify_certificate


def _load_input(path: str, directed: bool):
    if path in CORPUS and not os.path.exists(path):
        return load_network(path)
    if path == "-":
        return parse_edge_list(sys.stdin.read(), directed=directed)
    with open(path) as fh:
        return parse_edge_list(fh.read(), directed=directed)


def _frac(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _add_common(parser):
    parser.add_argument("--directed", action="store_true", help="treat input as directed")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", choices=["table", "csv", "json"], default="table")


def cmd_score(args) -> int:
    net = _load_input(args.network, args.directed)
    sm = score_matrix(net)
    rows = [(net.node_labels[a], net.node_labels[b], sm.s[(a, b)]) for a, b in sm.pairs()]
    if args.format == "json":
        payload = {
            "pairs": {f"{a}|{b}": _frac(v) for a, b, v in rows},
            "diagonal": {net.node_labels[i]: _frac(v) for i, v in enumerate(sm.d)},
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        sep = "," if args.format == "csv" else "\t"
        for a, b, v in rows:
            print(f"{a}{sep}{b}{sep}{_frac(v)} ({float(v):+.6f})" if args.format == "table"
                  else f"{a}{sep}{b}{sep}{_frac(v)}")
    return 0


def cmd_optimize(args) -> int:
    net = _load_input(args.network, args.directed)
    sm = score_matrix(net)
    part = optimize(sm, OptimizerConfig(seed=args.seed, restarts=args.restarts))
    communities = [[net.node_labels[v] for v in c] for c in part.communities()]
    if args.format == "json":
        print(json.dumps({"modularity": _frac(part.modularity),
                          "modularity_float": float(part.modularity),
                          "communities": communities}, indent=2))
    else:
        print(f"modularity: {float(part.modularity):.6f} ({_frac(part.modularity)})")
        for i, c in enumerate(communities):
            print(f"community {i}: {' '.join(c)}")
    return 0


def cmd_bound(args) -> int:
    net = _load_input(args.network, args.directed)
    sm = score_matrix(net)
    trivial = trivial_upper_bound(sm)
    if args.method == "trivial":
        print(f"trivial bound: {float(trivial):.6f} ({_frac(trivial)})")
        return 0
    from .optimizer import OptimizerConfig as _Cfg
    from .pipeline import chain_bound

    achieved = optimize(sm, _Cfg(seed=args.seed)).modularity
    result = chain_bound(sm, achieved=achieved, strategy=args.strategy, seed=args.seed,
                         tries_per_k=args.tries_per_k, mixed_prob=args.mixed_prob,
                         path_budget=args.path_budget)
    print(f"trivial bound: {float(trivial):.6f} ({_frac(trivial)})")
    print(f"achieved: {float(achieved):.6f} ({_frac(achieved)})")
    print(f"greedy chains: {result.chains_applied}, greedy bound {float(result.greedy_bound):.6f}")
    print(f"bound: {float(result.bound):.6f} ({_frac(result.bound)})")
    return 0


def cmd_certify(args) -> int:
    net = _load_input(args.network, args.directed)
    doc = certify(
        net,
        method=args.method,
        max_subnet_size=args.max_subnet_size,
        seed=args.seed,
        strategy=args.strategy,
        tries_per_k=args.tries_per_k,
        restarts=args.restarts,
        subnet_budget=args.budget,
        path_budget=args.path_budget,
        mixed_prob=args.mixed_prob,
    )
    text = doc.dumps()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        print(f"status: {doc.status}  achieved {float(doc.achieved_modularity):.6f}  "
              f"bound {float(doc.bound):.6f}  -> {args.output}")
    else:
        print(text, end="")
    return 0


def cmd_verify(args) -> int:
    net = _load_input(args.network, args.directed)
    try:
        with open(args.certificate) as fh:
            doc = CertificateDocument.loads(fh.read())
    except (OSError, ValueError, KeyError) as exc:
        print(f"cannot parse certificate: {exc}", file=sys.stderr)
        return 2
    if doc.fingerprint != network_fingerprint(net):
        print("verification failed: fingerprint-mismatch: certificate is for a different network")
        return 1
    sm = score_matrix(net)
    try:
        cert = document_to_certificate(doc, net)
    except KeyError as exc:
        print(f"cannot parse certificate: unknown node label {exc}", file=sys.stderr)
        return 2
    ok, why = verify_certificate(cert, sm)
    if not ok:
        print(f"verification failed: {why}")
        return 1
    # document-level claims beyond the core certificate
    from .scores import modularity_of_assignment

    label_to_id = net.label_index()
    assignment = [0] * net.n
    seen = set()
    for ci, community in enumerate(doc.achieved_communities):
        for lab in community:
            if lab not in label_to_id or lab in seen:
                print("verification failed: achieved-mismatch: bad community listing")
                return 1
            seen.add(lab)
            assignment[label_to_id[lab]] = ci
    if len(seen) != net.n:
        print("verification failed: achieved-mismatch: communities do not cover all nodes")
        return 1
    q = modularity_of_assignment(sm, assignment)
    if q != doc.achieved_modularity:
        print("verification failed: achieved-mismatch: stated modularity is not the partition's")
        return 1
    if doc.gap != doc.bound - doc.achieved_modularity:
        print("verification failed: bound-arithmetic: gap field inconsistent")
        return 1
    if (doc.status == "optimal-proved") != (doc.gap == 0):
        print("verification failed: status-mismatch: status does not match gap")
        return 1
    print(f"verification passed: {doc.status}, bound {float(doc.bound):.6f}, "
          f"achieved {float(doc.achieved_modularity):.6f}")
    return 0


def cmd_bench(args) -> int:
    notices: list[str] = []
    records = run_benchmark(
        names=args.networks or None,
        method=args.method,
        max_subnet_size=args.max_subnet_size,
        seed=args.seed,
        data_dir=args.data_dir,
        subnet_budget=args.budget,
        notices=notices,
    )
    for note in notices:
        print(f"note: {note}", file=sys.stderr)
    if args.format == "csv":
        print(format_csv(records), end="")
    elif args.format == "json":
        payload = [
            {
                "network": r.name,
                "size": r.size,
                "achieved": _frac(r.achieved),
                "bound": _frac(r.bound),
                "ratio_pct": r.ratio,
                "status": r.status,
                "seconds": round(r.seconds, 3),
            }
            for r in records
        ]
        print(json.dumps(payload, indent=2))
    else:
        print(format_table(records))
    if args.out_csv:
        with open(args.out_csv, "w") as fh:
            fh.write(format_csv(records))
    return 0


def cmd_gen(args) -> int:
    net = generate_planted(
        n=args.n,
        communities=args.communities,
        p_in=args.p_in,
        p_out=args.p_out,
        weight_scale=args.weight_scale,
        seed=args.seed,
    )
    lines = [f"# planted partition: n={args.n} communities={args.communities} "
             f"p_in={args.p_in} p_out={args.p_out} seed={args.seed}"]
    seen = set()
    for (a, b), w in sorted(net.edges.items()):
        if (b, a) in seen:
            continue
        seen.add((a, b))
        la, lb = net.node_labels[a], net.node_labels[b]
        lines.append(f"{la} {lb} {w}" if w != 1 else f"{la} {lb}")
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modcert",
        description="Community partitions with proven modularity upper bounds.",
    )
    parser.add_argument("--version", action="version", version=f"modcert {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("score", help="print exact pair scores")
    p.add_argument("network")
    _add_common(p)
    p.set_defaults(func=cmd_score)

    p = subs.add_parser("optimize", help="search for a high-modularity partition")
    p.add_argument("network")
    p.add_argument("--restarts", type=int, default=8)
    _add_common(p)
    p.set_defaults(func=cmd_optimize)

    p = subs.add_parser("bound", help="compute an upper bound on modularity")
    p.add_argument("network")
    p.add_argument("--method", choices=["trivial", "chains"], default="chains")
    p.add_argument("--strategy", default="best", choices=["best", "random", "mixed"])
    p.add_argument("--mixed-prob", type=float, default=0.5)
    p.add_argument("--tries-per-k", type=int, default=1)
    p.add_argument("--path-budget", type=int, default=10_000_000)
    _add_common(p)
    p.set_defaults(func=cmd_bound)

    p = subs.add_parser("certify", help="emit a verified optimality certificate")
    p.add_argument("network")
    p.add_argument("--method", choices=["chains", "subnets", "both"], default="both")
    p.add_argument("--max-subnet-size", type=int, default=6)
    p.add_argument("--strategy", default="best", choices=["best", "random", "mixed"])
    p.add_argument("--mixed-prob", type=float, default=0.5)
    p.add_argument("--tries-per-k", type=int, default=1)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--budget", type=int, default=None, help="max subnetworks to resolve")
    p.add_argument("--path-budget", type=int, default=10_000_000)
    p.add_argument("-o", "--output")
    _add_common(p)
    p.set_defaults(func=cmd_certify)

    p = subs.add_parser("verify", help="check a certificate against a network")
    p.add_argument("network")
    p.add_argument("certificate")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("bench", help="run the benchmark corpus")
    p.add_argument("networks", nargs="*", help="corpus names (default: all available)")
    p.add_argument("--method", choices=["chains", "subnets", "both"], default="both")
    p.add_argument("--max-subnet-size", type=int, default=5)
    p.add_argument("--budget", type=int, default=200_000)
    p.add_argument("--data-dir", default=None)
    p.add_argument("--out-csv", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_bench)

    p = subs.add_parser("gen", help="generate a planted-partition network")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--communities", type=int, required=True)
    p.add_argument("--p-in", type=float, required=True)
    p.add_argument("--p-out", type=float, required=True)
    p.add_argument("--weight-scale", default="1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GraphError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
