"""Command-line interface: ``rcms <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .birkhoff import report as birkhoff_report
from .enumeration import CheckpointError, class_representatives, count_total
from .expand import assemble_order
from .graphs import graph_id, merge, records_to_csv, to_dot
from .matrix_core import burnside_class_count, parse_matrix_text
from .oracle import OracleRefused
from .verify import SCHEMA_VERSION, dumps, verify_order

log = logging.getLogger("rcms")


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_enumerate(args) -> int:
    checkpoint = args.checkpoint or os.environ.get("RCMS_CHECKPOINT_DIR")
    reps = class_representatives(args.order, args.margin, workers=args.threads,
                                 checkpoint_dir=checkpoint)
    if args.format == "csv":
        lines = ["index,representative,orbit_size,mult_factor"]
        for k, r in enumerate(reps, start=1):
            rows = "/".join(" ".join(map(str, row)) for row in r.rep.rows)
            lines.append(f"{k},{rows},{r.orbit_size},{r.mult_factor}")
        _emit("\n".join(lines) + "\n", args.output)
    else:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "order": args.order,
            "margin": args.margin,
            "classes": len(reps),
            "total": sum(r.orbit_size for r in reps),
            "representatives": [
                {"index": k, "matrix": [list(row) for row in r.rep.rows],
                 "orbit_size": r.orbit_size, "mult_factor": r.mult_factor}
                for k, r in enumerate(reps, start=1)],
        }
        _emit(json.dumps(doc, indent=2) + "\n", args.output)
    return 0


def cmd_graphs(args) -> int:
    if args.margin != 4:
        log.error("graph expansion is implemented for margin 4 only")
        return 2
    records = merge([assemble_order(args.order, workers=args.threads)])
    ids = {id(r): graph_id(args.order, k) for k, r in enumerate(records, start=1)}
    if args.connected_only:
        records = [r for r in records if r.connected]
    if args.dot:
        out = Path(args.dot)
        out.mkdir(parents=True, exist_ok=True)
        for r in records:
            (out / f"{ids[id(r)]}.dot").write_text(to_dot(r.graph, ids[id(r)]))
    if args.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "order": args.order, "records": [
            {"graph_id": ids[id(r)], "canonical_adjacency": [list(x) for x in r.graph.adjacency],
             "M_T": r.m_total, "M_K": r.m_kleinert, "s": r.sym_factor,
             "connected": r.connected} for r in records]}
        _emit(json.dumps(doc, indent=2) + "\n", args.output)
    else:
        text = records_to_csv(records, [ids[id(r)] for r in records])
        _emit(text, args.output)
    return 0


def cmd_decompose(args) -> int:
    if args.matrix:
        matrices, names = [], []
        for path in args.matrix:
            try:
                matrices.append(parse_matrix_text(Path(path).read_text()))
            except ValueError as exc:
                log.error("%s: %s", path, exc)
                return 2
            names.append(str(path))
    else:
        if args.order is None or args.cls is None:
            log.error("decompose needs --matrix FILE or --order M --class K")
            return 2
        reps = class_representatives(args.order, 4, workers=args.threads)
        if not 1 <= args.cls <= len(reps):
            log.error("class index must be in 1..%d", len(reps))
            return 2
        matrices = [reps[args.cls - 1].rep]
        names = [f"m{args.order}_class{args.cls}"]
    doc = {"schema_version": SCHEMA_VERSION, **birkhoff_report(matrices, names)}
    _emit(json.dumps(doc, indent=2) + "\n", args.output)
    return 0


def cmd_verify(args) -> int:
    try:
        result = verify_order(args.order, oracle=args.oracle, workers=args.threads)
    except OracleRefused as exc:
        log.error("%s", exc)
        return 2
    _emit(dumps(result), args.output)
    for c in result["checks"]:
        log.info("[%s] %s %s", "PASS" if c["passed"] else "FAIL", c["name"], c["detail"])
    return 0 if result["passed"] else 1


def cmd_count(args) -> int:
    total = count_total(args.order, args.margin)
    classes = burnside_class_count(args.order, args.margin, method="cycles")
    _emit(json.dumps({"schema_version": SCHEMA_VERSION, "order": args.order,
                      "margin": args.margin, "N": total, "classes": classes}) + "\n",
          args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rcms", description="Vacuum phi^4 graphs from RC matrices.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker processes (default: all cores)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, margin=True, order_required=True):
        p.add_argument("--order", "-m", type=int, required=order_required)
        if margin:
            p.add_argument("--margin", "-d", type=int, default=4)
        p.add_argument("--output", "-o", help="write to file instead of stdout")

    p = sub.add_parser("enumerate", help="class representatives and orbit sizes")
    common(p)
    p.add_argument("--checkpoint", help="checkpoint directory (default $RCMS_CHECKPOINT_DIR)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("graphs", help="vacuum graphs with M_T, M_K and s")
    common(p)
    p.add_argument("--dot", metavar="DIR", help="write one DOT file per graph")
    p.add_argument("--connected-only", action="store_true")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_graphs)

    p = sub.add_parser("decompose", help="Birkhoff decompositions and signatures")
    common(p, margin=False, order_required=False)
    p.add_argument("--matrix", action="append", metavar="FILE",
                   help="matrix file (header 'm d', then rows); repeat to compare")
    p.add_argument("--class", dest="cls", type=int, help="1-based class index at --order")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="replay the reference tables for one order")
    common(p, margin=False)
    p.add_argument("--oracle", action="store_true", help="also run the Wick-pairing oracle")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("count", help="total RC matrices and class count")
    common(p)
    p.set_defaults(func=cmd_count)
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    if args.threads < 1:
        log.error("--threads must be positive")
        return 2
    try:
        return args.func(args)
    except CheckpointError as exc:
        log.error("checkpoint refused: %s", exc)
        return 2
    except ValueError as exc:
        log.error("%s", exc)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
