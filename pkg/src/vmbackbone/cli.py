"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 unsatisfiable input,
4 timeout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algorithms import (
    Algorithm,
    AlgorithmConfig,
    BackboneTimeoutError,
    UnsatisfiableInputError,
    auto_config,
    compute_backbone,
    parse_chunk,
)
from .bench import load_corpus, run_matrix, write_records_csv
from .cnf import (
    CnfFormula,
    DimacsParseError,
    EmptyClauseError,
    formula_stats,
    parse_dimacs,
    write_dimacs,
)
from .preprocess import simplify_with_backbone
from .propagation import ConflictingDecisionsError, propagate
from .solver import new_session

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_UNSAT = 3
EXIT_TIMEOUT = 4

ALGORITHM_FLAGS = {
    "enum": Algorithm.ENUMERATION,
    "naive": Algorithm.NAIVE,
    "iter": Algorithm.ITERATIVE,
    "all-in": Algorithm.ALL_IN,
    "all-out": Algorithm.ALL_OUT,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vmbackbone",
        description="Backbone computation and analysis for CNF formulas of configurable systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    backbone = sub.add_parser("backbone", help="compute the backbone of a DIMACS CNF file")
    backbone.add_argument("cnf", type=Path)
    backbone.add_argument("--alg", choices=sorted(ALGORITHM_FLAGS) + ["auto"], default="auto")
    backbone.add_argument("--chunk", default="adaptive:10",
                          help="chunk strategy for all-in/all-out: fixed:K, adaptive:K or whole")
    backbone.add_argument("--uc", action="store_true", help="inject confirmed literals as unit clauses")
    backbone.add_argument("--rotatable", action="store_true", help="filter rotatable literals from candidates")
    backbone.add_argument("--timeout", type=float, default=None, metavar="SECS")
    backbone.add_argument("--backend", default=None)
    backbone.add_argument("--stats", action="store_true", help="print run statistics on stderr")

    stats = sub.add_parser("stats", help="print structural statistics of a DIMACS CNF file")
    stats.add_argument("cnf", type=Path)

    simplify = sub.add_parser("simplify", help="simplify a CNF with its backbone")
    simplify.add_argument("cnf", type=Path)
    group = simplify.add_mutually_exclusive_group(required=True)
    group.add_argument("--backbone-file", type=Path,
                       help="file of whitespace-separated backbone literals")
    group.add_argument("--compute", action="store_true", help="compute the backbone first")
    simplify.add_argument("--timeout", type=float, default=None, metavar="SECS")

    prop = sub.add_parser("propagate", help="propagate decisions through a variability formula")
    prop.add_argument("cnf", type=Path)
    prop.add_argument("--decide", type=int, action="append", default=[], metavar="LIT",
                      help="signed decision literal; repeatable")

    enum = sub.add_parser("enumerate", help="enumerate models via blocking clauses")
    enum.add_argument("cnf", type=Path)
    enum.add_argument("--limit", type=int, default=None)

    bench = sub.add_parser("bench", help="run a (formula x config) benchmark matrix")
    bench.add_argument("--corpus", required=True, type=Path,
                       help="directory of *.cnf files or a newline-separated manifest")
    bench.add_argument("--configs", required=True, type=Path,
                       help="JSON list of configurations")
    bench.add_argument("--repeats", type=int, default=3)
    bench.add_argument("--timeout", type=float, default=None)
    bench.add_argument("--parallel", type=int, default=1)
    bench.add_argument("--out", required=True, type=Path)

    serve = sub.add_parser("serve", help="serve the propagation HTTP API")
    serve.add_argument("--port", type=int, default=8134)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--session-ttl", type=float, default=3600.0)

    return parser


def _load_formula(path: Path) -> CnfFormula:
    return parse_dimacs(path.read_text(encoding="utf-8")).formula


def _config_from_args(args, formula: CnfFormula) -> AlgorithmConfig:
    if args.alg == "auto":
        return auto_config(formula_stats(formula))
    return AlgorithmConfig(
        algorithm=ALGORITHM_FLAGS[args.alg],
        chunk=parse_chunk(args.chunk),
        uc_injection=args.uc,
        rotatable_filter=args.rotatable,
    )


def _cmd_backbone(args) -> int:
    formula = _load_formula(args.cnf)
    config = _config_from_args(args, formula)
    report = compute_backbone(formula, config, backend=args.backend, timeout=args.timeout)
    print(" ".join(str(lit) for lit in report.backbone))
    if args.stats:
        print(f"algorithm: {config.config_id()}", file=sys.stderr)
        print(f"sat_calls: {report.sat_calls}", file=sys.stderr)
        print(f"wall_time_seconds: {report.wall_time:.6f}", file=sys.stderr)
        print(f"backbone_size: {len(report.backbone)}", file=sys.stderr)
    return EXIT_OK


def _cmd_stats(args) -> int:
    parsed = parse_dimacs(args.cnf.read_text(encoding="utf-8"))
    stats = formula_stats(parsed.formula)
    print(f"num_vars: {stats.num_vars}")
    print(f"num_clauses: {stats.num_clauses}")
    ratio = "n/a" if stats.clause_var_ratio is None else f"{stats.clause_var_ratio:.4f}"
    print(f"clause_var_ratio: {ratio}")
    median = "n/a" if stats.median_literals_per_clause is None else stats.median_literals_per_clause
    print(f"median_literals_per_clause: {median}")
    print(f"pct_clauses_gt2: {stats.pct_clauses_gt2:.2f}")
    print(f"num_binary_or_unit: {stats.num_binary_or_unit}")
    print(f"duplicate_literals_removed: {parsed.duplicate_literals_removed}")
    print(f"tautologies_dropped: {parsed.tautologies_dropped}")
    return EXIT_OK


def _cmd_simplify(args) -> int:
    formula = _load_formula(args.cnf)
    if args.compute:
        config = auto_config(formula_stats(formula))
        backbone = compute_backbone(formula, config, timeout=args.timeout).backbone
    else:
        tokens = args.backbone_file.read_text(encoding="utf-8").split()
        backbone = [int(tok) for tok in tokens]
    result = simplify_with_backbone(formula, backbone)
    sys.stdout.write(write_dimacs(result.simplified))
    print(
        f"units_added={result.units_added} clauses_removed={result.clauses_removed} "
        f"clauses_shortened={result.clauses_shortened}",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_propagate(args) -> int:
    formula = _load_formula(args.cnf)
    result = propagate(formula, args.decide)
    print("decided: " + " ".join(str(lit) for lit in result.decided))
    print("implied_true: " + " ".join(str(v) for v in sorted(result.implied_true)))
    print("implied_false: " + " ".join(str(v) for v in sorted(result.implied_false)))
    print("free: " + " ".join(str(v) for v in sorted(result.free)))
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    formula = _load_formula(args.cnf)
    session = new_session(formula)
    models, exhausted = session.enumerate_solutions(limit=args.limit)
    for model in models:
        print(" ".join(str(lit) for lit in model))
    print(f"models: {len(models)} exhausted: {str(exhausted).lower()}", file=sys.stderr)
    return EXIT_OK


def _parse_config_file(path: Path) -> list[tuple[str, AlgorithmConfig]]:
    entries = json.loads(path.read_text(encoding="utf-8"))
    configs = []
    for i, entry in enumerate(entries):
        config = AlgorithmConfig(
            algorithm=ALGORITHM_FLAGS[entry["alg"]],
            chunk=parse_chunk(entry.get("chunk", "adaptive:10")),
            uc_injection=bool(entry.get("uc", False)),
            rotatable_filter=bool(entry.get("rotatable", False)),
        )
        configs.append((entry.get("id", f"C{i + 1}"), config))
    return configs


def _cmd_bench(args) -> int:
    corpus = load_corpus(args.corpus)
    configs = _parse_config_file(args.configs)
    records = run_matrix(corpus, configs, repeats=args.repeats,
                         timeout=args.timeout, parallel=args.parallel)
    with args.out.open("w", encoding="utf-8", newline="") as fh:
        write_records_csv(records, fh, repeats=args.repeats)
    print(f"wrote {len(records)} records to {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(session_ttl=args.session_ttl)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


_COMMANDS = {
    "backbone": _cmd_backbone,
    "stats": _cmd_stats,
    "simplify": _cmd_simplify,
    "propagate": _cmd_propagate,
    "enumerate": _cmd_enumerate,
    "bench": _cmd_bench,
    "serve": _cmd_serve,
}


def run_cli(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage problems via exit
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except EmptyClauseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSAT
    except DimacsParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UnsatisfiableInputError, ConflictingDecisionsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSAT
    except BackboneTimeoutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
