"""Command-line front end: ``ncsec gen-graph|analyze|experiment|version``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .experiments import ExperimentConfig, ExperimentError, run_experiment
from .galois import FieldError, make_field
from .netgraph import GraphError, butterfly, complete_dag, network_from_json
from .rlnc import CodingError, default_placement, feasible_rate, sample_code
from .seclin import network_report

EXIT_SECURE = 0
EXIT_ERROR = 1
EXIT_EXPOSED = 2


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _n_at_least(lo: int):
    def parse(text: str) -> int:
        v = int(text)
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be at least {lo}, got {v}")
        return v

    return parse


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("NCSEC_SEED")
    return int(env) if env else 0


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _graph_source(parser, args):
    if args.graph is not None:
        return network_from_json(Path(args.graph).read_text())
    if args.complete_dag is not None:
        return complete_dag(args.complete_dag, _seed(args))
    if args.butterfly:
        return butterfly()
    parser.error("one of --graph, --complete-dag, --butterfly is required")


def cmd_gen_graph(args, parser) -> int:
    net = butterfly() if args.butterfly else complete_dag(args.complete_dag, _seed(args))
    _write(args.output, net.to_json())
    return 0


def cmd_analyze(args, parser) -> int:
    seed = _seed(args)
    net = _graph_source(parser, args)
    ctx = make_field(args.m, args.poly)
    if args.fixture == "fig1":
        from .fixtures import fig1_code

        code = fig1_code()
        if net != code.network or args.K != code.K or ctx != code.field:
            parser.error("--fixture fig1 needs the butterfly graph, K=2 and m=1")
    else:
        placement = default_placement(net, args.K)
        cut = feasible_rate(net, placement)
        if args.K > cut or (args.strict and args.K >= cut):
            rel = "<" if args.strict else "<="
            print(f"error: K={args.K} infeasible: requires K {rel} min-cut={cut}", file=sys.stderr)
            return EXIT_ERROR
        code = sample_code(net, args.K, ctx, seed, strict=args.strict, placement=placement)
    report = network_report(code)
    meta = {"tool": "ncsec", "version": __version__,
            "config": {"K": args.K, "field": ctx.descriptor, "seed": seed,
                       "fixture": args.fixture, "strict": args.strict,
                       "graph": net.to_dict()}}
    if args.format == "csv":
        header = f"# ncsec {__version__} seed={seed} config={json.dumps(meta['config'], sort_keys=True)}\n"
        _write(args.output, report.to_csv(header))
    else:
        _write(args.output, report.to_json(meta))
    if report.min_delta_s is not None:
        print(f"min Delta_S = {report.min_delta_s}", file=sys.stderr)
    return EXIT_SECURE if report.secure else EXIT_EXPOSED


def _config_from_args(args, parser) -> ExperimentConfig:
    if args.config:
        data = json.loads(Path(args.config).read_text())
    else:
        if not args.claim or not args.m:
            parser.error("experiment needs --config, or --claim and --m")
        data = {"claim": args.claim, "m": args.m}
    overrides = {
        "K": args.K, "n": args.n, "delta_in": args.delta_in, "terms": args.terms,
        "trials": args.trials, "threshold": args.threshold, "jobs": args.jobs,
    }
    if args.claim and args.config:
        overrides["claim"] = args.claim
    if args.m and args.config:
        overrides["m"] = args.m
    if args.graph:
        overrides["graph"] = json.loads(Path(args.graph).read_text())
    if args.exhaustive:
        overrides["mode"] = "exact"
    elif args.sampled:
        overrides["mode"] = "sampled"
    data.update({k: v for k, v in overrides.items() if v is not None})
    if args.seed is not None or "seed" not in data:
        data["seed"] = _seed(args)
    return ExperimentConfig.from_dict(data)


def cmd_experiment(args, parser) -> int:
    config = _config_from_args(args, parser)
    result = run_experiment(config)
    prefix = args.out or f"ncsec-{config.claim}"
    Path(prefix + ".json").write_text(result.to_json())
    Path(prefix + ".csv").write_text(result.to_csv())
    for name, ok in result.verdicts.items():
        print(f"{'PASS' if ok else 'FAIL'} {config.claim} {name}")
    return 0 if result.passed else EXIT_ERROR


def cmd_version(args, parser) -> int:
    print(f"ncsec {__version__}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncsec", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-graph", help="write a graph file")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--complete-dag", type=_n_at_least(2), metavar="N")
    src.add_argument("--butterfly", action="store_true")
    g.add_argument("--seed", type=int)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen_graph)

    a = sub.add_parser("analyze", help="sample one code and report Delta_S per relay")
    src = a.add_mutually_exclusive_group()
    src.add_argument("--graph", metavar="FILE")
    src.add_argument("--complete-dag", type=_n_at_least(2), metavar="N")
    src.add_argument("--butterfly", action="store_true")
    a.add_argument("-K", "--K", type=int, required=True, dest="K")
    a.add_argument("--m", type=int, default=8)
    a.add_argument("--poly", type=lambda s: int(s, 0))
    a.add_argument("--seed", type=int)
    a.add_argument("--fixture", choices=["fig1"])
    a.add_argument("--strict", action="store_true", help="require K < min-cut")
    a.add_argument("--format", choices=["json", "csv"], default="json")
    a.add_argument("-o", "--output")
    a.set_defaults(func=cmd_analyze)

    e = sub.add_parser("experiment", help="run a claim suite, write JSON and CSV")
    e.add_argument("--config", metavar="FILE")
    e.add_argument("--claim")
    e.add_argument("--m", type=_int_list)
    e.add_argument("--K", type=_int_list, dest="K")
    e.add_argument("--n", type=_int_list)
    e.add_argument("--graph", metavar="FILE")
    e.add_argument("--delta-in", type=int)
    e.add_argument("--terms", type=int)
    e.add_argument("--trials", type=int)
    e.add_argument("--seed", type=int)
    e.add_argument("--threshold", type=float)
    e.add_argument("--jobs", type=int)
    mode = e.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--sampled", action="store_true")
    e.add_argument("--out", metavar="PREFIX", help="output prefix (default ncsec-<claim>)")
    e.set_defaults(func=cmd_experiment)

    v = sub.add_parser("version")
    v.set_defaults(func=cmd_version)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (GraphError, FieldError, CodingError, ExperimentError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
