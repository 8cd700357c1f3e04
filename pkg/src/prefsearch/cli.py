"""Command-line entry point: catalog generation, scoring, simulation, serving.

A JSON config file (``--config``) may pre-set any flag; explicit flags win.
Exit codes: 0 success, 1 runtime failure (message on stderr), 2 usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .catalog import (Catalog, generate_random_catalog, load_catalog, parse_attrs_spec,
                      parse_catalog_spec, save_catalog, CatalogSpec)
from .dominance import build_dominance_index
from .preferences import model_from_json
from .simulate import (STRATEGY_ALIASES, STRATEGY_COLUMNS, SimConfig, aggregate_to_csv,
                       curves_to_csv, run_strategy_sweep, runs_to_csv)
from .suggest import SuggestionConfig, probabilistic_scores, scores_to_csv, select_suggestions
from .service import CritiquingService, ServiceConfig, serve_forever

_STRATEGY_CHOICES = ("counting", "prob1", "prob2", "prob", "random", "extremes", "diversity")


def _common_flags(suppress: bool) -> argparse.ArgumentParser:
    # Shared flags attach to the top level and to every subcommand; the
    # subcommand copies suppress their defaults so they never clobber a
    # value parsed before the subcommand name.
    default = argparse.SUPPRESS if suppress else None
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=default, help="JSON file pre-setting any flag")
    common.add_argument("--seed", type=int, default=default, help="random seed (default 0)")
    return common


def build_parser() -> argparse.ArgumentParser:
    top = _common_flags(suppress=False)
    shared = _common_flags(suppress=True)
    parser = argparse.ArgumentParser(prog="prefsearch", parents=[top],
                                     description="Example-critiquing preference search tools")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-catalog", parents=[shared], help="write a random catalog")
    gen.add_argument("--n", type=int, default=None, help="number of options")
    gen.add_argument("--attrs", default=None, help="attribute spec, e.g. 9int or 5int+2qual+2ord")
    gen.add_argument("--out", default=None, help="output path (.json or .csv)")

    sug = sub.add_parser("suggest", parents=[shared], help="score a catalog and pick a suggestion set")
    sug.add_argument("--catalog", default=None, help="catalog file")
    sug.add_argument("--model", default=None, help="preference model JSON file")
    sug.add_argument("--strategy", choices=_STRATEGY_CHOICES, default=None)
    sug.add_argument("--criterion", choices=("pareto", "utility"), default=None)
    sug.add_argument("--set", dest="set_size", type=int, default=None, help="suggestion set size")
    sug.add_argument("--out", default=None, help="score CSV output path")

    sim = sub.add_parser("simulate", parents=[shared], help="run synthetic-user experiments")
    sim.add_argument("--catalog", default=None, help="fixed catalog file")
    sim.add_argument("--catalog-spec", default=None, help="random catalog spec, e.g. rand-50x9int")
    sim.add_argument("--m", type=int, default=None, help="hidden preference count")
    sim.add_argument("--runs", type=int, default=None)
    sim.add_argument("--strategy", default=None,
                     help="one of %s or 'all'" % (", ".join(_STRATEGY_CHOICES),))
    sim.add_argument("--candidates", type=int, default=None, help="candidates shown per cycle")
    sim.add_argument("--suggestions", type=int, default=None, help="suggestions shown per cycle")
    sim.add_argument("--out-dir", default=None, help="directory for result CSVs")

    srv = sub.add_parser("serve", parents=[shared], help="run the critiquing HTTP service")
    srv.add_argument("--port", type=int, default=None)
    srv.add_argument("--host", default=None)
    srv.add_argument("--data-dir", default=None, help="event-log and catalog directory")
    srv.add_argument("--catalog", default=None, help="catalog file to preload")
    srv.add_argument("--criterion", choices=("pareto", "utility"), default=None)
    return parser


_DEFAULTS = {
    "seed": 0,
    "n": 50,
    "attrs": "9int",
    "out": None,
    "strategy": "prob2",
    "criterion": "pareto",
    "set_size": 1,
    "m": 6,
    "runs": 100,
    "candidates": 0,
    "suggestions": 5,
    "out_dir": "sim-results",
    "port": 8000,
    "host": "127.0.0.1",
    "data_dir": "service-data",
}


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset flags from the config file, then from built-in defaults."""
    file_conf = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as f:
            file_conf = json.load(f)

    def fallback(key, default):
        if getattr(args, key, None) is None:
            setattr(args, key, file_conf.get(key.replace("_", "-"), file_conf.get(key, default)))

    for key in list(vars(args)):
        fallback(key, None)
    for key, default in _DEFAULTS.items():
        fallback(key, default)
    return args


def _cmd_gen_catalog(args) -> int:
    spec = CatalogSpec(n=args.n, attributes=parse_attrs_spec(args.attrs))
    catalog = generate_random_catalog(spec, args.seed)
    out = args.out or f"catalog-{args.n}x{args.attrs}.json"
    save_catalog(catalog, out)
    print(f"wrote {catalog.n} options x {catalog.k} attributes to {out}")
    return 0


def _load_model(path: str, catalog: Catalog):
    with open(path, encoding="utf-8") as f:
        model = model_from_json(json.load(f))
    model.require_nonempty()
    model.validate(catalog)
    return model


def _cmd_suggest(args) -> int:
    if not args.catalog or not args.model:
        raise SystemExit("suggest needs --catalog and --model")
    catalog = load_catalog(args.catalog)
    model = _load_model(args.model, catalog)
    strategy = STRATEGY_ALIASES[args.strategy]
    config = SuggestionConfig(strategy=strategy, criterion=args.criterion,
                              set_size=args.set_size, seed=args.seed)
    index = build_dominance_index(model, catalog, args.criterion)
    picks = select_suggestions(catalog, model, index, config)
    print("suggestions:", " ".join(o.id for o in picks) or "(none)")
    if args.out:
        try:
            scores = probabilistic_scores(index, catalog, model, config)
        except Exception as exc:
            print(f"note: no probabilistic scores ({exc})", file=sys.stderr)
            scores = []
        if scores:
            with open(args.out, "w", encoding="utf-8") as f:
                f.write(scores_to_csv(scores, catalog))
            print(f"scores written to {args.out}")
    return 0


def _cmd_simulate(args) -> int:
    catalog = None
    spec = None
    if args.catalog:
        catalog = load_catalog(args.catalog)
    elif args.catalog_spec:
        spec = parse_catalog_spec(args.catalog_spec)
    else:
        raise SystemExit("simulate needs --catalog or --catalog-spec")
    config = SimConfig(m=args.m, runs=args.runs, seed=args.seed,
                       display_candidates=args.candidates,
                       display_suggestions=args.suggestions,
                       catalog_spec=spec)
    names = list(STRATEGY_COLUMNS) if args.strategy == "all" else [args.strategy]
    results = run_strategy_sweep(config, names, catalog)
    os.makedirs(args.out_dir, exist_ok=True)
    label = args.catalog_spec or os.path.basename(args.catalog or "catalog")
    paths = {
        "runs.csv": runs_to_csv(results),
        "aggregate.csv": aggregate_to_csv({label: results}),
        "curves.csv": curves_to_csv(results),
    }
    for name, text in paths.items():
        with open(os.path.join(args.out_dir, name), "w", encoding="utf-8") as f:
            f.write(text)
    for name, result in results.items():
        print(f"{name}: mean fraction discovered = {result.mean_fraction_discovered:.3f}")
    print(f"results written to {args.out_dir}/")
    return 0


def _cmd_serve(args) -> int:  # pragma: no cover - interactive
    service = CritiquingService(data_dir=args.data_dir,
                                config=ServiceConfig(criterion=args.criterion))
    if args.catalog:
        catalog = load_catalog(args.catalog)
        from .catalog import catalog_to_json
        cid = os.path.splitext(os.path.basename(args.catalog))[0]
        service.add_catalog(catalog_to_json(catalog), catalog_id=cid)
        print(f"loaded catalog {cid!r} ({catalog.n} options)")
    serve_forever(service, args.host, args.port)
    return 0


def run_command(argv: list[str]) -> int:
    """Parse and execute one invocation; returns the exit status."""
    parser = build_parser()
    args = _resolve(parser.parse_args(argv))
    commands = {
        "gen-catalog": _cmd_gen_catalog,
        "suggest": _cmd_suggest,
        "simulate": _cmd_simulate,
        "serve": _cmd_serve,
    }
    try:
        return commands[args.command](args)
    except SystemExit:
        raise
    except BrokenPipeError:
        return 1
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
