"""Command-line entry point.

Subcommands: impute, impute-compare, generate, evaluate, fit-upca, score,
experiment. Structured outputs are JSON; tabular outputs are CSV with a
``<name>.meta.json`` sidecar. Every output embeds the fully resolved
configuration (defaults, overrides and seeds), so re-running with the
recorded settings reproduces it byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from ._seeding import derive_seed
from .generators import GENERATORS, gen_sequential_cart
from .imputation import ImputerKind, count_out_of_range, impute
from .metrics import MetricConfig, MetricVector, hellinger_overall, metric_vector, propensity
from .models import ClassifierKind, FitConfig
from .pipeline import load_experiment_config, run_experiment, write_report_csvs
from .tabular import Manifest, load_csv, load_manifest, write_csv
from .upca import UpcaModel, fit_upca, project


def _dump_json(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _sidecar(csv_path, config: dict) -> None:
    _dump_json(str(csv_path) + ".meta.json", {"config": config})


def _resolved(args, **extra) -> dict:
    config = {k: v for k, v in vars(args).items() if k != "func"}
    config.update(extra)
    config["version"] = __version__
    return config


def _load_table(path, manifest_path):
    manifest = load_manifest(manifest_path) if manifest_path else None
    return load_csv(path, manifest)


def _cmd_impute(args) -> int:
    table = _load_table(args.input, args.manifest)
    warnings: list[str] = []
    out = impute(table, ImputerKind(args.method), args.seed, warnings)
    write_csv(out, args.output)
    _sidecar(args.output, _resolved(args, warnings=warnings))
    return 0


def _cmd_impute_compare(args) -> int:
    import csv as _csv

    real = _load_table(args.input, args.manifest)
    synth_base = _load_table(args.synth, args.manifest) if args.synth else None
    rows = []
    for method in (ImputerKind.SUBSTITUTION, ImputerKind.REGRESSION, ImputerKind.CART):
        for s in range(args.seeds):
            real_imp = impute(real, method, derive_seed(args.seed, method.value, s, "real"))
            if synth_base is None:
                synth = gen_sequential_cart(real, real.n_rows,
                                            derive_seed(args.seed, s, "generate"))
            else:
                synth = synth_base
            synth_imp = impute(synth, method, derive_seed(args.seed, method.value, s, "synth"))
            row = {
                "method": method.value,
                "seed": s,
                "out_of_range": count_out_of_range(real_imp, synth_imp),
                "hellinger": hellinger_overall(real_imp, synth_imp, args.bins),
            }
            if args.propensity != "none":
                kind = (ClassifierKind.LOGISTIC if args.propensity == "lr"
                        else ClassifierKind.GRADIENT_BOOSTED_TREES)
                row["propensity"] = propensity(
                    real_imp, synth_imp, FitConfig(kind=kind),
                    derive_seed(args.seed, method.value, s, "propensity"))
            rows.append(row)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = _csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    _sidecar(args.out, _resolved(args))
    return 0


def _cmd_generate(args) -> int:
    train = _load_table(args.input, args.manifest)
    n = args.n if args.n is not None else train.n_rows
    out = GENERATORS[args.method](train, n, args.seed)
    write_csv(out, args.output)
    _sidecar(args.output, _resolved(args, n=n))
    return 0


def _metric_config(args) -> MetricConfig:
    propensity_model = FitConfig(
        kind=(ClassifierKind.LOGISTIC if args.propensity == "lr"
              else ClassifierKind.GRADIENT_BOOSTED_TREES))
    return MetricConfig(bins=args.bins, seed=args.seed, gamma=args.gamma,
                        propensity_model=propensity_model)


def _cmd_evaluate(args) -> int:
    real = _load_table(args.real, args.manifest)
    synth = _load_table(args.synth, args.manifest)
    if args.imputer != "none":
        kind = ImputerKind(args.imputer)
        real = impute(real, kind, derive_seed(args.seed, "impute-real"))
        synth = impute(synth, kind, derive_seed(args.seed, "impute-synth"))
    config = _metric_config(args)
    vector = metric_vector(real, synth, config)
    _dump_json(args.out, {
        "metrics": vector.to_dict(),
        "config": _resolved(args, propensity_model=config.propensity_model.to_dict()),
    })
    return 0


def _read_metric_line(obj: dict) -> MetricVector:
    if "metrics" in obj:
        obj = obj["metrics"]
    return MetricVector.from_dict(obj)


def _cmd_fit_upca(args) -> int:
    corpus = []
    with open(args.corpus, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                corpus.append(_read_metric_line(json.loads(line)))
    model = fit_upca(corpus)
    payload = model.to_dict()
    payload["config"] = _resolved(args)
    _dump_json(args.out, payload)
    return 0


def _cmd_score(args) -> int:
    model = UpcaModel.load(args.model)
    with open(args.metrics, encoding="utf-8") as fh:
        vector = _read_metric_line(json.load(fh))
    print(project(model, vector))
    return 0


def _cmd_experiment(args) -> int:
    cfg = load_experiment_config(args.config)
    progress = (lambda msg: print(msg, file=sys.stderr)) if args.verbose else None
    report = run_experiment(cfg, progress=progress, jobs=args.jobs)
    import os

    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
    write_report_csvs(report, args.out)
    if report.errors:
        print(json.dumps({"failed_cells": report.errors}, sort_keys=True), file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="synthqc",
        description="Utility scoring for synthetic tabular data.",
    )
    parser.add_argument("--version", action="version", version=f"synthqc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("impute", help="fill missing cells (si | ri | cart)")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--method", choices=["si", "ri", "cart"], default="cart")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--manifest")
    p.set_defaults(func=_cmd_impute)

    p = sub.add_parser("impute-compare",
                       help="compare the three imputers: out-of-range columns, "
                            "Hellinger and propensity per (method, seed)")
    p.add_argument("input")
    p.add_argument("--synth", help="synthetic CSV; omitted: sequential-CART per seed")
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--propensity", choices=["gbt", "lr", "none"], default="gbt")
    p.add_argument("--manifest")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_impute_compare)

    p = sub.add_parser("generate", help="generate a synthetic table")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--method", choices=sorted(GENERATORS), default="seqcart")
    p.add_argument("--n", type=int, default=None, help="rows (default: as input)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--manifest")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("evaluate", help="compute the four utility metrics for a pair")
    p.add_argument("real")
    p.add_argument("synth")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--propensity", choices=["gbt", "lr"], default="gbt")
    p.add_argument("--imputer", choices=["si", "ri", "cart", "none"], default="cart")
    p.add_argument("--manifest")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("fit-upca", help="fit the PCA aggregator on a JSONL corpus")
    p.add_argument("corpus")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_fit_upca)

    p = sub.add_parser("score", help="project a metrics JSON through a fitted model")
    p.add_argument("metrics")
    p.add_argument("--model", required=True)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("experiment", help="run the full evaluation protocol")
    p.add_argument("--config", required=True, help="JSON or INI experiment config")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=_cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
