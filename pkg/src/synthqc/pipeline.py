"""The full evaluation protocol: per-dataset train/test splits, one
ensemble of datapoints per (split, generator), independent imputation,
metric vectors, classifier accuracy against the real test split, PCA
aggregation, then the corpus-level analyses (optimal-dataset selection,
average absolute differences, correlations with relative accuracy,
stability, confidence-interval widths, winning-classifier matches).

Everything is a pure function of (config, master seed): any cell can be
recomputed in isolation from its derived seed, and a rerun produces a
byte-identical report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from ._seeding import derive_seed
from .generators import GENERATORS, gen_ensemble
from .imputation import ImputerKind, impute
from .metrics import MetricConfig, MetricVector, metric_vector
from .models import (
    CLASSIFIER_ORDER,
    ClassifierKind,
    FitConfig,
    accuracy,
    train_classifier,
)
from .stats import UndefinedCorrelationError, ci_width, pearson_corr
from .tabular import (
    ColumnKind,
    Manifest,
    SplitSpec,
    Table,
    encode_numeric,
    load_csv,
    load_manifest,
    split_train_test,
    standardize_columns,
)
from .upca import UpcaModel, fit_upca, project

QUALITY_METRICS = ("p", "u_pca")
ROLES = ("pca_training", "pca_testing")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DatasetSpec:
    name: str
    path: str
    label: str
    manifest: str | None = None
    role: str = "pca_training"

    def __post_init__(self):
        if self.role not in ROLES:
            raise ConfigError(f"dataset {self.name!r}: role must be one of {ROLES}")


@dataclass(frozen=True)
class ExperimentConfig:
    datasets: tuple[DatasetSpec, ...]
    generators: tuple[str, ...] = ("bootstrap", "independent", "seqcart")
    n_splits: int = 4
    ensemble_size: int = 5
    train_fraction: float = 0.7
    classifiers: tuple[ClassifierKind, ...] = CLASSIFIER_ORDER
    models: FitConfig = field(default_factory=FitConfig)        # shared hyperparameters
    propensity_model: FitConfig = field(default_factory=FitConfig)
    hellinger_bins: int = 20
    gamma: float | None = None
    imputer: ImputerKind = ImputerKind.CART
    master_seed: int = 0

    def __post_init__(self):
        if not self.datasets:
            raise ConfigError("no datasets configured")
        if self.n_splits < 1:
            raise ConfigError("n_splits must be >= 1")
        if self.ensemble_size < 1:
            raise ConfigError("ensemble_size must be >= 1")
        unknown = [g for g in self.generators if g not in GENERATORS]
        if unknown:
            raise ConfigError(f"unknown generators {unknown}; known: {sorted(GENERATORS)}")
        names = [d.name for d in self.datasets]
        if len(set(names)) != len(names):
            raise ConfigError("dataset names must be unique")

    def to_dict(self) -> dict:
        return {
            "datasets": [vars(d).copy() for d in self.datasets],
            "generators": list(self.generators),
            "n_splits": self.n_splits,
            "ensemble_size": self.ensemble_size,
            "train_fraction": self.train_fraction,
            "classifiers": [c.value for c in self.classifiers],
            "models": self.models.to_dict(),
            "propensity_model": self.propensity_model.to_dict(),
            "hellinger_bins": self.hellinger_bins,
            "gamma": self.gamma,
            "imputer": self.imputer.value,
            "master_seed": self.master_seed,
        }


@dataclass
class EnsembleReport:
    dataset: str
    dataset_index: int
    generator: str
    generator_index: int
    split_index: int
    metrics: MetricVector                       # mean of the datapoint vectors
    datapoint_metrics: list[MetricVector]
    synth_accuracy: dict[ClassifierKind, float]  # mean over datapoints
    relative_accuracy: dict[ClassifierKind, float]
    ara: float | None
    u_pca: float | None = None
    datapoint_u_pca: list[float] | None = None

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.dataset_index, self.generator_index, self.split_index)

    def quality(self, by: str) -> float:
        if by == "p":
            return self.metrics.propensity
        if by == "u_pca":
            if self.u_pca is None:
                raise ValueError("u_pca not computed for this ensemble")
            return self.u_pca
        raise ValueError(f"unknown quality metric {by!r}")

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "dataset_index": self.dataset_index,
            "generator": self.generator,
            "generator_index": self.generator_index,
            "split_index": self.split_index,
            "metrics": self.metrics.to_dict(),
            "datapoint_metrics": [m.to_dict() for m in self.datapoint_metrics],
            "synth_accuracy": {k.value: v for k, v in self.synth_accuracy.items()},
            "relative_accuracy": {k.value: v for k, v in self.relative_accuracy.items()},
            "ara": self.ara,
            "u_pca": self.u_pca,
            "datapoint_u_pca": self.datapoint_u_pca,
        }


@dataclass
class DatasetReport:
    name: str
    role: str
    n_rows: int
    n_cols: int
    label: str
    baseline_accuracy: dict[ClassifierKind, float]               # mean over splits
    baseline_per_split: dict[ClassifierKind, list[float]]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "role": self.role,
            "n_rows": self.n_rows,
            "n_cols": self.n_cols,
            "label": self.label,
            "baseline_accuracy": {k.value: v for k, v in self.baseline_accuracy.items()},
            "baseline_per_split": {k.value: v for k, v in self.baseline_per_split.items()},
        }


@dataclass
class ExperimentReport:
    config: dict
    datasets: list[DatasetReport]
    ensembles: list[EnsembleReport]
    upca_model: UpcaModel | None
    errors: list[dict]
    analysis: dict

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "datasets": [d.to_dict() for d in self.datasets],
            "ensembles": [e.to_dict() for e in self.ensembles],
            "upca_model": self.upca_model.to_dict() if self.upca_model else None,
            "errors": self.errors,
            "analysis": self.analysis,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def relative_accuracy(pa_synth: float, pa_real: float) -> float:
    """|PA_synth - PA_real|."""
    for v in (pa_synth, pa_real):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"accuracy {v} outside [0,1]")
    return abs(pa_synth - pa_real)


def winning_classifier(accuracies: dict[ClassifierKind, float]) -> ClassifierKind:
    """Highest accuracy wins; ties go to the earlier classifier in the
    canonical (LR, DT, SVM, RF) order."""
    if not accuracies:
        raise ValueError("no classifier accuracies")
    ordered = [k for k in CLASSIFIER_ORDER if k in accuracies]
    ordered += [k for k in accuracies if k not in ordered]
    return max(ordered, key=lambda k: (accuracies[k], -ordered.index(k)))


def select_optimal(reports: list[EnsembleReport], by: str,
                   scope: str = "per_dataset") -> dict:
    """Argmin of the chosen quality value within each scope group; ties
    break on (generator index, split index)."""
    if not reports:
        raise ValueError("no ensembles to select from")
    if scope == "per_dataset":
        group_key = lambda r: r.dataset_index
    elif scope == "per_dataset_generator":
        group_key = lambda r: (r.dataset_index, r.generator_index)
    else:
        raise ValueError(f"unknown scope {scope!r}")
    winners: dict = {}
    for r in sorted(reports, key=lambda r: (r.generator_index, r.split_index)):
        g = group_key(r)
        if g not in winners or r.quality(by) < winners[g].quality(by):
            winners[g] = r
    return winners


def stability(reports: list[EnsembleReport], by: str) -> dict[str, dict]:
    """Per generator: range of the quality values over each dataset's
    ensembles, then the mean of those ranges across datasets."""
    per_gen: dict[str, dict[str, float]] = {}
    for r in reports:
        per_gen.setdefault(r.generator, {})
    for gen in per_gen:
        per_dataset = {}
        for r in reports:
            if r.generator == gen:
                per_dataset.setdefault(r.dataset, []).append(r.quality(by))
        ranges = {ds: max(vs) - min(vs) for ds, vs in per_dataset.items()}
        per_gen[gen] = {
            "per_dataset": ranges,
            "mean": float(np.mean(list(ranges.values()))) if ranges else 0.0,
        }
    return per_gen


def _analysis_datasets(cfg: ExperimentConfig) -> list[str]:
    # Definitions 1-3 range over the PCA-testing datasets; when the run has
    # none (small experiments), the analyses cover every dataset instead.
    testing = [d.name for d in cfg.datasets if d.role == "pca_testing"]
    return testing or [d.name for d in cfg.datasets]


def corpus_summary(reports: list[EnsembleReport], winners: dict[str, dict],
                   analysis_names: list[str]) -> dict:
    """Per-quality average absolute difference between each winner's metric
    values and the per-dataset minima, plus a range-normalized overall
    average (each metric's difference divided by its corpus-wide range)."""
    from .metrics import METRIC_NAMES

    minima: dict[str, dict[str, float]] = {}
    for r in reports:
        slot = minima.setdefault(r.dataset, {})
        for name in METRIC_NAMES:
            v = getattr(r.metrics, name)
            if name not in slot or v < slot[name]:
                slot[name] = v
    corpus_ranges = {}
    for name in METRIC_NAMES:
        values = [getattr(r.metrics, name) for r in reports]
        corpus_ranges[name] = max(values) - min(values)
    summary: dict = {"minima": minima, "metric_ranges": corpus_ranges, "avg_abs_diff": {}}
    for quality, by_dataset in winners.items():
        diffs = {name: [] for name in METRIC_NAMES}
        for ds in analysis_names:
            if ds not in by_dataset:
                continue
            win = by_dataset[ds]
            for name in METRIC_NAMES:
                diffs[name].append(abs(getattr(win.metrics, name) - minima[ds][name]))
        avg = {name: (float(np.mean(vs)) if vs else None) for name, vs in diffs.items()}
        normalized = [
            avg[name] / corpus_ranges[name]
            for name in METRIC_NAMES
            if avg[name] is not None and corpus_ranges[name] > 0
        ]
        avg["overall_range_normalized"] = float(np.mean(normalized)) if normalized else None
        summary["avg_abs_diff"][quality] = avg
    return summary


def match_counts(reports: list[EnsembleReport], winners: dict[str, dict],
                 real_winners: dict[str, ClassifierKind],
                 analysis_names: list[str]) -> dict:
    """Winning-classifier agreement: per quality metric over the optimal
    ensembles, and per generator over all its ensembles."""
    out: dict = {"per_quality": {}, "per_generator": {}}
    for quality, by_dataset in winners.items():
        m = n = 0
        for ds in analysis_names:
            if ds not in by_dataset or ds not in real_winners:
                continue
            n += 1
            if winning_classifier(by_dataset[ds].synth_accuracy) == real_winners[ds]:
                m += 1
        out["per_quality"][quality] = _fraction(m, n)
    generators = sorted({r.generator for r in reports})
    for gen in generators:
        m = n = 0
        for r in reports:
            if r.generator != gen or r.dataset not in analysis_names:
                continue
            if r.dataset not in real_winners:
                continue
            n += 1
            if winning_classifier(r.synth_accuracy) == real_winners[r.dataset]:
                m += 1
        out["per_generator"][gen] = _fraction(m, n)
    return out


def _fraction(m: int, n: int) -> dict:
    return {
        "matches": m,
        "total": n,
        "display": f"{m}/{n}" if n else "0/0",
        "rate": (m / n) if n else None,
    }


def _corr_or_note(xs: list[float], ys: list[float]) -> dict:
    try:
        r, p = pearson_corr(xs, ys)
        return {"r": r, "p_value": p, "n": len(xs)}
    except (UndefinedCorrelationError, ValueError) as exc:
        return {"r": None, "p_value": None, "n": len(xs), "note": str(exc)}


def quality_ara_correlations(reports: list[EnsembleReport],
                             analysis_names: list[str]) -> dict:
    """Pearson correlation (with p-value) between each quality metric and
    the average relative accuracy, per generator and pooled."""
    out: dict = {}
    in_scope = [r for r in reports if r.dataset in analysis_names and r.ara is not None]
    for quality in QUALITY_METRICS:
        rows = [r for r in in_scope if quality != "u_pca" or r.u_pca is not None]
        per_gen = {}
        for gen in sorted({r.generator for r in rows}):
            sub = [r for r in rows if r.generator == gen]
            per_gen[gen] = _corr_or_note([r.quality(quality) for r in sub],
                                         [r.ara for r in sub])
        out[quality] = {
            "per_generator": per_gen,
            "overall": _corr_or_note([r.quality(quality) for r in rows],
                                     [r.ara for r in rows]),
        }
    return out


def ensemble_ci_widths(reports: list[EnsembleReport], confidence: float = 0.95) -> dict:
    """Average per-ensemble t-interval width of the datapoint quality
    values, keyed by (dataset, generator, quality)."""
    grouped: dict[tuple[str, str], list[EnsembleReport]] = {}
    for r in reports:
        grouped.setdefault((r.dataset, r.generator), []).append(r)
    out: dict = {}
    for (ds, gen), group in sorted(grouped.items()):
        entry = {}
        for quality in QUALITY_METRICS:
            widths = []
            for r in group:
                if quality == "p":
                    values = [m.propensity for m in r.datapoint_metrics]
                else:
                    if r.datapoint_u_pca is None:
                        continue
                    values = r.datapoint_u_pca
                if len(values) >= 2:
                    widths.append(ci_width(values, confidence))
            entry[quality] = float(np.mean(widths)) if widths else None
        out.setdefault(ds, {})[gen] = entry
    return out


# ---------------------------------------------------------------------------
# experiment execution


def _feature_label(table: Table, label: str):
    col = table.column(label)
    if col.kind is not ColumnKind.CATEGORICAL:
        raise ConfigError(f"label column {label!r} must be categorical")
    X, _ = standardize_columns(encode_numeric(table.drop(label)))
    return X, col.values


def _train_accuracies(train: Table, test: Table, label: str,
                      classifiers, models_cfg: FitConfig,
                      seed: int) -> dict[ClassifierKind, float]:
    Xtr, ytr = _feature_label(train, label)
    Xte, yte = _feature_label(test, label)
    out = {}
    for kind in classifiers:
        cfg = replace(models_cfg, kind=kind, seed=derive_seed(seed, "clf", kind.value))
        model = train_classifier(Xtr, ytr, cfg)
        out[kind] = accuracy(model, Xte, yte)
    return out


def _run_cell(real_train: Table, real_test: Table, label: str,
              generator_name: str, cfg: ExperimentConfig, cell_seed: int):
    """One (dataset, generator, split) cell: generate the ensemble, impute,
    score, train and test the classifier set per datapoint."""
    generator = GENERATORS[generator_name]
    datapoints = gen_ensemble(generator, real_train, cfg.ensemble_size,
                              derive_seed(cell_seed, "generate"))
    metric_cfg = MetricConfig(bins=cfg.hellinger_bins, gamma=cfg.gamma,
                              propensity_model=cfg.propensity_model)
    vectors: list[MetricVector] = []
    accuracies: list[dict[ClassifierKind, float]] = []
    Xte, yte = _feature_label(real_test, label)
    for d, synth in enumerate(datapoints):
        synth = impute(synth, cfg.imputer, derive_seed(cell_seed, "impute-synth", d))
        vectors.append(metric_vector(real_train, synth,
                                     metric_cfg.with_seed(derive_seed(cell_seed, "metrics", d))))
        Xtr, ytr = _feature_label(synth, label)
        acc = {}
        for kind in cfg.classifiers:
            clf_cfg = replace(cfg.models, kind=kind,
                              seed=derive_seed(cell_seed, "clf", d, kind.value))
            model = train_classifier(Xtr, ytr, clf_cfg)
            acc[kind] = accuracy(model, Xte, yte)
        accuracies.append(acc)
    mean_acc = {
        kind: float(np.mean([a[kind] for a in accuracies])) for kind in cfg.classifiers
    }
    return vectors, mean_acc


def _cell_task(args):
    key, train, test, label, gen_name, cfg, cell_seed = args
    try:
        vectors, mean_acc = _run_cell(train, test, label, gen_name, cfg, cell_seed)
        return key, vectors, mean_acc, None
    except Exception as exc:  # recorded by the caller, never fatal
        return key, None, None, f"{type(exc).__name__}: {exc}"


def run_experiment(cfg: ExperimentConfig, progress=None, jobs: int = 1) -> ExperimentReport:
    """Execute the whole protocol. Cell failures are recorded in the report
    and skipped rather than aborting the run. ``jobs > 1`` runs cells in a
    process pool; the reduction is keyed by (dataset, generator, split), so
    the report does not depend on scheduling."""
    log = progress or (lambda msg: None)
    dataset_reports: list[DatasetReport] = []
    ensembles: list[EnsembleReport] = []
    errors: list[dict] = []
    seed = cfg.master_seed
    specs = {i: spec for i, spec in enumerate(cfg.datasets)}
    tasks = []

    for i, spec in enumerate(cfg.datasets):
        manifest = load_manifest(spec.manifest) if spec.manifest else None
        table = load_csv(spec.path, manifest)
        table.column(spec.label)  # raises SchemaError when absent
        log(f"dataset {spec.name}: {table.n_rows} rows, {table.n_cols} columns")
        baseline_splits: dict[ClassifierKind, list[float]] = {k: [] for k in cfg.classifiers}
        for r in range(1, cfg.n_splits + 1):
            split_seed = derive_seed(seed, "dataset", i)
            train, test = split_train_test(
                table, SplitSpec(cfg.train_fraction, split_seed, r))
            train = impute(train, cfg.imputer,
                           derive_seed(seed, "dataset", i, "split", r, "impute-train"))
            test = impute(test, cfg.imputer,
                          derive_seed(seed, "dataset", i, "split", r, "impute-test"))
            try:
                base = _train_accuracies(
                    train, test, spec.label, cfg.classifiers, cfg.models,
                    derive_seed(seed, "dataset", i, "split", r, "baseline"))
                for kind, value in base.items():
                    baseline_splits[kind].append(value)
            except Exception as exc:
                errors.append({"dataset": spec.name, "split_index": r,
                               "stage": "baseline",
                               "error": f"{type(exc).__name__}: {exc}"})
            for k, gen_name in enumerate(cfg.generators):
                cell_seed = derive_seed(seed, "dataset", i, "split", r, "generator", k)
                tasks.append(((i, k, r), train, test, spec.label, gen_name, cfg, cell_seed))
        baseline_mean = {k: float(np.mean(v)) for k, v in baseline_splits.items() if v}
        dataset_reports.append(DatasetReport(
            name=spec.name, role=spec.role, n_rows=table.n_rows, n_cols=table.n_cols,
            label=spec.label, baseline_accuracy=baseline_mean,
            baseline_per_split={k: list(v) for k, v in baseline_splits.items()},
        ))

    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_cell_task, tasks))
    else:
        results = []
        for task in tasks:
            (i, k, r) = task[0]
            log(f"  {specs[i].name} split {r} x {task[4]}")
            results.append(_cell_task(task))

    for key, vectors, mean_acc, error in sorted(results, key=lambda t: t[0]):
        i, k, r = key
        spec = specs[i]
        if error is not None:
            errors.append({"dataset": spec.name, "generator": cfg.generators[k],
                           "split_index": r, "error": error})
            continue
        ensembles.append(EnsembleReport(
            dataset=spec.name, dataset_index=i,
            generator=cfg.generators[k], generator_index=k,
            split_index=r,
            metrics=MetricVector.mean(vectors),
            datapoint_metrics=vectors,
            synth_accuracy=mean_acc,
            relative_accuracy={}, ara=float("nan"),
        ))

    base_by_name = {d.name: d.baseline_accuracy for d in dataset_reports}
    for e in ensembles:
        base = base_by_name[e.dataset]
        e.relative_accuracy = {
            kind: relative_accuracy(e.synth_accuracy[kind], base[kind])
            for kind in e.synth_accuracy if kind in base
        }
        e.ara = (float(np.mean(list(e.relative_accuracy.values())))
                 if e.relative_accuracy else None)

    model = None
    training_names = {d.name for d in cfg.datasets if d.role == "pca_training"}
    corpus = [e.metrics for e in ensembles if e.dataset in training_names]
    try:
        model = fit_upca(corpus)
    except Exception as exc:
        errors.append({"stage": "fit_upca", "error": f"{type(exc).__name__}: {exc}"})
    if model is not None:
        for e in ensembles:
            e.u_pca = project(model, e.metrics)
            e.datapoint_u_pca = [project(model, m) for m in e.datapoint_metrics]

    analysis = _assemble_analysis(cfg, dataset_reports, ensembles, model)
    return ExperimentReport(
        config=cfg.to_dict(),
        datasets=dataset_reports,
        ensembles=ensembles,
        upca_model=model,
        errors=errors,
        analysis=analysis,
    )


def _assemble_analysis(cfg: ExperimentConfig, dataset_reports, ensembles,
                       model) -> dict:
    if not ensembles:
        return {"note": "no successful ensembles"}
    names = _analysis_datasets(cfg)
    qualities = ["p"] + (["u_pca"] if model is not None else [])
    winners_by_quality = {}
    per_gen_winners = {}
    for q in qualities:
        by_index = select_optimal(ensembles, q, "per_dataset")
        winners_by_quality[q] = {r.dataset: r for r in by_index.values()}
        per_gen = select_optimal(ensembles, q, "per_dataset_generator")
        per_gen_winners[q] = {f"{r.dataset}/{r.generator}": r.key for r in per_gen.values()}
    real_winners = {
        d.name: winning_classifier(d.baseline_accuracy) for d in dataset_reports
    }
    summary = corpus_summary(ensembles, winners_by_quality, names)
    return {
        "analysis_datasets": names,
        "optimal": {
            q: {ds: list(r.key) for ds, r in by.items()}
            for q, by in winners_by_quality.items()
        },
        "per_generator_winners": {
            q: {ds: list(key) for ds, key in by.items()}
            for q, by in per_gen_winners.items()
        },
        "real_winning_classifier": {k: v.value for k, v in real_winners.items()},
        "avg_abs_diff": summary["avg_abs_diff"],
        "minima": summary["minima"],
        "metric_ranges": summary["metric_ranges"],
        "correlations": quality_ara_correlations(ensembles, names),
        "winner_matches": match_counts(ensembles, winners_by_quality, real_winners, names),
        "stability": {q: stability(ensembles, q) for q in qualities},
        "ci_widths": ensemble_ci_widths(ensembles),
    }


# ---------------------------------------------------------------------------
# config files and CSV emission


_KIND_BY_NAME = {k.value: k for k in ClassifierKind}


def _fit_config_from(d: dict, base: FitConfig | None = None) -> FitConfig:
    cfg = base or FitConfig()
    known = set(FitConfig.__dataclass_fields__)
    unknown = set(d) - known
    if unknown:
        raise ConfigError(f"unknown model option(s): {sorted(unknown)}")
    fields = dict(d)
    if "kind" in fields:
        name = str(fields["kind"]).lower()
        if name not in _KIND_BY_NAME:
            raise ConfigError(f"unknown classifier kind {name!r}")
        fields["kind"] = _KIND_BY_NAME[name]
    return replace(cfg, **fields)


def _config_from_dict(raw: dict) -> ExperimentConfig:
    datasets = tuple(
        DatasetSpec(
            name=d["name"], path=d["path"], label=d["label"],
            manifest=d.get("manifest"), role=d.get("role", "pca_training"),
        )
        for d in raw.get("datasets", [])
    )
    classifiers = tuple(
        _KIND_BY_NAME[str(c).lower()] for c in raw.get("classifiers", ["lr", "dt", "svm", "rf"])
    )
    models = _fit_config_from(raw.get("models", {}))
    propensity_raw = dict(raw.get("propensity", {}))
    propensity_raw.setdefault("kind", ClassifierKind.GRADIENT_BOOSTED_TREES.value)
    return ExperimentConfig(
        datasets=datasets,
        generators=tuple(raw.get("generators", ("bootstrap", "independent", "seqcart"))),
        n_splits=int(raw.get("n_splits", 4)),
        ensemble_size=int(raw.get("ensemble_size", 5)),
        train_fraction=float(raw.get("train_fraction", 0.7)),
        classifiers=classifiers,
        models=models,
        propensity_model=_fit_config_from(propensity_raw),
        hellinger_bins=int(raw.get("hellinger_bins", 20)),
        gamma=(None if raw.get("gamma") in (None, "") else float(raw["gamma"])),
        imputer=ImputerKind(raw.get("imputer", "cart")),
        master_seed=int(raw.get("master_seed", 0)),
    )


def _ini_to_dict(path) -> dict:
    import configparser

    parser = configparser.ConfigParser()
    parser.optionxform = str
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    raw: dict = {}
    if parser.has_section("experiment"):
        for key, value in parser.items("experiment"):
            if key in ("generators", "classifiers"):
                raw[key] = [v for v in value.split("|") if v]
            else:
                raw[key] = value
    for section, target in (("models", "models"), ("propensity", "propensity")):
        if parser.has_section(section):
            opts = {}
            for key, value in parser.items(section):
                if key in ("kind", "rf_feature_fraction"):
                    opts[key] = value
                elif key == "rf_bootstrap":
                    opts[key] = parser.getboolean(section, key)
                elif key in ("learning_rate", "l2_penalty"):
                    opts[key] = float(value)
                elif key == "max_depth":
                    opts[key] = None if value.lower() == "none" else int(value)
                else:
                    opts[key] = int(value)
            raw[target] = opts
    datasets = []
    for section in parser.sections():
        if section.startswith("dataset."):
            d = {"name": section.removeprefix("dataset.")}
            d.update(dict(parser.items(section)))
            datasets.append(d)
    raw["datasets"] = datasets
    return raw


def load_experiment_config(path) -> ExperimentConfig:
    """Read an experiment config, JSON (*.json) or INI (anything else).

    The INI flavour uses an [experiment] section for scalar options
    (pipe-separated lists), [models] / [propensity] sections for
    hyperparameters, and one [dataset.<name>] section per dataset.
    """
    text_path = str(path)
    if text_path.endswith(".json"):
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    else:
        raw = _ini_to_dict(path)
    return _config_from_dict(raw)


def _write_csv_rows(path, header: list[str], rows: list[list]) -> None:
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def write_report_csvs(report: ExperimentReport, out_dir) -> list[str]:
    """Emit the per-table CSV views of a report next to report.json:
    average absolute differences, correlations, winner matches, stability,
    confidence-interval widths, and the flat per-ensemble table."""
    import os

    from .metrics import METRIC_NAMES

    os.makedirs(out_dir, exist_ok=True)
    written = []
    analysis = report.analysis

    def emit(name, header, rows):
        path = os.path.join(out_dir, name)
        _write_csv_rows(path, header, rows)
        written.append(path)

    diff = analysis.get("avg_abs_diff", {})
    qualities = sorted(diff)
    rows = []
    for metric in list(METRIC_NAMES) + ["overall_range_normalized"]:
        rows.append([metric] + [_cell(diff.get(q, {}).get(metric)) for q in qualities])
    emit("t2_avg_abs_diff.csv", ["metric"] + [f"avg_abs_diff_{q}" for q in qualities], rows)

    rows = []
    for quality, block in sorted(analysis.get("correlations", {}).items()):
        for gen, c in sorted(block.get("per_generator", {}).items()):
            rows.append([quality, gen, _cell(c["r"]), _cell(c["p_value"]), c["n"]])
        c = block.get("overall", {})
        rows.append([quality, "overall", _cell(c.get("r")), _cell(c.get("p_value")),
                     c.get("n")])
    emit("t3_t4_correlations.csv", ["quality", "scope", "r", "p_value", "n"], rows)

    rows = []
    matches = analysis.get("winner_matches", {})
    for quality, frac in sorted(matches.get("per_quality", {}).items()):
        rows.append(["quality", quality, frac["matches"], frac["total"], frac["display"]])
    for gen, frac in sorted(matches.get("per_generator", {}).items()):
        rows.append(["generator", gen, frac["matches"], frac["total"], frac["display"]])
    emit("t5_t8_matches.csv", ["scope", "key", "matches", "total", "display"], rows)

    rows = []
    for quality, block in sorted(analysis.get("stability", {}).items()):
        for gen, entry in sorted(block.items()):
            rows.append([quality, gen, _cell(entry["mean"])])
    emit("t6_stability.csv", ["quality", "generator", "mean_stability"], rows)

    rows = []
    for ds, by_gen in sorted(analysis.get("ci_widths", {}).items()):
        for gen, entry in sorted(by_gen.items()):
            for quality in QUALITY_METRICS:
                rows.append([ds, gen, quality, _cell(entry.get(quality))])
    emit("ci_widths.csv", ["dataset", "generator", "quality", "avg_width"], rows)

    clf = [k.value for k in CLASSIFIER_ORDER]
    header = (["dataset", "generator", "split_index"] + list(METRIC_NAMES) + ["u_pca"]
              + [f"pa_{c}" for c in clf] + [f"ra_{c}" for c in clf] + ["ara"])
    rows = []
    for e in report.ensembles:
        row = [e.dataset, e.generator, e.split_index]
        row += [_cell(getattr(e.metrics, m)) for m in METRIC_NAMES]
        row += [_cell(e.u_pca)]
        row += [_cell(e.synth_accuracy.get(k)) for k in CLASSIFIER_ORDER]
        row += [_cell(e.relative_accuracy.get(k)) for k in CLASSIFIER_ORDER]
        row += [_cell(e.ara)]
        rows.append(row)
    emit("ensembles.csv", header, rows)
    return written


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value
