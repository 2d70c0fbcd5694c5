"""Command line entry point: generate, persistence, classify, evaluate.

Options resolve with flag > config-file > default precedence.  The config
file is a flat JSON object whose keys are the long flag names with
underscores.  TDABC_OUT_DIR sets where outputs land when --out is absent.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import datasets as ds
from .baselines import KnnConfig, knn_predict_all
from .classifier import AssociationTable, classify_all
from .errors import TdabcError, UnknownDataset
from .evaluation import (
    EvaluationReport,
    FoldPlan,
    KnnSpec,
    TdabcSpec,
    default_classifiers,
    run_experiment,
    write_ramp_csv,
)
from .persistence import boundary_reduce, write_diagram_csv, write_diagram_json
from .rips import RipsConfig, build_rips, pairwise_distances
from .selection import SelectionPolicy

_DEFAULTS = {
    "out": None,
    "seed": 0,
    "label_column": "label",
    "max_dim": 3,
    "max_edge": None,
    "metric": "euclidean",
    "budget": 500_000,
    "selector": "max",
    "epsilon_mode": "death",
    "recovery": "sublevel",
    "baseline": None,
    "k": 5,
    "folds": 10,
    "repeats": 5,
    "classifiers": "tdabc-m,tdabc-r,tdabc-a,knn,wknn",
    "test_fraction": 0.2,
    "test_indices": None,
    "step": None,
    "jobs": 1,
}

GENERATORS = ("circles", "moons", "swissroll", "normal", "sphere", "ramp")
BUNDLED = ("iris", "wine", "cancer")


def _merge_options(args: argparse.Namespace) -> dict:
    file_conf = {}
    if getattr(args, "config", None):
        file_conf = json.loads(Path(args.config).read_text())
        if not isinstance(file_conf, dict):
            raise TdabcError("config file must hold a JSON object")
    merged = {}
    for key, default in _DEFAULTS.items():
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            merged[key] = flag_value
        elif key in file_conf:
            merged[key] = file_conf[key]
        else:
            merged[key] = default
    return merged


def _out_dir(opts: dict) -> Path:
    out = opts["out"] or os.environ.get("TDABC_OUT_DIR") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _rips_config(opts: dict) -> RipsConfig:
    max_edge = opts["max_edge"]
    if isinstance(max_edge, str):
        max_edge = math.inf if max_edge == "inf" else float(max_edge)
    return RipsConfig(
        max_dim=int(opts["max_dim"]),
        max_edge=max_edge,
        metric=opts["metric"],
        budget=int(opts["budget"]),
    )


def _resolve_dataset(name: str, opts: dict) -> ds.LabeledDataset:
    seed = int(opts["seed"])
    if name == "circles":
        return ds.make_circles(seed=seed)
    if name == "moons":
        return ds.make_moons(seed=seed)
    if name == "swissroll":
        return ds.make_swissroll(seed=seed)
    if name == "normal":
        return ds.make_gaussian_classes(seed=seed)
    if name == "sphere":
        return ds.make_sphere(seed=seed)
    if name == "ramp":
        step = opts["step"]
        if step is None:
            raise TdabcError("dataset 'ramp' needs --step between 1 and 16")
        return ds.make_imbalance_ramp(int(step), seed=seed)
    if name in BUNDLED:
        data = ds.load_bundled(name)
        if name in ds.LOG_SCALED:
            data = ds.log_shift(data)
        return data
    path = Path(name)
    if path.exists():
        return ds.load_csv(path, label_column=opts["label_column"])
    raise UnknownDataset(
        f"{name!r} is neither a known dataset ({', '.join(GENERATORS + BUNDLED)}) nor a file"
    )


def _cmd_generate(args: argparse.Namespace) -> int:
    opts = _merge_options(args)
    data = _resolve_dataset(args.dataset, opts)
    out = _out_dir(opts)
    csv_path = out / f"{data.name}.csv"
    ds.save_csv(data, csv_path)
    (out / f"{data.name}.spec.json").write_text(
        json.dumps(data.spec, indent=2, sort_keys=True) + "\n"
    )
    print(f"wrote {csv_path} ({len(data)} points, {data.n_classes} classes)")
    return 0


def _cmd_persistence(args: argparse.Namespace) -> int:
    opts = _merge_options(args)
    data = _resolve_dataset(args.dataset, opts)
    dist = pairwise_distances(data.points, opts["metric"])
    complex_ = build_rips(dist, _rips_config(opts))
    diagram = boundary_reduce(complex_)
    out = _out_dir(opts)
    write_diagram_csv(diagram, out / f"{data.name}.diagram.csv")
    write_diagram_json(diagram, out / f"{data.name}.diagram.json")
    bars = ["dim,birth,death,length"]
    maxf = diagram.max_filtration
    for iv in diagram.intervals:
        death = min(iv.death, maxf)
        bars.append(f"{iv.dim},{iv.birth!r},{death!r},{death - iv.birth!r}")
    (out / f"{data.name}.barcode.csv").write_text("\n".join(bars) + "\n")
    print(
        f"{len(complex_)} simplices, {len(diagram.intervals)} intervals, "
        f"max filtration {maxf!r}"
    )
    return 0


def _split_test_vertices(data: ds.LabeledDataset, opts: dict) -> frozenset[int]:
    if opts["test_indices"]:
        return frozenset(int(tok) for tok in str(opts["test_indices"]).split(","))
    fraction = float(opts["test_fraction"])
    rng = np.random.default_rng([int(opts["seed"]), 1])
    chosen: list[int] = []
    for c in range(data.n_classes):
        members = np.flatnonzero(data.labels == c)
        rng.shuffle(members)
        take = max(1, int(round(fraction * len(members))))
        chosen.extend(int(v) for v in members[:take])
    return frozenset(chosen)


def _cmd_classify(args: argparse.Namespace) -> int:
    opts = _merge_options(args)
    data = _resolve_dataset(args.dataset, opts)
    test = _split_test_vertices(data, opts)
    table = AssociationTable(
        training={int(v): int(data.labels[v]) for v in range(len(data)) if v not in test},
        test_vertices=test,
        n_classes=data.n_classes,
        ground_truth={int(v): int(data.labels[v]) for v in test},
    )
    dist = pairwise_distances(data.points, opts["metric"])
    if opts["baseline"]:
        config = KnnConfig(k=int(opts["k"]), weighted=(opts["baseline"] == "wknn"))
        preds = knn_predict_all(dist, table, config, seed=int(opts["seed"]))
    else:
        complex_ = build_rips(dist, _rips_config(opts))
        diagram = boundary_reduce(complex_)
        policy = SelectionPolicy(
            selector=opts["selector"],
            epsilon_mode=opts["epsilon_mode"],
            recovery=opts["recovery"],
            rng_seed=int(opts["seed"]),
        )
        preds = classify_all(complex_, diagram, table, policy, dist)
    out = _out_dir(opts)
    prob_header = ",".join(f"p_{name}" for name in data.class_names)
    lines = [f"vertex,predicted,provenance,{prob_header}"]
    for p in preds:
        probs = ",".join(repr(x) for x in p.probability)
        lines.append(f"{p.vertex},{data.class_names[p.label]},{p.provenance},{probs}")
    csv_path = out / f"{data.name}.predictions.csv"
    csv_path.write_text("\n".join(lines) + "\n")
    correct = sum(1 for p in preds if p.label == int(data.labels[p.vertex]))
    payload = {
        "dataset": data.name,
        "n_test": len(preds),
        "accuracy": correct / len(preds) if preds else math.nan,
        "provenance_counts": {
            prov: sum(1 for p in preds if p.provenance == prov)
            for prov in sorted({p.provenance for p in preds})
        },
    }
    (out / f"{data.name}.predictions.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n"
    )
    print(f"wrote {csv_path} (accuracy {payload['accuracy']:.3f})")
    return 0


def _parse_roster(opts: dict) -> tuple:
    roster = []
    for token in str(opts["classifiers"]).split(","):
        token = token.strip()
        if not token:
            continue
        if token == "tdabc-m":
            roster.append(TdabcSpec("tdabc-m", selector="max",
                                    epsilon_mode=opts["epsilon_mode"], recovery=opts["recovery"]))
        elif token == "tdabc-r":
            roster.append(TdabcSpec("tdabc-r", selector="rand",
                                    epsilon_mode=opts["epsilon_mode"], recovery=opts["recovery"]))
        elif token == "tdabc-a":
            roster.append(TdabcSpec("tdabc-a", selector="avg",
                                    epsilon_mode=opts["epsilon_mode"], recovery=opts["recovery"]))
        elif token == "knn":
            roster.append(KnnSpec("knn", k=int(opts["k"])))
        elif token == "wknn":
            roster.append(KnnSpec("wknn", k=int(opts["k"]), weighted=True))
        else:
            raise TdabcError(f"unknown classifier {token!r}")
    if not roster:
        roster = list(default_classifiers())
    return tuple(roster)


def _evaluate_one(data: ds.LabeledDataset, opts: dict) -> EvaluationReport:
    plan = FoldPlan(
        folds=int(opts["folds"]), repeats=int(opts["repeats"]), seed=int(opts["seed"])
    )
    return run_experiment(data, _parse_roster(opts), plan, rips=_rips_config(opts))


def _ramp_worker(payload: tuple[int, dict]) -> tuple[int, EvaluationReport]:
    step, opts = payload
    data = ds.make_imbalance_ramp(step, seed=int(opts["seed"]))
    return step, _evaluate_one(data, opts)


def _cmd_evaluate(args: argparse.Namespace) -> int:
    opts = _merge_options(args)
    out = _out_dir(opts)
    if args.ramp:
        steps = list(range(1, 17))
        jobs = int(opts["jobs"])
        payloads = [(step, opts) for step in steps]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = dict(pool.map(_ramp_worker, payloads))
        else:
            results = dict(map(_ramp_worker, payloads))
        write_ramp_csv(results, out / "ramp_curves.csv")
        summary = {str(step): results[step].summary() for step in steps}
        failures = sum(len(results[step].failures) for step in steps)
        (out / "ramp_summary.json").write_text(
            json.dumps(summary, indent=2, sort_keys=True) + "\n"
        )
        print(f"wrote {out / 'ramp_curves.csv'} ({failures} fold failures)")
        return 0 if failures == 0 else 1
    data = _resolve_dataset(args.dataset, opts)
    report = _evaluate_one(data, opts)
    report.write_csv(out / f"{data.name}_report.csv")
    report.write_json(out / f"{data.name}_summary.json")
    print(
        f"wrote {out / (data.name + '_report.csv')} "
        f"({len(report.records)} records, {len(report.failures)} fold failures)"
    )
    return 0 if not report.failures else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tdabc",
        description="Label propagation over persistence-selected Rips subcomplexes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, dataset_required: bool = True) -> None:
        if dataset_required:
            p.add_argument("--dataset", required=True,
                           help="generator name, bundled name, or CSV path")
        p.add_argument("--config", help="JSON file with default options")
        p.add_argument("--out", help="output directory (or TDABC_OUT_DIR)")
        p.add_argument("--seed", type=int)
        p.add_argument("--label-column", dest="label_column")
        p.add_argument("--step", type=int, help="ramp step, 1 to 16")

    gen = sub.add_parser("generate", help="write a dataset CSV and its spec")
    common(gen)
    gen.set_defaults(func=_cmd_generate)

    def rips_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--max-dim", dest="max_dim", type=int)
        p.add_argument("--max-edge", dest="max_edge",
                       help="edge cap, a number or 'inf' (default: data-driven)")
        p.add_argument("--metric", choices=("euclidean", "manhattan", "cosine"))
        p.add_argument("--budget", type=int, help="simplex budget")

    per = sub.add_parser("persistence", help="compute a persistence diagram")
    common(per)
    rips_flags(per)
    per.set_defaults(func=_cmd_persistence)

    cls = sub.add_parser("classify", help="label the test vertices of one split")
    common(cls)
    rips_flags(cls)
    cls.add_argument("--selector", choices=("max", "rand", "avg"))
    cls.add_argument("--epsilon-mode", dest="epsilon_mode",
                     choices=("birth", "death", "mid"))
    cls.add_argument("--recovery", choices=("sublevel", "lifespan"))
    cls.add_argument("--baseline", choices=("knn", "wknn"))
    cls.add_argument("--k", type=int)
    cls.add_argument("--test-fraction", dest="test_fraction", type=float)
    cls.add_argument("--test-indices", dest="test_indices",
                     help="comma-separated vertex ids")
    cls.set_defaults(func=_cmd_classify)

    ev = sub.add_parser("evaluate", help="repeated stratified cross-validation")
    ev.add_argument("--dataset", help="generator name, bundled name, or CSV path")
    ev.add_argument("--config", help="JSON file with default options")
    ev.add_argument("--out", help="output directory (or TDABC_OUT_DIR)")
    ev.add_argument("--seed", type=int)
    ev.add_argument("--label-column", dest="label_column")
    ev.add_argument("--step", type=int, help="ramp step, 1 to 16")
    rips_flags(ev)
    ev.add_argument("--selector", choices=("max", "rand", "avg"))
    ev.add_argument("--epsilon-mode", dest="epsilon_mode",
                    choices=("birth", "death", "mid"))
    ev.add_argument("--recovery", choices=("sublevel", "lifespan"))
    ev.add_argument("--k", type=int)
    ev.add_argument("--folds", type=int)
    ev.add_argument("--repeats", type=int)
    ev.add_argument("--classifiers", help="comma list from tdabc-m,tdabc-r,tdabc-a,knn,wknn")
    ev.add_argument("--ramp", action="store_true", help="evaluate all 16 imbalance steps")
    ev.add_argument("--jobs", type=int, help="parallel workers for --ramp")
    ev.set_defaults(func=_cmd_evaluate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "evaluate" and not args.ramp and not args.dataset:
        parser.error("evaluate needs --dataset or --ramp")
    try:
        return args.func(args)
    except TdabcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
