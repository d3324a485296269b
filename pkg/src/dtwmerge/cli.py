"""Command-line entry point: augment, evaluate, compare, summarize.

Exit codes: 0 success, 1 some dataset failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import DatasetMismatch, DtwMergeError
from .evaluation import EvaluationReport, compare_runs, evaluate_1nn, pce
from .merge import AugmentationConfig, Pairing, augment_dataset
from .series import LabeledDataset, equalize_lengths
from .ucr import (
    DatasetPair,
    atomic_write_text,
    discover_datasets,
    load_ucr_split,
    read_ucr_file,
    summarize,
    ucr_text,
)

log = logging.getLogger("dtwmerge")

EXIT_OK, EXIT_PARTIAL, EXIT_USAGE = 0, 1, 2
SEED_ENV = "DTWMERGE_SEED"
EQUALIZE_STREAM = 2
REPORT_SUFFIX = ".report.json"
PAIRING_FLAGS = {"random": Pairing.RANDOM_SAME_CLASS, "round-robin": Pairing.ROUND_ROBIN_SAME_CLASS}


@dataclass
class RunConfig:
    command: str
    dataset_dir: Path = Path(".")
    dataset_names: list[str] = field(default_factory=list)
    seed: int = 0
    factor: int = 1
    pairing: Pairing = Pairing.RANDOM_SAME_CLASS
    smooth: bool = False
    smooth_window: int = 3
    inclusive_suffix: bool = False
    band_radius: int | None = None
    augmented: bool = False
    aug_dir: Path | None = None
    output_dir: Path = Path("out")
    format: str = "json"
    jobs: int = 1
    repeats: int = 1

    def augmentation(self, seed: int | None = None) -> AugmentationConfig:
        return AugmentationConfig(
            factor=self.factor,
            pairing=self.pairing,
            seed=self.seed if seed is None else seed,
            smooth_junction=self.smooth,
            smooth_window=self.smooth_window,
            inclusive_suffix=self.inclusive_suffix,
        )

    def to_dict(self) -> dict:
        """Fields that determine output data; paths and job counts are excluded."""
        d = asdict(self)
        for k in ("dataset_dir", "output_dir", "aug_dir", "jobs", "format", "dataset_names"):
            d.pop(k)
        d["pairing"] = self.pairing.value
        return d

    def fingerprint(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def resolve_names(config: RunConfig) -> list[str]:
    return list(config.dataset_names) or discover_datasets(config.dataset_dir)


def prepare(pair: DatasetPair, seed: int) -> DatasetPair:
    """Equalize series lengths of variable-length splits."""
    train, test = pair.train, pair.test
    if not train.is_equal_length():
        train = equalize_lengths(train, np.random.default_rng([seed, EQUALIZE_STREAM, 0]))
    if not test.is_equal_length():
        test = equalize_lengths(test, np.random.default_rng([seed, EQUALIZE_STREAM, 1]))
    return DatasetPair(pair.name, train, test, pair.metadata)


def _map_datasets(config: RunConfig, names, fn):
    """Run ``fn(name, inner_jobs)`` per dataset; collect results and errors."""
    outer = max(1, min(config.jobs, len(names)))
    inner = max(1, config.jobs // outer)

    def guarded(name):
        try:
            return name, fn(name, inner), None
        except (DtwMergeError, OSError, ValueError) as exc:
            log.error("%s: %s", name, exc)
            return name, None, f"{type(exc).__name__}: {exc}"

    if outer > 1:
        with ThreadPoolExecutor(max_workers=outer) as pool:
            return list(pool.map(guarded, names))
    return [guarded(n) for n in names]


def cmd_augment(config: RunConfig) -> int:
    names = resolve_names(config)
    if not names:
        log.error("no datasets found under %s", config.dataset_dir)
        return EXIT_USAGE
    out = Path(config.output_dir)
    aug_config = config.augmentation()

    def one(name, jobs):
        pair = prepare(load_ucr_split(config.dataset_dir, name), config.seed)
        augmented = augment_dataset(pair.train, aug_config, jobs=jobs)
        atomic_write_text(out / f"{name}_TRAIN_AUG.tsv", ucr_text(augmented))
        manifest = {
            "dataset": name,
            "seed": config.seed,
            "factor": aug_config.factor,
            "pairing": aug_config.pairing.value,
            "smooth": aug_config.smooth_junction,
            "inclusive_suffix": aug_config.inclusive_suffix,
            "n_original": augmented.meta["n_original"],
            "n_synthetic": augmented.meta["n_synthetic"],
            "equalized_length": pair.train.meta.get("equalized_length"),
            "warnings": {"self_merges": augmented.meta["self_merges"]},
            "config_fingerprint": config.fingerprint(),
        }
        atomic_write_text(out / f"{name}_TRAIN_AUG.json", _dumps(manifest))
        return manifest

    results = _map_datasets(config, names, one)
    return _finish(out / "augment_manifest.json", config, results)


def _finish(path: Path, config: RunConfig, results) -> int:
    failed = {name: err for name, _, err in results if err is not None}
    manifest = {
        "seed": config.seed,
        "config": config.to_dict(),
        "config_fingerprint": config.fingerprint(),
        "succeeded": sorted(name for name, _, err in results if err is None),
        "failed": failed,
    }
    atomic_write_text(path, _dumps(manifest))
    return EXIT_PARTIAL if failed else EXIT_OK


def _augmented_train(config: RunConfig, pair: DatasetPair, repeat: int, jobs: int) -> LabeledDataset:
    if config.aug_dir is not None:
        path = Path(config.aug_dir) / f"{pair.name}_TRAIN_AUG.tsv"
        return read_ucr_file(path, pair.name)
    seed = (config.seed + repeat) % 2**64
    return augment_dataset(pair.train, config.augmentation(seed), jobs=jobs)


def evaluate_dataset(config: RunConfig, name: str, jobs: int = 1) -> EvaluationReport:
    pair = prepare(load_ucr_split(config.dataset_dir, name), config.seed)
    fingerprint = config.fingerprint()
    run_config = dict(config.to_dict(), dataset=name)
    if not config.augmented:
        return evaluate_1nn(pair.train, pair.test, config.band_radius, jobs, fingerprint, run_config)
    repeats = 1 if config.aug_dir is not None else max(1, config.repeats)
    reports = []
    for k in range(repeats):
        train = _augmented_train(config, pair, k, jobs)
        reports.append(evaluate_1nn(train, pair.test, config.band_radius, jobs, fingerprint))
    if repeats == 1:
        report = reports[0]
        report.config = run_config
        return report
    accuracies = [r.accuracy for r in reports]
    mean_acc = float(np.mean(accuracies))
    n_classes = reports[0].n_classes
    return EvaluationReport(
        dataset_name=name,
        accuracy=mean_acc,
        error=1.0 - mean_acc,
        n_classes=n_classes,
        pce=pce(1.0 - mean_acc, n_classes),
        config_fingerprint=fingerprint,
        n_train=reports[0].n_train,
        n_test=reports[0].n_test,
        config=dict(run_config, repeat_accuracies=accuracies),
    )


def _reports_csv(reports: list[EvaluationReport]) -> str:
    lines = ["dataset_name,accuracy,error,n_classes,pce,n_train,n_test,config_fingerprint"]
    for r in sorted(reports, key=lambda r: r.dataset_name):
        lines.append(
            f"{r.dataset_name},{r.accuracy!r},{r.error!r},{r.n_classes},{r.pce!r},"
            f"{r.n_train},{r.n_test},{r.config_fingerprint}"
        )
    return "\n".join(lines) + "\n"


def cmd_evaluate(config: RunConfig) -> int:
    names = resolve_names(config)
    if not names:
        log.error("no datasets found under %s", config.dataset_dir)
        return EXIT_USAGE
    out = Path(config.output_dir)

    def one(name, jobs):
        report = evaluate_dataset(config, name, jobs)
        atomic_write_text(out / f"{name}{REPORT_SUFFIX}", _dumps(report.to_dict()))
        return report

    results = _map_datasets(config, names, one)
    if config.format == "csv":
        reports = [r for _, r, err in results if err is None]
        if reports:
            atomic_write_text(out / "reports.csv", _reports_csv(reports))
    return _finish(out / "evaluate_manifest.json", config, results)


def load_reports(directory) -> list[EvaluationReport]:
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"report directory {directory} does not exist")
    return [
        EvaluationReport.from_dict(json.loads(p.read_text()))
        for p in sorted(directory.glob(f"*{REPORT_SUFFIX}"))
    ]


def cmd_compare(config: RunConfig, baseline_dir, augmented_dir) -> int:
    try:
        summary = compare_runs(load_reports(baseline_dir), load_reports(augmented_dir))
    except (DatasetMismatch, FileNotFoundError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except DtwMergeError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    out = Path(config.output_dir)
    atomic_write_text(out / "comparison.json", _dumps(summary.to_dict()))
    if config.format == "csv":
        atomic_write_text(out / "comparison.csv", summary.to_csv())
    return EXIT_OK


def cmd_summarize(config: RunConfig, to_stdout: bool = True) -> int:
    names = resolve_names(config)
    if not names:
        log.error("no datasets found under %s", config.dataset_dir)
        return EXIT_USAGE
    results = _map_datasets(config, names, lambda n, _: summarize(load_ucr_split(config.dataset_dir, n)))
    summaries = [s for _, s, err in results if err is None]
    text = _dumps({"datasets": summaries, "failed": {n: e for n, _, e in results if e}})
    if to_stdout:
        sys.stdout.write(text)
    else:
        atomic_write_text(Path(config.output_dir) / "summary.json", text)
    return EXIT_PARTIAL if any(e for _, _, e in results) else EXIT_OK


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be in [0, 2**64), got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dtwmerge", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--data-dir", type=Path, default=Path("."))
    common.add_argument("--datasets", default="", help="comma-separated names; default: all found")
    common.add_argument("--seed", type=_seed, default=None)
    common.add_argument("--out", type=Path, default=Path("out"))
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--jobs", type=int, default=1)

    augmenting = argparse.ArgumentParser(add_help=False)
    augmenting.add_argument("--factor", type=int, default=1)
    augmenting.add_argument("--pairing", choices=sorted(PAIRING_FLAGS), default="random")
    augmenting.add_argument("--smooth", action="store_true")
    augmenting.add_argument("--smooth-window", type=int, default=3)
    augmenting.add_argument("--inclusive-suffix", action="store_true")

    sub.add_parser("augment", parents=[common, augmenting], help="write augmented train splits")
    ev = sub.add_parser("evaluate", parents=[common, augmenting], help="1NN-DTW reports")
    ev.add_argument("--band", type=int, default=None)
    ev.add_argument("--augmented", action="store_true")
    ev.add_argument("--aug-dir", type=Path, default=None,
                    help="read <NAME>_TRAIN_AUG.tsv from here instead of augmenting in memory")
    ev.add_argument("--repeats", type=int, default=1)
    cmp_ = sub.add_parser("compare", parents=[common], help="compare two report directories")
    cmp_.add_argument("baseline_dir", type=Path)
    cmp_.add_argument("augmented_dir", type=Path)
    sm = sub.add_parser("summarize", parents=[common], help="dataset catalog as JSON")
    sm.add_argument("--to-file", action="store_true", help="write summary.json under --out")
    return parser


def config_from_args(args) -> RunConfig:
    seed = args.seed
    if seed is None:
        seed = _seed(os.environ.get(SEED_ENV, "0"))
    names = [n.strip() for n in args.datasets.split(",") if n.strip()]
    config = RunConfig(
        command=args.command,
        dataset_dir=args.data_dir,
        dataset_names=names,
        seed=seed,
        output_dir=args.out,
        format=args.format,
        jobs=max(1, args.jobs),
    )
    if hasattr(args, "factor"):
        config.factor = args.factor
        config.pairing = PAIRING_FLAGS[args.pairing]
        config.smooth = args.smooth
        config.smooth_window = args.smooth_window
        config.inclusive_suffix = args.inclusive_suffix
        config.augmentation()  # validates
    if args.command == "evaluate":
        config.band_radius = args.band
        config.augmented = args.augmented
        config.aug_dir = args.aug_dir
        config.repeats = args.repeats
    return config


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = config_from_args(args)
    except (DtwMergeError, argparse.ArgumentTypeError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    if args.command == "augment":
        return cmd_augment(config)
    if args.command == "evaluate":
        return cmd_evaluate(config)
    if args.command == "compare":
        return cmd_compare(config, args.baseline_dir, args.augmented_dir)
    return cmd_summarize(config, to_stdout=not args.to_file)


if __name__ == "__main__":
    sys.exit(main())
