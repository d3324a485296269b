"""1NN-DTW classification and the scores used to compare runs."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import betainc

from .dtw import _NO_BAND, _check_radius, _rolling_distance
from .errors import BandInfeasible, DatasetMismatch, InvalidDataset, InvalidInput
from .series import LabeledDataset


def distance_matrix(queries, references, band_radius=None, jobs: int = 1) -> np.ndarray:
    """DTW distances, shape ``(len(queries), len(references))``."""
    queries = [np.ascontiguousarray(q, dtype=np.float64) for q in queries]
    references = [np.ascontiguousarray(r, dtype=np.float64) for r in references]
    radius = _NO_BAND if band_radius is None else _check_radius(band_radius, 0, 0)

    def row(q):
        out = np.empty(len(references))
        for j, ref in enumerate(references):
            out[j] = _rolling_distance(q, ref, radius)
        return out

    if jobs > 1 and len(queries) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(row, queries))
    else:
        rows = [row(q) for q in queries]
    dist = np.vstack(rows) if rows else np.empty((0, len(references)))
    if not np.all(np.isfinite(dist)):
        raise BandInfeasible(f"band radius {band_radius} leaves some pairs without a path")
    return dist


def _require(dataset, what):
    if dataset is None or len(dataset) == 0:
        raise InvalidDataset(f"{what} split is empty")


def nn1_dtw_classify(
    train: LabeledDataset, test: LabeledDataset, band_radius=None, jobs: int = 1
) -> list[str]:
    """Label of the nearest training series for each test series.

    Ties go to the lowest training index.
    """
    _require(train, "train")
    _require(test, "test")
    dist = distance_matrix(test.series, train.series, band_radius, jobs)
    return [train.labels[j] for j in np.argmin(dist, axis=1)]


def loo_nn1_predictions(train: LabeledDataset, band_radius=None, jobs: int = 1) -> list[str]:
    """Leave-one-out 1NN-DTW over the training split; an item never matches itself."""
    _require(train, "train")
    if len(train) < 2:
        raise InvalidDataset("leave-one-out needs at least two items")
    dist = distance_matrix(train.series, train.series, band_radius, jobs)
    np.fill_diagonal(dist, np.inf)
    return [train.labels[j] for j in np.argmin(dist, axis=1)]


def accuracy(predicted, actual) -> float:
    if len(predicted) != len(actual):
        raise InvalidInput(f"{len(predicted)} predictions for {len(actual)} labels")
    if not predicted:
        raise InvalidInput("no predictions")
    return sum(p == a for p, a in zip(predicted, actual)) / len(actual)


def pce(error: float, n_classes: int) -> float:
    """Per-class error: test error divided by the number of classes."""
    if not 0.0 <= error <= 1.0:
        raise InvalidInput(f"error must lie in [0, 1], got {error}")
    if n_classes < 1:
        raise InvalidInput(f"n_classes must be >= 1, got {n_classes}")
    return error / n_classes


def mpce(pces) -> float:
    """Mean per-class error across datasets."""
    pces = list(pces)
    if not pces:
        raise InvalidInput("mpce of an empty list")
    return math.fsum(pces) / len(pces)


def paired_t_test(a, b) -> tuple[float, float]:
    """Two-sided paired t-test on ``a - b``.

    Returns ``(t, p)``; when every difference is zero, ``(0.0, 1.0)``.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidInput(f"paired samples must have equal length, got {a.shape} and {b.shape}")
    n = a.size
    if n < 2:
        raise InvalidInput("paired t-test needs at least two pairs")
    d = a - b
    if np.all(d == 0):
        return 0.0, 1.0
    mean = d.mean()
    sd = d.std(ddof=1)
    if sd == 0:
        return math.copysign(math.inf, mean), 0.0
    t = mean / (sd / math.sqrt(n))
    df = n - 1
    # P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2)
    p = float(betainc(df / 2, 0.5, df / (df + t * t)))
    return float(t), min(max(p, 0.0), 1.0)


@dataclass
class EvaluationReport:
    dataset_name: str
    accuracy: float
    error: float
    n_classes: int
    pce: float
    config_fingerprint: str
    n_train: int = 0
    n_test: int = 0
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "EvaluationReport":
        known = {k: d[k] for k in cls.__dataclass_fields__ if k in d}
        return cls(**known)


def make_report(
    name: str, predicted, actual, n_classes: int, fingerprint: str = "", **extra
) -> EvaluationReport:
    acc = accuracy(predicted, actual)
    err = 1.0 - acc
    return EvaluationReport(
        dataset_name=name,
        accuracy=acc,
        error=err,
        n_classes=n_classes,
        pce=pce(err, n_classes),
        config_fingerprint=fingerprint,
        **extra,
    )


def evaluate_1nn(
    train: LabeledDataset,
    test: LabeledDataset,
    band_radius=None,
    jobs: int = 1,
    fingerprint: str = "",
    config: dict | None = None,
) -> EvaluationReport:
    unseen = set(test.labels) - set(train.labels)
    if unseen:
        raise InvalidDataset(f"test labels missing from train: {sorted(unseen)}")
    predicted = nn1_dtw_classify(train, test, band_radius, jobs)
    return make_report(
        test.name,
        predicted,
        test.labels,
        len(train.classes),
        fingerprint,
        n_train=len(train),
        n_test=len(test),
        config=dict(config or {}),
    )


@dataclass
class ComparisonSummary:
    per_dataset: list[tuple[str, float, float]]
    mpce_baseline: float
    mpce_augmented: float
    t_value: float | None
    p_value: float | None
    mean_accuracy_delta: float

    def to_dict(self) -> dict:
        return {
            "per_dataset": [
                {"name": n, "baseline_accuracy": b, "augmented_accuracy": a, "delta": a - b}
                for n, b, a in self.per_dataset
            ],
            "mpce_baseline": self.mpce_baseline,
            "mpce_augmented": self.mpce_augmented,
            "t_value": self.t_value,
            "p_value": self.p_value,
            "mean_accuracy_delta": self.mean_accuracy_delta,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["name", "baseline_accuracy", "augmented_accuracy", "delta"])
        for n, b, a in self.per_dataset:
            writer.writerow([n, repr(b), repr(a), repr(a - b)])
        return buf.getvalue()


def compare_runs(reports_baseline, reports_augmented) -> ComparisonSummary:
    """Pair reports by dataset name and compare accuracies and MPCE.

    With a single dataset the t-test is not applicable and both t and p are
    None.
    """
    base = sorted(reports_baseline, key=lambda r: r.dataset_name)
    aug = sorted(reports_augmented, key=lambda r: r.dataset_name)
    base_names = [r.dataset_name for r in base]
    aug_names = [r.dataset_name for r in aug]
    if base_names != aug_names:
        raise DatasetMismatch(
            f"dataset sets differ: only baseline {sorted(set(base_names) - set(aug_names))}, "
            f"only augmented {sorted(set(aug_names) - set(base_names))}"
        )
    if not base:
        raise InvalidInput("nothing to compare")
    base_acc = [r.accuracy for r in base]
    aug_acc = [r.accuracy for r in aug]
    if len(base) >= 2:
        t, p = paired_t_test(aug_acc, base_acc)
    else:
        t = p = None
    return ComparisonSummary(
        per_dataset=[(n, b, a) for n, b, a in zip(base_names, base_acc, aug_acc)],
        mpce_baseline=mpce(r.pce for r in base),
        mpce_augmented=mpce(r.pce for r in aug),
        t_value=t,
        p_value=p,
        mean_accuracy_delta=math.fsum(a - b for a, b in zip(aug_acc, base_acc)) / len(base),
    )


def win_loss_by_type(summary: ComparisonSummary, type_map: dict[str, str]) -> dict[str, dict]:
    """Share of datasets per type where augmentation wins, loses or ties."""
    groups: dict[str, dict] = {}
    for name, b, a in summary.per_dataset:
        g = groups.setdefault(type_map.get(name, "unknown"), {"n": 0, "win": 0, "loss": 0, "tie": 0})
        g["n"] += 1
        g["win" if a > b else "loss" if a < b else "tie"] += 1
    return groups
