"""DTW-Merge augmentation.

Two same-class series are aligned with DTW, a split point is drawn along the
warping path from a Gaussian centred on the middle of the path, and the
prefix of the first series up to the split is joined to the remainder of the
second series after it.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from .dtw import WarpingPath, dtw
from .errors import InvalidIndex, InvalidInput
from .series import LabeledDataset, TimeSeries, as_series

# SeedSequence tag separating augmentation streams from other consumers
AUGMENT_STREAM = 1


class Pairing(str, Enum):
    RANDOM_SAME_CLASS = "random_same_class"
    ROUND_ROBIN_SAME_CLASS = "round_robin_same_class"


@dataclass(frozen=True)
class SplitSample:
    r: int
    mu: float
    sigma_squared: float


@dataclass(frozen=True)
class AugmentationConfig:
    factor: int = 1
    pairing: Pairing = Pairing.RANDOM_SAME_CLASS
    seed: int = 0
    smooth_junction: bool = False
    smooth_window: int = 3
    # join y from the aligned sample itself rather than the one after it
    inclusive_suffix: bool = False

    def __post_init__(self):
        object.__setattr__(self, "pairing", Pairing(self.pairing))
        if self.factor < 0:
            raise InvalidInput(f"factor must be >= 0, got {self.factor}")
        if self.smooth_window < 3 or self.smooth_window % 2 == 0:
            raise InvalidInput(f"smooth_window must be odd and >= 3, got {self.smooth_window}")
        if not 0 <= self.seed < 2**64:
            raise InvalidInput(f"seed must fit in 64 unsigned bits, got {self.seed}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pairing"] = self.pairing.value
        return d

    def fingerprint(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def sample_split_index(path_length: int, rng: np.random.Generator) -> SplitSample:
    """Draw r ~ N(L/2, L/10), round to nearest (half up) and clamp to [1, L]."""
    if path_length < 1:
        raise InvalidInput(f"path length must be >= 1, got {path_length}")
    mu = path_length / 2
    var = path_length / 10
    draw = rng.normal(mu, math.sqrt(var))
    r = min(max(math.floor(draw + 0.5), 1), path_length)
    return SplitSample(r=r, mu=mu, sigma_squared=var)


def splice(x, y, path: WarpingPath, r: int, inclusive_suffix: bool = False) -> TimeSeries:
    """``x[1..p_r]`` followed by ``y[q_r+1..N]`` (or ``y[q_r..N]`` if inclusive)."""
    p, q = path.at(r)
    start = q - 1 if inclusive_suffix else q
    return np.concatenate([np.asarray(x)[:p], np.asarray(y)[start:]])


def smooth_junction(series, junction_index: int, window: int = 3) -> TimeSeries:
    """Replace the value at ``junction_index`` (1-based) by the mean of the
    window centred on it, truncated at the series edges."""
    x = as_series(series)
    if window < 3 or window % 2 == 0:
        raise InvalidInput(f"window must be odd and >= 3, got {window}")
    if not 1 <= junction_index <= len(x):
        raise InvalidIndex(f"junction {junction_index} outside [1, {len(x)}]")
    half = window // 2
    centre = junction_index - 1
    lo, hi = max(0, centre - half), min(len(x), centre + half + 1)
    out = x.copy()
    out[centre] = x[lo:hi].mean()
    return out


def dtw_merge(
    x,
    y,
    rng: np.random.Generator,
    *,
    r: int | None = None,
    inclusive_suffix: bool = False,
    smooth: bool = False,
    smooth_window: int = 3,
) -> TimeSeries:
    """Merge ``x`` and ``y`` at a random point of their optimal warping path.

    Passing ``r`` fixes the split index (1-based) instead of sampling it.
    """
    x, y = as_series(x), as_series(y)
    path = dtw(x, y).path
    if r is None:
        r = sample_split_index(len(path), rng).r
    merged = splice(x, y, path, r, inclusive_suffix)
    junction = path.at(r)[0]
    if smooth and junction < len(merged):
        merged = smooth_junction(merged, junction, smooth_window)
    return merged


def _classmates(labels: list[str]) -> dict[str, list[int]]:
    members: dict[str, list[int]] = {}
    for i, label in enumerate(labels):
        members.setdefault(label, []).append(i)
    return members


def augment_dataset(
    train: LabeledDataset, config: AugmentationConfig, jobs: int = 1
) -> LabeledDataset:
    """Append ``config.factor * len(train)`` merged samples to ``train``.

    Synthetic samples are ordered replica by replica, and within a replica in
    source order. Each one draws from its own stream keyed by
    ``(seed, source index, replica index)``, so the output does not depend on
    ``jobs``. Members of single-item classes are merged with themselves and
    counted in ``meta["self_merges"]``.
    """
    members = _classmates(train.labels)
    tasks = []
    self_merges = 0
    for replica in range(config.factor):
        for i, label in enumerate(train.labels):
            mates = [k for k in members[label] if k != i]
            rng = np.random.default_rng([config.seed, AUGMENT_STREAM, i, replica])
            if not mates:
                partner = i
                self_merges += 1
            elif config.pairing is Pairing.RANDOM_SAME_CLASS:
                partner = mates[int(rng.integers(len(mates)))]
            else:
                rank = members[label].index(i)
                partner = mates[(rank + replica) % len(mates)]
            tasks.append((i, partner, rng))

    def run(task):
        i, partner, rng = task
        return dtw_merge(
            train.series[i],
            train.series[partner],
            rng,
            inclusive_suffix=config.inclusive_suffix,
            smooth=config.smooth_junction,
            smooth_window=config.smooth_window,
        )

    if jobs > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            synthetic = list(pool.map(run, tasks))
    else:
        synthetic = [run(t) for t in tasks]

    labels = train.labels + [train.labels[i] for i, _, _ in tasks]
    meta = dict(
        train.meta,
        augmentation=config.to_dict(),
        n_original=len(train),
        n_synthetic=len(synthetic),
        self_merges=self_merges,
    )
    return train.replace(train.series + synthetic, labels, meta=meta)
