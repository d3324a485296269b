"""Baseline vs DTW-Merge-augmented 1NN-DTW accuracy on archive datasets.

    python scripts/neutrality_experiment.py --data-dir data/ucr --seeds 0 1 2 3 4

Prints one row per (dataset, seed) and the per-dataset mean delta, and
optionally writes everything as JSON.
"""

import argparse
import json
from pathlib import Path

import numpy as np

from dtwmerge.evaluation import evaluate_1nn
from dtwmerge.merge import AugmentationConfig, augment_dataset
from dtwmerge.ucr import discover_datasets, load_ucr_split


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--data-dir", type=Path, default=Path("data/ucr"))
    parser.add_argument("--datasets", nargs="*", default=["GunPoint", "ArrowHead", "ItalyPowerDemand"])
    parser.add_argument("--seeds", nargs="*", type=int, default=[0])
    parser.add_argument("--factor", type=int, default=1)
    parser.add_argument("--band", type=int, default=None)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--json", type=Path, default=None)
    args = parser.parse_args()

    names = args.datasets or discover_datasets(args.data_dir)
    results = []
    for name in names:
        pair = load_ucr_split(args.data_dir, name)
        base = evaluate_1nn(pair.train, pair.test, args.band, args.jobs)
        deltas = []
        for seed in args.seeds:
            train = augment_dataset(pair.train, AugmentationConfig(factor=args.factor, seed=seed), args.jobs)
            aug = evaluate_1nn(train, pair.test, args.band, args.jobs)
            delta = aug.accuracy - base.accuracy
            deltas.append(delta)
            print(f"{name:<20} seed={seed:<4} base={base.accuracy:.4f} aug={aug.accuracy:.4f} delta={100 * delta:+.2f}pp")
        print(f"{name:<20} mean delta over {len(deltas)} seeds: {100 * np.mean(deltas):+.3f}pp")
        results.append({"dataset": name, "baseline": base.accuracy, "seeds": args.seeds, "deltas": deltas})

    if args.json:
        args.json.write_text(json.dumps(results, indent=2) + "\n")


if __name__ == "__main__":
    main()
