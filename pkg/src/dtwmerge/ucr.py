"""Reading and writing the UCR 2018 archive TSV layout.

One series per row, label first. Variable-length datasets pad short rows
with trailing NaN fields.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import EmptySeries, InvalidDataset, MissingValueUnsupported, ParseError
from .series import LabeledDataset, Split, is_z_normalized

ZNORM_SAMPLE = 20


@dataclass
class DatasetPair:
    name: str
    train: LabeledDataset
    test: LabeledDataset
    metadata: dict = field(default_factory=dict)


def _parse_value(token: str, row: int, column: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"cannot parse {token!r} as a number", row, column) from None
    if math.isinf(value):
        raise ParseError(f"infinite value {token!r}", row, column)
    return value


def read_ucr_file(path, name: str | None = None, split=Split.TRAIN) -> LabeledDataset:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidDataset(f"{path} holds no rows")
    sep = "\t" if "\t" in lines[0] else ","
    series, labels = [], []
    for row, line in enumerate(lines, start=1):
        fields = line.rstrip("\r\n").split(sep)
        label = fields[0].strip()
        if not label:
            raise ParseError("missing label", row, 1)
        values = [_parse_value(tok, row, col) for col, tok in enumerate(fields[1:], start=2)]
        while values and math.isnan(values[-1]):
            values.pop()
        if not values:
            raise EmptySeries("row has no values", row)
        for col, v in enumerate(values, start=2):
            if math.isnan(v):
                raise MissingValueUnsupported("NaN inside a series", row, col)
        series.append(np.array(values, dtype=np.float64))
        labels.append(label)
    return LabeledDataset(
        name=name or path.stem.rsplit("_", 1)[0], series=series, labels=labels, split=split
    )


def _split_file(directory: Path, name: str, split: str) -> Path:
    candidates = [directory / f"{name}_{split}.tsv", directory / name / f"{name}_{split}.tsv"]
    for c in candidates:
        if c.is_file():
            return c
    raise FileNotFoundError(f"no {name}_{split}.tsv under {directory}")


def load_ucr_split(path, name: str) -> DatasetPair:
    """Load ``<name>_TRAIN.tsv`` and ``<name>_TEST.tsv``.

    ``path`` may be the dataset's own directory or the archive root holding a
    ``<name>/`` subdirectory.
    """
    directory = Path(path)
    train = read_ucr_file(_split_file(directory, name, "TRAIN"), name, Split.TRAIN)
    test = read_ucr_file(_split_file(directory, name, "TEST"), name, Split.TEST)
    return DatasetPair(name=name, train=train, test=test, metadata=_metadata(train, test))


def _metadata(train: LabeledDataset, test: LabeledDataset) -> dict:
    lengths = train.lengths + test.lengths
    return {
        "length": lengths[0] if len(set(lengths)) == 1 else "variable",
        "n_classes": len(train.classes),
        "n_train": len(train),
        "n_test": len(test),
    }


def discover_datasets(root) -> list[str]:
    """Names of datasets under an archive root, sorted."""
    root = Path(root)
    names = set()
    for f in root.glob("*/*_TRAIN.tsv"):
        names.add(f.name[: -len("_TRAIN.tsv")])
    for f in root.glob("*_TRAIN.tsv"):
        names.add(f.name[: -len("_TRAIN.tsv")])
    return sorted(n for n in names if not n.endswith("_TRAIN"))


def format_value(v: float) -> str:
    # repr gives the shortest string that round-trips exactly
    return "NaN" if math.isnan(v) else repr(float(v))


def ucr_text(dataset: LabeledDataset) -> str:
    if dataset is None or len(dataset) == 0:
        raise InvalidDataset("cannot write an empty dataset")
    width = max(dataset.lengths)
    rows = []
    for values, label in dataset:
        fields = [label] + [format_value(v) for v in values.tolist()]
        fields += ["NaN"] * (width - len(values))
        rows.append("\t".join(fields))
    return "\n".join(rows) + "\n"


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_ucr(dataset: LabeledDataset, path) -> None:
    """Write ``dataset`` in the archive TSV layout, atomically."""
    atomic_write_text(path, ucr_text(dataset))


def _length_summary(lengths: list[int]):
    lo, hi = min(lengths), max(lengths)
    return lo if lo == hi else {"min": lo, "max": hi}


def summarize(pair: DatasetPair, tol: float = 1e-6) -> dict:
    sample = pair.train.series[:ZNORM_SAMPLE]
    population = [is_z_normalized(s, tol) for s in sample]
    corrected = [is_z_normalized(s, tol, ddof=1) for s in sample]
    znorm = [a or b for a, b in zip(population, corrected)]
    if all(population):
        convention = "population"
    elif all(corrected):
        convention = "sample"
    else:
        convention = None
    return {
        "name": pair.name,
        "n_train": len(pair.train),
        "n_test": len(pair.test),
        "n_classes": len(pair.train.classes),
        "classes": pair.train.classes,
        "length": _length_summary(pair.train.lengths + pair.test.lengths),
        "z_normalized": all(znorm),
        "z_normalized_fraction": sum(znorm) / len(znorm),
        "z_normalization_std": convention,
    }
