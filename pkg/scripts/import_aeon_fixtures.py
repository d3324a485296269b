"""Rebuild data/ucr/ from the archive copies bundled in the aeon wheel.

    pip download --no-deps -d /tmp/whl aeon
    python scripts/import_aeon_fixtures.py /tmp/whl/aeon-*.whl

The wheel ships some datasets in the sktime ``.ts`` layout (comma-separated
values, ``:label`` suffix); those rows are rewritten as archive TSV rows,
NaN-padded to the widest row, with every value token copied verbatim.
"""

import sys
import zipfile
from pathlib import Path

DATASETS = ("GunPoint", "ArrowHead", "ItalyPowerDemand", "PickupGestureWiimoteZ")
OUT = Path(__file__).resolve().parent.parent / "data" / "ucr"


def ts_rows(text):
    rows, in_data = [], False
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.lower() == "@data":
            in_data = True
        elif in_data:
            values, label = line.rsplit(":", 1)
            rows.append((label, values.split(",")))
    return rows


def main(wheel):
    with zipfile.ZipFile(wheel) as z:
        for name in DATASETS:
            for split in ("TRAIN", "TEST"):
                rows = ts_rows(z.read(f"aeon/datasets/data/{name}/{name}_{split}.ts").decode())
                width = max(len(v) for _, v in rows)
                lines = ["\t".join([label, *v, *["NaN"] * (width - len(v))]) for label, v in rows]
                target = OUT / name / f"{name}_{split}.tsv"
                target.parent.mkdir(parents=True, exist_ok=True)
                target.write_text("\n".join(lines) + "\n")
                print(f"{target}: {len(rows)} rows")


if __name__ == "__main__":
    main(sys.argv[1])
