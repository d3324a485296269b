import json

import numpy as np
import pytest

from dtwmerge.cli import main
from dtwmerge.series import LabeledDataset
from dtwmerge.ucr import read_ucr_file, write_ucr


@pytest.fixture
def archive(tmp_path):
    """Two tiny datasets; ``Dup`` tests on its own training split."""
    r = np.random.default_rng(1)
    root = tmp_path / "archive"
    series = [r.normal(size=12) + (i % 2) * 3 for i in range(10)]
    labels = [str(i % 2) for i in range(10)]
    train = LabeledDataset("Dup", series, labels)
    write_ucr(train, root / "Dup" / "Dup_TRAIN.tsv")
    write_ucr(train, root / "Dup" / "Dup_TEST.tsv")
    var = LabeledDataset("Var", [r.normal(size=n) for n in (8, 10, 12, 9, 11, 10)], list("ababab"))
    write_ucr(var, root / "Var" / "Var_TRAIN.tsv")
    write_ucr(var, root / "Var" / "Var_TEST.tsv")
    return root


def test_augment_factor_one_doubles_rows(archive, tmp_path):
    out = tmp_path / "out"
    assert main(["augment", "--data-dir", str(archive), "--datasets", "Dup", "--seed", "3", "--out", str(out)]) == 0
    rows = (out / "Dup_TRAIN_AUG.tsv").read_text().splitlines()
    assert len(rows) == 20
    manifest = json.loads((out / "Dup_TRAIN_AUG.json").read_text())
    assert manifest["seed"] == 3 and manifest["factor"] == 1
    assert manifest["warnings"]["self_merges"] == 0
    assert json.loads((out / "augment_manifest.json").read_text())["failed"] == {}


def test_augment_factor_zero_reproduces_input(archive, tmp_path):
    out = tmp_path / "out"
    main(["augment", "--data-dir", str(archive), "--datasets", "Dup", "--factor", "0", "--out", str(out)])
    original = (archive / "Dup" / "Dup_TRAIN.tsv").read_text()
    assert (out / "Dup_TRAIN_AUG.tsv").read_text() == original


def test_augment_equalizes_variable_lengths(archive, tmp_path):
    out = tmp_path / "out"
    assert main(["augment", "--data-dir", str(archive), "--datasets", "Var", "--factor", "0", "--out", str(out)]) == 0
    ds = read_ucr_file(out / "Var_TRAIN_AUG.tsv")
    assert set(ds.lengths) == {10}


def test_same_seed_same_bytes(archive, tmp_path):
    outs = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        main(["augment", "--data-dir", str(archive), "--seed", "9", "--out", str(out), "--jobs", str(k + 1)])
        outs.append(out)
    for name in ("Dup_TRAIN_AUG.tsv", "Var_TRAIN_AUG.tsv", "Dup_TRAIN_AUG.json", "augment_manifest.json"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()


def test_seed_from_environment(archive, tmp_path, monkeypatch):
    monkeypatch.setenv("DTWMERGE_SEED", "42")
    main(["augment", "--data-dir", str(archive), "--datasets", "Dup", "--out", str(tmp_path / "env")])
    assert json.loads((tmp_path / "env" / "Dup_TRAIN_AUG.json").read_text())["seed"] == 42
    main(["augment", "--data-dir", str(archive), "--datasets", "Dup", "--seed", "5", "--out", str(tmp_path / "flag")])
    assert json.loads((tmp_path / "flag" / "Dup_TRAIN_AUG.json").read_text())["seed"] == 5


def test_partial_failure(archive, tmp_path):
    (archive / "Broken").mkdir()
    (archive / "Broken" / "Broken_TRAIN.tsv").write_text("1\t0.5\tNaN\t0.2\n")
    (archive / "Broken" / "Broken_TEST.tsv").write_text("1\t0.5\n")
    out = tmp_path / "out"
    assert main(["augment", "--data-dir", str(archive), "--out", str(out)]) == 1
    manifest = json.loads((out / "augment_manifest.json").read_text())
    assert "Broken" in manifest["failed"]
    assert manifest["succeeded"] == ["Dup", "Var"]
    assert (out / "Dup_TRAIN_AUG.tsv").exists()


def test_usage_errors(archive, tmp_path):
    assert main(["augment", "--data-dir", str(tmp_path / "empty"), "--out", str(tmp_path)]) == 2
    assert main(["augment", "--data-dir", str(archive), "--factor", "-1"]) == 2
    with pytest.raises(SystemExit) as info:
        main(["augment", "--pairing", "bogus"])
    assert info.value.code == 2


def test_evaluate_duplicate_split_is_perfect(archive, tmp_path):
    out = tmp_path / "ev"
    assert main(["evaluate", "--data-dir", str(archive), "--datasets", "Dup", "--out", str(out), "--format", "csv"]) == 0
    rep = json.loads((out / "Dup.report.json").read_text())
    assert rep["accuracy"] == 1.0 and rep["pce"] == 0.0
    assert (out / "reports.csv").read_text().startswith("dataset_name,accuracy")


def test_evaluate_twice_identical(archive, tmp_path):
    texts = []
    for k in range(2):
        out = tmp_path / f"ev{k}"
        main(["evaluate", "--data-dir", str(archive), "--augmented", "--seed", "4", "--out", str(out)])
        texts.append([(out / f"{n}.report.json").read_text() for n in ("Dup", "Var")])
    assert texts[0] == texts[1]


def test_evaluate_from_augmented_files(archive, tmp_path):
    aug = tmp_path / "aug"
    main(["augment", "--data-dir", str(archive), "--seed", "4", "--out", str(aug)])
    a, b = tmp_path / "a", tmp_path / "b"
    main(["evaluate", "--data-dir", str(archive), "--augmented", "--aug-dir", str(aug), "--seed", "4", "--out", str(a)])
    main(["evaluate", "--data-dir", str(archive), "--augmented", "--seed", "4", "--out", str(b)])
    ra = json.loads((a / "Dup.report.json").read_text())
    rb = json.loads((b / "Dup.report.json").read_text())
    assert ra["accuracy"] == rb["accuracy"] and ra["n_train"] == rb["n_train"] == 20


def test_evaluate_repeats_average(archive, tmp_path):
    out = tmp_path / "rep"
    main(["evaluate", "--data-dir", str(archive), "--datasets", "Var", "--augmented", "--repeats", "3", "--out", str(out)])
    rep = json.loads((out / "Var.report.json").read_text())
    accs = rep["config"]["repeat_accuracies"]
    assert len(accs) == 3
    assert rep["accuracy"] == pytest.approx(sum(accs) / 3)


def test_compare(archive, tmp_path):
    base = tmp_path / "base"
    main(["evaluate", "--data-dir", str(archive), "--out", str(base)])
    out = tmp_path / "cmp"
    assert main(["compare", str(base), str(base), "--out", str(out), "--format", "csv"]) == 0
    summary = json.loads((out / "comparison.json").read_text())
    assert summary["mean_accuracy_delta"] == 0 and summary["t_value"] == 0
    assert (out / "comparison.csv").exists()


def test_compare_hand_built_reports(tmp_path):
    base, aug = tmp_path / "b", tmp_path / "a"
    base.mkdir(), aug.mkdir()
    for d, accs in ((base, (0.9, 0.75)), (aug, (0.95, 0.75))):
        for name, acc, k in zip(("x", "y"), accs, (2, 5)):
            rep = {"dataset_name": name, "accuracy": acc, "error": 1 - acc, "n_classes": k,
                   "pce": (1 - acc) / k, "config_fingerprint": "f"}
            (d / f"{name}.report.json").write_text(json.dumps(rep))
    out = tmp_path / "cmp"
    assert main(["compare", str(base), str(aug), "--out", str(out)]) == 0
    s = json.loads((out / "comparison.json").read_text())
    assert s["mpce_baseline"] == pytest.approx((0.1 / 2 + 0.25 / 5) / 2, abs=1e-12)
    assert s["mpce_augmented"] == pytest.approx((0.05 / 2 + 0.25 / 5) / 2, abs=1e-12)


def test_compare_disjoint_exit_2(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir(), b.mkdir()
    rep = {"dataset_name": "x", "accuracy": 1.0, "error": 0.0, "n_classes": 2, "pce": 0.0, "config_fingerprint": ""}
    (a / "x.report.json").write_text(json.dumps(rep))
    (b / "y.report.json").write_text(json.dumps(dict(rep, dataset_name="y")))
    assert main(["compare", str(a), str(b), "--out", str(tmp_path / "o")]) == 2
    assert main(["compare", str(a), str(tmp_path / "missing"), "--out", str(tmp_path / "o")]) == 2


def test_summarize_stdout(archive, capsys):
    assert main(["summarize", "--data-dir", str(archive)]) == 0
    data = json.loads(capsys.readouterr().out)
    by_name = {d["name"]: d for d in data["datasets"]}
    assert by_name["Dup"]["length"] == 12 and by_name["Dup"]["n_classes"] == 2
    assert by_name["Var"]["length"] == {"min": 8, "max": 12}
