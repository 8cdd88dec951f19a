import json
import os
import subprocess
import sys
from pathlib import Path

from scc.cli import main
from scc.dataio import load_sequence

SRC = str(Path(__file__).resolve().parents[1] / "src")


def _synth(tmp_path, name, mode="mixture", K=2, N=40, D=6, d=2, F=8, noise=0.02, seed=1):
    out = tmp_path / name
    args = [
        "synth", "--mode", mode, "--K", str(K), "--N", str(N), "--d", str(d),
        "--D", str(D), "--F", str(F), "--noise", str(noise), "--seed", str(seed),
        "--out", str(out),
    ]
    assert main(args) == 0
    return out


def test_synth_motion_and_mixture_files_load(tmp_path):
    motion = _synth(tmp_path, "m.seq", mode="motion", K=2, N=30, F=6, noise=0.0, seed=2)
    record = load_sequence(motion)
    assert record.trajectories.shape == (12, 30)
    assert record.truth_labels is not None

    mixture = _synth(tmp_path, "x.seq", mode="mixture", K=3, N=45, D=8, d=2, seed=3)
    record = load_sequence(mixture)
    assert record.trajectories.shape == (8, 45)
    assert record.truth_labels.n_clusters == 3


def test_synth_is_deterministic(tmp_path):
    a = _synth(tmp_path, "a.seq", seed=7)
    b = _synth(tmp_path, "b.seq", seed=7)
    assert a.read_bytes() == b.read_bytes()


def test_synth_rejects_bad_specs(tmp_path):
    out = tmp_path / "bad.seq"
    assert main(["synth", "--mode", "mixture", "--K", "3", "--N", "40", "--out", str(out)]) == 3
    assert main(
        ["synth", "--mode", "mixture", "--K", "2", "--N", "40", "--D", "7", "--out", str(out)]
    ) == 3


def test_cluster_writes_labels_and_diagnostics(tmp_path):
    seq = _synth(tmp_path, "c.seq", K=2, N=40, D=6, d=2, seed=4)
    labels_path = tmp_path / "labels.txt"
    code = main(
        ["cluster", "--in", str(seq), "--d", "2", "--K", "2", "--proj", "2F",
         "--seed", "5", "--out", str(labels_path)]
    )
    assert code == 0
    values = labels_path.read_text().split()
    assert len(values) == 40
    assert set(values) <= {"0", "1"}
    diag = json.loads((tmp_path / "labels.txt.jsonl").read_text())
    assert diag["iterations"] >= 1
    assert diag["sigma_sq"] > 0
    assert "runtime_sec" in diag


def test_cluster_projection_flag_controls_working_dim(tmp_path):
    seq = _synth(tmp_path, "p.seq", mode="motion", K=2, N=30, F=10, noise=0.0, seed=6)
    labels_path = tmp_path / "p-labels.txt"
    code = main(
        ["cluster", "--in", str(seq), "--d", "3", "--K", "2", "--proj", "d+1",
         "--seed", "1", "--out", str(labels_path)]
    )
    assert code == 0
    diag = json.loads((tmp_path / "p-labels.txt.jsonl").read_text())
    assert diag["working_dim"] == 4


def test_cluster_label_file_is_deterministic(tmp_path):
    seq = _synth(tmp_path, "d.seq", K=2, N=36, D=6, d=2, seed=8)
    out_a, out_b = tmp_path / "a.txt", tmp_path / "b.txt"
    for out in (out_a, out_b):
        assert main(
            ["cluster", "--in", str(seq), "--d", "2", "--K", "2", "--seed", "9", "--out", str(out)]
        ) == 0
    assert out_a.read_bytes() == out_b.read_bytes()


def test_cluster_exit_codes(tmp_path):
    missing = tmp_path / "missing.seq"
    assert main(["cluster", "--in", str(missing), "--d", "2", "--K", "2"]) == 2
    corrupt = tmp_path / "corrupt.seq"
    corrupt.write_text("not a header\n")
    assert main(["cluster", "--in", str(corrupt), "--d", "2", "--K", "2"]) == 2
    seq = _synth(tmp_path, "e.seq", K=2, N=30, D=6, d=2, seed=1)
    assert main(["cluster", "--in", str(seq), "--d", "0", "--K", "2"]) == 3


def _make_suite(tmp_path):
    data_dir = tmp_path / "suite"
    data_dir.mkdir()
    for i, k in enumerate((2, 2, 3)):
        _synth(data_dir, f"s{i}.seq", K=k, N=20 * k, D=6, d=2, seed=10 + i)
    # one unlabeled file that bench must skip with a warning
    unlabeled = data_dir / "nolabels.seq"
    text = (data_dir / "s0.seq").read_text().splitlines()
    unlabeled.write_text("\n".join([text[0].replace("K=2", "K=0")] + text[2:]) + "\n")
    return data_dir


def _run_bench(data_dir, out_dir, extra=()):
    args = [
        "bench", "--data", str(data_dir), "--out", str(out_dir),
        "--repeats", "2", "--regimes", "2,4K", "--seed", "3", "--c", "60",
    ] + list(extra)
    return main(args)


def test_bench_produces_reports(tmp_path, capsys):
    data_dir = _make_suite(tmp_path)
    out_dir = tmp_path / "out"
    assert _run_bench(data_dir, out_dir) == 0
    err = capsys.readouterr().err
    assert "nolabels.seq" in err and "skipping" in err

    report = (out_dir / "report.csv").read_text().splitlines()
    assert report[0] == "method,category,motions,mean_pct,median_pct"
    assert any(",2," in line for line in report[1:])
    assert any(",3," in line for line in report[1:])

    records = (out_dir / "records.csv").read_text().splitlines()
    assert records[0] == "method,sequence,category,motions,error_pct,runs"
    assert len(records) == 4  # three labeled sequences, one regime

    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["repeats"] == 2
    assert "report.csv" in manifest["files"]
    hists = sorted(p.name for p in out_dir.glob("hist_*.csv"))
    assert hists == ["hist_SCC2-4K_2motions.csv", "hist_SCC2-4K_3motions.csv"]
    assert (out_dir / "timings.csv").exists()


def test_bench_deterministic_outputs(tmp_path):
    # literally the same command twice into the same directory
    data_dir = _make_suite(tmp_path)
    out_dir = tmp_path / "out"
    names = ["report.csv", "records.csv", "report.txt", "manifest.json"]
    assert _run_bench(data_dir, out_dir) == 0
    first = {name: (out_dir / name).read_bytes() for name in names}
    assert _run_bench(data_dir, out_dir) == 0
    for name in names:
        assert (out_dir / name).read_bytes() == first[name], name


def test_bench_parallel_workers_match_serial(tmp_path):
    data_dir = _make_suite(tmp_path)
    out_serial, out_parallel = tmp_path / "serial", tmp_path / "parallel"
    assert _run_bench(data_dir, out_serial) == 0
    env_before = os.environ.get("SCC_THREADS")
    os.environ["SCC_THREADS"] = "2"
    try:
        assert _run_bench(data_dir, out_parallel, extra=["--workers", "2"]) == 0
    finally:
        if env_before is None:
            os.environ.pop("SCC_THREADS", None)
        else:
            os.environ["SCC_THREADS"] = env_before
    assert (out_serial / "records.csv").read_bytes() == (out_parallel / "records.csv").read_bytes()


def test_bench_empty_directory_fails(tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    assert main(["bench", "--data", str(empty), "--out", str(tmp_path / "o")]) == 1


def test_report_regenerates_from_records(tmp_path):
    data_dir = _make_suite(tmp_path)
    out_dir = tmp_path / "out"
    assert _run_bench(data_dir, out_dir) == 0
    regen = tmp_path / "regen"
    code = main(["report", "--records", str(out_dir / "records.csv"), "--out", str(regen)])
    assert code == 0
    assert (regen / "report.csv").read_bytes() == (out_dir / "report.csv").read_bytes()


def test_report_with_reference_rows(tmp_path):
    data_dir = _make_suite(tmp_path)
    out_dir = tmp_path / "out"
    assert _run_bench(data_dir, out_dir) == 0
    regen = tmp_path / "ref"
    code = main(
        ["report", "--records", str(out_dir / "records.csv"), "--out", str(regen),
         "--include-reference"]
    )
    assert code == 0
    report = (regen / "report.csv").read_text()
    assert "RANSAC" in report and "REF" in report and "1.4100" in report


def test_module_entry_point_runs():
    env = dict(os.environ, PYTHONPATH=SRC)
    proc = subprocess.run(
        [sys.executable, "-m", "scc", "--help"], capture_output=True, text=True, env=env
    )
    assert proc.returncode == 0
    assert "cluster" in proc.stdout and "bench" in proc.stdout
