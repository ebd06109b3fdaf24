import json
import math
import subprocess
import sys

import numpy as np
import pytest

from nspyr import read_curve_csv, sample_circle, write_curve_csv
from nspyr.cli import main


@pytest.fixture
def circle_csv(tmp_path):
    path = tmp_path / "circle256.csv"
    write_curve_csv(path, sample_circle(256))
    return path


def run(*argv):
    return main([str(a) for a in argv])


class TestDecomposeReconstruct:
    def test_roundtrip(self, tmp_path, circle_csv):
        pyr_path = tmp_path / "pyr.json"
        out_csv = tmp_path / "back.csv"
        assert run("decompose", "--in", circle_csv, "--out", pyr_path,
                   "--family", "conic", "--levels", 4) == 0
        assert pyr_path.exists()
        assert (tmp_path / "pyr_norms.csv").exists()
        assert run("reconstruct", "--in", pyr_path, "--out", out_csv) == 0
        original = read_curve_csv(circle_csv)
        back = read_curve_csv(out_csv)
        assert np.abs(back.points - original.points).max() <= 1e-12

    def test_detail_norms_tiny_for_circle(self, tmp_path, circle_csv):
        pyr_path = tmp_path / "pyr.json"
        run("decompose", "--in", circle_csv, "--out", pyr_path,
            "--family", "conic", "--levels", 4)
        rows = (tmp_path / "pyr_norms.csv").read_text().splitlines()[1:]
        assert len(rows) == 4
        for row in rows:
            _, linf, _, _ = row.split(",")
            assert float(linf) <= 1e-8

    def test_indivisible_period_exits_3(self, tmp_path, capsys):
        path = tmp_path / "seq.csv"
        path.write_text("# period=100\n" + "\n".join(["1.0"] * 100) + "\n")
        code = run("decompose", "--in", path, "--out", tmp_path / "p.json",
                   "--family", "nscubic", "--levels", 3)
        assert code == 3
        assert "period not divisible" in capsys.readouterr().err

    def test_missing_input_exits_2(self, tmp_path):
        code = run("decompose", "--in", tmp_path / "nope.csv",
                   "--out", tmp_path / "p.json")
        assert code == 2

    def test_plot_flag_writes_svg(self, tmp_path, circle_csv):
        pyr_path = tmp_path / "pyr.json"
        run("decompose", "--in", circle_csv, "--out", pyr_path, "--plot",
            "--levels", 4)
        svg = (tmp_path / "pyr_details.svg").read_text()
        assert svg.startswith("<svg") and "<rect" in svg

    def test_stationary_mask_file_family(self, tmp_path, circle_csv):
        mask_path = tmp_path / "mask.csv"
        taps = [1 / 8, 1 / 2, 3 / 4, 1 / 2, 1 / 8]
        mask_path.write_text(
            "".join(f"{i - 2},{t!r}\n" for i, t in enumerate(taps)))
        pyr_path = tmp_path / "p.json"
        out_csv = tmp_path / "back.csv"
        assert run("decompose", "--in", circle_csv, "--out", pyr_path,
                   "--family", f"stationary:{mask_path}", "--levels", 3) == 0
        doc = json.loads(pyr_path.read_text())
        assert doc["family"]["kind"] == "stationary"
        assert run("reconstruct", "--in", pyr_path, "--out", out_csv) == 0
        original = read_curve_csv(circle_csv)
        back = read_curve_csv(out_csv)
        assert np.abs(back.points - original.points).max() <= 1e-12

    def test_open_curve_rejected(self, tmp_path):
        path = tmp_path / "open.csv"
        path.write_text("# closed=false\n" + "".join(
            f"{float(i)!r},{float(i * i)!r}\n" for i in range(16)))
        code = run("decompose", "--in", path, "--out", tmp_path / "p.json")
        assert code == 3

    def test_finite_sequence_roundtrip(self, tmp_path, rng):
        seq_path = tmp_path / "seq.csv"
        values = rng.normal(size=50)
        seq_path.write_text(
            "".join(f"{i},{v!r}\n" for i, v in enumerate(map(float, values))))
        pyr_path = tmp_path / "p.json"
        out_path = tmp_path / "back.csv"
        assert run("decompose", "--in", seq_path, "--out", pyr_path,
                   "--family", "nscubic", "--levels", 2,
                   "--boundary", "finite") == 0
        assert run("reconstruct", "--in", pyr_path, "--out", out_path) == 0
        from nspyr import read_sequence_csv
        back = read_sequence_csv(out_path)
        err = max(abs(back[i] - v) for i, v in enumerate(map(float, values)))
        assert err <= 1e-12 * (1 + np.abs(values).max())


class TestGamma:
    def test_conic_level1_33_coefficients(self, tmp_path):
        outdir = tmp_path / "filters"
        assert run("gamma", "--family", "conic",
                   "--theta", 2 * math.pi / 16, "--levels", 2,
                   "--out", outdir) == 0
        meta = json.loads((outdir / "zeta_level_1.json").read_text())
        assert meta["nonzero_count"] == 33
        rows = (outdir / "zeta_level_1.csv").read_text().splitlines()
        assert rows[0] == "index,zeta,gamma_raw"
        assert len(rows) == 1 + 33

    def test_interpolating_single_unit_coefficient(self, tmp_path):
        outdir = tmp_path / "filters"
        run("gamma", "--family", "ns4pt", "--theta", 0.3, "--levels", 1,
            "--out", outdir)
        rows = (outdir / "zeta_level_1.csv").read_text().splitlines()
        assert len(rows) == 2
        idx, zeta, _ = rows[1].split(",")
        assert idx == "0" and float(zeta) == 1.0

    def test_cubic_bspline_center_coefficient(self, tmp_path):
        outdir = tmp_path / "filters"
        run("gamma", "--family", "nscubic", "--theta", 0.0, "--levels", 1,
            "--out", outdir)
        rows = (outdir / "zeta_level_1.csv").read_text().splitlines()[1:]
        center = {int(r.split(",")[0]): float(r.split(",")[1])
                  for r in rows}[0]
        assert center == pytest.approx(math.sqrt(2.0), abs=1e-12)


class TestDemos:
    def test_circle_demo(self, tmp_path):
        outdir = tmp_path / "demo"
        assert run("circle-demo", "--out", outdir) == 0
        report = json.loads((outdir / "circle_report.json").read_text())
        assert report["clean"]["verdict_scale"] <= 1e-8
        verdicts = [w["verdict_scale"] for w in report["wavy"]]
        assert verdicts[0] < verdicts[1] < verdicts[2]
        for name in ("clean_curve.svg", "log_l1.svg", "log_avg_l2.svg",
                     "wavy_curve.svg", "oscillating_details.svg"):
            text = (outdir / name).read_text()
            assert text.startswith("<svg")

    def test_anomaly_demo(self, tmp_path):
        outdir = tmp_path / "demo"
        assert run("anomaly-demo", "--out", outdir) == 0
        report = json.loads((outdir / "anomaly_report.json").read_text())
        assert len(report["ranges"]) == 1
        assert (outdir / "anomaly_curve.svg").exists()
        assert (outdir / "anomaly_details.svg").exists()

    def test_determinism(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        run("circle-demo", "--out", out1, "--n", 128, "--levels", 3)
        run("circle-demo", "--out", out2, "--n", 128, "--levels", 3)
        for name in sorted(p.name for p in out1.iterdir()):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


class TestConfigPrecedence:
    def test_flags_beat_config(self, tmp_path, circle_csv):
        config = tmp_path / "conf.json"
        config.write_text(json.dumps({"levels": 2, "epsilon": 1e-9}))
        pyr_path = tmp_path / "p.json"
        assert run("decompose", "--in", circle_csv, "--out", pyr_path,
                   "--config", config, "--levels", 4) == 0
        doc = json.loads(pyr_path.read_text())
        assert len(doc["details"]) == 4      # flag won
        assert doc["epsilon"] == 1e-9        # config used for the rest

    def test_invalid_epsilon_rejected(self, tmp_path, circle_csv):
        code = run("decompose", "--in", circle_csv,
                   "--out", tmp_path / "p.json", "--epsilon", 2.0)
        assert code == 3


def test_module_entry_point(tmp_path):
    import os
    env = dict(os.environ, NSPYR_LOG="info")
    result = subprocess.run(
        [sys.executable, "-m", "nspyr.cli", "gamma", "--family", "nscubic",
         "--theta", "0", "--levels", "1", "--out", str(tmp_path)],
        capture_output=True, text=True, env=env)
    assert result.returncode == 0
    assert (tmp_path / "zeta_level_1.json").exists()
    # NSPYR_LOG=info surfaces the per-level summary on stderr
    assert "nonzero coefficients" in result.stderr
