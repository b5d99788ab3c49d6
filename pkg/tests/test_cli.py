"""Command-line surface: exit codes, file formats, determinism."""

import json

import numpy as np

from biharwave.cli import main

NR2D = {"dimension": 2, "R": 1.0, "root_index": 1, "kind": "bessel_nonradiating"}
GAUSS2D = {
    "dimension": 2,
    "R": 1.0,
    "root_index": 1,
    "kind": "gaussian",
    "parameters": {"center": [0.25, 0.0], "sigma": 0.1, "support_radius": 0.9},
}
ZERO2D = {"dimension": 2, "R": 1.0, "kappa": 2.0, "kind": "zero"}


def _write(tmp_path, name, cfg):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def _data_lines(path):
    lines = path.read_text().splitlines()
    meta = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    return meta, body[0].split(","), [ln.split(",") for ln in body[1:]]


class TestVerdictCommand:
    def test_nonradiating_report(self, tmp_path):
        cfg = _write(tmp_path, "nr.json", NR2D)
        out = tmp_path / "report.json"
        assert main(["verdict", "--config", cfg, "--out", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["is_nonradiating"] is True
        assert report["config_sha256"]
        assert report["biharwave_version"]

    def test_radiating_report_still_exits_zero(self, tmp_path):
        cfg = _write(tmp_path, "g.json", GAUSS2D)
        out = tmp_path / "report.json"
        assert main(["verdict", "--config", cfg, "--out", str(out)]) == 0
        assert json.loads(out.read_text())["is_nonradiating"] is False

    def test_malformed_config_names_key(self, tmp_path, capsys):
        bad = dict(ZERO2D, R=-1.0)
        cfg = _write(tmp_path, "bad.json", bad)
        assert main(["verdict", "--config", cfg]) == 1
        assert "'R'" in capsys.readouterr().err

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = _write(tmp_path, "bad.json", dict(ZERO2D, shape="round"))
        assert main(["verdict", "--config", cfg]) == 1
        assert "shape" in capsys.readouterr().err

    def test_missing_file(self, capsys):
        assert main(["verdict", "--config", "/nonexistent/conf.json"]) == 1


class TestTraceCommand:
    def test_row_count_matches_resolution(self, tmp_path):
        cfg = _write(tmp_path, "g.json", GAUSS2D)
        out = tmp_path / "trace.csv"
        assert main(["trace", "--config", cfg, "--out", str(out), "--resolution", "48"]) == 0
        meta, header, rows = _data_lines(out)
        assert len(rows) == 48
        assert header[0] == "theta"
        assert any("config_sha256" in m for m in meta)

    def test_zero_source_all_zero(self, tmp_path):
        cfg = _write(tmp_path, "z.json", ZERO2D)
        out = tmp_path / "trace.csv"
        assert main(["trace", "--config", cfg, "--out", str(out), "--resolution", "16"]) == 0
        _, _, rows = _data_lines(out)
        data = np.array([[float(v) for v in row[1:]] for row in rows])
        assert np.all(data == 0.0)

    def test_nonradiating_trace_dark(self, tmp_path):
        cfg = _write(tmp_path, "nr.json", NR2D)
        out = tmp_path / "trace.csv"
        assert main(["trace", "--config", cfg, "--out", str(out), "--resolution", "16"]) == 0
        _, _, rows = _data_lines(out)
        data = np.array([[float(v) for v in row[1:]] for row in rows])
        assert np.max(np.abs(data)) < 1e-8

    def test_byte_identical_reruns(self, tmp_path):
        cfg = _write(tmp_path, "g.json", GAUSS2D)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["trace", "--config", cfg, "--out", str(out1), "--resolution", "16"])
        main(["trace", "--config", cfg, "--out", str(out2), "--resolution", "16"])
        assert out1.read_bytes() == out2.read_bytes()


class TestSpectralCommand:
    def test_columns_and_identity_column(self, tmp_path):
        cfg = _write(tmp_path, "g.json", GAUSS2D)
        out = tmp_path / "spec.csv"
        assert main([
            "spectral", "--config", cfg, "--out", str(out),
            "--directions", "16", "--resolution", "128",
        ]) == 0
        _, header, rows = _data_lines(out)
        assert header[-1] == "fhat_minus_uhat_abs"
        assert len(rows) == 16
        gap = np.array([float(r[-1]) for r in rows])
        assert np.max(gap) < 1e-6 * 0.177  # 1e-6 relative; this source's norm is ~0.177

    def test_nonradiating_spectrum_dark(self, tmp_path):
        cfg = _write(tmp_path, "nr.json", NR2D)
        out = tmp_path / "spec.csv"
        assert main([
            "spectral", "--config", cfg, "--out", str(out),
            "--directions", "8", "--resolution", "64",
        ]) == 0
        _, header, rows = _data_lines(out)
        data = np.array([[float(v) for v in row[1:]] for row in rows])
        assert np.max(np.abs(data)) < 1e-8 * 62.4  # 1e-8 relative; norm is ~62.4

    def test_3d_has_two_angle_columns(self, tmp_path):
        cfg = _write(
            tmp_path, "g3.json",
            {"dimension": 3, "R": 1.0, "root_index": 1, "kind": "gaussian",
             "parameters": {"center": [0.2, 0.1, 0.15], "sigma": 0.1,
                             "support_radius": 0.9}},
        )
        out = tmp_path / "spec3.csv"
        assert main([
            "spectral", "--config", cfg, "--out", str(out),
            "--directions", "16", "--resolution", "16",
        ]) == 0
        _, header, rows = _data_lines(out)
        assert header[:2] == ["dir_angle", "dir_polar"]
        assert len(rows) >= 16


class TestNonuniquenessCommand:
    def test_invisible_perturbation_report(self, tmp_path):
        cfg_f = _write(tmp_path, "f.json", GAUSS2D)
        cfg_g = _write(tmp_path, "g.json", NR2D)
        out = tmp_path / "demo.json"
        assert main([
            "nonuniqueness", "--config", cfg_f, "--config-g", cfg_g, "--out", str(out),
        ]) == 0
        report = json.loads(out.read_text())
        total = report["norm_f"] + report["norm_g"]
        assert report["max_trace_discrepancy"] < 1e-8 * total
        assert report["verdict_g"]["is_nonradiating"] is True

    def test_radiating_perturbation_rejected(self, tmp_path, capsys):
        cfg_f = _write(tmp_path, "f.json", GAUSS2D)
        cfg_g = _write(tmp_path, "g.json", GAUSS2D)
        assert main(["nonuniqueness", "--config", cfg_f, "--config-g", cfg_g]) == 1
        assert "radiates" in capsys.readouterr().err


class TestFieldCommand:
    def test_field_table(self, tmp_path):
        cfg = _write(tmp_path, "g.json", GAUSS2D)
        out = tmp_path / "field.csv"
        assert main([
            "field", "--config", cfg, "--out", str(out),
            "--radii", "1.2,2.0", "--directions", "8",
        ]) == 0
        _, header, rows = _data_lines(out)
        assert header[0] == "radius"
        assert len(rows) == 2 * 8
        u = np.array([complex(float(r[2]), float(r[3])) for r in rows])
        assert np.max(np.abs(u)) > 0
