import json

import numpy as np
import pytest

from switchsync import cli


class TestSynthesizeVerify:
    def test_degenerate_range_end_to_end(self, tmp_path):
        # a single-parameter problem solves quickly and exercises the
        # whole synthesize -> verify pipeline
        out = tmp_path / "cert.json"
        code = cli.main(
            ["synthesize", "--alpha-min", "0", "--alpha-max", "0", "--out", str(out)]
        )
        assert code == 0
        assert out.exists()
        assert cli.main(["verify", "--cert", str(out)]) == 0

    def test_verify_full_certificate(self, cert_file):
        assert cli.main(["verify", "--cert", str(cert_file)]) == 0

    def test_verify_custom_grid(self, cert_file):
        assert cli.main(["verify", "--cert", str(cert_file), "--grid", "11"]) == 0

    def test_verify_tampered_certificate(self, cert_file, tmp_path, capsys):
        doc = json.loads(cert_file.read_text())
        doc["P"] = (-np.eye(3)).tolist()
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        assert cli.main(["verify", "--cert", str(bad)]) == 1
        assert "FAILED" in capsys.readouterr().err


class TestSimulate:
    def test_writes_csv_and_metrics(self, cert_file, tmp_path):
        out = tmp_path / "run.csv"
        metrics = tmp_path / "metrics.json"
        code = cli.main(
            [
                "simulate",
                "--scenario",
                "step",
                "--cert",
                str(cert_file),
                "--t-end",
                "2",
                "--out",
                str(out),
                "--metrics",
                str(metrics),
            ]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("t,x_m")
        assert len(lines) == 202  # header + (t_end/dt)/stride + 1 rows
        doc = json.loads(metrics.read_text())
        assert "final_error" in doc

    def test_refuses_bad_certificate(self, cert_file, tmp_path):
        doc = json.loads(cert_file.read_text())
        doc["P"] = (-np.eye(3)).tolist()
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        code = cli.main(
            ["simulate", "--scenario", "step", "--cert", str(bad), "--out", str(tmp_path / "x.csv")]
        )
        assert code == 1

    def test_unknown_scenario_is_usage_error(self, cert_file, tmp_path):
        with pytest.raises(SystemExit) as exc:
            cli.main(
                ["simulate", "--scenario", "vortex", "--cert", str(cert_file), "--out", str(tmp_path / "x.csv")]
            )
        assert exc.value.code == 2

    def test_missing_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            cli.main([])
        assert exc.value.code == 2
