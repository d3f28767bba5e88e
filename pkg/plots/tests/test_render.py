import os
import subprocess
import sys
from pathlib import Path

import pytest

from subdivlab_plots import PlotSpec, SchemaError, render

DATA = Path(__file__).parent / "data"
SCAN = DATA / "scan_golden.csv"
EXPONENTS = DATA / "exponents_golden.csv"
EXPONENTS_PLAIN = DATA / "exponents_plain_golden.csv"


class TestRender:
    @pytest.mark.parametrize("kind,csv_path", [
        ("scan-ratio", SCAN),
        ("exponents", EXPONENTS),
        ("exponents", EXPONENTS_PLAIN),
    ])
    def test_renders_golden(self, kind, csv_path, tmp_path):
        out = tmp_path / "fig.png"
        render(PlotSpec(str(csv_path), kind, str(out)))
        data = out.read_bytes()
        assert data[:8] == b"\x89PNG\r\n\x1a\n"
        assert len(data) > 5000

    @pytest.mark.parametrize("kind,csv_path", [
        ("scan-ratio", SCAN),
        ("exponents", EXPONENTS),
    ])
    def test_byte_stable_across_two_runs(self, kind, csv_path, tmp_path):
        out1 = tmp_path / "a.png"
        out2 = tmp_path / "b.png"
        render(PlotSpec(str(csv_path), kind, str(out1)))
        render(PlotSpec(str(csv_path), kind, str(out2)))
        assert out1.read_bytes() == out2.read_bytes()


class TestSchemaErrors:
    def test_unknown_kind(self):
        with pytest.raises(SchemaError):
            PlotSpec(str(SCAN), "pie", "x.png")

    def test_missing_columns(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        with pytest.raises(SchemaError):
            render(PlotSpec(str(bad), "scan-ratio", str(tmp_path / "x.png")))

    def test_empty_file(self, tmp_path):
        bad = tmp_path / "empty.csv"
        bad.write_text("")
        with pytest.raises(SchemaError):
            render(PlotSpec(str(bad), "exponents", str(tmp_path / "x.png")))

    def test_header_only(self, tmp_path):
        bad = tmp_path / "hdr.csv"
        bad.write_text("s,grid_x_exponent,grid_y_exponent,grid_total_exponent\n")
        with pytest.raises(SchemaError):
            render(PlotSpec(str(bad), "exponents", str(tmp_path / "x.png")))

    def test_missing_file(self, tmp_path):
        with pytest.raises(SchemaError):
            render(PlotSpec(str(tmp_path / "nope.csv"), "exponents",
                            str(tmp_path / "x.png")))


class TestCli:
    def test_render_and_error_exit_codes(self, tmp_path):
        out = tmp_path / "fig.png"
        env = dict(os.environ, MPLBACKEND="Agg")
        ok = subprocess.run(
            [sys.executable, "-m", "subdivlab_plots.cli", "render",
             "--kind", "scan-ratio", "--in", str(SCAN), "--out", str(out)],
            capture_output=True, env=env)
        assert ok.returncode == 0 and out.exists()
        bad = subprocess.run(
            [sys.executable, "-m", "subdivlab_plots.cli", "render",
             "--kind", "scan-ratio", "--in", str(EXPONENTS), "--out",
             str(tmp_path / "y.png")],
            capture_output=True, env=env)
        assert bad.returncode == 2
        assert b"missing columns" in bad.stderr
