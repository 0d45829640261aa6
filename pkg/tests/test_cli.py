"""CLI subcommands driven in-process through main(argv)."""

import io
import json

import numpy as np
import pytest

import mktinfo.cli as cli
from mktinfo.information import profile_from_prices, profile_to_json
from mktinfo.scaling import estimate_hurst
from mktinfo.series import load_prices
from mktinfo.simulate import NumericError
from mktinfo.theory import info_delampertized, info_fbm


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSimulate:
    def test_fbm_csv_shape(self, capsys):
        code, out, err = run(capsys, "simulate", "fbm", "--hurst", "0.7",
                             "--sigma", "0.01", "--n", "50", "--seed", "1")
        assert code == 0 and err == ""
        lines = out.strip().split("\n")
        assert lines[0] == "# model=fbm hurst=0.7 sigma=0.01 n=50 dt=1.0 seed=1 p0=100.0"
        assert lines[1] == "timestamp,close"
        assert len(lines) == 2 + 50
        assert float(lines[2].split(",")[1]) == 100.0

    def test_output_roundtrips_through_loader(self, capsys, tmp_path):
        dest = tmp_path / "sim.csv"
        code, out, _ = run(capsys, "simulate", "fbm", "--sigma", "0.02",
                           "--n", "64", "--seed", "5", "-o", str(dest))
        assert code == 0 and out == ""
        prices = load_prices(dest)
        assert len(prices) == 64
        assert np.all(prices.prices > 0.0)

    def test_pseudo_periodic_defaults_are_positive(self, capsys):
        # unit-variance toy returns are rescaled so compounding stays valid
        code, out, _ = run(capsys, "simulate", "pseudo-periodic",
                           "--n", "3000", "--seed", "0")
        assert code == 0
        lines = out.strip().split("\n")
        assert "sigma=0.01" in lines[0]
        vals = np.array([float(l.split(",")[1]) for l in lines[2:]])
        assert vals.shape == (3001,)
        assert np.all(vals > 0.0)

    def test_pseudo_periodic_sigma_override(self, capsys):
        _, out_a, _ = run(capsys, "simulate", "pseudo-periodic", "--n", "10",
                          "--seed", "3")
        _, out_b, _ = run(capsys, "simulate", "pseudo-periodic", "--n", "10",
                          "--seed", "3", "--sigma", "0.005")
        ra = np.diff(np.log([float(l.split(",")[1]) for l in out_a.strip().split("\n")[2:]]))
        rb = np.diff(np.log([float(l.split(",")[1]) for l in out_b.strip().split("\n")[2:]]))
        # same signs, smaller magnitude
        np.testing.assert_array_equal(np.sign(ra), np.sign(rb))
        assert np.all(np.abs(rb) < np.abs(ra))

    def test_delampertized_runs(self, capsys):
        code, out, _ = run(capsys, "simulate", "delampertized", "--hurst", "0.3",
                           "--theta", "2.0", "--sigma", "0.01", "--n", "32",
                           "--seed", "7")
        assert code == 0
        assert out.startswith("# model=delampertized hurst=0.3 theta=2.0")

    def test_numeric_failure_exit_code(self, capsys, monkeypatch):
        def boom(*a, **k):
            raise NumericError("covariance not factorizable")
        monkeypatch.setattr(cli, "simulate_fbm", boom)
        code, _, err = run(capsys, "simulate", "fbm", "--n", "16")
        assert code == 4
        assert err.startswith("error: covariance not factorizable")


@pytest.fixture()
def price_file(tmp_path, capsys):
    dest = tmp_path / "prices.csv"
    assert cli.main(["simulate", "fbm", "--hurst", "0.7", "--sigma", "0.01",
                     "--n", "400", "--seed", "2", "-o", str(dest)]) == 0
    capsys.readouterr()
    return dest


class TestAnalyze:
    def test_json_matches_library(self, price_file, capsys):
        code, out, _ = run(capsys, "analyze", str(price_file),
                           "--L-max", "3", "--m-values", "1", "2")
        assert code == 0
        doc = json.loads(out)
        ep, ip = profile_from_prices(load_prices(price_file), 3, (1, 2), 0.95)
        assert doc == json.loads(profile_to_json(ep, ip))
        assert doc["n"] == 399
        assert doc["bounds"][0] == [None, None]

    def test_csv_format(self, price_file, capsys):
        code, out, _ = run(capsys, "analyze", str(price_file), "--L-max", "2",
                           "--m-values", "1", "--format", "csv")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[1] == "L,m,H,I,partial,bound"
        assert len(lines) == 2 + 3

    def test_stdin(self, price_file, capsys, monkeypatch):
        monkeypatch.setattr(cli.sys, "stdin", io.StringIO(price_file.read_text()))
        code, out, _ = run(capsys, "analyze", "-", "--L-max", "2")
        assert code == 0
        assert json.loads(out)["L_max"] == 2

    def test_missing_file_is_data_error(self, capsys, tmp_path):
        code, _, err = run(capsys, "analyze", str(tmp_path / "nope.csv"))
        assert code == 3
        assert err.startswith("error:")

    def test_bad_column_is_data_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("time,open\n1,3\n2,4\n")
        code, _, err = run(capsys, "analyze", str(bad))
        assert code == 3
        assert "missing required column" in err

    def test_bad_confidence_is_data_error(self, price_file, capsys):
        code, _, err = run(capsys, "analyze", str(price_file),
                           "--confidence", "1.5")
        assert code == 3
        assert "confidence" in err

    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["analyze"])  # missing input
        assert exc.value.code == 2
        capsys.readouterr()


class TestTheory:
    def test_fbm_grid_values(self, capsys):
        code, out, _ = run(capsys, "theory", "fbm", "--hurst-min", "0.1",
                           "--hurst-max", "0.9", "--hurst-step", "0.1")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "# model=fbm"
        rows = [l.split(",") for l in lines[2:]]
        assert len(rows) == 9
        for h, i2 in rows:
            assert float(i2) == pytest.approx(info_fbm(float(h)), rel=1e-12)

    def test_delampertized_multi_theta_json(self, capsys):
        code, out, _ = run(capsys, "theory", "delampertized", "--theta", "0.1",
                           "15", "--m", "1", "--hurst-min", "0.25",
                           "--hurst-max", "0.75", "--hurst-step", "0.25",
                           "--format", "json")
        assert code == 0
        docs = json.loads(out)
        assert len(docs) == 2
        assert docs[1]["fixed_params"]["theta"] == 15.0
        assert docs[1]["I2"][1] == pytest.approx(info_delampertized(0.5, 1.0, 15.0))

    def test_default_grid_avoids_endpoints(self, capsys):
        code, out, _ = run(capsys, "theory", "fbm")
        assert code == 0
        first = float(out.strip().split("\n")[2].split(",")[0])
        assert first == pytest.approx(0.05)


class TestHurst:
    def test_json_matches_library(self, price_file, capsys):
        code, out, _ = run(capsys, "hurst", str(price_file), "--max-scale", "10")
        assert code == 0
        doc = json.loads(out)
        want = estimate_hurst(np.log(load_prices(price_file).prices), range(1, 11))
        assert doc["hurst_estimate"] == pytest.approx(want.hurst_estimate, rel=1e-15)
        assert doc["scales"] == list(range(1, 11))

    def test_explicit_scales_and_csv(self, price_file, capsys):
        code, out, _ = run(capsys, "hurst", str(price_file), "--scales", "1",
                           "2", "4", "8", "--fit-min", "1", "--fit-max", "8",
                           "--format", "csv")
        assert code == 0
        lines = out.strip().split("\n")
        assert "fit_range=1..8" in lines[0]
        assert len(lines) == 2 + 4

    def test_narrow_fit_range_is_data_error(self, price_file, capsys):
        code, _, err = run(capsys, "hurst", str(price_file), "--scales", "1",
                           "6", "--fit-min", "2", "--fit-max", "5")
        assert code == 3
        assert "fewer than 2 scales" in err


class TestEndToEnd:
    def test_simulate_analyze_hurst_pipeline(self, capsys, tmp_path):
        dest = tmp_path / "pp.csv"
        assert cli.main(["simulate", "pseudo-periodic", "--beta", "-0.9",
                         "--tau", "5", "--n", "2000", "--seed", "4",
                         "-o", str(dest)]) == 0
        code, out, _ = run(capsys, "analyze", str(dest), "--L-max", "7",
                           "--m-values", "1")
        assert code == 0
        doc = json.loads(out)
        partial = [row[0] for row in doc["partial"][1:]]
        # the lag-5 recursion shows up as a partial-information peak at
        # word order 6 (five conditioning lags)
        assert int(np.argmax(partial)) + 2 == 6

        code, out, _ = run(capsys, "hurst", str(dest), "--max-scale", "12")
        assert code == 0
        doc = json.loads(out)
        assert max(abs(v) for v in doc["second_differences"]) > 0.05
