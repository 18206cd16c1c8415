import json
import math

import numpy as np
import pytest

from drivenlattice.cli import main
from drivenlattice.model import profile_to_dict, Bichromatic
from drivenlattice.specialfn import bessel_j


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# command=")
    header = lines[1].split(",")
    rows = [
        [float(v) if v != "nan" else math.nan for v in line.split(",")]
        for line in lines[2:]
    ]
    return header, np.array(rows)


class TestGammaScan:
    def test_mono_reduction_slice(self, tmp_path):
        out = tmp_path / "scan.csv"
        code = main([
            "gamma-scan", "--p", "1", "--q", "2", "--n", "1",
            "--grid=-8:8:33", "--v", "0.0", "--out", str(out),
        ])
        assert code == 0
        header, rows = read_csv(out)
        assert header == ["u", "v", "re_gamma", "im_gamma", "abs_gamma"]
        for u, v, re, im, mag in rows:
            assert v == 0.0
            assert re == pytest.approx(2.0 * bessel_j(1, u), abs=1e-12)
            assert im == 0.0
            assert mag == pytest.approx(abs(re), abs=1e-15)

    def test_surface_contains_nodal_line(self, tmp_path):
        out = tmp_path / "surface.csv"
        code = main([
            "gamma-scan", "--p", "1", "--q", "2", "--n", "1",
            "--grid=-7:-6:21,0.9:1.1:3", "--out", str(out),
        ])
        assert code == 0
        _, rows = read_csv(out)
        mid = rows[np.isclose(rows[:, 1], 1.0)]
        assert len(mid) == 21
        assert np.min(mid[:, 2]) < 0 < np.max(mid[:, 2])

    def test_non_resonant_tuple_is_config_error(self, tmp_path, capsys):
        code = main([
            "gamma-scan", "--p", "2", "--q", "4", "--n", "3",
            "--grid=-1:1:3", "--out", str(tmp_path / "x.csv"),
        ])
        assert code == 2
        assert "not resonant" in capsys.readouterr().err

    def test_bad_grid_is_config_error(self, tmp_path, capsys):
        code = main([
            "gamma-scan", "--p", "1", "--q", "2", "--n", "1",
            "--grid", "nonsense", "--out", str(tmp_path / "x.csv"),
        ])
        assert code == 2

    def test_reruns_are_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["gamma-scan", "--p", "1", "--q", "2", "--n", "29",
                "--grid", "0:8:41", "--v", "-20.0"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestPropagate:
    def test_trajectory_columns(self, tmp_path):
        out = tmp_path / "traj.csv"
        code = main([
            "propagate", "--u", "-6.49", "--v", "1.0", "--sigma", "5",
            "--kappa0", "0.0", "--periods", "2", "--samples-per-period", "2",
            "--overlay", "--out", str(out),
        ])
        assert code == 0
        header, rows = read_csv(out)
        assert header[:4] == ["t", "mean_n", "var_n", "norm"]
        assert "mean_n_closed" in header and "gamma_t" in header
        assert np.allclose(rows[:, 3], 1.0, atol=1e-10)
        closed = rows[:, header.index("mean_n_closed")]
        assert np.allclose(rows[:, 1], closed, atol=1e-6)

    def test_snapshots_written(self, tmp_path):
        out = tmp_path / "traj.csv"
        snaps = tmp_path / "snaps.csv"
        code = main([
            "propagate", "--u", "-4.68", "--v", "1.0", "--sigma", "4",
            "--periods", "1", "--samples-per-period", "1",
            "--snapshots", str(snaps), "--out", str(out),
        ])
        assert code == 0
        header, rows = read_csv(snaps)
        assert header == ["t", "l", "abs2"]
        t0 = rows[rows[:, 0] == 0.0]
        assert t0[:, 2].sum() == pytest.approx(1.0, abs=1e-9)

    def test_profile_file_input(self, tmp_path):
        prof = Bichromatic.resonant(1, 2, 1, u=-4.68, v=1.0)
        pfile = tmp_path / "profile.json"
        pfile.write_text(json.dumps(profile_to_dict(prof)))
        out = tmp_path / "traj.csv"
        code = main([
            "propagate", "--profile", str(pfile), "--sigma", "4",
            "--periods", "1", "--samples-per-period", "1", "--out", str(out),
        ])
        assert code == 0

    def test_bad_profile_json_is_config_error(self, tmp_path, capsys):
        pfile = tmp_path / "profile.json"
        pfile.write_text('{"type": "triangle"}')
        code = main([
            "propagate", "--profile", str(pfile), "--out", str(tmp_path / "t.csv"),
        ])
        assert code == 2


class TestZeros:
    def test_mono_first_j1_zero(self, tmp_path):
        out = tmp_path / "zeros.csv"
        code = main([
            "zeros", "--family", "mono", "--mu", "1",
            "--range", "3:4.5:1", "--out", str(out),
        ])
        assert code == 0
        _, rows = read_csv(out)
        assert len(rows) == 1
        assert rows[0][1] == pytest.approx(3.8317, abs=1e-3)

    def test_bichromatic_with_asymptotics(self, tmp_path):
        out = tmp_path / "zeros.csv"
        code = main([
            "zeros", "--family", "bichromatic", "--p", "1", "--q", "2",
            "--n", "29", "--v", "-20.0", "--range", "0.5:8:1", "--out", str(out),
        ])
        assert code == 0
        header, rows = read_csv(out)
        assert header == ["index", "u_zero", "u_asymptotic"]
        assert rows[0][1] == pytest.approx(3.37, abs=0.01)
        assert rows[1][1] == pytest.approx(6.75, abs=0.01)
        assert rows[0][2] == pytest.approx(3.38, abs=0.01)
        assert rows[1][2] == pytest.approx(6.77, abs=0.01)

    def test_flipped_zeros_at_full_turns(self, tmp_path):
        out = tmp_path / "zeros.csv"
        code = main([
            "zeros", "--family", "flipped", "--range", "1:14:1", "--out", str(out),
        ])
        assert code == 0
        _, rows = read_csv(out)
        assert [round(z / (2 * math.pi), 6) for z in rows[:, 1]] == [1.0, 2.0]


class TestClassify:
    def test_verdicts(self, capsys):
        assert main(["classify", "--ratio21", "irrational", "--ratioB1", "1/1"]) == 0
        assert "verdict: localized" in capsys.readouterr().out

        assert main(["classify", "--ratio21", "2/1", "--ratioB1", "1/1"]) == 0
        out = capsys.readouterr().out
        assert "verdict: transport" in out
        doc = json.loads(out.splitlines()[-1])
        assert doc["resonance"]["resonant"] is True

        assert main(["classify", "--ratio21", "2/1", "--ratioB1", "1/3"]) == 0
        assert "verdict: localized" in capsys.readouterr().out

    def test_bad_ratio_is_config_error(self, capsys):
        assert main(["classify", "--ratio21", "pi", "--ratioB1", "1/1"]) == 2


class TestContinuum:
    def test_band_only(self, capsys):
        assert main(["continuum", "--band-only", "--v0", "0.125"]) == 0
        doc = json.loads(capsys.readouterr().out.strip())
        assert doc["band_width"] == pytest.approx(0.0741, rel=0.02)

    def test_zero_amplitude_is_config_error(self, capsys):
        assert main(["continuum", "--famp", "0"]) == 2
