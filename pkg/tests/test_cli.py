import json
import os

import numpy as np
import pytest

from nonlocal_lwr import (
    Scenario,
    export_field,
    greenshields,
    make_grid,
    make_kernel,
    run,
)
from nonlocal_lwr.cli import main
from nonlocal_lwr.config import build_scenario, load_config, sweep_lists
from nonlocal_lwr.errors import ConfigError
from conftest import smooth_profile


def make_truth_csv(tmp_path):
    g = make_grid(0, 500, 5, 50, 0.1)
    initial = np.clip(smooth_profile(np.arange(50) * 10 + 5), 0, 1)
    scen = Scenario(
        grid=g, fd=greenshields(60.0), model="spatial",
        initial=initial, boundary=np.full(g.n_t + 1, initial[-1]),
        kernel=make_kernel("shifted_exponential", 40.0),
        strategy="continuous")
    res = run(scen)
    from nonlocal_lwr import DensityField
    truth = DensityField.allocate(g)
    truth.interior[:] = res.field.interior
    path = str(tmp_path / "truth.csv")
    export_field(truth, path)
    return path


BASE_CONFIG = """\
[grid]
a = 0
b = 500
T = 5
n = 50
dt = 0.1

[fd]
family = greenshields
v_f = 60

[model]
model = spatial

[kernel]
family = shifted_exponential
d_ft = 40

[boundary]
strategy = continuous

[io]
truth_csv = truth.csv
out_csv = reconstruction.csv
"""


def write_config(tmp_path, text=BASE_CONFIG, name="scenario.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestConfig:
    def test_build_scenario_from_truth(self, tmp_path):
        make_truth_csv(tmp_path)
        cp = load_config(write_config(tmp_path))
        scen, io = build_scenario(cp, str(tmp_path))
        assert scen.model == "spatial"
        assert scen.kernel.family == "shifted_exponential"
        assert io["truth_field"] is not None

    def test_missing_file(self):
        with pytest.raises(ConfigError):
            load_config("/nonexistent.ini")

    def test_missing_required_key(self, tmp_path):
        cp = load_config(write_config(
            tmp_path, BASE_CONFIG.replace("b = 500\n", "")))
        with pytest.raises(ConfigError):
            build_scenario(cp, str(tmp_path))

    def test_grid_mismatch_with_truth(self, tmp_path):
        make_truth_csv(tmp_path)
        cp = load_config(write_config(
            tmp_path, BASE_CONFIG.replace("n = 50", "n = 25")))
        with pytest.raises(ConfigError):
            build_scenario(cp, str(tmp_path))

    def test_missing_data_sources(self, tmp_path):
        cp = load_config(write_config(
            tmp_path, BASE_CONFIG.replace("truth_csv = truth.csv\n", "")))
        with pytest.raises(ConfigError):
            build_scenario(cp, str(tmp_path))

    def test_sweep_lists(self, tmp_path):
        cp = load_config(write_config(tmp_path, BASE_CONFIG + """
[sweep]
families = linear, exponential
lengths = 40, 100
strategies = continuous
models = spatial
"""))
        lists = sweep_lists(cp)
        assert lists["families"] == ["linear", "exponential"]
        assert lists["lengths"] == [40.0, 100.0]

    def test_sweep_requires_section(self, tmp_path):
        cp = load_config(write_config(tmp_path))
        with pytest.raises(ConfigError):
            sweep_lists(cp)


class TestSimulate:
    def test_end_to_end(self, tmp_path, capsys):
        make_truth_csv(tmp_path)
        cfg = write_config(tmp_path)
        out = str(tmp_path / "out")
        assert main(["--out-dir", out, "simulate", "--config", cfg]) == 0
        assert os.path.exists(os.path.join(out, "reconstruction.csv"))
        assert os.path.exists(os.path.join(out, "error_report.csv"))
        man = json.load(open(os.path.join(out, "manifest.json")))
        assert man["model"] == "spatial"
        assert man["cfl"] == pytest.approx(0.6)
        assert man["kernel"]["family"] == "shifted_exponential"
        assert man["er"] == pytest.approx(0.0, abs=1e-20)
        assert man["clamp_count"] == 0

    def test_deterministic_output(self, tmp_path):
        make_truth_csv(tmp_path)
        cfg = write_config(tmp_path)
        outs = []
        for name in ("out1", "out2"):
            out = str(tmp_path / name)
            assert main(["--out-dir", out, "simulate",
                         "--config", cfg]) == 0
            outs.append(open(os.path.join(
                out, "reconstruction.csv"), "rb").read())
        assert outs[0] == outs[1]

    def test_no_truth_no_error_report(self, tmp_path):
        make_truth_csv(tmp_path)
        # initial/boundary CSVs in place of truth
        g = make_grid(0, 500, 5, 50, 0.1)
        init = "\n".join(["x,rho"] + [f"{i*10+5},0.3" for i in range(50)])
        bnd = "\n".join(["t,rho"] + [f"{s*0.1},0.3"
                                     for s in range(g.n_t + 1)])
        (tmp_path / "init.csv").write_text(init + "\n")
        (tmp_path / "bnd.csv").write_text(bnd + "\n")
        cfg = write_config(tmp_path, BASE_CONFIG.replace(
            "truth_csv = truth.csv",
            "initial_csv = init.csv\nboundary_csv = bnd.csv"))
        out = str(tmp_path / "out")
        assert main(["--out-dir", out, "simulate", "--config", cfg]) == 0
        assert not os.path.exists(os.path.join(out, "error_report.csv"))

    def test_config_error_exit_2(self, tmp_path, capsys):
        code = main(["simulate", "--config", str(tmp_path / "missing.ini")])
        assert code == 2
        assert "ConfigError" in capsys.readouterr().err

    def test_cfl_error_exit_3(self, tmp_path, capsys):
        make_truth_csv(tmp_path)
        # dt = 0.2 on dx = 10 with v_f = 60 -> CFL 1.2; rebuild the truth
        # on that grid so the config check passes before the CFL check
        g = make_grid(0, 500, 5, 50, 0.2)
        from nonlocal_lwr import DensityField
        bad = DensityField.allocate(g, fill=0.3)
        export_field(bad, str(tmp_path / "truth2.csv"))
        cfg = write_config(tmp_path, BASE_CONFIG
                           .replace("dt = 0.1", "dt = 0.2")
                           .replace("truth_csv = truth.csv",
                                    "truth_csv = truth2.csv"))
        code = main(["--out-dir", str(tmp_path / "o"),
                     "simulate", "--config", cfg])
        assert code == 3
        assert "CFLError" in capsys.readouterr().err

    def test_data_error_exit_4(self, tmp_path, capsys):
        bad = tmp_path / "traj.csv"
        bad.write_text("Vehicle_ID,Frame_ID,Lane_ID\n1,0,1\n")
        cfg = write_config(tmp_path, BASE_CONFIG + f"""
[trajectories]
path = {bad}
lanes = 1
rho_m_physical = 0.2
""")
        code = main(["--out-dir", str(tmp_path / "o"),
                     "reconstruct", "--config", cfg])
        assert code == 4
        assert "FormatError" in capsys.readouterr().err


class TestSweep:
    def test_rows_and_isolation(self, tmp_path, capsys):
        make_truth_csv(tmp_path)
        cfg = write_config(tmp_path, BASE_CONFIG + """
[sweep]
families = linear, exponential
lengths = 40
strategies = continuous, known_thick
models = spatial
""")
        out = str(tmp_path / "out")
        assert main(["--out-dir", out, "--threads", "2",
                     "sweep", "--config", cfg]) == 0
        lines = open(os.path.join(out, "sweep_results.csv")).read() \
            .strip().splitlines()
        assert len(lines) == 1 + 4  # header + 2 families x 2 strategies
        assert all("er" in lines[0].split(",") for _ in [0])

    def test_failing_combination_isolated(self, tmp_path):
        make_truth_csv(tmp_path)
        # d = 5 < dx = 10 makes sample() fail for that combination only
        cfg = write_config(tmp_path, BASE_CONFIG + """
[sweep]
families = linear
lengths = 40, 5
strategies = continuous
models = spatial
""")
        out = str(tmp_path / "out")
        assert main(["--out-dir", out, "sweep", "--config", cfg]) == 0
        lines = open(os.path.join(out, "sweep_results.csv")).read() \
            .strip().splitlines()
        assert len(lines) == 3
        failed = [l for l in lines[1:] if l.endswith("DomainError")]
        assert len(failed) == 1


class TestKernelInfo:
    def test_smooth_constant(self, capsys):
        assert main(["kernel-info", "--family", "smooth_exponential",
                     "--d", "1", "--dx", "0.25"]) == 0
        out = capsys.readouterr().out
        k_line = [l for l in out.splitlines() if l.startswith("K:")][0]
        assert float(k_line.split(":")[1]) == pytest.approx(11.22, abs=0.1)

    def test_weights_normalized(self, capsys):
        assert main(["kernel-info", "--family", "exponential",
                     "--d", "40", "--dx", "10"]) == 0
        out = capsys.readouterr().out
        rows = [l.split(",") for l in out.splitlines()
                if l and l[0].isdigit()]
        assert len(rows) == 4
        total = sum(float(r[2]) for r in rows) * 10.0
        assert total == pytest.approx(1.0, abs=1e-14)

    def test_gamma_warning(self, capsys):
        assert main(["kernel-info", "--family", "exponential",
                     "--d", "40", "--dx", "10", "--gamma", "0.01"]) == 0
        out = capsys.readouterr().out
        assert "warning" in out and "gamma_max" in out

    def test_constant_has_no_beta(self, capsys):
        assert main(["kernel-info", "--family", "constant",
                     "--d", "40", "--dx", "10"]) == 0
        assert "beta: none" in capsys.readouterr().out


class TestReconstruct:
    def test_end_to_end(self, tmp_path):
        rng = np.random.default_rng(3)
        lines = [
            f"{v},{f},{float(rng.uniform(0, 500)):.2f},1"
            for f in range(51) for v in range(40)
        ]
        traj = tmp_path / "traj.csv"
        traj.write_text("Vehicle_ID,Frame_ID,Local_Y,Lane_ID\n"
                        + "\n".join(lines) + "\n")
        cfg = write_config(tmp_path, BASE_CONFIG
                           .replace("truth_csv = truth.csv\n", "")
                           .replace("model = spatial", "model = classical")
                           .replace("family = shifted_exponential\nd_ft = 40\n", "")
                           + f"""
[trajectories]
path = {traj}
lanes = 1
rho_m_physical = 0.2
""")
        out = str(tmp_path / "out")
        assert main(["--out-dir", out, "reconstruct",
                     "--config", cfg]) == 0
        assert os.path.exists(os.path.join(out, "truth.csv"))
        assert os.path.exists(os.path.join(out, "reconstruction.csv"))
        man = json.load(open(os.path.join(out, "manifest.json")))
        assert man["model"] == "classical"
        assert man["er"] is not None and man["er"] >= 0.0
