import math

import pytest

from polarpark.cli import (
    TRAJECTORY_HEADER,
    bundled_scenarios,
    main,
    parse_config,
    resolve_config,
)


def run_cli(*argv):
    return main(list(argv))


def read_csv(path):
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    return header, rows


class TestConfigErrors:
    def test_unknown_penalty_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("[s]\npenalty = Cubic\nic_polar = 1 0 0\n")
        assert run_cli("simulate", "--config", str(cfg), "--out", str(tmp_path)) == 2
        assert "unknown penalty" in capsys.readouterr().err

    def test_missing_sigma_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("[s]\npenalty = LogCosine\nv_bar = 1\nomega_bar = 1\n"
                       "ic_polar = 1 0 0\n")
        assert run_cli("simulate", "--config", str(cfg), "--out", str(tmp_path)) == 2
        assert "sigma" in capsys.readouterr().err

    def test_negative_dt_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("[s]\npenalty = Quadratic\nic_polar = 1 0 0\ndt = -0.001\n")
        assert run_cli("simulate", "--config", str(cfg), "--out", str(tmp_path)) == 2
        assert "dt" in capsys.readouterr().err

    def test_missing_ic_exits_2(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("[s]\npenalty = Quadratic\n")
        assert run_cli("simulate", "--config", str(cfg), "--out", str(tmp_path)) == 2

    def test_unknown_config_name_exits_2(self, tmp_path):
        assert run_cli("simulate", "--config", "no-such-thing",
                       "--out", str(tmp_path)) == 2

    def test_invalid_ic_exits_2(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("[s]\npenalty = Quadratic\nic_cartesian = 0 0 0\n")
        assert run_cli("simulate", "--config", str(cfg), "--out", str(tmp_path)) == 2


class TestBundled:
    def test_listing(self):
        names = bundled_scenarios()
        assert "ex1_quadratic" in names
        assert "adaptive_fig4" in names
        assert resolve_config("ex1_quadratic").is_file()

    def test_parse_all_bundled(self):
        for name in bundled_scenarios():
            scenarios = parse_config(resolve_config(name))
            assert scenarios


class TestSimulate:
    def test_benchmark_run_first_row(self, tmp_path):
        out = tmp_path / "out"
        assert run_cli("simulate", "--config", "ex1_quadratic", "--out", str(out),
                       "--t-max", "0.5", "--quiet") == 0
        header, rows = read_csv(out / "ex1-quadratic.csv")
        assert ",".join(header) == TRAJECTORY_HEADER
        first = dict(zip(header, rows[0]))
        assert float(first["t"]) == 0.0
        assert float(first["v"]) == pytest.approx(-7.950999333853338, rel=1e-15)
        assert float(first["omega"]) == pytest.approx(-4.404219909268705, rel=1e-15)
        assert first["eps1_hat"] == "" and first["eps2_hat"] == ""
        summary_header, summary_rows = read_csv(out / "summary.csv")
        assert summary_rows[0][summary_header.index("terminal_reason")] == "horizon"

    def test_byte_identical_reruns(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for out in (out1, out2):
            assert run_cli("simulate", "--config", "ex1_quadratic", "--out", str(out),
                           "--t-max", "2", "--quiet") == 0
        assert (out1 / "ex1-quadratic.csv").read_bytes() == \
            (out2 / "ex1-quadratic.csv").read_bytes()
        assert (out1 / "summary.csv").read_bytes() == (out2 / "summary.csv").read_bytes()

    def test_penalty_grids(self, tmp_path):
        out = tmp_path / "grids"
        assert run_cli("simulate", "--config", "penalty_grids", "--out", str(out),
                       "--quiet") == 0
        for name in ("grid-quadratic", "grid-cosh", "grid-logcos", "grid-relay"):
            header, rows = read_csv(out / f"{name}.csv")
            assert header == ["r", "eta", "eta_prime", "inv_eta_prime", "lf", "lf_over_r"]
            assert len(rows) == 301
        _, rows = read_csv(out / "grid-relay.csv")
        beyond = [r for r in rows if float(r[0]) >= 1.0]
        assert beyond and all(r[1] == "" for r in beyond)
        assert all(r[3] != "" for r in rows)

    def test_rejects_adaptive_sections(self, tmp_path):
        assert run_cli("simulate", "--config", "adaptive_fig4",
                       "--out", str(tmp_path)) == 2

    def test_exit_3_when_convergence_required(self, tmp_path, capsys):
        cfg = tmp_path / "s.cfg"
        cfg.write_text("[s]\npenalty = Quadratic\nvariant = optimal\n"
                       "ic_polar = 1 0.5 0.5\nt_max = 0.5\n"
                       "require_convergence = true\n")
        out = tmp_path / "out"
        assert run_cli("simulate", "--config", str(cfg), "--out", str(out),
                       "--quiet") == 3
        assert (out / "summary.csv").exists()


class TestSweepCompareAdaptiveProbe:
    def test_sweep_fan(self, tmp_path):
        out = tmp_path / "fan"
        assert run_cli("sweep", "--config", "fan", "--out", str(out),
                       "--t-max", "0.2", "--quiet") == 0
        for i in range(5):
            assert (out / f"fan__ic{i:02d}.csv").exists()
        _, rows = read_csv(out / "summary.csv")
        assert len(rows) == 5

    def test_sweep_rejects_single_state_scenarios(self, tmp_path):
        assert run_cli("sweep", "--config", "ex1_quadratic",
                       "--out", str(tmp_path)) == 2

    def test_compare_effort(self, tmp_path):
        out = tmp_path / "cmp"
        assert run_cli("compare", "--config", "effort_compare", "--out", str(out),
                       "--t-max", "0.3", "--quiet") == 0
        names = [r[0] for r in read_csv(out / "summary.csv")[1]]
        assert names == ["effort-quadratic", "effort-cosh"]

    def test_adaptive_writes_estimates(self, tmp_path):
        out = tmp_path / "adapt"
        assert run_cli("adaptive", "--config", "adaptive_fig4", "--out", str(out),
                       "--t-max", "2", "--quiet") == 0
        header, rows = read_csv(out / "fig4-adaptive-mu05.csv")
        i1 = header.index("eps1_hat")
        assert rows[0][i1] == "0"
        assert float(rows[-1][i1]) > 0.5
        sh, srows = read_csv(out / "summary.csv")
        byname = {r[0]: r for r in srows}
        peak_v = sh.index("peak_v")
        assert float(byname["fig4-adaptive-mu05"][peak_v]) < \
            float(byname["fig4-baseline"][peak_v])

    def test_adaptive_requires_adaptive_section(self, tmp_path):
        assert run_cli("adaptive", "--config", "ex1_quadratic",
                       "--out", str(tmp_path)) == 2

    def test_probe_argmin_at_unit_gain(self, tmp_path):
        cfg = tmp_path / "p.cfg"
        cfg.write_text("[p]\npenalty = Quadratic\nvariant = optimal\n"
                       "ic_polar = 1.0 -1.5707963267948966 -1.5707963267948966\n"
                       "kappa_grid = 0.5 1 2\ndt = 0.002\nt_max = 20\n")
        out = tmp_path / "probe"
        assert run_cli("probe", "--config", str(cfg), "--out", str(out),
                       "--quiet") == 0
        header, rows = read_csv(out / "summary.csv")
        ik, ij = header.index("kappa"), header.index("J")
        best = min(rows, key=lambda r: float(r[ij]))
        assert float(best[ik]) == 1.0

    def test_probe_requires_kappa_grid(self, tmp_path):
        assert run_cli("probe", "--config", "ex1_quadratic",
                       "--out", str(tmp_path)) == 2
