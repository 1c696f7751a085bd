import json
import math

import numpy as np
import pytest

from oscillent import cli
from oscillent.errors import NumericalConsistencyError


def run_json(capsys, argv):
    code = cli.run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestPurityCommand:
    def test_number_state_g1(self, capsys):
        code, rec = run_json(capsys, ["purity", "--g", "1", "--mu1", "0.5",
                                      "--state", "number:0,1", "--method", "exact"])
        assert code == 0
        assert rec["purity"] == pytest.approx(0.5, abs=1e-12)

    def test_analytic_coherent(self, capsys):
        code, rec = run_json(capsys, ["purity", "--g", "4", "--mu1", "0.5",
                                      "--state", "coherent:", "--method", "analytic"])
        assert code == 0
        assert rec["purity"] == pytest.approx(0.8, abs=1e-12)

    def test_analytic_rejects_number_state(self, capsys):
        code = cli.run(["purity", "--g", "4", "--mu1", "0.5",
                        "--state", "number:1,1", "--method", "analytic"])
        assert code == 1

    def test_oracle_method(self, capsys):
        code, rec = run_json(capsys, ["purity", "--g", "4", "--mu1", "0.5",
                                      "--state", "coherent:", "--method", "oracle",
                                      "--n-points", "256"])
        assert code == 0
        assert rec["purity"] == pytest.approx(0.8, abs=1e-6)
        assert "norm_defect" in rec

    def test_fock_method(self, capsys):
        code, rec = run_json(capsys, ["purity", "--g", "1", "--mu1", "0.5",
                                      "--state", "number:0,1", "--method", "fock",
                                      "--jmax", "1", "--gamma1",
                                      str(1 / math.sqrt(2)), "--gamma2",
                                      str(1 / math.sqrt(2))])
        assert code == 0
        assert rec["purity"] == pytest.approx(0.5, abs=1e-10)
        assert rec["basis"]["jmax"] == 1

    def test_sup_state_angle_literal(self, capsys):
        code, rec = run_json(capsys, ["purity", "--g", "1", "--mu1", "0.75",
                                      "--state", "sup:pi/6"])
        assert code == 0
        assert rec["purity"] == pytest.approx(1.0, abs=1e-10)

    def test_unbound_state(self, capsys):
        code, rec = run_json(capsys, ["purity", "--c", "3", "--mu1", "0.5",
                                      "--state", "unbound:0,5", "--method", "exact"])
        assert code == 0
        assert 0 < rec["purity"] < 1

    def test_resource_cap_exit_code(self):
        assert cli.run(["purity", "--g", "2", "--mu1", "0.5",
                        "--state", "number:9,9"]) == 3

    def test_usage_errors_exit_one(self):
        assert cli.run(["purity", "--g", "1", "--state", "number:0,1"]) == 1
        assert cli.run(["purity", "--g", "1", "--mu1", "0.5",
                        "--state", "nonsense:1"]) == 1
        assert cli.run(["purity", "--g", "0", "--mu1", "0.5",
                        "--state", "number:0,1"]) == 1
        assert cli.run(["nonexistent-command"]) == 1

    def test_numerical_consistency_exit_two(self, monkeypatch):
        def broken(*a, **kw):
            raise NumericalConsistencyError("synthetic failure")
        monkeypatch.setattr(cli.grid, "schmidt_analyze", broken)
        assert cli.run(["purity", "--g", "4", "--mu1", "0.5",
                        "--state", "coherent:", "--method", "oracle"]) == 2

    def test_output_file(self, tmp_path):
        out = tmp_path / "rec.json"
        code = cli.run(["purity", "--g", "1", "--mu1", "0.5",
                        "--state", "number:0,1", "-o", str(out)])
        assert code == 0
        assert json.loads(out.read_text())["purity"] == pytest.approx(0.5)


class TestCovarianceCommand:
    def test_record_contents(self, capsys):
        code, rec = run_json(capsys, ["covariance", "--g", "4", "--mu1", "0.5"])
        assert code == 0
        assert rec["r"] == pytest.approx(math.acosh(1.25), abs=1e-12)
        assert rec["logneg"] == rec["r"]
        V = np.array(rec["V"])
        assert V.shape == (4, 4)
        Vp = np.array(rec["V_standard"])
        assert np.allclose(np.diag(Vp), math.cosh(rec["r"]), atol=1e-10)


class TestSweepCommand:
    def test_mu1_sweep_symmetry(self, tmp_path):
        out = tmp_path / "sweep.csv"
        code = cli.run(["sweep", "--param", "mu1", "--range", "0.01:0.99:99",
                        "--g", "5", "--state", "number:1,1", "--method", "exact",
                        "-o", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# params: ")
        assert lines[1] == "mu1,purity"
        rows = [tuple(map(float, ln.split(","))) for ln in lines[2:]]
        assert len(rows) == 99
        purities = [p for (_, p) in rows]
        for a, b in zip(purities, purities[::-1]):
            assert abs(a - b) < 1e-10

    def test_deterministic_output(self, tmp_path):
        argv = ["sweep", "--param", "g", "--range", "0.5:8:7", "--scale", "log",
                "--mu1", "0.4", "--state", "number:0,1", "--method", "exact"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert cli.run(argv + ["-o", str(a)]) == 0
        assert cli.run(argv + ["-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_tau_sweep(self, tmp_path):
        out = tmp_path / "tau.csv"
        code = cli.run(["sweep", "--param", "tau", "--range", "0:8:5",
                        "--c", "3", "--mu1", "0.5", "--state", "unbound:0,0",
                        "--method", "analytic", "-o", str(out)])
        assert code == 0
        rows = [tuple(map(float, ln.split(",")))
                for ln in out.read_text().splitlines()[2:]]
        purities = [p for (_, p) in rows]
        assert all(a > b for a, b in zip(purities, purities[1:]))

    def test_theta_sweep(self, tmp_path):
        out = tmp_path / "theta.csv"
        code = cli.run(["sweep", "--param", "theta", "--range", "0:1.5:4",
                        "--g", "1", "--mu1", "0.5", "--method", "exact",
                        "-o", str(out)])
        assert code == 0
        rows = out.read_text().splitlines()[2:]
        assert len(rows) == 4

    def test_c_sweep(self, tmp_path):
        out = tmp_path / "c.csv"
        code = cli.run(["sweep", "--param", "c", "--range", "1:30:4",
                        "--scale", "log", "--mu1", "0.5",
                        "--state", "unbound:0,0", "--method", "analytic",
                        "-o", str(out)])
        assert code == 0

    def test_bad_range_exits_one(self):
        assert cli.run(["sweep", "--param", "mu1", "--range", "zap",
                        "--g", "1", "--state", "number:0,1"]) == 1
        assert cli.run(["sweep", "--param", "mu1", "--range", "0.1:0.9:1",
                        "--g", "1", "--state", "number:0,1"]) == 1

    def test_threads_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("OSCILLENT_THREADS", "2")
        out = tmp_path / "s.csv"
        assert cli.run(["sweep", "--param", "mu1", "--range", "0.2:0.8:5",
                        "--g", "2", "--state", "number:0,1", "-o", str(out)]) == 0
        monkeypatch.setenv("OSCILLENT_THREADS", "0")
        assert cli.run(["sweep", "--param", "mu1", "--range", "0.2:0.8:5",
                        "--g", "2", "--state", "number:0,1", "-o", str(out)]) == 1


class TestFigureCommands:
    def test_fig3_curves(self, tmp_path, capsys):
        code = cli.run(["figure", "fig3", "--outdir", str(tmp_path)])
        assert code == 0
        path = tmp_path / "fig3.csv"
        lines = path.read_text().splitlines()
        assert lines[1] == "mu1,P_g1,P_g10,P_g100,P_g1000"
        mid = [ln for ln in lines[2:] if ln.startswith("0.5,")][0]
        vals = list(map(float, mid.split(",")))
        assert vals[1] == pytest.approx(1.0, abs=1e-12)
        assert vals[2] == pytest.approx(2 * math.sqrt(10) / 11, abs=1e-12)

    def test_fig1_density_files(self, tmp_path):
        code = cli.run(["figure", "fig1", "--outdir", str(tmp_path),
                        "--points", "32"])
        assert code == 0
        files = sorted(p.name for p in tmp_path.iterdir())
        assert files == ["fig1_g10_mu0.25.csv", "fig1_g10_mu0.5.csv",
                         "fig1_g1_mu0.25.csv", "fig1_g1_mu0.5.csv"]
        body = (tmp_path / "fig1_g1_mu0.5.csv").read_text().splitlines()
        assert body[1] == "x1,x2,density"
        assert len(body) == 2 + 32 * 32

    def test_fig4_convention_flag(self, tmp_path):
        cli.run(["figure", "fig4", "--outdir", str(tmp_path / "a")])
        cli.run(["figure", "fig4", "--outdir", str(tmp_path / "b"),
                 "--c-convention", "gamma-over-Gamma"])
        text_a = (tmp_path / "a" / "fig4.csv").read_text()
        text_b = (tmp_path / "b" / "fig4.csv").read_text()
        assert "Gamma-over-gamma" in text_a
        assert "gamma-over-Gamma" in text_b
        assert text_a != text_b
        # c = 1 curve is convention independent
        a_rows = text_a.splitlines()[2:]
        b_rows = text_b.splitlines()[2:]
        for ra, rb in zip(a_rows, b_rows):
            assert ra.split(",")[1] == rb.split(",")[1]

    def test_fig5_fig6_headers(self, tmp_path):
        assert cli.run(["figure", "fig5", "--outdir", str(tmp_path)]) == 0
        assert cli.run(["figure", "fig6", "--outdir", str(tmp_path)]) == 0
        f5 = (tmp_path / "fig5_g5.csv").read_text().splitlines()
        assert f5[1].startswith("mu1,P00,P01,P02,P03,P10")
        f6 = (tmp_path / "fig6_g1.csv").read_text().splitlines()
        assert f6[1] == "mu1,P_theta_0,P_theta_pi_6,P_theta_pi_3"

    def test_fig7_anchor_row(self, tmp_path):
        assert cli.run(["figure", "fig7", "--outdir", str(tmp_path)]) == 0
        lines = (tmp_path / "fig7_g1_mu0.5.csv").read_text().splitlines()
        assert lines[1] == "gamma1,gamma2,jmax,kmax,purity,abs_error"
        rows = [ln.split(",") for ln in lines[2:]]
        anchor = [r for r in rows
                  if r[2] == "1" and abs(float(r[0]) - 1 / math.sqrt(2)) < 1e-12
                  and abs(float(r[1]) - 1 / math.sqrt(2)) < 1e-12]
        assert len(anchor) == 1
        assert float(anchor[0][5]) < 1e-10
        assert len({(r[0], r[1]) for r in rows}) == 4


class TestOracleCompare:
    def test_table_and_threshold(self, tmp_path):
        out = tmp_path / "oracle.csv"
        code = cli.run(["oracle-compare", "-o", str(out), "--n-points", "512"])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[1] == "case,method_purity,oracle_purity,abs_diff"
        assert len(lines) >= 2 + 12
        for ln in lines[2:]:
            assert float(ln.rsplit(",", 1)[1]) <= 1e-6


class TestSelftest:
    def test_single_criterion(self, capsys):
        assert cli.run(["selftest", "--criteria", "1,6"]) == 0
        out = capsys.readouterr().out
        assert out.count("[PASS]") == 2


class TestConfigFile:
    def test_config_supplies_defaults_flags_override(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"g": 4.0, "mu1": 0.5, "state": "coherent:",
                                   "method": "analytic"}))
        code, rec = run_json(capsys, ["purity", "--config", str(cfg),
                                      "--state", "number:0,1", "--method", "exact"])
        assert code == 0
        # g/mu1 from config, state/method from the command line
        assert rec["state"] == "number:0,1"
        assert rec["method"] == "exact"
        assert rec["system"]["g"] == 4.0

    def test_bad_config_exits_one(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{not json")
        assert cli.run(["purity", "--config", str(cfg), "--g", "1",
                        "--mu1", "0.5", "--state", "number:0,1"]) == 1
        assert cli.run(["purity", "--config", str(tmp_path / "missing.json"),
                        "--g", "1", "--mu1", "0.5", "--state", "number:0,1"]) == 1

    def test_wrong_typed_config_value_exits_one(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"g": "4.0", "mu1": 0.5}))
        assert cli.run(["purity", "--config", str(cfg),
                        "--state", "number:0,1"]) == 1
