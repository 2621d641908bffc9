import csv
import shutil
from pathlib import Path

import pytest

from curtailgame import cli
from curtailgame import curtailment as ct
from curtailgame import stackelberg as sg

DATA = Path(__file__).parent / "data" / "ingest"
SMALL = ["wind.hours=400", "grid.max_mw=20", "grid.step_mw=5", "costs.C_T=0", "model.bins=5"]


def read_rows(path):
    lines = [ln for ln in Path(path).read_text().splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


class TestConfig:
    def test_defaults(self):
        cfg = cli.load_config(None)
        c = cli.cost_params(cfg)
        assert c.p_G == 74.3 and c.C_T == 230e6
        assert c.p_T == pytest.approx(0.26 * 74.3)
        g = cli.grid_from(cfg)
        assert (g.max_mw, g.step_mw) == (415.0, 0.5)
        assert cfg.num("sweep", "step") == 0.02 and cfg.num("demand", "line_capacity_mw") == 150

    def test_cost_units(self):
        assert cli.resolve_cost("0.26 p_G", 100, "x") == pytest.approx(26)
        assert cli.resolve_cost("0.5*pG", 10, "x") == 5
        assert cli.resolve_cost("19.3", 74.3, "x") == 19.3
        with pytest.raises(cli.ConfigError, match="costs.p_T"):
            cli.resolve_cost("cheap", 1, "costs.p_T")

    def test_file_and_overrides(self, tmp_path):
        p = tmp_path / "c.ini"
        p.write_text("[grid]\nstep_mw = 1\n[run]\nseed = 4\n")
        cfg = cli.load_config(str(p), ["grid.max_mw=10"], seed=9)
        assert cfg.num("grid", "step_mw") == 1 and cfg.num("grid", "max_mw") == 10 and cfg.seed == 9

    def test_inline_comments(self, tmp_path):
        p = tmp_path / "c.ini"
        p.write_text("[model]\nmode = replay   ; or binned\n[costs]\np_T = 0.1 p_G  # fee\n")
        cfg = cli.load_config(str(p))
        assert cfg.get("model", "mode") == "replay"
        assert cli.cost_params(cfg).p_T == pytest.approx(7.43)

    def test_hash_tracks_content(self):
        a = cli.load_config(None, ["grid.step_mw=1"])
        b = cli.load_config(None, ["grid.step_mw=1"])
        c = cli.load_config(None, ["grid.step_mw=2"])
        assert a.text_hash == b.text_hash != c.text_hash
        assert cli.load_config(None, out="x").text_hash == cli.load_config(None, out="y").text_hash

    @pytest.mark.parametrize("override", ["nosection.key=1", "grid.nokey=1", "grid", "grid.step_mw"])
    def test_bad_overrides(self, override):
        with pytest.raises(cli.ConfigError):
            cli.load_config(None, [override])

    def test_error_names_field(self):
        cfg = cli.load_config(None, ["grid.step_mw=fast"])
        with pytest.raises(cli.ConfigError, match="grid.step_mw"):
            cli.grid_from(cfg)


class TestPlotData:
    def test_timeline_families(self, tmp_path):
        fleet = ct.make_fleet([7, 2, 3])
        x = [[1.0, 0.5], [1.0, 0.5], [1.0, 0.5]]
        results = [ct.simulate(fleet, x, 6.0, rule) for rule in ct.Rule]
        paths = cli.emit_plot_data(tmp_path, timelines=results)
        assert {p.name for p in paths} == {"plot_cf.csv", "plot_fairness.csv", "plot_events.csv"}
        rows = read_rows(tmp_path / "plot_cf.csv")
        assert len(rows) == 12 and list(rows[0]) == ["series_label", "x", "y"]
        assert len(read_rows(tmp_path / "plot_fairness.csv")) == 4

    def test_empty_sweep_gives_header_only(self, tmp_path):
        paths = cli.emit_plot_data(tmp_path, sweep=[])
        assert len(paths) == 3
        for p in paths:
            assert p.read_text() == "series_label,x,y\n"

    def test_sweep_rows(self, tmp_path):
        row = sg.SweepRow(3, "p_T", 0.1, 10.0, 5.0, 1.0, 2.0, 3.0, 4.0, 0.5, 0.25, True, True)
        cli.emit_plot_data(tmp_path, sweep=[row])
        energy = read_rows(tmp_path / "plot_sweep-energy.csv")
        assert [r["series_label"] for r in energy] == ["e_g1", "e_g2", "e_c1", "e_c2"]
        assert energy[0]["x"] == "0.1" and float(energy[0]["y"]) == 3.0


class TestCommands:
    def test_simulate_outputs(self, tmp_path):
        rc = cli.main(["simulate", "--out", str(tmp_path), "--seed", "2",
                       "--set", "wind.hours=500", "--set", "curtailment.correlations=0,1"])
        assert rc == 0
        summary = read_rows(tmp_path / "summary.csv")
        assert len(summary) == 2 * 4 * 3
        assert (tmp_path / "metrics_FRR_r1.csv").exists()
        header = (tmp_path / "summary.csv").read_text().splitlines()[:2]
        assert header[1].startswith("# config_hash=") and "seed=2 rng=numpy.PCG64" in header[1]

    def test_simulate_is_byte_identical(self, tmp_path):
        args = ["simulate", "--seed", "5", "--set", "wind.hours=300", "--set", "run.timeline=true"]
        assert cli.main(args + ["--out", str(tmp_path / "a")]) == 0
        assert cli.main(args + ["--out", str(tmp_path / "b")]) == 0
        files = sorted(p.name for p in (tmp_path / "a").iterdir())
        assert "timeline_LIFO_r1.csv" in files
        for name in files:
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_seed_changes_output(self, tmp_path):
        for seed in ("1", "2"):
            cli.main(["synth-wind", "--seed", seed, "--set", "wind.hours=10", "--out", str(tmp_path / seed)])
        a = (tmp_path / "1" / "synthetic_wind.csv").read_text()
        b = (tmp_path / "2" / "synthetic_wind.csv").read_text()
        assert a != b and len(read_rows(tmp_path / "1" / "synthetic_wind.csv")) == 10

    def test_fit(self, tmp_path):
        assert cli.main(["fit", "--out", str(tmp_path), "--set", "wind.hours=8760"]) == 0
        rows = read_rows(tmp_path / "fits.csv")
        assert len(rows) == 3 * 96
        assert all(r["status"] == "ok" for r in rows)
        assert 7 < float(rows[0]["weibull_c"]) < 11

    def test_fit_reports_short_bins(self, tmp_path):
        assert cli.main(["fit", "--out", str(tmp_path), "--set", "wind.hours=100"]) == 0
        assert "need at least 30 samples" in read_rows(tmp_path / "fits.csv")[0]["status"]

    def test_equilibrium(self, tmp_path):
        assert cli.main(["equilibrium", "--out", str(tmp_path)] + sum((["--set", s] for s in SMALL), [])) == 0
        eq = read_rows(tmp_path / "equilibrium.csv")
        assert len(eq) == 1 and float(eq[0]["p_n1_star"]) in (0, 5, 10, 15, 20)
        assert len(read_rows(tmp_path / "response_curve.csv")) == 5

    def test_equilibrium_replay_mode(self, tmp_path):
        args = ["equilibrium", "--out", str(tmp_path), "--set", "model.mode=replay"]
        assert cli.main(args + sum((["--set", s] for s in SMALL), [])) == 0

    def test_sweep(self, tmp_path):
        args = ["sweep", "--out", str(tmp_path), "--set", "sweep.scenario=1", "--set", "sweep.step=0.23"]
        assert cli.main(args + sum((["--set", s] for s in SMALL), [])) == 0
        rows = read_rows(tmp_path / "sweep.csv")
        assert [r["value"] for r in rows] == ["0.06", "0.29", "0.52"]
        assert len(read_rows(tmp_path / "plot_sweep-capacity.csv")) == 6

    def test_custom_sweep_may_be_empty(self, tmp_path):
        args = ["sweep", "--out", str(tmp_path), "--set", "sweep.vary=c_G1", "--set", "sweep.start=0.5",
                "--set", "sweep.stop=0.1"]
        assert cli.main(args + sum((["--set", s] for s in SMALL), [])) == 0
        assert (tmp_path / "sweep.csv").read_text().splitlines()[-1] == ",".join(sg.SWEEP_COLUMNS)

    def test_ingest_with_game_on_files(self, tmp_path):
        for name in ("station_a.csv", "station_b.csv", "demand.csv"):
            shutil.copy(DATA / name, tmp_path)
        cfg = tmp_path / "c.ini"
        cfg.write_text((DATA / "ingest.ini").read_text())
        with pytest.warns(UserWarning):
            assert cli.main(["ingest", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
        assert "valid_points 18" in (tmp_path / "o" / "coverage_report.txt").read_text()
        args = ["equilibrium", "--config", str(cfg), "--out", str(tmp_path / "e"), "--set", "model.mode=replay",
                "--set", "demand.source=constant", "--set", "demand.constant_mw=20"]
        assert cli.main(args + sum((["--set", s] for s in SMALL[1:]), [])) == 0


class TestExitCodes:
    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["nonsense"])
        assert exc.value.code != 0

    def test_config_error(self, tmp_path, capsys):
        assert cli.main(["simulate", "--out", str(tmp_path), "--set", "grid.bogus=1"]) == cli.EXIT_CONFIG
        assert "grid.bogus" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path):
        assert cli.main(["fit", "--config", str(tmp_path / "none.ini")]) == cli.EXIT_CONFIG

    def test_bad_rule(self, tmp_path):
        assert cli.main(["simulate", "--out", str(tmp_path), "--set", "curtailment.rules=LIFO,MARKET"]) == 2

    def test_data_error_removes_partial_outputs(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("timestamp,speed_knots\n2007-03-01T00:00Z,3\n2007-03-01T00:00Z,4\n")
        shutil.copy(DATA / "station_a.csv", tmp_path)
        out = tmp_path / "out"
        rc = cli.main(["ingest", "--out", str(out), "--set", "wind.source=files",
                       "--set", f"wind.paths={tmp_path / 'station_a.csv'},{bad}"])
        assert rc == cli.EXIT_DATA
        assert list(out.iterdir()) == []

    def test_numeric_failure(self, tmp_path, monkeypatch):
        def boom(*a, **k):
            raise FloatingPointError("overflow")
        monkeypatch.setattr(cli.sg, "solve_equilibrium", boom)
        args = ["equilibrium", "--out", str(tmp_path)] + sum((["--set", s] for s in SMALL), [])
        assert cli.main(args) == cli.EXIT_NUMERIC
