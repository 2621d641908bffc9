"""Command-line front end.

    curtailgame SUBCOMMAND [--config FILE] [--seed N] [--out DIR] [--set section.key=value ...]

Subcommands: synth-wind, ingest, fit, simulate, equilibrium, sweep.  The
config is an INI file; every key has a default (see ``DEFAULTS``), so a
config file is optional.  Per-MWh costs may be written as a fraction of the
feed-in price (``0.26 p_G``) or as an absolute amount (``19.3``).

Exit status: 0 success, 2 config error, 3 data error, 4 numeric failure.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import curtailment as ct
from . import ingest
from . import stackelberg as sg
from . import windmodel as wm

log = logging.getLogger("curtailgame")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4
SUBCOMMANDS = ("synth-wind", "ingest", "fit", "simulate", "equilibrium", "sweep")

DEFAULTS: dict[str, dict[str, str]] = {
    "run": {"seed": "0", "out": "out", "timeline": "false", "workers": "1"},
    "wind": {
        "source": "synthetic",  # synthetic | files
        "weibull_c": "9.0",
        "weibull_k": "1.8",
        "hours": "8760",
        "height_m": "85.0",  # height the synthetic Weibull speeds refer to
        "correlation": "1.0",
        "start": "2001-01-01T00:00Z",
        "paths": "",
        "z_a": "10.0",
        "z_h": "85.0",
        "z_o": "0.03",
    },
    "turbine": {
        "model": "auto",  # auto | sigmoid | cubic
        "cut_in": "3.0",
        "cut_out": "28.0",
        "rated_speed": "13.0",
        "sigmoid_a": "0.3921",
        "sigmoid_b": "16.4287",
        "generic_cut_out": "25.0",
    },
    "fleet": {"rated_mw": "7,2,3", "order": ""},
    "curtailment": {"rules": "LIFO,ROTA,PRO_RATA,FRR", "demand_mw": "6.0", "correlations": "0,0.25,0.5,0.75,1"},
    "demand": {"source": "synthetic", "path": "", "line_capacity_mw": "150.0", "constant_mw": "150.0"},
    "grid": {"max_mw": "415.0", "step_mw": "0.5"},
    "costs": {"p_G": "74.3", "p_T": "0.26 p_G", "c_G1": "0.30 p_G", "c_G2": "0.30 p_G", "C_T": "230e6"},
    "sweep": {"scenario": "3", "vary": "", "start": "", "stop": "", "step": "0.02"},
    "model": {"mode": "binned", "bins": "20"},
}


class ConfigError(ValueError):
    pass


class DataError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    parser: configparser.ConfigParser
    text_hash: str
    base_dir: Path

    def get(self, section: str, key: str) -> str:
        return self.parser.get(section, key)

    def num(self, section: str, key: str, cast=float):
        raw = self.get(section, key)
        try:
            return cast(raw)
        except ValueError:
            raise ConfigError(f"{section}.{key}: expected a number, got {raw!r}") from None

    def flag(self, section: str, key: str) -> bool:
        try:
            return self.parser.getboolean(section, key)
        except ValueError:
            raise ConfigError(f"{section}.{key}: expected true/false") from None

    def floats(self, section: str, key: str) -> list[float]:
        raw = self.get(section, key)
        try:
            return [float(v) for v in raw.split(",") if v.strip()]
        except ValueError:
            raise ConfigError(f"{section}.{key}: expected a comma-separated list of numbers, got {raw!r}") from None

    def path(self, raw: str) -> Path:
        p = Path(raw.strip())
        return p if p.is_absolute() else self.base_dir / p

    @property
    def seed(self) -> int:
        return self.num("run", "seed", int)

    def header(self, command: str) -> list[str]:
        return [f"curtailgame {command}", f"config_hash={self.text_hash} seed={self.seed} rng={wm.RNG_ALGORITHM}"]


def load_config(path: str | None, overrides: Sequence[str] = (), seed: int | None = None,
                out: str | None = None) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    cp.optionxform = str
    cp.read_dict(DEFAULTS)
    base = Path.cwd()
    if path:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file {path} does not exist")
        user = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
        user.optionxform = str
        try:
            user.read(p)
        except configparser.Error as exc:
            raise ConfigError(f"{path}: {exc}") from None
        _merge(cp, user, source=str(path))
        base = p.parent
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"--set expects section.key=value, got {item!r}")
        lhs, value = item.split("=", 1)
        section, key = lhs.split(".", 1)
        _set(cp, section.strip(), key.strip(), value.strip(), source="--set")
    if seed is not None:
        cp.set("run", "seed", str(seed))
    if out is not None:
        cp.set("run", "out", out)
    canonical = "\n".join(
        f"{s}.{k}={cp.get(s, k)}" for s in sorted(cp.sections()) for k in sorted(cp.options(s)) if s != "run" or k != "out"
    )
    digest = hashlib.sha256(canonical.encode()).hexdigest()[:16]
    return RunConfig(cp, digest, base)


def _merge(cp, user, source):
    for section in user.sections():
        for key, value in user.items(section):
            _set(cp, section, key, value, source)


def _set(cp, section, key, value, source):
    if section not in DEFAULTS:
        raise ConfigError(f"{source}: unknown section [{section}]")
    if key not in DEFAULTS[section]:
        raise ConfigError(f"{source}: unknown key {section}.{key}")
    cp.set(section, key, value)


def resolve_cost(raw: str, p_G: float, field_path: str) -> float:
    text = raw.strip().replace("*", " ")
    try:
        if text.endswith("p_G") or text.endswith("pG"):
            frac = text[: -3 if text.endswith("p_G") else -2].strip()
            return float(frac) * p_G
        return float(text)
    except ValueError:
        raise ConfigError(f"{field_path}: expected a number or 'fraction p_G', got {raw!r}") from None


def cost_params(cfg: RunConfig) -> sg.CostParams:
    p_G = cfg.num("costs", "p_G")
    vals = {k: resolve_cost(cfg.get("costs", k), p_G, f"costs.{k}") for k in ("p_T", "c_G1", "c_G2")}
    try:
        return sg.CostParams(p_G, vals["p_T"], vals["c_G1"], vals["c_G2"], cfg.num("costs", "C_T"))
    except ValueError as exc:
        raise ConfigError(f"costs: {exc}") from None


def power_curve(cfg: RunConfig, purpose: str) -> wm.PowerCurve:
    model = cfg.get("turbine", "model")
    if model == "auto":
        model = "cubic" if purpose == "simulate" else "sigmoid"
    try:
        if model == "cubic":
            return wm.PowerCurve(
                rated_mw=1.0, cut_in=cfg.num("turbine", "cut_in"), rated_speed=cfg.num("turbine", "rated_speed"),
                cut_out=cfg.num("turbine", "generic_cut_out"), model="cubic",
            )
        if model == "sigmoid":
            return wm.PowerCurve(
                cut_in=cfg.num("turbine", "cut_in"), cut_out=cfg.num("turbine", "cut_out"),
                rated_speed=cfg.num("turbine", "rated_speed"), sigmoid_a=cfg.num("turbine", "sigmoid_a"),
                sigmoid_b=cfg.num("turbine", "sigmoid_b"),
            )
    except ValueError as exc:
        raise ConfigError(f"turbine: {exc}") from None
    raise ConfigError(f"turbine.model: expected auto, sigmoid or cubic, got {model!r}")


def fleet_from(cfg: RunConfig) -> list[ct.GeneratorSpec]:
    rated = cfg.floats("fleet", "rated_mw")
    if not rated:
        raise ConfigError("fleet.rated_mw: at least one generator is required")
    order_raw = cfg.get("fleet", "order").strip()
    try:
        fleet = ct.make_fleet(rated)
        if order_raw:
            orders = [int(v) for v in order_raw.split(",")]
            if len(orders) != len(rated):
                raise ValueError("fleet.order must list one connection order per generator")
            fleet = [ct.GeneratorSpec(g.id, g.rated_mw, o, g.wind_source) for g, o in zip(fleet, orders)]
        ct.validate_fleet(fleet)
    except ValueError as exc:
        raise ConfigError(f"fleet: {exc}") from None
    return fleet


# ---------------------------------------------------------------------------
# Data preparation
# ---------------------------------------------------------------------------

def synthetic_sites(cfg: RunConfig, n_sites: int, r: float | None = None) -> list[wm.WindSeries]:
    try:
        params = wm.WeibullParams(cfg.num("wind", "weibull_c"), cfg.num("wind", "weibull_k"))
        r = cfg.num("wind", "correlation") if r is None else r
        hours = cfg.num("wind", "hours", int)
        sites = wm.fleet_wind(n_sites, params, r, hours, cfg.seed, height_m=cfg.num("wind", "height_m"))
    except ValueError as exc:
        raise ConfigError(f"wind: {exc}") from None
    start = np.datetime64(ingest.parse_timestamp(cfg.get("wind", "start")), "h")
    return [wm.WindSeries(s.location_id, s.height_m, start + np.arange(len(s)) * wm.ONE_HOUR, s.speeds) for s in sites]


def wind_paths(cfg: RunConfig) -> list[Path]:
    paths = [cfg.path(p) for p in cfg.get("wind", "paths").split(",") if p.strip()]
    if not paths:
        raise ConfigError("wind.paths: list the wind CSV files when wind.source = files")
    for p in paths:
        if not p.is_file():
            raise ConfigError(f"wind.paths: {p} does not exist")
    return paths


def cleaned_sites(cfg: RunConfig) -> dict[str, ingest.CleanedWindSeries]:
    out = {}
    for p in wind_paths(cfg):
        out[p.stem] = ingest.fill_gaps(ingest.parse_wind_csv(p), location_id=p.stem,
                                       height_m=cfg.num("wind", "z_a"))
    return out


def demand_profile(cfg: RunConfig) -> sg.DemandProfile:
    source = cfg.get("demand", "source")
    cap = cfg.num("demand", "line_capacity_mw")
    if source == "file":
        raw = cfg.get("demand", "path").strip()
        if not raw or not cfg.path(raw).is_file():
            raise ConfigError(f"demand.path: {raw!r} does not exist")
        return ingest.build_demand_profile(ingest.demand_to_hourly(ingest.parse_demand_csv(cfg.path(raw))), cap)
    if source == "constant":
        return sg.DemandProfile.constant(cfg.num("demand", "constant_mw"))
    if source == "synthetic":
        return sg.DemandProfile.synthetic(cap)
    raise ConfigError(f"demand.source: expected file, constant or synthetic, got {source!r}")


def game_data(cfg: RunConfig):
    """Aligned power series for the two players plus the demand profile."""
    curve = power_curve(cfg, "game")
    profile = demand_profile(cfg)
    if cfg.get("wind", "source") == "synthetic":
        z = (cfg.num("wind", "height_m"), cfg.num("wind", "z_h"), cfg.num("wind", "z_o"))
        s1, s2 = (wm.extrapolate_hub(s, *z) for s in synthetic_sites(cfg, 2))
        ts = s1.timestamps
    elif cfg.get("wind", "source") == "files":
        sites = list(cleaned_sites(cfg).values())
        if len(sites) != 2:
            raise ConfigError("wind.paths: the game needs exactly two wind files")
        ts = ingest.align(*sites)
        z = (cfg.num("wind", "z_a"), cfg.num("wind", "z_h"), cfg.num("wind", "z_o"))
        s1, s2 = (wm.extrapolate_hub(s.to_wind_series(ts), *z) for s in sites)
    else:
        raise ConfigError(f"wind.source: expected synthetic or files, got {cfg.get('wind', 'source')!r}")
    x1 = wm.wind_to_power(s1, curve)
    x2 = wm.wind_to_power(s2, curve)
    mode = cfg.get("model", "mode")
    if mode == "binned":
        return sg.BinnedData.from_series(x1, x2, ts, profile, bins=cfg.num("model", "bins", int))
    if mode == "replay":
        return sg.ReplayData(x1, x2, profile.lookup(ts))
    raise ConfigError(f"model.mode: expected binned or replay, got {mode!r}")


def grid_from(cfg: RunConfig) -> sg.StrategyGrid:
    try:
        return sg.StrategyGrid(cfg.num("grid", "max_mw"), cfg.num("grid", "step_mw"))
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from None


# ---------------------------------------------------------------------------
# Plot-ready tables
# ---------------------------------------------------------------------------

PLOT_HEADER = ["series_label", "x", "y"]


def _write_tidy(path: Path, rows, header_lines=()) -> Path:
    with open(path, "w", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PLOT_HEADER)
        for label, x, y in rows:
            w.writerow([label, x, sg._fmt(y)])
    return path


def timeline_plot_rows(results: Sequence[ct.TimelineResult]) -> dict[str, list]:
    cf, fair, events = [], [], []
    for res in results:
        for gid, v in zip(res.generator_ids, res.capacity_factor):
            cf.append((gid, res.rule.value, float(v)))
        fair.append(("fairness_variance", res.rule.value, res.fairness_variance))
        events.append(("mean_events_per_generator", res.rule.value, float(res.event_count.mean())))
    return {"cf": cf, "fairness": fair, "events": events}


def sweep_plot_rows(rows: Sequence[sg.SweepRow]) -> dict[str, list]:
    fams = {"sweep-capacity": ("p_n1_star", "p_n2_star"), "sweep-profit": ("profit1", "profit2"),
            "sweep-energy": ("e_g1", "e_g2", "e_c1", "e_c2")}
    out = {}
    for fam, cols in fams.items():
        out[fam] = [(col, repr(r.value), getattr(r, col)) for col in cols for r in rows]
    return out


def emit_plot_data(out_dir, timelines: Sequence[ct.TimelineResult] | None = None,
                   sweep: Sequence[sg.SweepRow] | None = None, header_lines=()) -> list[Path]:
    """Long-format (series_label, x, y) CSVs, one per figure family."""
    out_dir = Path(out_dir)
    written = []
    tables = {}
    if timelines is not None:
        tables.update(timeline_plot_rows(timelines))
    if sweep is not None:
        tables.update(sweep_plot_rows(sweep))
    for fam, rows in tables.items():
        written.append(_write_tidy(out_dir / f"plot_{fam}.csv", rows, header_lines))
    return written


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

class Outputs:
    """Tracks files written by one invocation so they can be removed on failure."""

    def __init__(self, root: Path):
        self.root = root
        self.files: list[Path] = []

    def __call__(self, name: str) -> Path:
        p = self.root / name
        self.files.append(p)
        return p

    def add(self, paths):
        self.files.extend(paths)

    def cleanup(self):
        for p in self.files:
            try:
                p.unlink()
            except FileNotFoundError:
                pass


def cmd_synth_wind(cfg: RunConfig, out: Outputs):
    n = len(fleet_from(cfg))
    sites = synthetic_sites(cfg, n)
    with open(out("synthetic_wind.csv"), "w", newline="") as fh:
        for line in cfg.header("synth-wind"):
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["timestamp"] + [s.location_id for s in sites])
        for t in range(len(sites[0])):
            w.writerow([ingest.format_timestamp(sites[0].timestamps[t])] + [f"{s.speeds[t]:.6f}" for s in sites])


def cmd_ingest(cfg: RunConfig, out: Outputs):
    sites = cleaned_sites(cfg)
    header = cfg.header("ingest")
    for name, s in sites.items():
        s.write_csv(out(f"cleaned_{name}.csv"), header)
    series = list(sites.values())
    aligned = None
    if cfg.get("demand", "source") == "file":
        raw = cfg.get("demand", "path").strip()
        if not raw or not cfg.path(raw).is_file():
            raise ConfigError(f"demand.path: {raw!r} does not exist")
        hourly = ingest.demand_to_hourly(ingest.parse_demand_csv(cfg.path(raw)))
        hourly.write_csv(out("demand_hourly.csv"), header)
        profile = ingest.build_demand_profile(hourly, cfg.num("demand", "line_capacity_mw"))
        ingest.write_profile_csv(profile, out("demand_profile.csv"), header)
        series.append(hourly)
    if len(series) >= 2:
        common = ingest.align(*series)
        aligned = int(common.size)
    ingest.write_coverage_report(out("coverage_report.txt"), sites, aligned)


def cmd_fit(cfg: RunConfig, out: Outputs):
    curve = power_curve(cfg, "fit")
    if cfg.get("wind", "source") == "files":
        z = (cfg.num("wind", "z_a"), cfg.num("wind", "z_h"), cfg.num("wind", "z_o"))
        sites = [wm.extrapolate_hub(s.to_wind_series(), *z) for s in cleaned_sites(cfg).values()]
    else:
        sites = synthetic_sites(cfg, len(fleet_from(cfg)))
    header = cfg.header("fit")
    with open(out("fits.csv"), "w", newline="") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["site", "hour", "season", "n", "weibull_c", "weibull_k", "excluded_fraction",
                    "beta_alpha", "beta_beta", "status"])
        for s in sites:
            hours, seasons = wm.hour_season_index(s.timestamps)
            power = wm.wind_to_power(s, curve)
            for key in wm.HourSeasonKey.all():
                sel = (hours == key.hour) & (seasons == key.season)
                row = [s.location_id, key.hour, key.season, int(sel.sum())]
                status = []
                try:
                    wp = wm.fit_weibull(s.speeds[sel])
                    row += [f"{wp.scale_c:.6f}", f"{wp.shape_k:.6f}", f"{wp.excluded_fraction:.6f}"]
                except wm.FitError as exc:
                    row += ["", "", ""]
                    status.append(f"weibull: {exc}")
                try:
                    bp = wm.fit_beta(power[sel])
                    row += [f"{bp.alpha:.6f}", f"{bp.beta:.6f}"]
                except wm.FitError as exc:
                    row += ["", ""]
                    status.append(f"beta: {exc}")
                w.writerow(row + ["; ".join(status) or "ok"])


def cmd_simulate(cfg: RunConfig, out: Outputs):
    fleet = fleet_from(cfg)
    curve = power_curve(cfg, "simulate")
    try:
        rules = [ct.Rule.parse(r) for r in cfg.get("curtailment", "rules").split(",") if r.strip()]
    except ValueError as exc:
        raise ConfigError(f"curtailment.rules: {exc}") from None
    demand = cfg.num("curtailment", "demand_mw")
    correlations = cfg.floats("curtailment", "correlations")
    header = cfg.header("simulate")
    summary = []
    last = []
    for r in correlations:
        sites = synthetic_sites(cfg, len(fleet), r)
        x = [wm.wind_to_power(s, curve) for s in sites]
        last = []
        for rule in rules:
            res = ct.simulate(fleet, x, demand, rule, timestamps=sites[0].timestamps)
            tag = f"{rule.value}_r{r:g}"
            res.write_metrics_csv(out(f"metrics_{tag}.csv"), header)
            if cfg.flag("run", "timeline"):
                res.write_timeline_csv(out(f"timeline_{tag}.csv"), header)
            summary.append((r, res))
            last.append(res)
    with open(out("summary.csv"), "w", newline="") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["correlation", "rule", "generator_id", "cf", "cf_uncurtailed", "cf_reduction", "events",
                    "fairness_variance", "mean_cf"])
        for r, res in summary:
            for g, gid in enumerate(res.generator_ids):
                w.writerow([f"{r:g}", res.rule.value, gid, f"{res.capacity_factor[g]:.6f}",
                            f"{res.capacity_factor_uncurtailed[g]:.6f}", f"{res.cf_reduction[g]:.6f}",
                            int(res.event_count[g]), f"{res.fairness_variance:.6e}",
                            f"{res.capacity_factor.mean():.6f}"])
    # Figure families use the last (highest) correlation, plus the CF-vs-correlation curve.
    out.add(emit_plot_data(out.root, timelines=last, header_lines=header))
    rows = [(res.rule.value, f"{r:g}", float(res.capacity_factor.mean())) for r, res in summary]
    _write_tidy(out("plot_cf-correlation.csv"), rows, header)


def _equilibrium_row(eq: sg.EquilibriumResult, scenario_id=0, param="", value=float("nan")) -> sg.SweepRow:
    e = eq.energies
    return sg.SweepRow(scenario_id, param, value, eq.p_n1_star, eq.p_n2_star, eq.profit1, eq.profit2,
                       e.E_G1, e.E_G2, e.E_C1, e.E_C2, eq.viable1, eq.viable2)


def cmd_equilibrium(cfg: RunConfig, out: Outputs):
    data = game_data(cfg)
    eq = sg.solve_equilibrium(cost_params(cfg), grid_from(cfg), data, workers=cfg.num("run", "workers", int))
    header = cfg.header("equilibrium")
    sg.write_sweep_csv([_equilibrium_row(eq)], out("equilibrium.csv"), header)
    eq.write_response_csv(out("response_curve.csv"), header)


def cmd_sweep(cfg: RunConfig, out: Outputs):
    grid = grid_from(cfg)
    base = cost_params(cfg)
    scenario_raw = cfg.get("sweep", "scenario").strip()
    vary = cfg.get("sweep", "vary").strip()
    step = cfg.num("sweep", "step")
    if vary:
        if vary not in sg.SWEEP_PARAMS:
            raise ConfigError(f"sweep.vary: expected one of {sg.SWEEP_PARAMS}, got {vary!r}")
        start, stop = cfg.num("sweep", "start"), cfg.num("sweep", "stop")
        scenario_id = 0
    else:
        try:
            scenario_id = int(scenario_raw)
            spec = sg.SCENARIOS[scenario_id]
        except (ValueError, KeyError):
            raise ConfigError(f"sweep.scenario: expected 1, 2 or 3, got {scenario_raw!r}") from None
        base = sg.scenario_costs(scenario_id, base.p_G, base.C_T)
        vary, start, stop = spec["vary"], spec["start"], spec["stop"]
    data = game_data(cfg)
    rows = sg.scenario_sweep(base, vary, start, stop, step, grid, data, scenario_id=scenario_id,
                             workers=cfg.num("run", "workers", int))
    header = cfg.header("sweep")
    sg.write_sweep_csv(rows, out("sweep.csv"), header)
    out.add(emit_plot_data(out.root, sweep=rows, header_lines=header))


COMMANDS = {
    "synth-wind": cmd_synth_wind,
    "ingest": cmd_ingest,
    "fit": cmd_fit,
    "simulate": cmd_simulate,
    "equilibrium": cmd_equilibrium,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="curtailgame", description=__doc__.split("\n\n")[0])
    p.add_argument("command", choices=SUBCOMMANDS)
    p.add_argument("--config", help="INI config file")
    p.add_argument("--seed", type=int, help="override run.seed")
    p.add_argument("--out", help="output directory (override run.out)")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="SECTION.KEY=VALUE",
                   help="override a config value; repeatable")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def run(command: str, config_path: str | None = None, overrides: Sequence[str] = (),
        seed: int | None = None, out: str | None = None) -> int:
    try:
        cfg = load_config(config_path, overrides, seed, out)
        if command not in COMMANDS:
            raise ConfigError(f"unknown subcommand {command!r}")
        out_dir = cfg.path(cfg.get("run", "out")) if out is None else Path(out)
        out_dir.mkdir(parents=True, exist_ok=True)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    outputs = Outputs(out_dir)
    try:
        COMMANDS[command](cfg, outputs)
    except ConfigError as exc:
        outputs.cleanup()
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ingest.IngestError, DataError, OSError) as exc:
        outputs.cleanup()
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (wm.FitError, ct.AllocationError, FloatingPointError, ArithmeticError, ValueError) as exc:
        outputs.cleanup()
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except BaseException:
        outputs.cleanup()
        raise
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return run(args.command, args.config, args.overrides, args.seed, args.out)


if __name__ == "__main__":
    sys.exit(main())
