"""Reading and cleaning wind observations and national demand.

File formats (UTC, ISO-8601 timestamps, one header row)::

    timestamp,speed_knots          timestamp,demand_mw
    2007-03-01T09:00Z,14           2007-03-01T09:00Z,31520.0
    2007-03-01T10:00Z,             2007-03-01T09:30Z,31877.5

An empty ``speed_knots`` field is a missing observation.  Demand is
half-hourly and each settlement period is labelled by its start time.
"""
from __future__ import annotations

import csv
import logging
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import numpy as np

from .stackelberg import DemandProfile
from .windmodel import ONE_HOUR, HourSeasonKey, WindSeries, hour_season_index

log = logging.getLogger(__name__)

KNOT_MS = 0.5144
MAX_FILL_HOURS = 6  # gaps of this many missing hours or more stay missing
WIND_COLUMNS = ["timestamp", "speed_knots"]
DEMAND_COLUMNS = ["timestamp", "demand_mw"]
HALF_HOUR = np.timedelta64(30, "m")


class IngestError(ValueError):
    """Malformed or inconsistent input data."""


@dataclass(frozen=True)
class RawWindRecord:
    timestamp: np.datetime64
    speed_knots: int | None


@dataclass(frozen=True)
class RawDemandRecord:
    timestamp: np.datetime64
    demand_mw: float


def parse_timestamp(text: str) -> np.datetime64:
    """ISO-8601 string in UTC ('Z' or '+00:00' suffix, or naive) to datetime64[m]."""
    s = text.strip()
    if s.endswith("Z") or s.endswith("z"):
        s = s[:-1] + "+00:00"
    dt = datetime.fromisoformat(s)
    if dt.tzinfo is not None:
        if dt.utcoffset().total_seconds() != 0:
            raise ValueError(f"timestamp {text!r} is not UTC")
        dt = dt.astimezone(timezone.utc).replace(tzinfo=None)
    if dt.second or dt.microsecond:
        raise ValueError(f"timestamp {text!r} has sub-minute precision")
    return np.datetime64(dt, "m")


def format_timestamp(ts) -> str:
    return np.datetime_as_string(np.datetime64(ts, "m"), unit="m") + "Z"


def _read_rows(path, columns: Sequence[str]):
    path = Path(path)
    with open(path, newline="") as fh:
        numbered = [(no, ln) for no, ln in enumerate(fh, start=1) if not ln.lstrip().startswith("#")]
    if not numbered:
        warnings.warn(f"{path}: empty file", stacklevel=3)
        return
    line_numbers = [no for no, _ in numbered]
    reader = csv.reader(ln for _, ln in numbered)
    header = [h.strip() for h in next(reader)]
    if header != list(columns):
        unknown = sorted(set(header) - set(columns))
        detail = f"unknown columns {unknown}" if unknown else f"got {header}"
        raise IngestError(f"{path}: header must be {','.join(columns)}; {detail}")
    for k, row in enumerate(reader, start=1):
        lineno = line_numbers[k]
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(columns):
            raise IngestError(f"{path}:{lineno}: expected {len(columns)} fields, got {len(row)}")
        yield lineno, row


def parse_wind_csv(path) -> list[RawWindRecord]:
    """Hourly knot readings, in timestamp order with no duplicates."""
    records: list[RawWindRecord] = []
    for lineno, (stamp, speed) in _read_rows(path, WIND_COLUMNS):
        try:
            ts = parse_timestamp(stamp)
        except ValueError as exc:
            raise IngestError(f"{path}:{lineno}: bad timestamp {stamp!r} ({exc})") from None
        if ts.astype("datetime64[h]") != ts:
            raise IngestError(f"{path}:{lineno}: timestamp {stamp!r} is not on the hour")
        speed = speed.strip()
        if speed == "":
            knots = None
        else:
            try:
                knots = int(speed)
            except ValueError:
                raise IngestError(f"{path}:{lineno}: speed {speed!r} is not a whole number of knots") from None
            if knots < 0:
                raise IngestError(f"{path}:{lineno}: negative speed {knots}")
        ts = ts.astype("datetime64[h]")
        if records:
            prev = records[-1].timestamp
            if ts == prev:
                raise IngestError(f"{path}:{lineno}: duplicate timestamp {format_timestamp(ts)}")
            if ts < prev:
                raise IngestError(f"{path}:{lineno}: timestamp {format_timestamp(ts)} is out of order")
        records.append(RawWindRecord(ts, knots))
    return records


def parse_demand_csv(path) -> list[RawDemandRecord]:
    """Half-hourly demand readings, in timestamp order with no duplicates."""
    records: list[RawDemandRecord] = []
    for lineno, (stamp, value) in _read_rows(path, DEMAND_COLUMNS):
        try:
            ts = parse_timestamp(stamp)
        except ValueError as exc:
            raise IngestError(f"{path}:{lineno}: bad timestamp {stamp!r} ({exc})") from None
        if (ts - ts.astype("datetime64[h]")) % HALF_HOUR != np.timedelta64(0, "m"):
            raise IngestError(f"{path}:{lineno}: timestamp {stamp!r} is not a settlement-period start")
        try:
            mw = float(value)
        except ValueError:
            raise IngestError(f"{path}:{lineno}: demand {value!r} is not a number") from None
        if not np.isfinite(mw) or mw < 0:
            raise IngestError(f"{path}:{lineno}: demand must be finite and non-negative, got {value!r}")
        if records:
            prev = records[-1].timestamp
            if ts == prev:
                raise IngestError(f"{path}:{lineno}: duplicate timestamp {format_timestamp(ts)}")
            if ts < prev:
                raise IngestError(f"{path}:{lineno}: timestamp {format_timestamp(ts)} is out of order")
        records.append(RawDemandRecord(ts, mw))
    return records


def knots_to_ms(speed_knots):
    """Convert knots to m/s (scalar or array)."""
    if np.any(np.asarray(speed_knots) < 0):
        raise ValueError("speed must be non-negative")
    return np.multiply(speed_knots, KNOT_MS)


def ms_to_knots(speed_ms):
    return np.floor(np.divide(speed_ms, KNOT_MS) + 0.5)


def round_half_up(x):
    """Nearest integer with halves rounded away from zero."""
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


# ---------------------------------------------------------------------------
# Gap filling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FillReport:
    filled_count: int
    filled_spans: tuple[tuple[np.datetime64, np.datetime64], ...]
    missing_count: int
    missing_spans: tuple[tuple[np.datetime64, np.datetime64], ...]

    def lines(self) -> list[str]:
        out = [f"filled_points {self.filled_count}", f"missing_points {self.missing_count}"]
        for a, b in self.filled_spans:
            out.append(f"filled {format_timestamp(a)} {format_timestamp(b)} {_span_hours(a, b)}h")
        for a, b in self.missing_spans:
            out.append(f"missing {format_timestamp(a)} {format_timestamp(b)} {_span_hours(a, b)}h")
        return out


def _span_hours(a, b) -> int:
    return int((b - a) // ONE_HOUR) + 1


@dataclass(frozen=True, eq=False)
class CleanedWindSeries:
    """Contiguous hourly knot readings with short gaps interpolated.

    ``speed_knots`` is NaN where a gap was too long to fill; ``filled`` marks
    interpolated hours.
    """

    timestamps: np.ndarray
    speed_knots: np.ndarray
    filled: np.ndarray
    fill_report: FillReport
    location_id: str = "station"
    height_m: float = 10.0

    @property
    def valid(self) -> np.ndarray:
        return ~np.isnan(self.speed_knots)

    @property
    def valid_timestamps(self) -> np.ndarray:
        return self.timestamps[self.valid]

    def to_records(self) -> list[RawWindRecord]:
        return [
            RawWindRecord(t, None if np.isnan(v) else int(v))
            for t, v in zip(self.timestamps, self.speed_knots)
        ]

    def to_wind_series(self, timestamps=None) -> WindSeries:
        """Speeds in m/s at the valid hours (or the given subset of them)."""
        ts = self.valid_timestamps if timestamps is None else np.asarray(timestamps, dtype="datetime64[h]")
        idx = np.searchsorted(self.timestamps, ts)
        if np.any(idx >= len(self.timestamps)) or not np.array_equal(self.timestamps[idx], ts):
            raise ValueError("requested timestamps are outside the series")
        knots = self.speed_knots[idx]
        if np.any(np.isnan(knots)):
            raise ValueError("requested timestamps include missing readings")
        return WindSeries(self.location_id, self.height_m, ts, knots_to_ms(knots))

    def write_csv(self, path, header_lines: Sequence[str] = ()) -> None:
        with open(path, "w", newline="") as fh:
            for line in header_lines:
                fh.write(f"# {line}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["timestamp", "speed_knots", "speed_ms", "filled"])
            for t, v, f in zip(self.timestamps, self.speed_knots, self.filled):
                if np.isnan(v):
                    w.writerow([format_timestamp(t), "", "", "false"])
                else:
                    w.writerow([format_timestamp(t), int(v), f"{v * KNOT_MS:.4f}", "true" if f else "false"])


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """(start, stop) index pairs of consecutive True runs."""
    m = np.concatenate([[False], mask, [False]]).astype(np.int8)
    d = np.diff(m)
    return list(zip(np.flatnonzero(d == 1), np.flatnonzero(d == -1)))


def fill_gaps(records, *, location_id: str = "station", height_m: float = 10.0) -> CleanedWindSeries:
    """Interpolate short gaps on the hourly grid.

    A gap is a run of consecutive missing hours between two readings.  Runs
    shorter than six hours are filled linearly between the flanking readings
    and rounded to the nearest knot (halves up); longer runs, and missing
    hours at either end, are left missing and logged.  Accepts raw records or
    an already cleaned series, in which case earlier fill flags are kept.
    """
    prior_filled = None
    if isinstance(records, CleanedWindSeries):
        prior_filled = records.filled
        location_id, height_m = records.location_id, records.height_m
        records = records.to_records()
    if not records:
        empty = np.array([], dtype="datetime64[h]")
        return CleanedWindSeries(empty, np.array([]), np.array([], dtype=bool),
                                 FillReport(0, (), 0, ()), location_id, height_m)

    stamps = np.array([r.timestamp for r in records], dtype="datetime64[h]")
    if np.any(np.diff(stamps) <= np.timedelta64(0, "h")):
        raise IngestError("records must be sorted by timestamp without duplicates")
    grid = np.arange(stamps[0], stamps[-1] + ONE_HOUR, ONE_HOUR)
    knots = np.full(grid.size, np.nan)
    pos = ((stamps - stamps[0]) // ONE_HOUR).astype(int)
    knots[pos] = [np.nan if r.speed_knots is None else float(r.speed_knots) for r in records]
    filled = np.zeros(grid.size, dtype=bool)
    if prior_filled is not None:
        filled[: prior_filled.size] = prior_filled

    filled_spans, missing_spans = [], []
    for a, b in _runs(np.isnan(knots)):
        length = b - a
        if a == 0 or b == grid.size or length >= MAX_FILL_HOURS:
            missing_spans.append((grid[a], grid[b - 1]))
            log.info("leaving %d-hour gap %s..%s unfilled", length,
                     format_timestamp(grid[a]), format_timestamp(grid[b - 1]))
            continue
        left, right = knots[a - 1], knots[b]
        frac = np.arange(1, length + 1) / (length + 1)
        knots[a:b] = round_half_up(left + (right - left) * frac)
        filled[a:b] = True
        filled_spans.append((grid[a], grid[b - 1]))

    report = FillReport(
        int(filled.sum()), tuple(filled_spans), int(np.isnan(knots).sum()), tuple(missing_spans)
    )
    return CleanedWindSeries(grid, knots, filled, report, location_id, height_m)


def write_coverage_report(path, series: dict[str, CleanedWindSeries], aligned_count: int | None = None) -> None:
    with open(path, "w", newline="\n") as fh:
        for name, s in series.items():
            fh.write(f"[{name}]\n")
            if len(s.timestamps):
                fh.write(f"span {format_timestamp(s.timestamps[0])} {format_timestamp(s.timestamps[-1])}\n")
            fh.write(f"hours {len(s.timestamps)}\n")
            for line in s.fill_report.lines():
                fh.write(line + "\n")
        if aligned_count is not None:
            fh.write(f"[aligned]\nvalid_points {aligned_count}\n")


# ---------------------------------------------------------------------------
# Demand
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HourlyDemand:
    """Contiguous hourly demand (MW); NaN where neither half-hour was reported."""

    timestamps: np.ndarray
    demand_mw: np.ndarray
    single_half_hours: int = field(default=0)

    @property
    def valid_timestamps(self) -> np.ndarray:
        return self.timestamps[~np.isnan(self.demand_mw)]

    def write_csv(self, path, header_lines: Sequence[str] = ()) -> None:
        with open(path, "w", newline="") as fh:
            for line in header_lines:
                fh.write(f"# {line}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["timestamp", "demand_mw"])
            for t, v in zip(self.timestamps, self.demand_mw):
                if not np.isnan(v):
                    w.writerow([format_timestamp(t), f"{v:.6f}"])


def demand_to_hourly(records: Sequence[RawDemandRecord]) -> HourlyDemand:
    """Average each hour's two settlement periods (period-beginning labels)."""
    if not records:
        return HourlyDemand(np.array([], dtype="datetime64[h]"), np.array([]))
    stamps = np.array([r.timestamp for r in records], dtype="datetime64[m]")
    values = np.array([r.demand_mw for r in records], dtype=float)
    hours = stamps.astype("datetime64[h]")
    grid = np.arange(hours[0], hours[-1] + ONE_HOUR, ONE_HOUR)
    idx = ((hours - hours[0]) // ONE_HOUR).astype(int)
    totals = np.zeros(grid.size)
    counts = np.zeros(grid.size, dtype=int)
    np.add.at(totals, idx, values)
    np.add.at(counts, idx, 1)
    with np.errstate(invalid="ignore", divide="ignore"):
        hourly = np.where(counts > 0, totals / counts, np.nan)
    singles = int(np.sum(counts == 1))
    if singles:
        warnings.warn(f"{singles} hour(s) have only one settlement period; using the single value", stacklevel=2)
    return HourlyDemand(grid, hourly, singles)


def build_demand_profile(hourly: HourlyDemand, line_capacity_mw: float = 150.0) -> DemandProfile:
    """Mean demand per hour/season class, scaled so the largest mean equals the line capacity."""
    if not line_capacity_mw > 0:
        raise ValueError("line capacity must be positive")
    ok = ~np.isnan(hourly.demand_mw)
    hours, seasons = hour_season_index(hourly.timestamps[ok])
    vals = hourly.demand_mw[ok]
    flat = (hours - 1) * 4 + (seasons - 1)
    sums = np.bincount(flat, weights=vals, minlength=96)
    counts = np.bincount(flat, minlength=96)
    empty = np.flatnonzero(counts == 0)
    if empty.size:
        k = HourSeasonKey(int(empty[0] // 4) + 1, int(empty[0] % 4) + 1)
        raise IngestError(f"no demand observations for {k} ({empty.size} empty bin(s))")
    means = (sums / counts).reshape(24, 4)
    peak = means.max()
    if peak <= 0:
        raise IngestError("demand is zero everywhere; cannot scale to line capacity")
    return DemandProfile(means / peak * line_capacity_mw)


def write_profile_csv(profile: DemandProfile, path, header_lines: Sequence[str] = ()) -> None:
    with open(path, "w", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["hour", "season", "demand_mw"])
        for key in HourSeasonKey.all():
            w.writerow([key.hour, key.season, f"{profile[key]:.6f}"])


def align(*series) -> np.ndarray:
    """Hours at which every series has a value, sorted ascending."""
    if len(series) < 2:
        raise ValueError("need at least two series to align")
    common = np.asarray(series[0].valid_timestamps, dtype="datetime64[h]")
    for s in series[1:]:
        common = np.intersect1d(common, np.asarray(s.valid_timestamps, dtype="datetime64[h]"))
    if common.size == 0:
        raise IngestError("series have no hours in common")
    log.info("aligned %d valid hourly points", common.size)
    return common
