"""Leader/follower investment game over a shared export line.

The line investor (player 1, leader) picks its own generation capacity
first; local generators (player 2, follower) respond.  Both earn the feed-in
price on delivered energy, the follower pays a per-MWh transmission fee to
the leader, and curtailment is shared pro rata.

Energies come from a *data context*:

* :class:`ReplayData` replays aligned hourly series exactly, splitting each
  hour's curtailment in proportion to output;
* :class:`BinnedData` summarises the series as one joint histogram per
  hour/season class and evaluates expected curtailment cell by cell, then
  splits lifetime curtailment in proportion to potential generation.

Either context yields an :class:`EnergySurface` over the strategy grid,
which depends on the data and grid only.  Costs enter afterwards, so a
parameter sweep reuses one surface.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from typing import Sequence

import numpy as np
from scipy import integrate, special

from .windmodel import BetaParams, HourSeasonKey, JointPowerDistribution, hour_season_index, joint_histogram

P_G_DEFAULT = 74.3
C_T_DEFAULT = 230e6
LINE_CAPACITY_MW = 150.0
SWEEP_STEP = 0.02
TIE_RTOL = 1e-10
TIE_ATOL = 1e-9
_ROW_CHUNK = 8192


# ---------------------------------------------------------------------------
# Economic types and profit functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CostParams:
    """Prices per MWh and the fixed lifetime line cost, all in one currency."""

    p_G: float = P_G_DEFAULT
    p_T: float = 0.26 * P_G_DEFAULT
    c_G1: float = 0.30 * P_G_DEFAULT
    c_G2: float = 0.30 * P_G_DEFAULT
    C_T: float = C_T_DEFAULT

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{f.name} must be finite and non-negative, got {v}")
        if not self.p_G > 0:
            raise ValueError("p_G must be positive")

    @classmethod
    def from_fractions(cls, p_G: float = P_G_DEFAULT, *, p_T: float = 0.26, c_G1: float = 0.30,
                       c_G2: float = 0.30, C_T: float = C_T_DEFAULT) -> "CostParams":
        """Build from per-MWh values given as fractions of ``p_G``."""
        return cls(p_G, p_T * p_G, c_G1 * p_G, c_G2 * p_G, C_T)

    def with_value(self, name: str, value: float) -> "CostParams":
        return replace(self, **{name: value})


@dataclass(frozen=True)
class EnergyQuadruple:
    """Lifetime potential (uncurtailed) and curtailed energy per player, MWh."""

    E_G1: float
    E_G2: float
    E_C1: float
    E_C2: float

    def __post_init__(self):
        for g, c in ((self.E_G1, self.E_C1), (self.E_G2, self.E_C2)):
            if g < 0 or c < 0 or c > g * (1 + 1e-9) + 1e-9:
                raise ValueError(f"need 0 <= curtailed <= generated, got E_G={g}, E_C={c}")


def profit_leader(e: EnergyQuadruple, c: CostParams) -> float:
    return (e.E_G1 - e.E_C1) * c.p_G - e.E_G1 * c.c_G1 + (e.E_G2 - e.E_C2) * c.p_T - c.C_T


def profit_follower(e: EnergyQuadruple, c: CostParams) -> float:
    return (e.E_G2 - e.E_C2) * (c.p_G - c.p_T) - e.E_G2 * c.c_G2


def fair_share_energy(e_g1: float, e_g2: float, e_c_total: float) -> tuple[float, float]:
    """Split lifetime curtailment in proportion to each player's potential energy."""
    if e_c_total == 0:
        return 0.0, 0.0
    total = e_g1 + e_g2
    if total <= 0:
        raise ValueError("cannot share positive curtailment when neither player generates")
    return e_g1 / total * e_c_total, e_g2 / total * e_c_total


@dataclass(frozen=True)
class StrategyGrid:
    max_mw: float = 415.0
    step_mw: float = 0.5

    def __post_init__(self):
        if not self.step_mw > 0:
            raise ValueError("step_mw must be positive")
        if self.max_mw < self.step_mw:
            raise ValueError("max_mw must be at least step_mw")

    @property
    def values(self) -> np.ndarray:
        n = int(math.floor(self.max_mw / self.step_mw + 1e-9)) + 1
        return np.round(np.arange(n) * self.step_mw, 12)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True, eq=False)
class DemandProfile:
    """Mean demand (MW) for each of the 96 hour/season classes.

    ``values[h - 1, s - 1]`` holds hour ``h`` of season ``s``.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.shape != (24, 4):
            raise ValueError(f"demand profile must be 24 x 4, got {v.shape}")
        if np.any(~np.isfinite(v)) or np.any(v < 0):
            raise ValueError("demand values must be finite and non-negative")

    def __getitem__(self, key: HourSeasonKey) -> float:
        return float(self.values[key.hour - 1, key.season - 1])

    @property
    def peak(self) -> float:
        return float(self.values.max())

    @classmethod
    def constant(cls, mw: float) -> "DemandProfile":
        return cls(np.full((24, 4), float(mw)))

    @classmethod
    def synthetic(cls, peak_mw: float = LINE_CAPACITY_MW) -> "DemandProfile":
        """Smooth stand-in profile: evening peak, night trough, higher in winter than summer."""
        hour = np.arange(24)[:, None]
        daily = 0.75 + 0.25 * np.cos(2 * np.pi * (hour - 18) / 24)
        seasonal = np.array([0.9, 0.8, 0.9, 1.0])[None, :]
        v = daily * seasonal
        return cls(v / v.max() * peak_mw)

    @classmethod
    def from_mapping(cls, mapping: dict) -> "DemandProfile":
        v = np.full((24, 4), np.nan)
        for key, mw in mapping.items():
            v[key.hour - 1, key.season - 1] = mw
        if np.any(np.isnan(v)):
            raise ValueError("demand profile mapping must cover all 96 hour/season keys")
        return cls(v)

    def as_dict(self) -> dict:
        return {k: self[k] for k in HourSeasonKey.all()}

    def lookup(self, timestamps) -> np.ndarray:
        hours, seasons = hour_season_index(timestamps)
        return self.values[hours - 1, seasons - 1]


# ---------------------------------------------------------------------------
# Expected energy from distributions
# ---------------------------------------------------------------------------

def _cell_excess(a_lo, a_hi, b_lo, b_hi, demand):
    """E[(X + Y - D)+] for independent X ~ U[a_lo, a_hi], Y ~ U[b_lo, b_hi].

    Degenerate (zero-width) ranges are point masses.  Cells wholly above or
    below the demand line are handled by the linear/zero shortcut; only
    cells that straddle it use the piecewise-polynomial antiderivative.
    """
    a_lo, a_hi, b_lo, b_hi, demand = np.broadcast_arrays(a_lo, a_hi, b_lo, b_hi, demand)
    wa = a_hi - a_lo
    wb = b_hi - b_lo
    lo = a_lo + b_lo - demand
    hi = a_hi + b_hi - demand
    mean_excess = 0.5 * (a_lo + a_hi) + 0.5 * (b_lo + b_hi) - demand
    out = np.where(lo >= 0, mean_excess, 0.0)

    straddle = (lo < 0) & (hi > 0)
    if np.any(straddle):
        wa_s, wb_s = wa[straddle], wb[straddle]
        z = [a_hi + b_hi, a_hi + b_lo, a_lo + b_hi, a_lo + b_lo]
        t = [np.maximum(zz[straddle] - demand[straddle], 0.0) for zz in z]
        both = (wa_s > 0) & (wb_s > 0)
        only_a = (wa_s > 0) & ~(wb_s > 0)
        only_b = ~(wa_s > 0) & (wb_s > 0)
        res = np.zeros(wa_s.shape)
        with np.errstate(invalid="ignore", divide="ignore"):
            cubic = (t[0] ** 3 - t[1] ** 3 - t[2] ** 3 + t[3] ** 3) / 6.0 / (wa_s * wb_s)
            # one-dimensional ranges: X varies (b fixed) or Y varies (a fixed)
            quad_a = (t[0] ** 2 - t[2] ** 2) / 2.0 / wa_s
            quad_b = (t[0] ** 2 - t[1] ** 2) / 2.0 / wb_s
        res = np.where(both, cubic, res)
        res = np.where(only_a, quad_a, res)
        res = np.where(only_b, quad_b, res)
        out = out.copy()
        out[straddle] = res
    return out


def _cells(dist: JointPowerDistribution):
    """Non-empty cells as arrays (x1_lo, x1_hi, x2_lo, x2_hi, weight)."""
    i, j = np.nonzero(dist.probs)
    e = dist.edges
    return e[i], e[i + 1], e[j], e[j + 1], dist.probs[i, j]


def _beta_tail(params: BetaParams, t: float) -> tuple[float, float]:
    """(P[X > t], E[X; X > t]) in closed form via the regularised incomplete beta."""
    a, b = params.alpha, params.beta
    t = min(max(t, 0.0), 1.0)
    prob = special.betaincc(a, b, t)
    partial_mean = a / (a + b) * special.betaincc(a + 1, b, t)
    return float(prob), float(partial_mean)


def expected_generation(dist, p_n1: float, p_n2: float | None = None) -> float:
    """Expected uncurtailed output (MW) for one player or a pair.

    ``dist`` is a :class:`BetaParams` (one player, capacity ``p_n1``), a
    :class:`JointPowerDistribution` (pair), or a tuple of two independent
    :class:`BetaParams` (pair).
    """
    if isinstance(dist, BetaParams):
        if p_n1 == 0:
            return 0.0
        val, _ = integrate.quad(lambda x: x * p_n1 * dist.pdf(x), 0.0, 1.0, limit=200, epsabs=1e-12)
        return float(val)
    p_n2 = 0.0 if p_n2 is None else p_n2
    if isinstance(dist, JointPowerDistribution):
        l1, h1, l2, h2, w = _cells(dist)
        return float(np.sum(w * (0.5 * (l1 + h1) * p_n1 + 0.5 * (l2 + h2) * p_n2)))
    if isinstance(dist, tuple) and len(dist) == 2:
        return expected_generation(dist[0], p_n1) + expected_generation(dist[1], p_n2)
    raise TypeError(f"unsupported distribution {type(dist).__name__}")


def expected_curtailment(dist, p_n1: float, p_n2: float | None = None, demand: float = 0.0) -> float:
    """Expected power curtailed (MW) in one interval of demand ``demand``.

    This is the expected output over the excess region minus demand times
    the probability of excess.  Single Beta: adaptive quadrature.  Joint
    histogram: exact sum over cells, each treated as a uniform rectangle.
    Independent Beta pair: quadrature over player 1 with the inner integral
    in closed form.
    """
    if demand < 0:
        raise ValueError("demand must be non-negative")
    if isinstance(dist, BetaParams):
        if p_n1 <= demand:
            return 0.0
        lo = demand / p_n1
        val, _ = integrate.quad(lambda x: (p_n1 * x - demand) * dist.pdf(x), lo, 1.0, limit=200, epsabs=1e-12)
        return float(val)
    p_n2 = 0.0 if p_n2 is None else p_n2
    if p_n1 + p_n2 <= demand:
        return 0.0
    if isinstance(dist, JointPowerDistribution):
        l1, h1, l2, h2, w = _cells(dist)
        return float(np.sum(w * _cell_excess(l1 * p_n1, h1 * p_n1, l2 * p_n2, h2 * p_n2, demand)))
    if isinstance(dist, tuple) and len(dist) == 2:
        f1, f2 = dist
        if p_n2 == 0:
            return expected_curtailment(f1, p_n1, demand=demand)
        if p_n1 == 0:
            return expected_curtailment(f2, p_n2, demand=demand)

        def inner(x1):
            rest = demand - x1 * p_n1
            prob, pmean = _beta_tail(f2, rest / p_n2)
            return (p_n2 * pmean - rest * prob) * f1.pdf(x1)

        val, _ = integrate.quad(inner, 0.0, 1.0, limit=200, epsabs=1e-12)
        return float(val)
    raise TypeError(f"unsupported distribution {type(dist).__name__}")


# ---------------------------------------------------------------------------
# Data contexts and energy surfaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EnergySurface:
    """Lifetime energies for every (P_N1, P_N2) pair on a grid."""

    p1: np.ndarray  # (m,)
    p2: np.ndarray  # (n,)
    e_g1: np.ndarray  # (m,)
    e_g2: np.ndarray  # (n,)
    e_c1: np.ndarray  # (m, n)
    e_c2: np.ndarray  # (m, n)

    def profits(self, c: CostParams) -> tuple[np.ndarray, np.ndarray]:
        eg1 = self.e_g1[:, None]
        eg2 = self.e_g2[None, :]
        pi1 = (eg1 - self.e_c1) * c.p_G - eg1 * c.c_G1 + (eg2 - self.e_c2) * c.p_T - c.C_T
        pi2 = (eg2 - self.e_c2) * (c.p_G - c.p_T) - eg2 * c.c_G2
        return pi1, pi2

    def energies(self, i: int, j: int) -> EnergyQuadruple:
        return EnergyQuadruple(
            float(self.e_g1[i]), float(self.e_g2[j]), float(self.e_c1[i, j]), float(self.e_c2[i, j])
        )


def _map_rows(fn, p1: np.ndarray, workers: int) -> list:
    if workers <= 1:
        return [fn(v) for v in p1]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, p1))


def _as_demand(demand, n: int) -> np.ndarray:
    d = np.asarray(demand, dtype=float)
    if d.ndim == 0:
        d = np.full(n, float(d))
    if d.shape != (n,):
        raise ValueError(f"demand has shape {d.shape}, expected ({n},)")
    if np.any(d < 0):
        raise ValueError("demand must be non-negative")
    return d


@dataclass(frozen=True, eq=False)
class ReplayData:
    """Aligned hourly normalised outputs of both players plus hourly demand (MW)."""

    x1: np.ndarray
    x2: np.ndarray
    demand: np.ndarray

    def __post_init__(self):
        x1 = np.asarray(self.x1, dtype=float)
        x2 = np.asarray(self.x2, dtype=float)
        if x1.ndim != 1 or x1.shape != x2.shape:
            raise ValueError(f"power series are misaligned: {x1.shape} vs {x2.shape}")
        object.__setattr__(self, "x1", x1)
        object.__setattr__(self, "x2", x2)
        object.__setattr__(self, "demand", _as_demand(self.demand, x1.size))

    def __len__(self):
        return self.x1.size

    def _row(self, p_n1: float, p2: np.ndarray):
        eg1 = p_n1 * self.x1.sum()
        ec1 = np.zeros(p2.size)
        ec2 = np.zeros(p2.size)
        for start in range(0, len(self), _ROW_CHUNK):
            sl = slice(start, start + _ROW_CHUNK)
            out1 = p_n1 * self.x1[sl]
            out2 = p2[:, None] * self.x2[sl]
            total = out1 + out2
            excess = np.maximum(total - self.demand[sl], 0.0)
            with np.errstate(invalid="ignore", divide="ignore"):
                share = np.where(total > 0, excess / total, 0.0)
            ec1 += (share * out1).sum(axis=1)
            ec2 += (share * out2).sum(axis=1)
        return eg1, ec1, ec2

    def surface(self, p1, p2, workers: int = 1) -> EnergySurface:
        p1 = np.asarray(p1, dtype=float)
        p2 = np.asarray(p2, dtype=float)
        rows = _map_rows(lambda v: self._row(v, p2), p1, workers)
        return EnergySurface(
            p1, p2,
            np.array([r[0] for r in rows]),
            p2 * self.x2.sum(),
            np.array([r[1] for r in rows]).reshape(p1.size, p2.size),
            np.array([r[2] for r in rows]).reshape(p1.size, p2.size),
        )

    def restrict(self, mask) -> "ReplayData":
        return ReplayData(self.x1[mask], self.x2[mask], self.demand[mask])


def empirical_energies(p_n1: float, p_n2: float, x1, x2, demand) -> EnergyQuadruple:
    """Replay aligned series at one capacity pair, sharing curtailment pro rata each hour."""
    data = ReplayData(x1, x2, demand)
    s = data.surface([p_n1], [p_n2])
    return s.energies(0, 0)


@dataclass(frozen=True)
class BinSummary:
    key: HourSeasonKey
    dist: JointPowerDistribution
    hours: int
    demand_mw: float


@dataclass(frozen=True, eq=False)
class BinnedData:
    """Per hour/season joint histograms with hour counts and bin demand."""

    bins: tuple[BinSummary, ...]

    @classmethod
    def from_series(cls, x1, x2, timestamps, demand: DemandProfile, bins: int = 20) -> "BinnedData":
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        ts = np.asarray(timestamps, dtype="datetime64[h]")
        if not (x1.shape == x2.shape == ts.shape):
            raise ValueError("power series and timestamps are misaligned")
        hours, seasons = hour_season_index(ts)
        out = []
        for key in HourSeasonKey.all():
            sel = (hours == key.hour) & (seasons == key.season)
            n = int(sel.sum())
            if n == 0:
                continue
            out.append(BinSummary(key, joint_histogram(x1[sel], x2[sel], key, bins), n, demand[key]))
        if not out:
            raise ValueError("no data to bin")
        return cls(tuple(out))

    @property
    def hours(self) -> int:
        return sum(b.hours for b in self.bins)

    def _flat_cells(self):
        parts = [(*_cells(b.dist), b.hours, b.demand_mw) for b in self.bins]
        l1 = np.concatenate([p[0] for p in parts])
        h1 = np.concatenate([p[1] for p in parts])
        l2 = np.concatenate([p[2] for p in parts])
        h2 = np.concatenate([p[3] for p in parts])
        weight = np.concatenate([p[4] * p[5] for p in parts])  # probability x hours
        dem = np.concatenate([np.full(p[4].size, p[6]) for p in parts])
        return l1, h1, l2, h2, weight, dem

    def surface(self, p1, p2, workers: int = 1) -> EnergySurface:
        p1 = np.asarray(p1, dtype=float)
        p2 = np.asarray(p2, dtype=float)
        l1, h1, l2, h2, weight, dem = self._flat_cells()
        mean_x1 = np.sum(weight * 0.5 * (l1 + h1))
        mean_x2 = np.sum(weight * 0.5 * (l2 + h2))

        def row(v):
            exc = _cell_excess(
                (l1 * v)[None, :], (h1 * v)[None, :], p2[:, None] * l2, p2[:, None] * h2, dem[None, :]
            )
            return exc @ weight

        e_c = np.array(_map_rows(row, p1, workers)).reshape(p1.size, p2.size)
        e_g1 = p1 * mean_x1
        e_g2 = p2 * mean_x2
        tot = e_g1[:, None] + e_g2[None, :]
        with np.errstate(invalid="ignore", divide="ignore"):
            e_c1 = np.where(tot > 0, e_g1[:, None] / tot * e_c, 0.0)
            e_c2 = np.where(tot > 0, e_g2[None, :] / tot * e_c, 0.0)
        return EnergySurface(p1, p2, e_g1, e_g2, e_c1, e_c2)


def energy_surface(data, grid: StrategyGrid, workers: int = 1) -> EnergySurface:
    if isinstance(data, EnergySurface):
        return data
    g = grid.values
    return data.surface(g, g, workers=workers)


# ---------------------------------------------------------------------------
# Best responses and equilibrium
# ---------------------------------------------------------------------------

def _first_max(values: np.ndarray, axis: int = -1) -> np.ndarray:
    """Index of the maximum along ``axis``, ties (within tolerance) to the smallest index."""
    best = values.max(axis=axis, keepdims=True)
    tol = TIE_ATOL + TIE_RTOL * np.abs(best)
    return np.argmax(values >= best - tol, axis=axis)


def follower_best_response(p_n1: float, c: CostParams, grid: StrategyGrid, data) -> float:
    """Follower capacity maximising its profit given the leader's capacity."""
    p2 = grid.values
    if isinstance(data, EnergySurface):
        i = int(np.flatnonzero(np.isclose(data.p1, p_n1))[0])
        _, pi2 = data.profits(c)
        return float(data.p2[_first_max(pi2[i])])
    s = data.surface([p_n1], p2)
    _, pi2 = s.profits(c)
    return float(p2[_first_max(pi2[0])])


@dataclass(frozen=True, eq=False)
class EquilibriumResult:
    p_n1_star: float
    p_n2_star: float
    profit1: float
    profit2: float
    energies: EnergyQuadruple
    response_p1: np.ndarray = field(repr=False)
    response_p2: np.ndarray = field(repr=False)
    response_profit1: np.ndarray = field(repr=False)
    response_profit2: np.ndarray = field(repr=False)

    @property
    def viable1(self) -> bool:
        return self.profit1 >= 0

    @property
    def viable2(self) -> bool:
        return self.profit2 >= 0

    @property
    def follower_response_curve(self) -> dict[float, float]:
        return dict(zip(self.response_p1.tolist(), self.response_p2.tolist()))

    def write_response_csv(self, path, header_lines: Sequence[str] = ()) -> None:
        with open(path, "w", newline="") as fh:
            for line in header_lines:
                fh.write(f"# {line}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["p_n1", "p_n2_star", "profit2"])
            for a, b, p in zip(self.response_p1, self.response_p2, self.response_profit2):
                w.writerow([_fmt(a), _fmt(b), _fmt(p)])


def solve_equilibrium(c: CostParams, grid: StrategyGrid, data, workers: int = 1) -> EquilibriumResult:
    """Subgame-perfect equilibrium on the grid by backward induction.

    ``data`` is a :class:`ReplayData`, a :class:`BinnedData` or a
    precomputed :class:`EnergySurface`.  Profit ties go to the smaller
    capacity for both players.
    """
    s = energy_surface(data, grid, workers)
    pi1, pi2 = s.profits(c)
    rows = np.arange(s.p1.size)
    j_star = _first_max(pi2, axis=1)
    leader_vals = pi1[rows, j_star]
    i = int(_first_max(leader_vals))
    j = int(j_star[i])
    return EquilibriumResult(
        float(s.p1[i]), float(s.p2[j]), float(pi1[i, j]), float(pi2[i, j]), s.energies(i, j),
        s.p1.copy(), s.p2[j_star], leader_vals, pi2[rows, j_star],
    )


# ---------------------------------------------------------------------------
# Scenario sweeps
# ---------------------------------------------------------------------------

SCENARIOS = {
    1: dict(vary="c_G2", start=0.06, stop=0.52, fixed=dict(c_G1=0.30, p_T=0.26, c_G2=0.30)),
    2: dict(vary="c_G1", start=0.14, stop=0.50, fixed=dict(c_G1=0.30, p_T=0.26, c_G2=0.30)),
    3: dict(vary="p_T", start=0.0, stop=0.76, fixed=dict(c_G1=0.26, c_G2=0.20, p_T=0.26)),
}
SWEEP_PARAMS = ("c_G1", "c_G2", "p_T")


@dataclass(frozen=True)
class SweepRow:
    scenario_id: int
    varied_param: str
    value: float  # fraction of p_G
    p_n1_star: float
    p_n2_star: float
    profit1: float
    profit2: float
    e_g1: float
    e_g2: float
    e_c1: float
    e_c2: float
    viable1: bool
    viable2: bool

    @property
    def total_capacity(self) -> float:
        return self.p_n1_star + self.p_n2_star


SWEEP_COLUMNS = [f.name for f in fields(SweepRow)]


def sweep_values(start: float, stop: float, step: float = SWEEP_STEP) -> np.ndarray:
    if not step > 0:
        raise ValueError("step must be positive")
    if stop < start:
        return np.empty(0)
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + np.arange(n) * step, 10)


def scenario_costs(scenario_id: int, p_G: float = P_G_DEFAULT, C_T: float = C_T_DEFAULT) -> CostParams:
    return CostParams.from_fractions(p_G, C_T=C_T, **SCENARIOS[scenario_id]["fixed"])


def scenario_sweep(
    base: CostParams,
    vary: str,
    start: float,
    stop: float,
    step: float = SWEEP_STEP,
    grid: StrategyGrid | None = None,
    data=None,
    *,
    scenario_id: int = 0,
    workers: int = 1,
) -> list[SweepRow]:
    """Solve the game at each value of one cost parameter.

    ``start``, ``stop`` and ``step`` are fractions of ``base.p_G``; the
    energy surface is computed once and reused across the sweep.
    """
    if vary not in SWEEP_PARAMS:
        raise ValueError(f"can only sweep one of {SWEEP_PARAMS}, got {vary!r}")
    values = sweep_values(start, stop, step)
    if values.size == 0:
        return []
    grid = grid or StrategyGrid()
    surface = energy_surface(data, grid, workers)
    rows = []
    for v in values:
        eq = solve_equilibrium(base.with_value(vary, float(v) * base.p_G), grid, surface)
        e = eq.energies
        rows.append(SweepRow(
            scenario_id, vary, float(v), eq.p_n1_star, eq.p_n2_star, eq.profit1, eq.profit2,
            e.E_G1, e.E_G2, e.E_C1, e.E_C2, eq.viable1, eq.viable2,
        ))
    return rows


def run_scenario(scenario_id: int, grid: StrategyGrid, data, *, p_G: float = P_G_DEFAULT,
                 C_T: float = C_T_DEFAULT, step: float = SWEEP_STEP, workers: int = 1) -> list[SweepRow]:
    spec = SCENARIOS[scenario_id]
    return scenario_sweep(
        scenario_costs(scenario_id, p_G, C_T), spec["vary"], spec["start"], spec["stop"], step,
        grid, data, scenario_id=scenario_id, workers=workers,
    )


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_sweep_csv(rows: Sequence[SweepRow], path, header_lines: Sequence[str] = ()) -> None:
    with open(path, "w", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for r in rows:
            w.writerow([r.scenario_id, r.varied_param] + [_fmt(getattr(r, k)) for k in SWEEP_COLUMNS[2:]])
