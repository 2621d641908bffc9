"""Wind resource models: distribution fits, synthetic series and turbine power.

Speeds are in m/s, heights in metres, powers normalised to rated output
unless stated otherwise.  All samplers draw from numpy's PCG64 generator so
that a given seed reproduces a series bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate, optimize, special

RNG_ALGORITHM = "numpy.PCG64"
DEFAULT_START = np.datetime64("2001-01-01T00", "h")
ONE_HOUR = np.timedelta64(1, "h")

# Season 1 = Spring (MAM), 2 = Summer (JJA), 3 = Autumn (SON), 4 = Winter (DJF).
_SEASON_OF_MONTH = np.array([4, 4, 1, 1, 1, 2, 2, 2, 3, 3, 3, 4])
_SEASON_NAMES = {1: "Spring", 2: "Summer", 3: "Autumn", 4: "Winter"}


class FitError(ValueError):
    """Raised when a distribution cannot be fitted to the given samples."""


def make_rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def spawn_seeds(seed: int, n: int) -> list[int]:
    """Derive ``n`` independent integer seeds from one master seed."""
    children = np.random.SeedSequence(seed).spawn(n)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeibullParams:
    scale_c: float
    shape_k: float
    # Fraction of calm (exactly zero) readings left out of the fit.
    excluded_fraction: float = field(default=0.0, compare=False, repr=False)

    def __post_init__(self):
        if not (self.scale_c > 0 and self.shape_k > 0):
            raise ValueError(f"Weibull parameters must be positive, got c={self.scale_c}, k={self.shape_k}")

    def pdf(self, u):
        u = np.asarray(u, dtype=float)
        c, k = self.scale_c, self.shape_k
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (k / c) * (u / c) ** (k - 1) * np.exp(-((u / c) ** k))
        return np.where(u < 0, 0.0, out)

    def cdf(self, u):
        u = np.maximum(np.asarray(u, dtype=float), 0.0)
        return -np.expm1(-((u / self.scale_c) ** self.shape_k))

    def mean(self) -> float:
        return self.scale_c * math.gamma(1.0 + 1.0 / self.shape_k)


@dataclass(frozen=True)
class BetaParams:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"Beta parameters must be positive, got alpha={self.alpha}, beta={self.beta}")

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self.alpha, self.beta
        inside = (x > 0) & (x < 1)
        xs = np.where(inside, x, 0.5)
        logpdf = (a - 1) * np.log(xs) + (b - 1) * np.log1p(-xs) - special.betaln(a, b)
        return np.where(inside, np.exp(logpdf), 0.0)

    def mean(self) -> float:
        return self.alpha / (self.alpha + self.beta)

    def sample(self, n: int, seed) -> np.ndarray:
        return make_rng(seed).beta(self.alpha, self.beta, size=n)


@dataclass(frozen=True)
class HourSeasonKey:
    """One of the 96 (hour-of-day, season) classes; hour 1 is 00:00."""

    hour: int
    season: int

    def __post_init__(self):
        if not (1 <= self.hour <= 24 and 1 <= self.season <= 4):
            raise ValueError(f"invalid hour/season key ({self.hour}, {self.season})")

    def __str__(self):
        return f"hour {self.hour} ({self.hour - 1:02d}:00), {_SEASON_NAMES[self.season]}"

    @classmethod
    def of(cls, timestamp) -> "HourSeasonKey":
        hours, seasons = hour_season_index(np.atleast_1d(np.datetime64(timestamp, "h")))
        return cls(int(hours[0]), int(seasons[0]))

    @classmethod
    def all(cls) -> list["HourSeasonKey"]:
        return [cls(h, s) for s in range(1, 5) for h in range(1, 25)]


def hour_season_index(timestamps) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised (hour 1..24, season 1..4) labels for hourly UTC timestamps."""
    ts = np.asarray(timestamps, dtype="datetime64[h]")
    day_start = ts.astype("datetime64[D]")
    hour = (ts - day_start).astype(int) + 1
    month = ts.astype("datetime64[M]").astype(int) % 12
    return hour, _SEASON_OF_MONTH[month]


@dataclass(frozen=True, eq=False)
class WindSeries:
    """Hourly wind speeds at one site and measurement height.

    Timestamps lie on the UTC hourly grid and are strictly increasing.  A
    freshly generated series is contiguous; series cut down to jointly valid
    hours may skip hours.
    """

    location_id: str
    height_m: float
    timestamps: np.ndarray
    speeds: np.ndarray

    def __post_init__(self):
        ts = np.asarray(self.timestamps, dtype="datetime64[h]")
        sp = np.asarray(self.speeds, dtype=float)
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "speeds", sp)
        if ts.ndim != 1 or ts.shape != sp.shape:
            raise ValueError("timestamps and speeds must be 1-D and of equal length")
        if not self.height_m > 0:
            raise ValueError(f"height must be positive, got {self.height_m}")
        if len(ts) > 1 and np.any(np.diff(ts) <= np.timedelta64(0, "h")):
            raise ValueError("timestamps must be strictly increasing")
        if not np.all(np.isfinite(sp)) or np.any(sp < 0):
            raise ValueError("wind speeds must be finite and non-negative")

    def __len__(self):
        return len(self.speeds)

    def __eq__(self, other):
        if not isinstance(other, WindSeries):
            return NotImplemented
        return (
            self.location_id == other.location_id
            and self.height_m == other.height_m
            and np.array_equal(self.timestamps, other.timestamps)
            and np.array_equal(self.speeds, other.speeds)
        )

    @property
    def is_contiguous(self) -> bool:
        return bool(np.all(np.diff(self.timestamps) == ONE_HOUR))

    @property
    def valid_timestamps(self) -> np.ndarray:
        return self.timestamps

    def select(self, timestamps) -> "WindSeries":
        """Restrict the series to the given subset of its timestamps."""
        wanted = np.asarray(timestamps, dtype="datetime64[h]")
        idx = np.searchsorted(self.timestamps, wanted)
        ok = (idx < len(self.timestamps)) & (self.timestamps[np.minimum(idx, len(self) - 1)] == wanted)
        if not np.all(ok):
            raise ValueError("requested timestamps are not all present in the series")
        return replace(self, timestamps=wanted, speeds=self.speeds[idx])


@dataclass(frozen=True)
class PowerCurve:
    """Normalised turbine power curve.

    ``model="sigmoid"`` is the logistic approximation
    ``1 / (1 + exp(-a (u - b)))`` between cut-in and cut-out.  ``"cubic"``
    is the textbook generic curve rising as ``u**3`` from cut-in to rated
    speed and flat at 1 up to cut-out.
    """

    rated_mw: float = 2.05
    cut_in: float = 3.0
    cut_out: float = 28.0
    rated_speed: float = 13.0
    sigmoid_a: float = 0.3921
    sigmoid_b: float = 16.4287
    model: str = "sigmoid"

    def __post_init__(self):
        if not self.rated_mw > 0:
            raise ValueError("rated_mw must be positive")
        if not (0 < self.cut_in < self.rated_speed < self.cut_out):
            raise ValueError(
                f"need 0 < cut_in < rated_speed < cut_out, got "
                f"{self.cut_in}, {self.rated_speed}, {self.cut_out}"
            )
        if self.model not in ("sigmoid", "cubic"):
            raise ValueError(f"unknown power curve model {self.model!r}")

    @classmethod
    def enercon_e82(cls) -> "PowerCurve":
        return cls()

    @classmethod
    def generic(cls) -> "PowerCurve":
        return cls(rated_mw=1.0, cut_in=3.0, rated_speed=13.0, cut_out=25.0, model="cubic")

    def __call__(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        running = (u >= self.cut_in) & (u < self.cut_out)
        if self.model == "sigmoid":
            z = -self.sigmoid_a * (u - self.sigmoid_b)
            shape = 1.0 / (1.0 + np.exp(np.clip(z, -700.0, 700.0)))
        else:
            ci3, r3 = self.cut_in**3, self.rated_speed**3
            shape = np.where(u < self.rated_speed, (u**3 - ci3) / (r3 - ci3), 1.0)
        return np.clip(np.where(running, shape, 0.0), 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class JointPowerDistribution:
    """Relative-frequency grid of normalised power pairs for one hour/season class.

    ``probs[i, j]`` is the probability that player 1's output lies in the
    i-th bin and player 2's in the j-th.  Within a cell the density is taken
    as uniform.
    """

    key: HourSeasonKey | None
    probs: np.ndarray
    n_samples: int = 0

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", p)
        if p.ndim != 2 or p.shape[0] != p.shape[1] or p.shape[0] < 2:
            raise ValueError("probs must be a square B x B grid with B >= 2")
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
            raise ValueError("cell probabilities must be non-negative and sum to 1")

    @property
    def bin_count(self) -> int:
        return self.probs.shape[0]

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.bin_count + 1)

    @property
    def centers(self) -> np.ndarray:
        e = self.edges
        return 0.5 * (e[:-1] + e[1:])

    def marginal(self, axis: int) -> np.ndarray:
        """Marginal bin probabilities of player 1 (axis 0) or player 2 (axis 1)."""
        return self.probs.sum(axis=1 - axis)

    @classmethod
    def uniform(cls, bins: int = 2, key: HourSeasonKey | None = None) -> "JointPowerDistribution":
        return cls(key, np.full((bins, bins), 1.0 / bins**2))

    def sample(self, n: int, seed) -> tuple[np.ndarray, np.ndarray]:
        rng = make_rng(seed)
        flat = self.probs.ravel()
        cells = rng.choice(flat.size, size=n, p=flat / flat.sum())
        i, j = np.divmod(cells, self.bin_count)
        w = 1.0 / self.bin_count
        x1 = (i + rng.random(n)) * w
        x2 = (j + rng.random(n)) * w
        return x1, x2


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------

MIN_FIT_SAMPLES = 30
_BETA_EPS = 1e-6


def fit_weibull(samples) -> WeibullParams:
    """Maximum-likelihood Weibull fit, leaving exact-zero calms out.

    The shape is the root of the profile-likelihood equation
    ``sum(u^k ln u)/sum(u^k) - 1/k - mean(ln u) = 0``; the scale then
    follows in closed form.
    """
    u = np.asarray(samples, dtype=float).ravel()
    if u.size < MIN_FIT_SAMPLES:
        raise FitError(f"need at least {MIN_FIT_SAMPLES} samples, got {u.size}")
    if np.any(~np.isfinite(u)) or np.any(u < 0):
        raise FitError("wind speed samples must be finite and non-negative")
    positive = u[u > 0]
    n_zero = u.size - positive.size
    if positive.size == 0:
        raise FitError(f"all {u.size} samples are zero; nothing to fit")
    if positive.size < 2:
        raise FitError(f"only {positive.size} non-zero sample(s) out of {u.size}")

    # Rescaling by the maximum keeps u**k finite for large k.
    top = positive.max()
    logs = np.log(positive / top)
    mean_log = logs.mean()
    if np.ptp(logs) == 0.0:
        raise FitError(
            f"degenerate fit: {positive.size} identical non-zero samples "
            f"({n_zero} zeros excluded); shape parameter diverges"
        )

    def profile(k):
        w = np.exp(k * logs)
        return (w * logs).sum() / w.sum() - 1.0 / k - mean_log

    lo, hi = 1e-3, 1.0
    while profile(hi) < 0:
        hi *= 2.0
        if hi > 1e4:
            raise FitError("degenerate fit: shape parameter exceeds 1e4")
    k = optimize.brentq(profile, lo, hi, xtol=1e-12, rtol=1e-12)
    c = top * np.exp(k * logs).mean() ** (1.0 / k)
    return WeibullParams(float(c), float(k), excluded_fraction=n_zero / u.size)


def fit_beta(normalized_power) -> BetaParams:
    """Maximum-likelihood Beta fit on samples clamped to [1e-6, 1 - 1e-6]."""
    x = np.asarray(normalized_power, dtype=float).ravel()
    if x.size < MIN_FIT_SAMPLES:
        raise FitError(f"need at least {MIN_FIT_SAMPLES} samples, got {x.size}")
    if np.any(~np.isfinite(x)):
        raise FitError("power samples must be finite")
    n_low = int(np.sum(x <= _BETA_EPS))
    n_high = int(np.sum(x >= 1 - _BETA_EPS))
    x = np.clip(x, _BETA_EPS, 1 - _BETA_EPS)
    if np.ptp(x) == 0.0:
        raise FitError(
            f"degenerate fit: all {x.size} samples equal {x[0]:.6g} after clamping "
            f"({n_low} at the lower bound, {n_high} at the upper bound)"
        )
    g1 = np.log(x).mean()
    g2 = np.log1p(-x).mean()

    # Method-of-moments start, then Newton on the digamma score equations.
    m, v = x.mean(), x.var()
    common = max(m * (1 - m) / v - 1, 1e-3)
    theta = np.log([m * common, (1 - m) * common])
    for _ in range(200):
        a, b = np.exp(theta)
        ab = special.digamma(a + b)
        score = np.array([special.digamma(a) - ab - g1, special.digamma(b) - ab - g2])
        t_ab = special.polygamma(1, a + b)
        jac = np.array([
            [special.polygamma(1, a) - t_ab, -t_ab],
            [-t_ab, special.polygamma(1, b) - t_ab],
        ]) * np.array([a, b])  # chain rule for the log parametrisation
        step = np.linalg.solve(jac, score)
        step = np.clip(step, -2.0, 2.0)
        theta = theta - step
        if np.max(np.abs(step)) < 1e-12:
            break
    else:
        raise FitError("Beta likelihood iteration did not converge")
    a, b = np.exp(theta)
    return BetaParams(float(a), float(b))


def density_integral(params: WeibullParams | BetaParams) -> float:
    """Numerical integral of the density over its support (should be 1)."""
    if isinstance(params, WeibullParams):
        val, _ = integrate.quad(params.pdf, 0, np.inf, limit=200)
        return float(val)
    # Integrate in the CDF-friendly split to cope with endpoint singularities.
    val = 0.0
    for lo, hi in ((0.0, 0.5), (0.5, 1.0)):
        part, _ = integrate.quad(params.pdf, lo, hi, limit=200)
        val += part
    return float(val)


# ---------------------------------------------------------------------------
# Series generation and transformation
# ---------------------------------------------------------------------------

def sample_wind(
    params: WeibullParams,
    n: int,
    seed,
    *,
    location_id: str = "synthetic",
    height_m: float = 10.0,
    start=DEFAULT_START,
) -> WindSeries:
    """Independent Weibull speeds by inverse-CDF transform of uniforms."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    uniforms = make_rng(seed).random(n)
    speeds = params.scale_c * (-np.log1p(-uniforms)) ** (1.0 / params.shape_k)
    ts = np.datetime64(start, "h") + np.arange(n) * ONE_HOUR
    return WindSeries(location_id, height_m, ts, speeds)


def correlation_weight(r: float) -> float:
    """Blending weight ``arccos(1 - 2r) / pi`` for a target correlation ``r``."""
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"correlation must lie in [0, 1], got {r}")
    return math.acos(1.0 - 2.0 * r) / math.pi


def correlate(reference: WindSeries, independent: WindSeries, r: float) -> WindSeries:
    """Blend an independent series towards a reference series.

    The result keeps the independent series' location and height.  Note a
    linear blend of two Weibull series is not itself Weibull distributed.
    """
    w = correlation_weight(r)
    if len(reference) != len(independent):
        raise ValueError(f"series lengths differ: {len(reference)} vs {len(independent)}")
    if not np.array_equal(reference.timestamps, independent.timestamps):
        raise ValueError("series timestamps are not aligned")
    if w == 1.0:
        speeds = reference.speeds.copy()
    elif w == 0.0:
        speeds = independent.speeds.copy()
    else:
        speeds = w * reference.speeds + (1.0 - w) * independent.speeds
    return replace(independent, speeds=speeds)


def shear_factor(z_a: float, z_h: float, z_o: float) -> float:
    if min(z_a, z_h, z_o) <= 0:
        raise ValueError("heights and roughness length must be positive")
    if z_a == z_o:
        raise ValueError("anemometer height equals roughness length; shear ratio undefined")
    if not (z_a > z_o and z_h > z_o):
        raise ValueError("anemometer and hub heights must exceed the roughness length")
    return math.log(z_h / z_o) / math.log(z_a / z_o)


def extrapolate_hub(series: WindSeries, z_a: float = 10.0, z_h: float = 85.0, z_o: float = 0.03) -> WindSeries:
    """Scale speeds from anemometer height to hub height with the log shear law."""
    factor = shear_factor(z_a, z_h, z_o)
    speeds = series.speeds if z_h == z_a else series.speeds * factor
    return replace(series, height_m=float(z_h), speeds=speeds)


def wind_to_power(series, curve: PowerCurve) -> np.ndarray:
    """Normalised power in [0, 1] for a WindSeries or an array of speeds."""
    speeds = series.speeds if isinstance(series, WindSeries) else np.asarray(series, dtype=float)
    if np.any(speeds < 0):
        raise ValueError("wind speeds must be non-negative")
    return curve(speeds)


def joint_histogram(p1, p2, key: HourSeasonKey | None = None, bins: int = 20) -> JointPowerDistribution:
    """B x B relative-frequency grid of paired normalised powers."""
    p1 = np.asarray(p1, dtype=float).ravel()
    p2 = np.asarray(p2, dtype=float).ravel()
    if p1.shape != p2.shape:
        raise ValueError(f"power series lengths differ: {p1.size} vs {p2.size}")
    if p1.size == 0:
        raise ValueError("cannot build a histogram from empty series")
    if bins < 2:
        raise ValueError(f"need at least 2 bins, got {bins}")
    edges = np.linspace(0.0, 1.0, bins + 1)
    counts, _, _ = np.histogram2d(np.clip(p1, 0, 1), np.clip(p2, 0, 1), bins=[edges, edges])
    return JointPowerDistribution(key, counts / p1.size, n_samples=p1.size)


def fleet_wind(
    n_generators: int,
    params: WeibullParams,
    r: float,
    n: int,
    seed: int,
    *,
    height_m: float = 85.0,
) -> list[WindSeries]:
    """Cross-correlated wind at each generator site.

    Every site first gets its own independent Weibull draw; the first site is
    the reference and the others are blended towards it with weight set by
    ``r``.  Independent draws depend only on ``seed``, so runs at different
    ``r`` with the same seed are paired.
    """
    seeds = spawn_seeds(seed, n_generators)
    raw = [
        sample_wind(params, n, s, location_id=f"site{i + 1}", height_m=height_m)
        for i, s in enumerate(seeds)
    ]
    ref = raw[0]
    return [ref] + [correlate(ref, other, r) for other in raw[1:]]
