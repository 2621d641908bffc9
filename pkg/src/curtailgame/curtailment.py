"""Curtailment allocation under LIFO, Rota, Pro Rata and Fractional Round Robin.

A fleet is a sequence of :class:`GeneratorSpec`.  Allocators work on one
interval at a time: given each generator's available output (MW) and the
total that must be shed, they return how much each generator loses.  The
two rotating rules carry a :class:`RotationState` from one curtailment event
to the next.
"""
from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

EPS_MW = 1e-9


class Rule(str, enum.Enum):
    LIFO = "LIFO"
    ROTA = "ROTA"
    PRO_RATA = "PRO_RATA"
    FRR = "FRR"

    @classmethod
    def parse(cls, name: str) -> "Rule":
        key = name.strip().upper().replace(" ", "_").replace("-", "_")
        if key == "PRORATA":
            key = "PRO_RATA"
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown curtailment rule {name!r}; choose from {[r.value for r in cls]}") from None


class AllocationError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSpec:
    id: str
    rated_mw: float
    connection_order: int
    wind_source: str = ""

    def __post_init__(self):
        if not self.rated_mw > 0:
            raise ValueError(f"generator {self.id}: rated_mw must be positive")
        if self.connection_order < 1:
            raise ValueError(f"generator {self.id}: connection_order must be >= 1")


def validate_fleet(fleet: Sequence[GeneratorSpec]) -> None:
    if len(fleet) == 0:
        raise ValueError("fleet is empty")
    ids = [g.id for g in fleet]
    if len(set(ids)) != len(ids):
        raise ValueError(f"generator ids must be unique, got {ids}")
    orders = [g.connection_order for g in fleet]
    if len(set(orders)) != len(orders):
        raise ValueError(f"connection orders must be unique, got {orders}")


def make_fleet(rated_mw: Sequence[float], sources: Sequence[str] | None = None) -> list[GeneratorSpec]:
    """Fleet whose connection order follows list order (first = earliest)."""
    sources = sources or [f"site{i + 1}" for i in range(len(rated_mw))]
    return [GeneratorSpec(f"gen{i + 1}", float(p), i + 1, s) for i, (p, s) in enumerate(zip(rated_mw, sources))]


def rotation_order(fleet: Sequence[GeneratorSpec]) -> np.ndarray:
    """Fleet indices sorted by connection order; the default rota schedule."""
    return np.argsort([g.connection_order for g in fleet], kind="stable")


@dataclass(frozen=True)
class RotationState:
    """Position in the rota plus, for FRR, each generator's remaining MW quota.

    ``pointer`` indexes into ``order`` (the rota schedule), not the fleet.
    """

    pointer: int
    order: tuple[int, ...]
    quotas_mw: tuple[float, ...] = ()

    @classmethod
    def start(cls, fleet: Sequence[GeneratorSpec], order: Sequence[int] | None = None) -> "RotationState":
        validate_fleet(fleet)
        order = tuple(int(i) for i in (rotation_order(fleet) if order is None else order))
        if sorted(order) != list(range(len(fleet))):
            raise ValueError("rota order must be a permutation of the fleet")
        return cls(0, order, tuple(g.rated_mw for g in fleet))


@dataclass(frozen=True)
class Allocation:
    curtailed_mw: np.ndarray
    total_required_mw: float

    @property
    def total_mw(self) -> float:
        return float(self.curtailed_mw.sum())


def required_curtailment(outputs, demand: float) -> float:
    """Power that must be shed: ``max(0, sum(outputs) - demand)``."""
    outputs = np.asarray(outputs, dtype=float)
    if np.any(outputs < 0) or demand < 0:
        raise ValueError("outputs and demand must be non-negative")
    return max(0.0, float(outputs.sum()) - float(demand))


def _check(fleet, outputs, required) -> np.ndarray:
    outputs = np.asarray(outputs, dtype=float)
    if outputs.shape != (len(fleet),):
        raise ValueError(f"expected {len(fleet)} outputs, got shape {outputs.shape}")
    if np.any(outputs < 0):
        raise ValueError("outputs must be non-negative")
    if required < 0:
        raise ValueError("required curtailment must be non-negative")
    total = float(outputs.sum())
    if required > total + EPS_MW:
        raise AllocationError(f"required curtailment {required} MW exceeds total output {total} MW")
    return outputs


def allocate_lifo(fleet: Sequence[GeneratorSpec], outputs, required: float) -> Allocation:
    outputs = _check(fleet, outputs, required)
    curtailed = np.zeros_like(outputs)
    remaining = float(required)
    for i in rotation_order(fleet)[::-1]:
        if remaining <= 0:
            break
        take = min(remaining, outputs[i])
        curtailed[i] = take
        remaining -= take
    return Allocation(curtailed, float(required))


def allocate_pro_rata(fleet: Sequence[GeneratorSpec], outputs, required: float) -> Allocation:
    outputs = _check(fleet, outputs, required)
    total = outputs.sum()
    if required == 0 or total == 0:
        return Allocation(np.zeros_like(outputs), float(required))
    return Allocation(required * outputs / total, float(required))


def allocate_rota(
    fleet: Sequence[GeneratorSpec], outputs, required: float, state: RotationState
) -> tuple[Allocation, RotationState]:
    """One curtailment event under Rota.

    The generator whose turn it is sheds first, up to its whole output, and
    any shortfall spills to the following generators.  The turn always moves
    on by exactly one generator, even when that generator had nothing to
    give.
    """
    outputs = _check(fleet, outputs, required)
    n = len(state.order)
    curtailed = np.zeros_like(outputs)
    remaining = float(required)
    for step in range(n):
        if remaining <= 0:
            break
        i = state.order[(state.pointer + step) % n]
        take = min(remaining, outputs[i])
        curtailed[i] = take
        remaining -= take
    return Allocation(curtailed, float(required)), replace(state, pointer=(state.pointer + 1) % n)


def allocate_frr(
    fleet: Sequence[GeneratorSpec], outputs, required: float, state: RotationState
) -> tuple[Allocation, RotationState]:
    """One curtailment event under Fractional Round Robin.

    Walking the rota from the current pointer, each generator sheds as much
    as it can up to its remaining MW quota.  Quotas start at rated capacity
    and are refilled for everyone once all of them are used up.  If the walk
    stalls because the generators that still hold quota have nothing left to
    give in this event, quotas are refilled early.  The pointer rests on the
    first generator (from where the walk stopped) that still holds quota.
    """
    outputs = _check(fleet, outputs, required)
    n = len(state.order)
    rated = np.array([g.rated_mw for g in fleet])
    quotas = np.array(state.quotas_mw, dtype=float)
    available = outputs.copy()
    curtailed = np.zeros_like(outputs)
    remaining = float(required)
    pos = state.pointer
    idle_steps = 0

    while remaining > EPS_MW and available.sum() > EPS_MW:
        if np.all(quotas <= EPS_MW) or idle_steps >= n:
            quotas = rated.copy()
            idle_steps = 0
        i = state.order[pos]
        take = min(remaining, quotas[i], available[i])
        if take > 0:
            curtailed[i] += take
            available[i] -= take
            quotas[i] -= take
            remaining -= take
            idle_steps = 0
        else:
            idle_steps += 1
        if quotas[i] <= EPS_MW:
            quotas[i] = 0.0
        if remaining > EPS_MW or quotas[i] == 0.0:
            pos = (pos + 1) % n

    # Absorb float dust so the allocation sums to the requirement exactly.
    if remaining > 0:
        j = int(np.argmax(available))
        curtailed[j] += min(remaining, available[j])
    if np.all(quotas <= EPS_MW):
        quotas = rated.copy()
    for _ in range(n):
        if quotas[state.order[pos]] > EPS_MW:
            break
        pos = (pos + 1) % n
    return Allocation(curtailed, float(required)), replace(state, pointer=pos, quotas_mw=tuple(quotas))


# ---------------------------------------------------------------------------
# Timeline simulation
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TimelineResult:
    rule: Rule
    generator_ids: tuple[str, ...]
    rated_mw: np.ndarray
    output_mw: np.ndarray  # (T, n) available output before curtailment
    curtailed_mw: np.ndarray  # (T, n)
    timestamps: np.ndarray | None = None
    final_state: RotationState | None = field(default=None, repr=False)

    @property
    def hours(self) -> int:
        return self.output_mw.shape[0]

    @property
    def generated_mw(self) -> np.ndarray:
        """Delivered output after curtailment."""
        return self.output_mw - self.curtailed_mw

    @property
    def capacity_factor(self) -> np.ndarray:
        return self.generated_mw.sum(axis=0) / (self.rated_mw * self.hours)

    @property
    def capacity_factor_uncurtailed(self) -> np.ndarray:
        return self.output_mw.sum(axis=0) / (self.rated_mw * self.hours)

    @property
    def cf_reduction(self) -> np.ndarray:
        """Relative CF loss per generator caused by curtailment."""
        base = self.capacity_factor_uncurtailed
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(base > 0, 1.0 - self.capacity_factor / base, 0.0)

    @property
    def fairness_variance(self) -> float:
        return float(np.var(self.capacity_factor))

    @property
    def event_count(self) -> np.ndarray:
        return (self.curtailed_mw > EPS_MW).sum(axis=0)

    @property
    def curtailed_energy(self) -> np.ndarray:
        return self.curtailed_mw.sum(axis=0)

    def write_timeline_csv(self, path, header_lines: Sequence[str] = ()) -> None:
        ts = self.timestamps if self.timestamps is not None else np.arange(self.hours)
        with open(path, "w", newline="") as fh:
            for line in header_lines:
                fh.write(f"# {line}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["timestamp", "generator_id", "output_mw", "curtailed_mw"])
            for t in range(self.hours):
                stamp = _format_stamp(ts[t])
                for g, gid in enumerate(self.generator_ids):
                    w.writerow([stamp, gid, f"{self.output_mw[t, g]:.6f}", f"{self.curtailed_mw[t, g]:.6f}"])

    def write_metrics_csv(self, path, header_lines: Sequence[str] = ()) -> None:
        with open(path, "w", newline="") as fh:
            for line in header_lines:
                fh.write(f"# {line}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["generator_id", "cf", "cf_uncurtailed", "events"])
            for gid, cf, cf0, ev in zip(
                self.generator_ids, self.capacity_factor, self.capacity_factor_uncurtailed, self.event_count
            ):
                w.writerow([gid, f"{cf:.6f}", f"{cf0:.6f}", int(ev)])


def _format_stamp(t) -> str:
    if isinstance(t, np.datetime64):
        return np.datetime_as_string(t, unit="h") + ":00Z"
    return str(t)


def simulate(
    fleet: Sequence[GeneratorSpec],
    power_inputs,
    demand,
    rule: Rule | str,
    *,
    timestamps=None,
    state: RotationState | None = None,
) -> TimelineResult:
    """Run a curtailment rule over aligned per-generator normalised power series.

    ``power_inputs`` has one row per generator (or is a list of 1-D series);
    ``demand`` is a scalar or one value per interval.  The rotating rules
    only see intervals where something has to be shed, so calm hours do not
    move the rota.
    """
    validate_fleet(fleet)
    rule = Rule.parse(rule) if isinstance(rule, str) else rule
    x = np.asarray([np.asarray(p, dtype=float) for p in power_inputs])
    if x.ndim != 2 or x.shape[0] != len(fleet):
        raise ValueError("need one equal-length power series per generator")
    T = x.shape[1]
    d = np.broadcast_to(np.asarray(demand, dtype=float), (T,)) if np.ndim(demand) == 0 else np.asarray(demand, float)
    if d.shape != (T,):
        raise ValueError(f"demand has {d.shape[0]} intervals, power inputs have {T}")
    if timestamps is not None and len(timestamps) != T:
        raise ValueError("timestamps do not match the power inputs")
    if np.any(x < 0) or np.any(d < 0):
        raise ValueError("power inputs and demand must be non-negative")

    rated = np.array([g.rated_mw for g in fleet])
    outputs = x.T * rated  # (T, n)
    excess = np.maximum(0.0, outputs.sum(axis=1) - d)
    curtailed = np.zeros_like(outputs)

    if rule is Rule.PRO_RATA:
        tot = outputs.sum(axis=1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            curtailed = np.where(tot > 0, excess[:, None] * outputs / tot, 0.0)
    elif rule is Rule.LIFO:
        remaining = excess.copy()
        for i in rotation_order(fleet)[::-1]:
            take = np.minimum(remaining, outputs[:, i])
            curtailed[:, i] = take
            remaining = remaining - take
    else:
        if state is None:
            state = RotationState.start(fleet)
        allocate = allocate_rota if rule is Rule.ROTA else allocate_frr
        for t in np.flatnonzero(excess > 0):
            alloc, state = allocate(fleet, outputs[t], excess[t], state)
            curtailed[t] = alloc.curtailed_mw

    return TimelineResult(
        rule, tuple(g.id for g in fleet), rated, outputs, curtailed,
        timestamps=None if timestamps is None else np.asarray(timestamps), final_state=state,
    )


ALLOCATORS = {
    Rule.LIFO: allocate_lifo,
    Rule.PRO_RATA: allocate_pro_rata,
    Rule.ROTA: allocate_rota,
    Rule.FRR: allocate_frr,
}
