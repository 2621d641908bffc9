"""Clean raw anemometer and demand files, then feed them to the game.

Uses the small fixtures under tests/data/ingest.
"""
import warnings
from pathlib import Path

import numpy as np

from curtailgame import ingest
from curtailgame import stackelberg as sg
from curtailgame import windmodel as wm

DATA = Path(__file__).resolve().parent.parent / "tests" / "data" / "ingest"

# Speeds are whole knots; gaps under six hours are filled linearly and flagged.
cleaned = {}
for name in ("station_a", "station_b"):
    raw = ingest.parse_wind_csv(DATA / f"{name}.csv")
    c = ingest.fill_gaps(raw, location_id=name)
    cleaned[name] = c
    print(f"{name}: {len(raw)} rows read, {len(c.timestamps)} hours spanned")
    for line in c.fill_report.lines():
        print("   ", line)

a = cleaned["station_a"]
k = int(np.flatnonzero(a.filled)[0])
print(f"\nfirst filled hour {ingest.format_timestamp(a.timestamps[k])}: {a.speed_knots[k]:g} kn "
      f"= {ingest.knots_to_ms(a.speed_knots[k]):.4f} m/s")

# Half-hourly demand becomes hourly means, then a 24 x 4 profile scaled to the line.
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    hourly = ingest.demand_to_hourly(ingest.parse_demand_csv(DATA / "demand.csv"))
for w in caught:
    print("warning:", w.message)
profile = ingest.build_demand_profile(hourly, line_capacity_mw=150.0)
print(f"\ndemand profile peak {profile.peak:g} MW, trough {profile.values.min():.1f} MW")

# Only hours valid at both stations can be replayed together.
ts = ingest.align(a, cleaned["station_b"])
print(f"{len(ts)} hours valid at both stations")
curve = wm.PowerCurve.enercon_e82()
x1, x2 = (wm.wind_to_power(wm.extrapolate_hub(c.to_wind_series(ts)), curve) for c in cleaned.values())

data = sg.ReplayData(x1, x2, 20.0)
eq = sg.solve_equilibrium(sg.CostParams.from_fractions(C_T=0), sg.StrategyGrid(40, 5), data)
print(f"toy game on the aligned hours with a 20 MW limit: leader {eq.p_n1_star:g} MW, "
      f"follower {eq.p_n2_star:g} MW")
