"""A leader builds wind behind a 150 MW line, then a follower decides how much to add.

The leader owns the line and charges the follower a transmission fee p_T per MWh.
Sweeping the fee shows how it squeezes the follower out. Takes about a minute.
"""
import numpy as np

from curtailgame import stackelberg as sg
from curtailgame import windmodel as wm

# Seventeen years (a project lifetime) of two-site wind, moderately correlated, measured at 10 m.
hours = 17 * 8760
sites = wm.fleet_wind(2, wm.WeibullParams(12.0, 1.8), 0.5, hours, seed=7, height_m=10.0)
hub = [wm.extrapolate_hub(s) for s in sites]
curve = wm.PowerCurve.enercon_e82()
x1, x2 = (wm.wind_to_power(s, curve) for s in hub)
print(f"hub capacity factors {x1.mean():.3f} and {x2.mean():.3f}")

# Demand follows a daily and seasonal shape peaking at the line capacity.
data = sg.BinnedData.from_series(x1, x2, hub[0].timestamps, sg.DemandProfile.synthetic(150.0), bins=20)
grid = sg.StrategyGrid(415.0, 2.5)

# The energy surface is the expensive part; reuse it for every cost setting.
surface = sg.energy_surface(data, grid)

c = sg.CostParams.from_fractions(p_T=0.26, c_G1=0.30, c_G2=0.30)
eq = sg.solve_equilibrium(c, grid, surface)
print(f"\nbase case: leader {eq.p_n1_star:g} MW, follower {eq.p_n2_star:g} MW")
print(f"  lifetime profits: {eq.profit1 / 1e6:.1f} M and {eq.profit2 / 1e6:.1f} M")
e = eq.energies
print(f"  curtailed share: leader {e.E_C1 / e.E_G1:.1%}, follower {e.E_C2 / max(e.E_G2, 1e-9):.1%}")

# The follower's best reply to a few leader choices.
curve_ = eq.follower_response_curve
for p1 in (0.0, 100.0, 200.0, 300.0, 415.0):
    print(f"  if the leader builds {p1:5g} MW the follower builds {curve_[p1]:g} MW")

print("\nfee sweep (fractions of the energy price)")
print(f"{'p_T':>5s} {'P_N1*':>7s} {'P_N2*':>7s} {'total':>7s} {'both profit':>12s}")
for row in sg.run_scenario(3, grid, surface, step=0.08):
    both = row.profit1 > 0 and row.profit2 > 0
    print(f"{row.value:5.2f} {row.p_n1_star:7g} {row.p_n2_star:7g} {row.total_capacity:7g} {str(both):>12s}")
