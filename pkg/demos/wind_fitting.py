"""Fit Weibull and Beta distributions to synthetic wind, one hour-of-day/season bin at a time."""
import numpy as np

from curtailgame import windmodel as wm

params = wm.WeibullParams(9.0, 1.8)
anemometer = wm.sample_wind(params, 5 * 8760, seed=11, height_m=10.0)
hub = wm.extrapolate_hub(anemometer)
print(f"shear factor 10 m -> 85 m: {wm.shear_factor(10, 85, 0.03):.4f}")
print(f"mean speed {anemometer.speeds.mean():.2f} m/s at 10 m, {hub.speeds.mean():.2f} m/s at hub")

# Recover the generating parameters from the whole record.
fit = wm.fit_weibull(anemometer.speeds)
print(f"\nWeibull fit on all hours: c={fit.scale_c:.3f} k={fit.shape_k:.3f} (true 9, 1.8)")
print(f"density integrates to {wm.density_integral(fit):.6f}")

curve = wm.PowerCurve.enercon_e82()
x = wm.wind_to_power(hub, curve)
print(f"hub capacity factor through the E82 curve: {x.mean():.3f}")

# Fits per bin. Synthetic wind has no diurnal cycle so every bin should look alike.
hour, season = wm.hour_season_index(hub.timestamps)
print(f"\n{'bin':28s} {'n':>5s} {'c':>6s} {'k':>6s} {'alpha':>6s} {'beta':>6s}")
for key in [wm.HourSeasonKey(1, 4), wm.HourSeasonKey(13, 2), wm.HourSeasonKey(18, 4)]:
    m = (hour == key.hour) & (season == key.season)
    w = wm.fit_weibull(anemometer.speeds[m])
    b = wm.fit_beta(x[m])
    print(f"{str(key):28s} {m.sum():5d} {w.scale_c:6.2f} {w.shape_k:6.2f} {b.alpha:6.3f} {b.beta:6.3f}")

# Correlating a second site with the first.
ref = wm.sample_wind(params, 8760, seed=21, height_m=10.0)
other = wm.sample_wind(params, 8760, seed=22, height_m=10.0)
print()
for r in (0.0, 0.5, 1.0):
    mixed = wm.correlate(ref, other, r)
    rho = np.corrcoef(ref.speeds, mixed.speeds)[0, 1]
    print(f"r = {r:.1f}: blend weight {wm.correlation_weight(r):.3f}, sample correlation {rho:.3f}")
