"""Voltage along a street feeder, before and after adding rooftop PV.

The bundled `case2` scenario is a 230 V feeder with two radial streets
of four houses each, solved with full AC power flow every hour.  The
farthest, most heavily loaded house (bus hb4) always sees the lowest
voltage; `case2_pv` adds a 5 kW PV system there, which lifts the local
voltage whenever the panel produces.
"""

from microgridsim import bundled_scenario_text, parse_scenario, run_simulation, summarize

base = parse_scenario(bundled_scenario_text("case2"))
with_pv = parse_scenario(bundled_scenario_text("case2_pv"))

table_base = run_simulation(base)
table_pv = run_simulation(with_pv)


def v_mag(table, step):
    return {r.object: r.value for r in table if r.step == step and r.quantity == "v_mag"}


# Voltage profile along street B at one step (constant loads: any step works).
profile = v_mag(table_base, 0)
print("street B profile at step 0 (volts):")
for bus in ("f", "b1", "b2", "b3", "b4", "hb4"):
    drop = 230.0 - profile[bus]
    print(f"  {bus:4s} {profile[bus]:8.3f}  (drop {drop:5.3f} V)  {'=' * int(drop * 40)}")

weakest = min(profile, key=profile.get)
print(f"\nweakest bus without PV: {weakest}")

# Hour-by-hour effect of the PV system at the weakest bus.
print("\nstep hour   v(hb4) no PV   v(hb4) with PV   lift mV")
for step in range(0, 48, 3):
    hour = next(r.hour for r in table_base if r.step == step)
    v0 = v_mag(table_base, step)["hb4"]
    v1 = v_mag(table_pv, step)["hb4"]
    print(f"{step:4d} {hour:4d} {v0:14.3f} {v1:16.3f} {1000 * (v1 - v0):9.1f}")

# Boxplot-style spread of the voltages over the two days.
print("\nvoltage spread with PV (V):")
print("bus      min      q1  median      q3     max")
for row in summarize(table_pv, "v_mag"):
    if row.object in ("f", "b4", "hb4", "ha4"):
        print(
            f"{row.object:6s}{row.minimum:8.3f}{row.q1:8.3f}{row.median:8.3f}"
            f"{row.q3:8.3f}{row.maximum:8.3f}"
        )
