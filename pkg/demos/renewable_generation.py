"""Two-day microgrid balance: three houses, a wind turbine, two PV panels.

Runs the bundled `case1` scenario (lossless balance).  At night the
panels are silent and the turbine carries what it can; around noon the
combined renewables can exceed the 2400 W demand, and the surplus is
exported to the utility (negative grid power).
"""

from microgridsim import bundled_scenario_text, parse_scenario, run_simulation, summarize

scenario = parse_scenario(bundled_scenario_text("case1"))
table = run_simulation(scenario)

wind = {r.step: r.value for r in table if r.object == "turbine" and r.quantity == "p_out"}
pv = {}
for r in table:
    if r.quantity == "p_out" and r.object.startswith("panel"):
        pv[r.step] = pv.get(r.step, 0.0) + r.value
grid = {r.step: r.value for r in table if r.quantity == "p_grid"}
hours = {r.step: r.hour for r in table}

print("step hour  wind W   pv W   grid W")
for step in sorted(grid):
    flag = "<-- export" if grid[step] < 0 else ""
    print(f"{step:4d} {hours[step]:4d} {wind[step]:7.0f} {pv[step]:7.0f} {grid[step]:8.0f} {flag}")

exports = [s for s, g in grid.items() if g < 0]
print(f"\nnight PV output is always zero; exporting at steps {exports}")

print("\nper-object production summary (W):")
print("object   min      q1  median      q3     max    mean")
for row in summarize(table, "p_out"):
    print(
        f"{row.object:8s}{row.minimum:7.1f} {row.q1:7.1f} {row.median:7.1f} "
        f"{row.q3:7.1f} {row.maximum:7.1f} {row.mean:7.1f}"
    )
