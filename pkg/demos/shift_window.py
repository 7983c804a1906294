#!/usr/bin/env python3
"""Zoom into a single bottleneck shift and watch rbs hand over.

Runs one replication of the dual-bottleneck scenario S3-1 (stations 2 and 4
slowed down), finds the first shift between the two slow stations, and
prints the rbs trajectory of both in a window around it. The outgoing
bottleneck's rbs drops from 1 to 0 in a single sample step while the
incoming one has been active and climbing, the overlap that the shifting
classification keys on.
"""

import numpy as np

from bottleneck_lab import run_scenario, scenario_by_name

spec = scenario_by_name("S3-1")
result = run_scenario(spec, base_seed=42, replications=1)
series = result.series[0]
sev = result.severity_reports[0]

ids = series.station_ids
shifts = [i for i in np.flatnonzero(np.diff(ids) != 0)
          if {int(ids[i]), int(ids[i + 1])} == {2, 4}]
if not shifts:
    raise SystemExit("no shift between stations 2 and 4 in this replication")

i = shifts[0]
t_shift = series.times[i + 1]
print(f"first shift between the slow stations at t = {t_shift:g} "
      f"({int(ids[i])} -> {int(ids[i + 1])})\n")

lo, hi = max(0, i - 6), min(len(ids), i + 7)
print("t        bottleneck  kind      rbs[2]  rbs[4]")
for k in range(lo, hi):
    marker = "  <- shift" if k == i + 1 else ""
    print(f"{series.times[k]:<8g} {int(ids[k]):^10}  {series.kinds[k].value:8}  "
          f"{sev.rbs[k, 2]:.3f}   {sev.rbs[k, 4]:.3f}{marker}")

n_shifting = sum(1 for kind in series.kinds if kind.value == "shifting")
print(f"\n{n_shifting} of {len(ids)} sampled instants classified as shifting "
      f"in this replication")
