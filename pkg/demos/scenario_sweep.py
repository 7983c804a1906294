#!/usr/bin/env python3
"""Reproduce the nine-scenario study and print the mean rbf table.

Runs the full built-in catalog (7 stations, 10 replications each) at the
reference seed and prints one row per scenario. Takes roughly ten seconds.

Reading the table: the S1 rows are balanced lines and should hover around
1/7 at every station; the S2 rows slow down a single station, which should
collect about 65% of the bottleneck instants; the S3 rows slow down two
stations, which should split roughly 40% each.
"""

import numpy as np

from bottleneck_lab import catalog, run_scenario

print("scenario  slow stations  mean rbf per station")
for spec in catalog():
    result = run_scenario(spec, base_seed=42)
    slow = ",".join(str(s) for s in sorted(spec.uplifted_stations)) or "-"
    row = " ".join(f"{v:.2f}" for v in result.aggregate.rbf_mean)
    print(f"{spec.name:8}  {slow:13}  {row}")

print("\nstd of rbf across the 10 replications (S3-1):")
spec = next(s for s in catalog() if s.name == "S3-1")
result = run_scenario(spec, base_seed=42)
print(" ", np.round(result.aggregate.rbf_std, 3).tolist())
