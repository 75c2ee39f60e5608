"""
A monthly series from the command line
======================================

Generate a few synthetic monthly census files, then run the quantile summary
and the tail scan over the whole directory.
"""

import json
import tempfile
from pathlib import Path

from gpltail.cli import main

work = Path(tempfile.mkdtemp())
months = work / "months"
main(["simulate", "--n", "4000", "--months", "4", "--start", "2017-09", "--seed", "3", "--out", str(months)])
print(sorted(p.name for p in months.iterdir()))

# descriptive statistics as a CSV time series
main(["stats", "--format", "csv", "--out", str(work / "stats.csv"), str(months)])
print((work / "stats.csv").read_text())

# tail reports, one per month, in a single JSON document
main(["tail", "--replicates", "200", "--out", str(work / "tail.json"), str(months)])
for month in json.loads((work / "tail.json").read_text())["months"]:
    rep = month["report"]
    print(month["month"], round(rep["x_min"], 1), rep["tail_size"], round(rep["alpha_hat"], 3))
