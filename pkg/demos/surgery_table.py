"""Rows of the fig8-0surgery table for small indices, under both conventions.

Run: python demos/surgery_table.py [max_index]
"""

import sys

from cosetlab.report import RunConfig, format_table, run

hi = int(sys.argv[1]) if len(sys.argv) > 1 else 11
for convention in ("excl", "incl"):
    rep = run(RunConfig("fig8-0surgery", 1, hi, convention=convention))
    print(f"convention = {convention}")
    print(format_table(rep.rows))
    print()
