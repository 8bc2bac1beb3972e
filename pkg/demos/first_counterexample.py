"""
Where the inductive construction breaks
=======================================

Build every SA number up to 10^2500 with the backbone engine (a few
minutes), then close {1} under multiplication by primes inside the list.
The first record the closure never reaches has no SA quotient n/q.
"""

import sys
import time

from superabundant import classify, conjectural_closure, counterexample_report, generate_sa
from superabundant.formats import export_table

top = sys.argv[1] if len(sys.argv) > 1 else "2500"
t = time.time()
sa = list(generate_sa(max_log10=top))
print(f"{len(sa)} SA numbers up to 10^{top} in {time.time() - t:.0f}s")

res = conjectural_closure(sa)
if res.first_missing:
    r = sa[res.first_missing - 1]
    print("first missing index:", r.index, r.signature.levels[:6], "...")

rows = counterexample_report(sa, classify(sa, top))
print(export_table(rows, "csv"))
