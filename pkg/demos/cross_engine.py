"""
Two engines, one list
=====================

The exhaustive engine walks every number with nonincreasing exponents in
increasing order.  The backbone engine only searches the gaps between
consecutive colossally abundant numbers.  Up to 10^30 both take well under
a minute and must agree record for record.
"""

import time

from superabundant import crosscheck, enumerate_records, generate_sa, sieve_oracle

t = time.time()
oracle = [n for n, _ in sieve_oracle(10**6)]
ex = list(enumerate_records(max_log10=6))
print("sieve vs exhaustive up to 10^6:", [r.signature.to_int() for r in ex] == oracle, f"({len(ex)} records)")

ex = list(enumerate_records(max_log10=30))
t1 = time.time()
bb = list(generate_sa(max_log10=30))
t2 = time.time()
print(f"exhaustive: {len(ex)} records in {t1 - t:.1f}s, backbone: {len(bb)} in {t2 - t1:.2f}s")
print("mismatches:", crosscheck(ex, bb))
