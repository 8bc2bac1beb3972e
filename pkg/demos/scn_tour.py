"""
Reading SCN strings
===================

An SCN string lists, position by position, the largest prime (by index)
whose primorial divides n exactly that many times.  Zeros mark positions
where nothing changes.
"""

from superabundant import Signature, format_scn, omega_total, parse_scn
from superabundant.arith import round_log10

for text in ["{1}", "{0,0,1}", "{3}", "{4,0,1}"]:
    s = parse_scn(text)
    print(f"{text:>10} = {s}  = {s.to_int()}")

# going the other way
print(format_scn(Signature.from_int(720720)))

# a large one: the first record no prime product reaches from below
big = parse_scn("{738,27,8,5,4,3,0,0,2,0,0,0,0,0,1}")
print("primes:", big.length, " Omega:", omega_total(big), " log10:", round_log10(big))
print("exponents of the first primes:", big.exponents[:12])
