"""Superabundant numbers: generation, lattice analysis and list formats."""

__version__ = "0.1.0"

from .arith import Abundancy, LogMagnitude, abundancy, compare_abundancy, compare_magnitude, log_magnitude
from .backbone import PrecisionExhausted, WindowConfig, backbone_chain, crosscheck, generate_sa
from .exhaustive import EnumerationFrontier, enumerate_records, sieve_oracle
from .lattice import classify, conjectural_closure, connectivity, counterexample_report
from .primes import PrimeTable, prime_table
from .records import NonConvergence, ResourceBudgetExceeded, SaRecord
from .signature import (
    MalformedScn,
    NonCanonical,
    NotDivisible,
    Signature,
    divide_by_prime,
    format_scn,
    multiply_by_prime,
    omega_total,
    parse_scn,
    scn_decode,
    scn_encode,
)
