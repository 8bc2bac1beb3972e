from __future__ import annotations

from dataclasses import dataclass, field

from .arith import Abundancy, LogMagnitude, abundancy, log_magnitude
from .primes import DEFAULT_BITS
from .signature import Signature


class ResourceBudgetExceeded(RuntimeError):
    pass


class NonConvergence(RuntimeError):
    pass


@dataclass(frozen=True)
class SaRecord:
    """One superabundant number; ``index`` is 1-based with index 1 being n = 1."""

    index: int
    signature: Signature
    abundancy: Abundancy = field(compare=False, repr=False)
    magnitude: LogMagnitude = field(compare=False, repr=False)

    @classmethod
    def make(cls, index: int, sig: Signature, bits: int = DEFAULT_BITS) -> "SaRecord":
        return cls(index, sig, abundancy(sig, bits), log_magnitude(sig, bits))
