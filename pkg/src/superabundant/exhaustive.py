"""Provably complete SA generation at small scale, plus a sieve oracle.

Every SA number has nonincreasing exponents, so it is enough to walk the
numbers of that shape (products of primorials) in increasing order and keep
the strict records of sigma(n)/n.  The walk is a Hamming-style heap
enumeration: each popped signature pushes its canonical successors.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterator

import numpy as np

from .arith import Abundancy, compare_abundancy, compare_magnitude, level_gains, log_magnitude
from .primes import DEFAULT_BITS, prime_table
from .records import ResourceBudgetExceeded, SaRecord
from .signature import Signature


class EnumerationFrontier:
    """Min-heap over canonical signatures, popped in strictly increasing order.

    Heap keys are fixed-point ``ln n``.  Keys within the accumulated error
    of the minimum are popped together and ordered exactly, so the output
    order never depends on rounding.
    """

    def __init__(self, bits: int = DEFAULT_BITS, max_heap: int | None = None):
        self.bits = bits
        self.max_heap = max_heap
        self.table = prime_table(bits)
        self.gains = level_gains(bits)
        # (fixed-point ln n, levels, fixed-point ln sigma(n)/n)
        self.heap: list[tuple[int, tuple[int, ...], int]] = [(0, (), 0)]
        self.seen: set[tuple[int, ...]] = {()}
        self.pops = 0
        self._max_omega = 0

    def __len__(self):
        return len(self.heap)

    def pop(self) -> tuple[int, Signature, int]:
        """Pop the smallest signature.

        Returns (fixed-point ln n, signature, fixed-point ln sigma(n)/n); both
        fixed-point values are within Omega(n) units.
        """
        heap = self.heap
        key, levels, ab = heapq.heappop(heap)
        tol = 2 * self._max_omega
        if heap and heap[0][0] - key <= tol:
            bucket = [(key, levels, ab)]
            while heap and heap[0][0] - key <= tol:
                bucket.append(heapq.heappop(heap))
            bucket.sort(
                key=cmp_to_key(
                    lambda a, b: compare_magnitude(
                        Signature._trusted(a[1]), Signature._trusted(b[1]), self.bits
                    )
                )
            )
            key, levels, ab = bucket[0]
            for item in bucket[1:]:
                heapq.heappush(heap, item)
        self._expand(key, levels, ab)
        self.pops += 1
        return key, Signature._trusted(levels), ab

    def _expand(self, key, levels, ab):
        # inlined level_successors: this is the hot loop of the engine
        top = (levels[0] if levels else 0) + 1
        self.table.ensure(top)
        lnv = self.table.ln_values
        gain = self.gains.gain
        seen, heap, push = self.seen, self.heap, heapq.heappush
        prev = 1 << 62
        om = sum(levels) + 1
        k = 0
        for k, c in enumerate(levels):
            if c < prev:
                child = levels[:k] + (c + 1,) + levels[k + 1 :]
                if child not in seen:
                    seen.add(child)
                    push(heap, (key + lnv[c], child, ab + gain(k + 1, c + 1)))
            prev = c
        if levels:
            k += 1
        child = levels + (1,)
        if child not in seen:
            seen.add(child)
            push(heap, (key + lnv[0], child, ab + gain(k + 1, 1)))
        if om > self._max_omega:
            self._max_omega = om
        if self.max_heap is not None and len(heap) > self.max_heap:
            raise ResourceBudgetExceeded(f"heap exceeded {self.max_heap} entries")


def _log10_bound(max_log10, bits: int) -> tuple[int, Fraction]:
    import gmpy2

    frac = Fraction(str(max_log10))
    with gmpy2.context(gmpy2.get_context(), precision=bits + 64):
        val = gmpy2.mpfr(frac.numerator) / frac.denominator * gmpy2.log(10)
        raw = int(gmpy2.rint(val * (gmpy2.mpz(1) << bits)))
    return raw, frac


def within_log10(sig: Signature, key: int, bound: tuple[int, Fraction], bits: int) -> bool:
    """Exact test of n <= 10**max_log10 given the fixed-point ln n."""
    raw, frac = bound
    tol = sum(sig.levels) + 2
    if key < raw - tol:
        return True
    if key > raw + tol:
        return False
    n = sig.to_int()
    return n**frac.denominator <= 10**frac.numerator


def enumerate_records(
    max_log10: float | str | None = None,
    count: int | None = None,
    *,
    bits: int = DEFAULT_BITS,
    max_pops: int | None = None,
    max_heap: int | None = None,
    frontier: EnumerationFrontier | None = None,
) -> Iterator[SaRecord]:
    """Stream SA records in order, from n = 1, up to a log10 bound or a count.

    Raises ResourceBudgetExceeded if ``max_pops`` or ``max_heap`` is hit
    before the limit is reached.
    """
    if (max_log10 is None) == (count is None):
        raise ValueError("give exactly one of max_log10 or count")
    bound = _log10_bound(max_log10, bits) if max_log10 is not None else None
    fr = frontier or EnumerationFrontier(bits, max_heap)
    best = None
    emitted = 0
    while True:
        if count is not None and emitted >= count:
            return
        if max_pops is not None and fr.pops >= max_pops:
            raise ResourceBudgetExceeded(f"pop ceiling {max_pops} reached")
        key, sig, ab = fr.pop()
        if bound is not None and not within_log10(sig, key, bound, bits):
            return
        om = sum(sig.levels)
        if best is not None:
            diff = ab - best.raw
            if diff < -(om + best.err):
                continue
        a = Abundancy(sig, ab, om, bits)
        if best is None or compare_abundancy(a, best) > 0:
            best = a
            emitted += 1
            yield SaRecord(emitted, sig, a, log_magnitude(sig, bits))


def divisor_sums(n: int) -> np.ndarray:
    """sigma(k) for k = 0..n by a divisor-sum sieve (sigma(0) = 0)."""
    sigma = np.zeros(n + 1, dtype=np.int64)
    for d in range(1, n + 1):
        sigma[d::d] += d
    return sigma


def sieve_oracle(N: int) -> list[tuple[int, int]]:
    """All (n, sigma(n)) with sigma(n)/n a strict record over 1..N."""
    if N < 1:
        return []
    sigma = divisor_sums(N)
    ks = np.arange(1, N + 1)
    ratio = sigma[1:] / ks
    prev = np.maximum.accumulate(np.concatenate(([0.0], ratio[:-1])))
    # floats only preselect; the exact pass below decides
    cand = np.flatnonzero(ratio >= prev * (1 - 1e-9)) + 1
    out = []
    bs, bn = 0, 1
    for n in cand.tolist():
        s = int(sigma[n])
        if s * bn > bs * n:
            out.append((n, s))
            bs, bn = s, n
    return out
