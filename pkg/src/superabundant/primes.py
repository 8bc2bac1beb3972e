"""Growable table of primes with fixed-point logarithms.

Primes are 1-indexed in the public API (p_1 = 2) and 0-indexed in the
underlying lists.  Logarithms are stored as integers scaled by ``2**bits``;
each entry is within one unit of the true value.
"""

from __future__ import annotations

import bisect
import math
import threading

import gmpy2
import numpy as np

DEFAULT_BITS = 256


def sieve_upto(n: int) -> np.ndarray:
    """All primes <= n, by a plain sieve of Eratosthenes."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def _segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    # primes in [lo, hi) given every prime <= sqrt(hi) in ``base``
    flags = np.ones(hi - lo, dtype=bool)
    for p in base:
        p = int(p)
        if p * p >= hi:
            break
        start = max(p * p, -(-lo // p) * p)
        flags[start - lo :: p] = False
    if lo < 2:
        flags[: 2 - lo] = False
    return np.flatnonzero(flags).astype(np.int64) + lo


class PrimeTable:
    """Primes in order, grown on demand by segmented sieving.

    Growth swaps in fully built lists under a lock, so concurrent readers
    see either the old table or the new one, never a half-appended block.
    """

    def __init__(self, bits: int = DEFAULT_BITS, initial: int = 1 << 16):
        self.bits = bits
        self._lock = threading.Lock()
        self._limit = 0
        # (primes, ln_values, theta_prefix) replaced as one tuple on growth;
        # theta_prefix[k] = sum of ln_values[:k], error <= k units
        self._snap: tuple[list[int], list[int], list[int]] = ([], [], [0])
        self._grow_to_limit(initial)

    @property
    def primes(self) -> list[int]:
        return self._snap[0]

    @property
    def ln_values(self) -> list[int]:
        return self._snap[1]

    @property
    def theta_prefix(self) -> list[int]:
        return self._snap[2]

    def __len__(self) -> int:
        return len(self.primes)

    def prime(self, i: int) -> int:
        """The i-th prime, 1-indexed."""
        self.ensure(i)
        return self.primes[i - 1]

    def ln(self, i: int) -> int:
        self.ensure(i)
        return self.ln_values[i - 1]

    def theta(self, k: int) -> int:
        """Fixed-point sum of ln p_1 .. ln p_k."""
        self.ensure(k)
        return self.theta_prefix[k]

    def ensure(self, count: int) -> None:
        if count <= len(self.primes):
            return
        with self._lock:
            while len(self.primes) < count:
                self._grow_to_limit(max(2 * self._limit, 1024))

    def _grow_to_limit(self, limit: int) -> None:
        lo = self._limit + 1
        if lo <= 2:
            new = sieve_upto(limit)
        else:
            base = sieve_upto(math.isqrt(limit) + 1)
            new = _segment(lo, limit + 1, base)
        new_primes = [int(p) for p in new]
        scale = gmpy2.mpz(1) << self.bits
        lns = []
        with gmpy2.context(gmpy2.get_context(), precision=self.bits + 64):
            for p in new_primes:
                lns.append(int(gmpy2.rint(gmpy2.log(p) * scale)))
        theta = list(self.theta_prefix)
        acc = theta[-1]
        for v in lns:
            acc += v
            theta.append(acc)
        primes = self.primes + new_primes
        ln_values = self.ln_values + lns
        self._snap = (primes, ln_values, theta)
        self._limit = limit

    def index_of(self, p: int) -> int:
        """1-based index of prime ``p``; ValueError if ``p`` is not prime."""
        while not self.primes or self.primes[-1] < p:
            self.ensure(len(self.primes) + 1)
        i = bisect.bisect_left(self.primes, p)
        if i == len(self.primes) or self.primes[i] != p:
            raise ValueError(f"{p} is not prime")
        return i + 1


_tables: dict[int, PrimeTable] = {}
_tables_lock = threading.Lock()


def prime_table(bits: int = DEFAULT_BITS) -> PrimeTable:
    """Shared table for a given precision."""
    t = _tables.get(bits)
    if t is None:
        with _tables_lock:
            t = _tables.get(bits)
            if t is None:
                t = _tables[bits] = PrimeTable(bits)
    return t
