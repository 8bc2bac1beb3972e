"""Abundancy and magnitude of signatures, with tracked error bounds.

Logarithms are fixed-point integers scaled by ``2**bits``.  For a signature
with levels ``c_1 >= c_2 >= ...``::

    ln n          = sum_k theta(c_k)
    ln sigma(n)/n = sum_k G_k(c_k)

where ``G_k(c)`` is the prefix sum over the first ``c`` primes of the
level-k gain ``ln(sigma(p^k) / (p * sigma(p^(k-1))))``.  Each table entry
is within one unit, so a sum over ``Omega(n)`` entries is within
``Omega(n)`` units.  Comparisons only trust the fixed-point values when the
error bands are disjoint and otherwise fall back to exact integers.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from functools import cached_property

import gmpy2

from .primes import DEFAULT_BITS, PrimeTable, prime_table
from .signature import Signature


class LevelGains:
    """Per-level prefix sums of ln(sigma(p^k) / (p sigma(p^(k-1))))."""

    def __init__(self, primes: PrimeTable):
        self.primes = primes
        self.bits = primes.bits
        self._lock = threading.Lock()
        self._gain: dict[int, list[int]] = {}
        self._prefix: dict[int, list[int]] = {}

    def _extend(self, k: int, count: int) -> None:
        with self._lock:
            gains = self._gain.get(k, [])
            if k in self._gain and len(gains) >= count:
                return
            target = max(count, 2 * len(gains), 64)
            self.primes.ensure(target)
            ps = self.primes.primes
            new = list(gains)
            scale = gmpy2.mpz(1) << self.bits
            with gmpy2.context(gmpy2.get_context(), precision=self.bits + 64):
                for i in range(len(gains), target):
                    p = gmpy2.mpz(ps[i])
                    # ln(1 + (p-1)/(p^(k+1) - p)), well conditioned for large p
                    x = gmpy2.mpfr(p - 1) / gmpy2.mpfr(p ** (k + 1) - p)
                    new.append(int(gmpy2.rint(gmpy2.log1p(x) * scale)))
            prefix = list(self._prefix.get(k, [0]))
            acc = prefix[-1]
            for g in new[len(prefix) - 1 :]:
                acc += g
                prefix.append(acc)
            # prefix first: readers check len(gain) before touching prefix
            self._prefix[k] = prefix
            self._gain[k] = new

    def gain(self, k: int, i: int) -> int:
        """Fixed-point level-k gain of the i-th prime (1-based)."""
        g = self._gain.get(k)
        if g is None or len(g) < i:
            self._extend(k, i)
            g = self._gain[k]
        return g[i - 1]

    def prefix(self, k: int, c: int) -> int:
        """Fixed-point sum of level-k gains of p_1 .. p_c."""
        g = self._gain.get(k)
        if g is None or len(g) < c:
            self._extend(k, c)
        return self._prefix[k][c]


_gains: dict[int, LevelGains] = {}
_gains_lock = threading.Lock()


def level_gains(bits: int = DEFAULT_BITS) -> LevelGains:
    t = _gains.get(bits)
    if t is None:
        with _gains_lock:
            t = _gains.get(bits)
            if t is None:
                t = _gains[bits] = LevelGains(prime_table(bits))
    return t


def _to_mpfr(raw: int, bits: int) -> gmpy2.mpfr:
    with gmpy2.context(gmpy2.get_context(), precision=max(bits + 64, raw.bit_length() + 8)):
        return gmpy2.mpfr(raw) / (gmpy2.mpz(1) << bits)


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class LogMagnitude:
    """ln n as a fixed-point value ``raw / 2**bits`` within ``err / 2**bits``."""

    raw: int
    err: int
    bits: int = DEFAULT_BITS

    @property
    def value(self) -> gmpy2.mpfr:
        return _to_mpfr(self.raw, self.bits)

    @property
    def error(self) -> gmpy2.mpfr:
        return _to_mpfr(self.err, self.bits)

    def log10(self) -> gmpy2.mpfr:
        with gmpy2.context(gmpy2.get_context(), precision=self.bits + 64):
            return self.value / gmpy2.log(10)

    def __float__(self):
        return float(self.value)


def log_magnitude(sig: Signature, bits: int = DEFAULT_BITS) -> LogMagnitude:
    table = prime_table(bits)
    lv = sig.levels
    if lv:
        table.ensure(lv[0])
    theta = table.theta_prefix
    return LogMagnitude(sum(theta[c] for c in lv), sum(lv), bits)


class Abundancy:
    """sigma(n)/n: the exact pair (sigma(n), n) on demand plus an ln interval.

    ``numerator`` and ``denominator`` are computed lazily since they run to
    hundreds of thousands of bits at the large end.
    """

    def __init__(self, signature: Signature, raw: int, err: int, bits: int):
        self.signature = signature
        self.raw = raw
        self.err = err
        self.bits = bits

    @cached_property
    def _exact(self) -> tuple[int, int]:
        sig = self.signature
        table = prime_table(self.bits)
        table.ensure(sig.length)
        num = den = 1
        for p, e in zip(table.primes, sig.exponents):
            pe = p**e
            num *= (pe * p - 1) // (p - 1)
            den *= pe
        return num, den

    @property
    def numerator(self) -> int:
        return self._exact[0]

    @property
    def denominator(self) -> int:
        return self._exact[1]

    @property
    def interval(self) -> tuple[gmpy2.mpfr, gmpy2.mpfr]:
        """Lower and upper bounds on ln(sigma(n)/n)."""
        return (_to_mpfr(self.raw - self.err, self.bits), _to_mpfr(self.raw + self.err, self.bits))

    def reduced(self) -> tuple[int, int]:
        g = math.gcd(self.numerator, self.denominator)
        return self.numerator // g, self.denominator // g

    def __repr__(self):
        return f"Abundancy({self.signature!r})"


def abundancy(sig: Signature, bits: int = DEFAULT_BITS) -> Abundancy:
    gains = level_gains(bits)
    raw = sum(gains.prefix(k, c) for k, c in enumerate(sig.levels, 1))
    return Abundancy(sig, raw, sum(sig.levels), bits)


def _scaled(raw: int, bits: int, to_bits: int) -> int:
    return raw << (to_bits - bits)


def compare_abundancy(a: Abundancy, b: Abundancy) -> int:
    """-1, 0 or 1 as sigma(a)/a is less than, equal to or greater than b's."""
    bits = max(a.bits, b.bits)
    da = _scaled(a.raw, a.bits, bits) - _scaled(b.raw, b.bits, bits)
    tol = _scaled(a.err, a.bits, bits) + _scaled(b.err, b.bits, bits)
    if da > tol:
        return 1
    if da < -tol:
        return -1
    if a.signature == b.signature:
        return 0
    return _sign(a.numerator * b.denominator - b.numerator * a.denominator)


def exact_magnitude_compare(a: Signature, b: Signature) -> int:
    """Compare n_a and n_b as integers after cancelling the common part."""
    ea, eb = a.exponents, b.exponents
    table = prime_table()
    table.ensure(max(len(ea), len(eb)))
    na = nb = 1
    for i in range(max(len(ea), len(eb))):
        x = ea[i] if i < len(ea) else 0
        y = eb[i] if i < len(eb) else 0
        p = table.primes[i]
        if x > y:
            na *= p ** (x - y)
        elif y > x:
            nb *= p ** (y - x)
    return _sign(na - nb)


def compare_magnitude(a: Signature, b: Signature, bits: int = DEFAULT_BITS) -> int:
    """Exact ordering of the integers represented by ``a`` and ``b``."""
    if a == b:
        return 0
    ma, mb = log_magnitude(a, bits), log_magnitude(b, bits)
    d = ma.raw - mb.raw
    if d > ma.err + mb.err:
        return 1
    if d < -(ma.err + mb.err):
        return -1
    return exact_magnitude_compare(a, b)


def _log10_decimal(sig: Signature) -> Decimal:
    lm = log_magnitude(sig)
    with gmpy2.context(gmpy2.get_context(), precision=lm.bits + 64):
        return Decimal(format(lm.log10(), ".40f"))


def round_log10(sig: Signature, places: int = 2) -> str:
    """log10 n rounded half-up, trailing zeros dropped (``2482.5``)."""
    q = _log10_decimal(sig).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)
    out = format(q, "f")
    if "." in out:
        out = out.rstrip("0").rstrip(".")
    return out


def log10_sig12(sig: Signature) -> str:
    """log10 n at 12 significant digits, as stored in list files."""
    if not sig.levels:
        return "0"
    return format(_log10_decimal(sig), ".12g")
