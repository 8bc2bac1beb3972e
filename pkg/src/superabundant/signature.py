"""Exponent signatures of numbers with nonincreasing prime exponents.

A signature ``e_1 >= e_2 >= ... >= e_r > 0`` stands for
``n = 2**e_1 * 3**e_2 * ... * p_r**e_r``.  Internally it is kept in its
conjugate form, the *levels* ``c_k = #{i : e_i >= k}``, which is the same
as writing ``n`` as a product of primorials ``p_{c_1}# * p_{c_2}# * ...``.
Levels are short (their length is ``e_1``) even when ``r`` runs into the
tens of thousands, so records at scale stay cheap to store and hash.

The super-compactification notation (SCN) is the levels vector with every
repeated value replaced by zero: position ``k`` holds the index of the
largest prime whose primorial divides ``n`` exactly ``k`` times.
"""

from __future__ import annotations

import math
import re
from typing import Iterable, Sequence

from .primes import prime_table


class NonCanonical(ValueError):
    """The product or quotient breaks the nonincreasing-exponent shape."""


class IndexOutOfRange(NonCanonical):
    """Multiplication by a prime beyond ``p_{r+1}`` (skips a prime)."""


class NotDivisible(ValueError):
    """Division by a prime that does not divide the number."""


class MalformedScn(ValueError):
    pass


class Signature:
    """Immutable, hashable signature of a number with nonincreasing exponents."""

    __slots__ = ("levels", "_hash")

    def __init__(self, exponents: Iterable[int] = ()):
        exps = list(exponents)
        if any(e <= 0 for e in exps):
            raise ValueError(f"exponents must be positive: {exps}")
        if any(a < b for a, b in zip(exps, exps[1:])):
            raise NonCanonical(f"exponents must be nonincreasing: {exps}")
        levels = []
        k = 1
        # c_k counts exponents >= k; exps is sorted descending
        r = len(exps)
        while r:
            while r and exps[r - 1] < k:
                r -= 1
            if r:
                levels.append(r)
            k += 1
        self._set(tuple(levels))

    def _set(self, levels: tuple[int, ...]) -> None:
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "_hash", hash(levels))

    def __setattr__(self, name, value):
        raise AttributeError("Signature is immutable")

    @classmethod
    def from_levels(cls, levels: Sequence[int]) -> "Signature":
        levels = tuple(levels)
        if any(c <= 0 for c in levels) or any(a < b for a, b in zip(levels, levels[1:])):
            raise ValueError(f"levels must be positive and nonincreasing: {levels}")
        return cls._trusted(levels)

    @classmethod
    def _trusted(cls, levels: tuple[int, ...]) -> "Signature":
        obj = cls.__new__(cls)
        obj._set(levels)
        return obj

    @property
    def exponents(self) -> tuple[int, ...]:
        lv = self.levels
        if not lv:
            return ()
        out = []
        k = len(lv)
        for i in range(1, lv[0] + 1):
            while lv[k - 1] < i:
                k -= 1
            out.append(k)
        return tuple(out)

    @property
    def length(self) -> int:
        """Number of distinct primes, ``r``."""
        return self.levels[0] if self.levels else 0

    def exponent(self, i: int) -> int:
        """Exponent of ``p_i`` (1-based), zero beyond ``r``."""
        return sum(1 for c in self.levels if c >= i)

    def __eq__(self, other):
        if not isinstance(other, Signature):
            return NotImplemented
        return self.levels == other.levels

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Signature.from_levels({list(self.levels)})"

    def __str__(self):
        return factored(self)

    def to_int(self) -> int:
        """Materialize ``n``; only sensible for moderate sizes."""
        table = prime_table()
        table.ensure(self.length)
        n = 1
        for i, e in enumerate(self.exponents):
            n *= table.primes[i] ** e
        return n

    @classmethod
    def from_int(cls, n: int) -> "Signature":
        """Factor a small ``n`` over consecutive primes; NonCanonical otherwise."""
        if n < 1:
            raise ValueError("n must be positive")
        exps = []
        i = 1
        table = prime_table()
        while n > 1:
            p = table.prime(i)
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e == 0:
                raise NonCanonical("prime support is not an initial segment")
            exps.append(e)
            i += 1
        return cls(exps)


ONE = Signature()


def omega_total(sig: Signature) -> int:
    """Number of prime factors counted with multiplicity."""
    return sum(sig.levels)


def multiply_by_prime(sig: Signature, i: int) -> Signature:
    """``n * p_i``; raises NonCanonical if exponents stop being nonincreasing."""
    lv = sig.levels
    r = lv[0] if lv else 0
    if i < 1 or i > r + 1:
        raise IndexOutOfRange(f"p_{i} is not among p_1..p_{r + 1}")
    v = sum(1 for c in lv if c >= i)
    if i > 1 and sum(1 for c in lv if c >= i - 1) == v:
        raise NonCanonical(f"exponent of p_{i} would exceed that of p_{i - 1}")
    if v == len(lv):
        return Signature._trusted(lv + (1,))
    new = list(lv)
    new[v] += 1
    return Signature._trusted(tuple(new))


def divide_by_prime(sig: Signature, i: int) -> Signature:
    """``n / p_i``; raises NotDivisible or NonCanonical."""
    lv = sig.levels
    r = lv[0] if lv else 0
    if i < 1 or i > r:
        raise NotDivisible(f"p_{i} does not divide n")
    v = sum(1 for c in lv if c >= i)
    if lv[v - 1] != i:
        raise NonCanonical(f"exponent of p_{i} would drop below that of p_{i + 1}")
    new = list(lv)
    new[v - 1] -= 1
    if new[v - 1] == 0:
        new.pop()
    return Signature._trusted(tuple(new))


def successor_candidates(sig: Signature) -> list[int]:
    """Prime indices ``i`` for which ``n * p_i`` keeps a canonical shape."""
    lv = sig.levels
    out = []
    prev = math.inf
    for c in lv:
        if c < prev:
            out.append(c + 1)
        prev = c
    if prev > 0:
        out.append(1)
    out.reverse()
    return out


def predecessor_candidates(sig: Signature) -> list[int]:
    """Prime indices ``i`` for which ``n / p_i`` keeps a canonical shape."""
    lv = sig.levels
    out = []
    for k, c in enumerate(lv):
        nxt = lv[k + 1] if k + 1 < len(lv) else 0
        if c > nxt:
            out.append(c)
    out.reverse()
    return out


def level_successors(levels: tuple[int, ...]) -> list[tuple[int, int, tuple[int, ...]]]:
    """(prime index, level, child levels) for every canonical multiplication.

    Multiplying by the prime raises its exponent to ``level``.
    """
    out = []
    prev = math.inf
    for k, c in enumerate(levels):
        if c < prev:
            out.append((c + 1, k + 1, levels[:k] + (c + 1,) + levels[k + 1 :]))
        prev = c
    if prev > 0:
        out.append((1, len(levels) + 1, levels + (1,)))
    return out


def level_predecessors(levels: tuple[int, ...]) -> list[tuple[int, int, tuple[int, ...]]]:
    """(prime index, level, parent levels) for every canonical division.

    Dividing by the prime lowers its exponent from ``level``.
    """
    out = []
    last = len(levels) - 1
    for k, c in enumerate(levels):
        nxt = levels[k + 1] if k < last else 0
        if c > nxt:
            if c == 1:
                out.append((1, k + 1, levels[:k]))
            else:
                out.append((c, k + 1, levels[:k] + (c - 1,) + levels[k + 1 :]))
    return out


# --- SCN codec --------------------------------------------------------------

_SCN_RE = re.compile(r"^\{(?:(?:0|[1-9][0-9]*)(?:, *(?:0|[1-9][0-9]*))*)?\}$")


def scn_encode(sig: Signature) -> tuple[int, ...]:
    lv = sig.levels
    out = []
    for k, c in enumerate(lv):
        nxt = lv[k + 1] if k + 1 < len(lv) else 0
        out.append(c if c != nxt else 0)
    return tuple(out)


def scn_decode(entries: Sequence[int]) -> Signature:
    entries = list(entries)
    if not entries:
        return ONE
    if any((not isinstance(s, int)) or s < 0 for s in entries):
        raise MalformedScn(f"entries must be nonnegative integers: {entries}")
    if entries[-1] == 0:
        raise MalformedScn("last SCN entry must be nonzero")
    nz = [s for s in entries if s]
    if any(a <= b for a, b in zip(nz, nz[1:])):
        raise MalformedScn(f"nonzero SCN entries must strictly decrease: {entries}")
    levels = []
    cur = 0
    for s in reversed(entries):
        cur = max(cur, s)
        levels.append(cur)
    levels.reverse()
    return Signature._trusted(tuple(levels))


def format_scn(entries: Sequence[int] | Signature) -> str:
    if isinstance(entries, Signature):
        entries = scn_encode(entries)
    return "{" + ",".join(str(s) for s in entries) + "}"


def parse_scn(text: str) -> Signature:
    """Parse ``{a,b,...}``; spaces are tolerated after commas only."""
    if not _SCN_RE.match(text):
        raise MalformedScn(f"not an SCN string: {text!r}")
    body = text[1:-1]
    entries = [int(s) for s in body.split(",")] if body else []
    return scn_decode(entries)


def factored(sig: Signature) -> str:
    """``2^3 * 3 * 5 * 7`` style rendering; ``1`` for the empty signature."""
    if not sig.levels:
        return "1"
    table = prime_table()
    table.ensure(sig.length)
    parts = []
    for i, e in enumerate(sig.exponents):
        p = table.primes[i]
        parts.append(str(p) if e == 1 else f"{p}^{e}")
    return " * ".join(parts)
