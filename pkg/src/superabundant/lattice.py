"""Neighbourhoods of SA numbers in the multiplicative lattice.

Edges join ``n`` and ``n * p``.  A *source* has no SA quotient ``n / q``;
a *sink* has no SA product ``n * p``.  Membership is decided against a
generated list that is complete up to its top, so a product beyond the top
cannot be decided and the record is marked indeterminate instead of sink.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .arith import compare_magnitude, log_magnitude, round_log10
from .exhaustive import _log10_bound, within_log10
from .primes import DEFAULT_BITS
from .records import SaRecord
from .signature import Signature, format_scn, level_predecessors, level_successors, omega_total


class GapInList(ValueError):
    pass


REGULAR = "regular"
SOURCE = "source"
SINK = "sink"
SOURCE_AND_SINK = "source-and-sink"
INDETERMINATE_UP = "indeterminate-up"
INDETERMINATE_DOWN = "indeterminate-down"


@dataclass(frozen=True)
class LatticeClass:
    kind: str
    sa_successors: tuple[int, ...]
    sa_predecessors: tuple[int, ...]
    # prime indices p whose product n * p lies beyond the list's range
    undecided_successors: tuple[int, ...] = ()

    @property
    def is_source(self) -> bool:
        return self.kind in (SOURCE, SOURCE_AND_SINK)

    @property
    def is_sink(self) -> bool:
        return self.kind in (SINK, SOURCE_AND_SINK)

    @property
    def sink_decided(self) -> bool:
        """Whether sink status is settled by the range of the list."""
        return bool(self.sa_successors) or not self.undecided_successors


def _check_contiguous(sa: Sequence[SaRecord]) -> None:
    for pos, r in enumerate(sa, 1):
        if r.index != pos:
            raise GapInList(f"expected index {pos}, found {r.index}")


class _Range:
    """Decides whether a signature lies within the generated range."""

    def __init__(self, sa: Sequence[SaRecord], top_log10, bits: int):
        self.bits = bits
        self.top = sa[-1].signature if sa else None
        self.bound = _log10_bound(top_log10, bits) if top_log10 is not None else None

    def contains(self, sig: Signature) -> bool:
        if self.bound is not None:
            return within_log10(sig, log_magnitude(sig, self.bits).raw, self.bound, self.bits)
        return self.top is not None and compare_magnitude(sig, self.top, self.bits) <= 0


def _classify_one(levels, index_of, rng: _Range) -> LatticeClass:
    preds = tuple(sorted(i for i, _, parent in level_predecessors(levels) if parent in index_of))
    succs = []
    undecided = []
    for i, _, child in level_successors(levels):
        if child in index_of:
            succs.append(i)
        elif not rng.contains(Signature._trusted(child)):
            undecided.append(i)
    succs.sort()
    undecided.sort()
    source = not preds
    if succs:
        kind = SOURCE if source else REGULAR
    elif undecided:
        kind = SOURCE if source else INDETERMINATE_UP
    else:
        kind = SOURCE_AND_SINK if source else SINK
    return LatticeClass(kind, tuple(succs), preds, tuple(undecided))


def classify(
    sa: Sequence[SaRecord],
    top_log10=None,
    *,
    threads: int = 1,
    bits: int = DEFAULT_BITS,
) -> list[tuple[int, LatticeClass]]:
    """Classify every record of a gap-free list starting at index 1.

    ``top_log10`` is the bound the list was generated to; without it the
    last record is taken as the top of the range.
    """
    _check_contiguous(sa)
    if not sa:
        return []
    index_of = {r.signature.levels: r.index for r in sa}
    rng = _Range(sa, top_log10, bits)
    if threads <= 1:
        classes = [_classify_one(r.signature.levels, index_of, rng) for r in sa]
    else:
        with ThreadPoolExecutor(threads) as ex:
            classes = list(ex.map(lambda r: _classify_one(r.signature.levels, index_of, rng), sa, chunksize=256))
    return [(r.index, c) for r, c in zip(sa, classes)]


@dataclass(frozen=True)
class ClosureResult:
    reachable: frozenset[int]
    missing: tuple[int, ...]

    @property
    def first_missing(self) -> int | None:
        return self.missing[0] if self.missing else None


def conjectural_closure(sa: Sequence[SaRecord]) -> ClosureResult:
    """Indices reachable from n = 1 by multiplying by primes inside the list."""
    _check_contiguous(sa)
    if not sa:
        return ClosureResult(frozenset(), ())
    index_of = {r.signature.levels: r.index for r in sa}
    levels_of = [r.signature.levels for r in sa]
    seen = {1}
    queue = deque([1])
    while queue:
        idx = queue.popleft()
        for _, _, child in level_successors(levels_of[idx - 1]):
            j = index_of.get(child)
            if j is not None and j not in seen:
                seen.add(j)
                queue.append(j)
    missing = tuple(i for i in range(1, len(sa) + 1) if i not in seen)
    return ClosureResult(frozenset(seen), missing)


@dataclass
class ConnectivityReport:
    components: list[list[int]]
    connected_to_one: list[bool]
    # records whose possible products leave the generated range
    boundary: set[int] = field(default_factory=set)

    @property
    def single_component(self) -> bool:
        return len(self.components) <= 1

    def decidable_connected(self) -> bool:
        """Every record with a fully decidable neighbourhood reaches index 1."""
        return all(ok or (i + 1) in self.boundary for i, ok in enumerate(self.connected_to_one))


def connectivity(
    sa: Sequence[SaRecord],
    top_log10=None,
    *,
    classes: list[tuple[int, LatticeClass]] | None = None,
    bits: int = DEFAULT_BITS,
) -> ConnectivityReport:
    """Components of the undirected SA lattice restricted to the list."""
    _check_contiguous(sa)
    n = len(sa)
    if n == 0:
        return ConnectivityReport([], [])
    classes = classes if classes is not None else classify(sa, top_log10, bits=bits)
    index_of = {r.signature.levels: r.index for r in sa}
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    boundary = set()
    for r, (_, cls) in zip(sa, classes):
        if cls.undecided_successors:
            boundary.add(r.index)
        for _, _, child in level_successors(r.signature.levels):
            j = index_of.get(child)
            if j is not None:
                a, b = find(r.index), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for i in range(1, n + 1):
        groups.setdefault(find(i), []).append(i)
    comps = sorted(groups.values(), key=lambda g: g[0])
    root = find(1)
    return ConnectivityReport(comps, [find(i) == root for i in range(1, n + 1)], boundary)


@dataclass(frozen=True)
class CounterexampleRow:
    index: int
    type: str  # "np" for sinks, "n/q" for sources
    group: int
    log10: str
    scn: str


def counterexample_report(
    sa: Sequence[SaRecord], classes: list[tuple[int, LatticeClass]]
) -> list[CounterexampleRow]:
    """Table rows for every decided source (n/q) and sink (np) except n = 1."""
    by_index = {r.index: r for r in sa}
    rows = []
    for idx, cls in classes:
        if idx == 1:
            continue
        sig = by_index[idx].signature
        types = []
        if cls.is_sink:
            types.append("np")
        if cls.is_source:
            types.append("n/q")
        for t in types:
            rows.append(CounterexampleRow(idx, t, omega_total(sig), round_log10(sig), format_scn(sig)))
    rows.sort(key=lambda r: (r.index, r.type))
    return rows


def summary(classes: list[tuple[int, LatticeClass]]) -> dict[str, int]:
    """Counts per kind, excluding n = 1 from the sources."""
    out = {k: 0 for k in (REGULAR, SOURCE, SINK, SOURCE_AND_SINK, INDETERMINATE_UP, INDETERMINATE_DOWN)}
    for idx, cls in classes:
        if idx == 1:
            continue
        out[cls.kind] += 1
    return out
