"""Large-scale SA generation around a colossally abundant backbone.

The backbone is the greedy chain that always applies the pending step
(raise one prime's exponent by one) of largest *quality*
``ln(sigma(p^k) / (p sigma(p^(k-1)))) / ln p``.  Consecutive elements
``N`` and ``N' = N * P`` both maximize ``ln(sigma(n)/n) - eps ln n`` at
``eps`` = quality of the step to ``P``.

Any SA number ``n`` strictly between them beats ``N`` on abundancy, hence

    eps * ln(n / N) - defect(n) > 0,  0 < ln(n / N) < ln P,

where ``defect(n) >= 0`` is how far ``n`` falls short of the maximum of
``ln(sigma(n)/n) - eps ln n``.  In the levels form of a signature the
defect splits into independent per-level terms, each convex in the shift
of that level's count, so the candidates are found by a depth-first search
over per-level shifts pruned by an exact suffix Pareto frontier.  This is
the ``"bounded"`` method and it cannot miss a record.

The ``"window"`` method instead takes every signature within ``R``
canonical single-prime moves of the two interval endpoints and escalates
``R`` until the interval's records stop changing.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Callable, Iterable, Iterator

import gmpy2

from .arith import Abundancy, abundancy, compare_abundancy, compare_magnitude, level_gains, log_magnitude
from .exhaustive import _log10_bound, within_log10
from .primes import DEFAULT_BITS, prime_table
from .records import NonConvergence, SaRecord
from .signature import Signature, level_predecessors, level_successors


class PrecisionExhausted(ArithmeticError):
    """Two step qualities could not be separated even at the maximum precision."""


MAX_QUALITY_BITS = 4096


@dataclass(frozen=True)
class BackboneStep:
    """Raising ``p_prime_index`` to exponent ``level`` (from ``level - 1``)."""

    prime_index: int
    level: int
    gain_raw: int
    ln_raw: int
    bits: int = DEFAULT_BITS

    @property
    def quality(self) -> gmpy2.mpfr:
        with gmpy2.context(gmpy2.get_context(), precision=self.bits + 32):
            return gmpy2.mpfr(self.gain_raw) / self.ln_raw

    @property
    def quality_error(self) -> gmpy2.mpfr:
        # |g/l - G/L| <= (1 + g/l) / l in units where g, l are within one unit
        with gmpy2.context(gmpy2.get_context(), precision=64):
            return (1 + gmpy2.mpfr(self.gain_raw) / self.ln_raw) / (self.ln_raw - 1)


def _quality_exact(p: int, k: int, bits: int) -> gmpy2.mpfr:
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        x = gmpy2.mpfr(p - 1) / gmpy2.mpfr(gmpy2.mpz(p) ** (k + 1) - p)
        return gmpy2.log1p(x) / gmpy2.log(p)


def compare_quality(a: BackboneStep, b: BackboneStep) -> int:
    """Order two steps by quality, escalating precision on near-ties."""
    lhs = a.gain_raw * b.ln_raw
    rhs = b.gain_raw * a.ln_raw
    tol = a.gain_raw + b.ln_raw + b.gain_raw + a.ln_raw + 2
    if lhs - rhs > tol:
        return 1
    if rhs - lhs > tol:
        return -1
    table = prime_table(a.bits)
    pa, pb = table.prime(a.prime_index), table.prime(b.prime_index)
    bits = 2 * a.bits
    while bits <= MAX_QUALITY_BITS:
        qa = _quality_exact(pa, a.level, bits + 16)
        qb = _quality_exact(pb, b.level, bits + 16)
        with gmpy2.context(gmpy2.get_context(), precision=bits + 16):
            diff = qa - qb
            if abs(diff) > gmpy2.mpfr(2) ** (8 - bits) * (abs(qa) + abs(qb) + 1):
                return 1 if diff > 0 else -1
        bits *= 2
    raise PrecisionExhausted(f"cannot order step qualities {a} and {b}")


def _step(levels: tuple[int, ...], k: int, bits: int) -> BackboneStep:
    i = (levels[k - 1] if k <= len(levels) else 0) + 1
    return BackboneStep(i, k, level_gains(bits).gain(k, i), prime_table(bits).ln(i), bits)


def pending_steps(levels: tuple[int, ...], bits: int = DEFAULT_BITS) -> list[BackboneStep]:
    """One step per level that keeps the exponents nonincreasing."""
    return [_step(levels, k, bits) for _, k, _ in level_successors(levels)]


def best_step(levels: tuple[int, ...], bits: int = DEFAULT_BITS) -> BackboneStep:
    steps = pending_steps(levels, bits)
    best = steps[0]
    for s in steps[1:]:
        c = compare_quality(s, best)
        if c > 0 or (c == 0 and s.prime_index < best.prime_index):
            best = s
    return best


def apply_step(levels: tuple[int, ...], step: BackboneStep) -> tuple[int, ...]:
    k = step.level
    if k > len(levels):
        return levels + (1,)
    return levels[: k - 1] + (levels[k - 1] + 1,) + levels[k:]


def backbone_steps(start: tuple[int, ...] = (), bits: int = DEFAULT_BITS) -> Iterator[tuple[Signature, BackboneStep]]:
    """Endless stream of (backbone element, step taken from it)."""
    levels = start
    while True:
        step = best_step(levels, bits)
        yield Signature._trusted(levels), step
        levels = apply_step(levels, step)


def backbone_chain(max_log10=None, count: int | None = None, bits: int = DEFAULT_BITS) -> Iterator[Signature]:
    """Backbone elements from 1 upward, up to a log10 bound or a count."""
    if (max_log10 is None) == (count is None):
        raise ValueError("give exactly one of max_log10 or count")
    bound = _log10_bound(max_log10, bits) if max_log10 is not None else None
    for n, (sig, _) in enumerate(backbone_steps(bits=bits)):
        if count is not None and n >= count:
            return
        if bound is not None and not within_log10(sig, log_magnitude(sig, bits).raw, bound, bits):
            return
        yield sig


# --- bounded interval search ------------------------------------------------


@dataclass
class IntervalStats:
    candidates: int = 0
    nodes: int = 0
    frontier: int = 0


def _level_options(k, base, g_step, l_step, wmax, table, gains):
    """Shifts j of level k's count with defect within ``wmax``.

    Each option is (j, dln, dgain) relative to the base count.  The defect
    ``g_step * dln - l_step * dgain`` is convex in j, so the scan stops at
    the first shift that exceeds ``wmax`` in each direction.
    """
    theta = table.theta_prefix
    opts = [(0, 0, 0)]
    pre_b = gains.prefix(k, base)
    j = 1
    while True:
        c = base + j
        table.ensure(c)
        theta = table.theta_prefix
        dl = theta[c] - theta[base]
        dg = gains.prefix(k, c) - pre_b
        if g_step * dl - l_step * dg > wmax:
            break
        opts.append((j, dl, dg))
        j += 1
    j = -1
    while base + j >= 0:
        c = base + j
        dl = theta[c] - theta[base]
        dg = gains.prefix(k, c) - pre_b
        if g_step * dl - l_step * dg > wmax:
            break
        opts.append((j, dl, dg))
        j -= 1
    return opts


def _pareto(points: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    # keep points not dominated under (smaller ln, larger gain)
    out = []
    best = None
    for d, g in sorted(points, key=lambda t: (t[0], -t[1])):
        if best is None or g > best:
            out.append((d, g))
            best = g
    return out


def _interval_search(base, step, bits, stats=None):
    """Depth-first search behind :func:`interval_candidates`.

    Returns (levels, dln, dgain) triples, where ``dln`` and ``dgain`` are
    the fixed-point offsets of ln n and ln sigma(n)/n from those of the base.
    Because they are differences of the same table entries, adding them to
    the base's values gives exactly the fixed-point values of ``n`` itself.
    """
    table = prime_table(bits)
    gains = level_gains(bits)
    lv = base.levels
    g_step, l_step = step.gain_raw, step.ln_raw
    slack = 1 << (bits // 2)  # 2**-(bits/2) in fixed point: absorbs all rounding
    wmax = g_step * l_step + (g_step + l_step + (1 << bits)) * slack * 4

    options = []
    for k, b in enumerate(lv, 1):
        options.append((b, _level_options(k, b, g_step, l_step, wmax, table, gains)))
    # levels above the top are nonzero only if every level below them is,
    # so their defects for a single prime add up
    k = len(lv) + 1
    cum = 0
    while True:
        opts = _level_options(k, 0, g_step, l_step, wmax - cum, table, gains)
        if len(opts) == 1:
            break
        cum += g_step * opts[1][1] - l_step * opts[1][2]
        options.append((0, opts))
        k += 1
    nlev = len(options)

    # suffix frontiers: best achievable gain for a given ln budget
    frontiers: list[tuple[list[int], list[int]]] = [([0], [0])]
    pts = [(0, 0)]
    for b, opts in reversed(options):
        combo = []
        for _, dl, dg in opts:
            for d, g in pts:
                D, G = dl + d, dg + g
                if g_step * D - l_step * G <= wmax:
                    combo.append((D, G))
        pts = _pareto(combo)
        frontiers.append(([d for d, _ in pts], [g for _, g in pts]))
    frontiers.reverse()

    upper = l_step + slack
    out = []
    chosen = [0] * nlev
    nodes = 0

    def dfs(k: int, cap: float, dsum: int, gsum: int) -> None:
        nonlocal nodes
        nodes += 1
        if k == nlev:
            if gsum > -slack and -slack < dsum < upper:
                out.append((tuple(c for c in chosen if c > 0), dsum, gsum))
            return
        b, opts = options[k]
        fd, fg = frontiers[k + 1]
        for j, dl, dg in opts:
            c = b + j
            if c > cap:
                continue
            D, G = dsum + dl, gsum + dg
            pos = bisect.bisect_left(fd, upper - D) - 1
            if pos < 0 or G + fg[pos] <= -slack:
                continue
            chosen[k] = c
            dfs(k + 1, c, D, G)
        chosen[k] = 0

    dfs(0, float("inf"), 0, 0)
    if stats is not None:
        stats.nodes += nodes
        stats.candidates += len(out)
        stats.frontier += sum(len(f[0]) for f in frontiers)
    return out


def interval_candidates(
    base: Signature,
    step: BackboneStep,
    bits: int = DEFAULT_BITS,
    stats: IntervalStats | None = None,
) -> list[Signature]:
    """Every canonical n in [N, N*P) whose abundancy can reach N's.

    ``N`` is ``base`` (a backbone element) and ``P`` the prime of ``step``.
    The result always contains ``base`` itself and is a superset of the SA
    numbers in the interval.  It may include a few numbers within rounding
    distance of the interval ends; it is not sorted.
    """
    return [Signature._trusted(t) for t, _, _ in _interval_search(base, step, bits, stats)]


def _bounded_interval(base, nxt, step, best, bits, stats):
    """Records in [base, nxt) against the running record ``best``."""
    ln_base = log_magnitude(base, bits)
    ab_base = abundancy(base, bits)
    om_base = sum(base.levels)
    l_step = step.ln_raw
    items = []
    for lv, d, g in _interval_search(base, step, bits, stats):
        om = sum(lv)
        tol = om + om_base + 1
        if d < -tol or d > l_step + tol:
            continue
        sig = Signature._trusted(lv)
        if d <= tol and compare_magnitude(sig, base, bits) < 0:
            continue
        if d >= l_step - tol and compare_magnitude(sig, nxt, bits) >= 0:
            continue
        items.append((ln_base.raw + d, ab_base.raw + g, om, sig))
    items.sort(key=lambda t: t[0])
    for a, b in zip(items, items[1:]):
        if b[0] - a[0] <= a[2] + b[2]:
            items.sort(key=cmp_to_key(lambda x, y: compare_magnitude(x[3], y[3], bits)))
            break
    out = []
    for _, ab, om, sig in items:
        if best is not None:
            diff = ab - best.raw
            if diff < -(om + best.err):
                continue
            if diff <= om + best.err:
                a = Abundancy(sig, ab, om, bits)
                if compare_abundancy(a, best) <= 0:
                    continue
        best = Abundancy(sig, ab, om, bits)
        out.append((sig, best))
    return out, best


# --- window method -----------------------------------------------------------


@dataclass(frozen=True)
class WindowConfig:
    radius: int = 4
    escalation: int = 2
    cap: int = 12
    margin: int = 0

    def __post_init__(self):
        if self.radius < 0 or self.escalation < 1 or self.cap < self.radius:
            raise ValueError(f"bad window config {self}")


def window_candidates(b: Signature, radius: int | WindowConfig) -> set[Signature]:
    """All signatures within ``radius`` canonical single-prime moves of ``b``."""
    if isinstance(radius, WindowConfig):
        radius = radius.radius
    seen = {b.levels}
    layer = [b.levels]
    for _ in range(radius):
        nxt = []
        for lv in layer:
            for _, _, child in level_successors(lv):
                if child not in seen:
                    seen.add(child)
                    nxt.append(child)
            for _, _, parent in level_predecessors(lv):
                if parent not in seen:
                    seen.add(parent)
                    nxt.append(parent)
        layer = nxt
    return {Signature._trusted(t) for t in seen}


def _in_interval(sig: Signature, lo: Signature, hi: Signature, bits: int) -> bool:
    return compare_magnitude(sig, lo, bits) >= 0 and compare_magnitude(sig, hi, bits) < 0


def _interval_records(cands, best, bits):
    """Records among ``cands`` (sorted ascending) against running ``best``."""
    out = []
    for sig in cands:
        a = abundancy(sig, bits)
        if best is None or compare_abundancy(a, best) > 0:
            out.append((sig, a))
            best = a
    return out, best


def _sort_by_magnitude(sigs, bits):
    keyed = [(log_magnitude(s, bits).raw, s) for s in sigs]
    keyed.sort(key=lambda t: t[0])
    # exact pass over neighbours whose keys are too close to trust
    out = [s for _, s in keyed]
    for i in range(len(keyed) - 1):
        if keyed[i + 1][0] - keyed[i][0] <= 2 * (sum(keyed[i][1].levels) + sum(keyed[i + 1][1].levels)):
            return sorted(out, key=cmp_to_key(lambda x, y: compare_magnitude(x, y, bits)))
    return out


# --- driver ------------------------------------------------------------------


@dataclass
class GenerationReport:
    """Per-run statistics; ``radii`` maps interval number to the final radius."""

    method: str = "bounded"
    intervals: int = 0
    candidates: int = 0
    nodes: int = 0
    radii: dict[int, int] = field(default_factory=dict)
    max_radius: int = 0


@dataclass
class Checkpoint:
    """Resumable generator state after a completed interval."""

    backbone: Signature
    record: Signature
    radius: int
    emitted: int


def generate_sa(
    max_log10=None,
    count: int | None = None,
    cfg: WindowConfig | None = None,
    *,
    method: str = "bounded",
    bits: int = DEFAULT_BITS,
    report: GenerationReport | None = None,
    resume: Checkpoint | None = None,
    on_interval: Callable[[Checkpoint], None] | None = None,
) -> Iterator[SaRecord]:
    """Stream SA records with consecutive indices from 1.

    ``method="bounded"`` uses the provably complete defect-bounded search;
    ``method="window"`` uses radius windows with escalation and raises
    NonConvergence when the radius cap is reached without the interval's
    records stabilising.
    """
    if (max_log10 is None) == (count is None):
        raise ValueError("give exactly one of max_log10 or count")
    if method not in ("bounded", "window"):
        raise ValueError(f"unknown method {method!r}")
    cfg = cfg or WindowConfig()
    rep = report if report is not None else GenerationReport()
    rep.method = method
    bound = _log10_bound(max_log10, bits) if max_log10 is not None else None

    start: tuple[int, ...] = ()
    best = None
    emitted = 0
    radius = cfg.radius
    if resume is not None:
        start = resume.backbone.levels
        best = abundancy(resume.record, bits)
        emitted = resume.emitted
        radius = max(resume.radius, cfg.radius)

    for base, step in backbone_steps(start, bits):
        nxt = Signature._trusted(apply_step(base.levels, step))
        if method == "bounded":
            st = IntervalStats()
            recs, new_best = _bounded_interval(base, nxt, step, best, bits, st)
            rep.candidates += st.candidates
            rep.nodes += st.nodes
        else:
            radius = cfg.radius
            recs, new_best = _window_interval(base, nxt, best, radius, bits)
            while True:
                if radius + cfg.escalation > cfg.cap:
                    raise NonConvergence(
                        f"interval at backbone {base!r} unstable up to radius {cfg.cap}"
                    )
                recs2, best2 = _window_interval(base, nxt, best, radius + cfg.escalation, bits)
                if [s for s, _ in recs2] == [s for s, _ in recs]:
                    break
                radius += cfg.escalation
                recs, new_best = recs2, best2
            rep.radii[rep.intervals] = radius
            rep.max_radius = max(rep.max_radius, radius)
        rep.intervals += 1
        for sig, a in recs:
            if bound is not None and not within_log10(sig, log_magnitude(sig, bits).raw, bound, bits):
                return
            if count is not None and emitted >= count:
                return
            emitted += 1
            yield SaRecord(emitted, sig, a, log_magnitude(sig, bits))
        best = new_best
        if on_interval is not None:
            on_interval(Checkpoint(nxt, best.signature, radius, emitted))
        if count is not None and emitted >= count:
            return
        if bound is not None and not within_log10(nxt, log_magnitude(nxt, bits).raw, bound, bits):
            return


def _window_interval(lo, hi, best, radius, bits):
    cands = window_candidates(lo, radius) | window_candidates(hi, radius)
    cands = [s for s in cands if _in_interval(s, lo, hi, bits)]
    return _interval_records(_sort_by_magnitude(cands, bits), best, bits)


# --- cross-checking ------------------------------------------------------------


@dataclass(frozen=True)
class Mismatch:
    index: int
    field: str
    left: object
    right: object


def crosscheck(a: list[SaRecord], b: list[SaRecord]) -> list[Mismatch]:
    """Index-aligned differences over the common index range."""
    bi = {r.index: r for r in b}
    out = []
    for r in a:
        o = bi.get(r.index)
        if o is None:
            continue
        if r.signature != o.signature:
            out.append(Mismatch(r.index, "signature", r.signature, o.signature))
            continue
        if compare_abundancy(r.abundancy, o.abundancy) != 0:
            out.append(Mismatch(r.index, "abundancy", r.abundancy, o.abundancy))
        m1, m2 = r.magnitude, o.magnitude
        if abs(m1.raw - m2.raw) > m1.err + m2.err:
            out.append(Mismatch(r.index, "magnitude", m1, m2))
    return out
