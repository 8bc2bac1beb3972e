import math

import numpy as np
import pytest

from conftest import brute_records, brute_sigma
from superabundant.backbone import (
    GenerationReport,
    IntervalStats,
    WindowConfig,
    backbone_chain,
    backbone_steps,
    best_step,
    compare_quality,
    crosscheck,
    generate_sa,
    interval_candidates,
    pending_steps,
    window_candidates,
)
from superabundant.exhaustive import enumerate_records
from superabundant.records import NonConvergence, SaRecord
from superabundant.signature import Signature, multiply_by_prime

S = Signature


def ints(sigs):
    return [s.to_int() for s in sigs]


def test_chain_prefix_matches_eps_maximizers():
    # oracle: maximizers of sigma(n)/n^(1+eps) over n <= 10^5 on a descending eps grid
    limit = 10**5
    sig = brute_sigma(limit).astype(float)
    n = np.arange(limit + 1, dtype=float)
    n[0] = 1
    maxima = []
    for eps in np.linspace(0.9, 0.05, 400):
        v = np.log(sig[1:]) - (1 + eps) * np.log(n[1:])
        m = int(np.argmax(v)) + 1
        if m not in maxima:
            maxima.append(m)
    chain = ints(backbone_chain(count=8))
    assert chain[:6] == [1, 2, 6, 12, 60, 120]
    assert [m for m in maxima if m <= 120] == chain[:6]


def test_first_step_quality():
    step = best_step(())
    assert step.prime_index == 1 and step.level == 1
    assert abs(float(step.quality) - math.log(1.5) / math.log(2)) < 1e-15
    other = [s for s in pending_steps((1,)) if s.prime_index == 2][0]
    assert abs(float(other.quality) - math.log(4 / 3) / math.log(3)) < 1e-15


def test_quality_decreases_per_prime():
    last = {}
    for k, (sig, step) in enumerate(backbone_steps()):
        if k >= 10_000:
            break
        q = last.get(step.prime_index)
        if q is not None:
            assert compare_quality(step, q) < 0
        assert 0 < step.quality < 1
        last[step.prime_index] = step
        nxt = multiply_by_prime(sig, step.prime_index)
        assert sum(nxt.levels) == sum(sig.levels) + 1


def test_backbone_elements_are_sa():
    sa = set(n for n in brute_records(10**6))
    for s in backbone_chain(max_log10=6):
        assert s.to_int() in sa


def test_window_candidates():
    b = S([2, 1])
    assert window_candidates(b, 0) == {b}
    assert set(ints(window_candidates(b, 1))) == {12, 24, 36, 60, 6, 4}
    sizes = [len(window_candidates(b, r)) for r in range(6)]
    assert sizes == sorted(sizes)
    assert window_candidates(b, WindowConfig(radius=1)) == window_candidates(b, 1)


def test_window_config_validation():
    with pytest.raises(ValueError):
        WindowConfig(radius=5, cap=4)


def test_generate_matches_sieve():
    assert ints(r.signature for r in generate_sa(max_log10=6)) == brute_records(10**6)


@pytest.mark.parametrize("method", ["bounded", "window"])
def test_generate_matches_exhaustive(method):
    ex = list(enumerate_records(max_log10=25))
    bb = list(generate_sa(max_log10=25, method=method))
    assert crosscheck(ex, bb) == [] and len(ex) == len(bb)


def test_interval_candidates_contain_base_and_records():
    steps = backbone_steps()
    for _ in range(40):
        base, step = next(steps)
    st = IntervalStats()
    cands = interval_candidates(base, step, stats=st)
    assert base in cands
    assert st.candidates == len(cands) and st.nodes >= len(cands)


def test_window_reports_radii():
    rep = GenerationReport()
    list(generate_sa(max_log10=12, method="window", report=rep))
    assert rep.method == "window" and rep.intervals > 0
    assert set(rep.radii.values()) <= {4, 6, 8, 10}


def test_window_nonconvergence():
    with pytest.raises(NonConvergence):
        list(generate_sa(max_log10=40, cfg=WindowConfig(radius=0, escalation=1, cap=1), method="window"))


def test_count_limit_and_indices():
    recs = list(generate_sa(count=50))
    assert [r.index for r in recs] == list(range(1, 51))
    assert ints(r.signature for r in recs) == ints(r.signature for r in enumerate_records(count=50))


def test_resume_equals_uninterrupted():
    full = list(generate_sa(max_log10=30))
    cps = []
    head = []
    for r in generate_sa(max_log10=30, on_interval=cps.append):
        head.append(r)
        if len(cps) == 20:
            break
    cp = cps[-1]
    tail = list(generate_sa(max_log10=30, resume=cp))
    assert [r.signature for r in full] == [r.signature for r in full[: cp.emitted]] + [r.signature for r in tail]
    assert tail[0].index == cp.emitted + 1


def test_deterministic():
    a = [r.signature for r in generate_sa(max_log10=60)]
    b = [r.signature for r in generate_sa(max_log10=60)]
    assert a == b


def test_crosscheck_examples():
    ex = list(enumerate_records(count=150))
    bb = list(generate_sa(count=150))
    assert crosscheck(ex, bb) == []
    assert crosscheck(ex, ex) == []
    broken = list(ex)
    broken[99] = SaRecord.make(100, multiply_by_prime(ex[99].signature, 1))
    diff = crosscheck(ex, broken)
    assert len(diff) == 1 and diff[0].index == 100 and diff[0].field == "signature"


def test_limit_arguments():
    with pytest.raises(ValueError):
        list(generate_sa())
    with pytest.raises(ValueError):
        list(generate_sa(max_log10=5, method="nope"))
