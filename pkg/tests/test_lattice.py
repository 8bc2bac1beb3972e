import pytest

from superabundant.backbone import generate_sa
from superabundant.lattice import (
    INDETERMINATE_UP,
    REGULAR,
    SINK,
    SOURCE,
    GapInList,
    LatticeClass,
    classify,
    conjectural_closure,
    connectivity,
    counterexample_report,
    summary,
)
from superabundant.records import SaRecord
from superabundant.signature import ONE, parse_scn


@pytest.fixture(scope="module")
def first_1000():
    return list(generate_sa(count=1000))


def test_first_1000_has_no_counterexamples(first_1000):
    classes = classify(first_1000)
    counts = summary(classes)
    assert counts[SOURCE] == 0 and counts[SINK] == 0
    assert counterexample_report(first_1000, classes) == []
    # only the very top can have products beyond the list
    assert all(c.kind == REGULAR or idx > 900 for idx, c in classes if idx > 1)


def test_closure_and_connectivity_first_1000(first_1000):
    res = conjectural_closure(first_1000)
    assert res.missing == () and res.first_missing is None
    rep = connectivity(first_1000)
    assert rep.single_component and all(rep.connected_to_one)


def test_index_three_is_four_and_regular(first_1000):
    idx, cls = classify(first_1000[:10])[2]
    assert idx == 3 and first_1000[2].signature.to_int() == 4
    assert cls.sa_predecessors == (1,)
    assert cls.kind == REGULAR


def test_one_is_the_source(first_1000):
    idx, cls = classify(first_1000)[0]
    assert cls.kind == SOURCE and cls.sa_successors == (1,)


def test_single_record():
    one = [SaRecord.make(1, ONE)]
    assert conjectural_closure(one).missing == ()
    assert connectivity(one).single_component
    (_, cls), = classify(one)
    assert cls.kind == SOURCE and cls.undecided_successors == (1,)


def test_gap_rejected(first_1000):
    bad = first_1000[:5] + first_1000[6:10]
    with pytest.raises(GapInList):
        classify(bad)
    with pytest.raises(GapInList):
        conjectural_closure(bad)
    with pytest.raises(GapInList):
        connectivity(bad)


def test_boundary_is_indeterminate(first_1000):
    classes = classify(first_1000)
    top = classes[-1][1]
    assert top.kind in (INDETERMINATE_UP, REGULAR)
    assert not top.sa_successors
    assert top.undecided_successors and not top.sink_decided


def test_threads_give_identical_output(first_1000):
    assert classify(first_1000, threads=4) == classify(first_1000)


def test_empty_report():
    assert counterexample_report([], []) == []


def test_report_row_format():
    sig = parse_scn("{152,12,5,3,0,0,2,0,0,0,0,0,1}")
    rec = SaRecord.make(2687, sig)
    cls = LatticeClass(SINK, (), (1,), ())
    (row,) = counterexample_report([rec], [(2687, cls)])
    assert (row.index, row.type, row.group, row.log10, row.scn) == (
        2687,
        "np",
        184,
        "389.55",
        "{152,12,5,3,0,0,2,0,0,0,0,0,1}",
    )


def test_sanity_invariants(first_1000):
    classes = classify(first_1000)
    res = conjectural_closure(first_1000)
    missing = set(res.missing)
    for idx, cls in classes:
        if idx == 1:
            continue
        assert cls.sa_predecessors or idx in missing
        assert not (idx in res.reachable and idx in missing)
        if cls.kind == SINK:
            assert not cls.undecided_successors
