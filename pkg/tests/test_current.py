import pytest

from biembed.current import (
    CurrentGraph,
    CurrentGraphError,
    LabeledCircuits,
    NoConsistentLabeling,
    WrongIndex,
    ZeroCurrent,
    check_kcl,
    check_pair,
    check_simplicity,
    circuits_with_labeling,
    consistent_labelings,
    label_circuits,
    log_of,
)
from biembed.topology import EmbeddedMultigraph, trace_faces

THETA_EDGES = [(0, 1)] * 3


def theta(currents, planar=True, n=21):
    rot1 = [1, 3, 5] if not planar else [5, 3, 1]
    return CurrentGraph(EmbeddedMultigraph(2, THETA_EDGES, [[0, 2, 4], rot1]), n, currents)


def test_kcl_examples():
    assert check_kcl(theta([1, 2, -3]))
    assert not check_kcl(theta([1, 2, 4]))


def test_antisymmetry():
    cg = theta([1, 2, 18])
    for d in range(6):
        assert (cg.current(d) + cg.current(d ^ 1)) % 21 == 0
        assert cg.current(d) != 0


def test_construction_errors():
    with pytest.raises(ZeroCurrent):
        theta([1, 21, 20])
    with pytest.raises(CurrentGraphError):
        theta([1, 2, 18], n=20)
    with pytest.raises(CurrentGraphError):
        theta([1, 2])


def test_log_is_currents_along_the_walk():
    # two parallel edges: the face (e0+, e1-) carries 5 and -7
    emb = EmbeddedMultigraph(2, [(0, 1), (0, 1)], [[0, 2], [1, 3]])
    cg = CurrentGraph(emb, 21, [5, 7])
    walk = next(w for w in trace_faces(emb) if 0 in w)
    assert walk == (0, 3)
    assert tuple(cg.current(d) for d in walk) == (5, 14)


def test_planar_theta_is_labeled():
    cg = theta([1, 4, 16])
    circuits = label_circuits(cg)
    assert circuits.labeling in consistent_labelings(cg)
    assert circuits.labeling == min(consistent_labelings(cg))
    for k in range(3):
        assert len(log_of(circuits, k)) == 2
    assert sum(len(log) for log in circuits.logs) == 6
    with pytest.raises(ValueError):
        log_of(circuits, 3)


def test_labeling_rule_holds_on_every_edge():
    cg = theta([1, 4, 16])
    circuits = label_circuits(cg)
    labels = circuits.dart_labels(6)
    for e, c in enumerate(cg.currents):
        assert (c - (labels[2 * e + 1] - labels[2 * e])) % 3 == 0


def test_no_consistent_labeling():
    # every edge of the planar theta graph separates two different circuits,
    # so a current divisible by 3 cannot be labeled
    with pytest.raises(NoConsistentLabeling):
        label_circuits(theta([1, 2, 18]))


def test_index_one_is_rejected():
    cg = theta([1, 2, 18], planar=False)
    assert len(trace_faces(cg.emb)) == 1
    with pytest.raises(WrongIndex):
        label_circuits(cg)


def test_simplicity_examples():
    bad = LabeledCircuits(21, ((0,), (1,), (2,)), ((5, 14, 5), (1,), (2,)), (0, 1, 2))
    good = LabeledCircuits(21, ((0,), (1,), (2,)), ((1, 2, 3), (1,), (2,)), (0, 1, 2))
    assert not check_simplicity(bad)
    assert check_simplicity(good, 21)


def test_k21_pair_logs(k21_pair):
    a, b = k21_pair
    assert check_kcl(a) and check_kcl(b)
    ca, cb = label_circuits(a), label_circuits(b)
    assert check_simplicity(ca) and check_simplicity(cb)
    # the certificate relabels B by a translation so the residues line up
    cb = circuits_with_labeling(b, (2, 0, 1))
    assert sum(map(len, ca.logs)) == 30 and sum(map(len, cb.logs)) == 30
    for k in range(3):
        assert sorted(ca.logs[k] + cb.logs[k]) == list(range(1, 21))
    report = check_pair(ca, cb, 21, 10, 10)
    assert report.e5 and report.e6
    assert report.summary() == ""


def test_same_graph_twice_duplicates_everything(k21_pair):
    a, _ = k21_pair
    ca = label_circuits(a)
    report = check_pair(ca, ca, 21, 10, 10)
    assert not report.e5
    for k in range(3):
        assert report.duplicated[k] == tuple(sorted(ca.logs[k]))
    assert "duplicated" in report.summary()


def test_swapped_pair_breaks_only_e6(k21_swapped):
    from biembed.derive import verify_biembedding

    cert = verify_biembedding(*k21_swapped)
    assert cert.e_flags["E5"] and not cert.e_flags["E6"]
