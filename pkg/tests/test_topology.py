import itertools

import pytest
from sympy.combinatorics import Permutation

from biembed.topology import (
    DisconnectedGraph,
    EmbeddedMultigraph,
    EmbeddingError,
    as_dart,
    canonical_code,
    components,
    dart,
    euler_genus,
    face_index,
    format_dart,
    is_connected,
    is_triangular,
    parse_dart,
    reverse,
    trace_faces,
)


def triangle():
    # edges 0:(0,1) 1:(1,2) 2:(2,0)
    return EmbeddedMultigraph(3, [(0, 1), (1, 2), (2, 0)], [[0, 5], [2, 1], [4, 3]])


def test_dart_helpers():
    assert dart(3, "+") == 6 and dart(3, "-") == 7
    assert reverse(reverse(9)) == 9
    assert as_dart(7).edge == 3 and as_dart(7).sign == "-"
    assert format_dart(6) == "3+"
    assert parse_dart("3-") == 7
    with pytest.raises(ValueError):
        parse_dart("3*")


def test_triangle_faces_and_genus():
    emb = triangle()
    faces = trace_faces(emb)
    assert [len(f) for f in faces] == [3, 3]
    assert euler_genus(emb) == 0
    assert is_connected(emb)
    assert is_triangular(emb)


def test_single_edge():
    emb = EmbeddedMultigraph(2, [(0, 1)], [[0], [1]])
    assert trace_faces(emb) == ((0, 1),)
    assert not is_triangular(emb)
    assert euler_genus(emb) == 0


def test_faces_are_canonical():
    for walk in trace_faces(triangle()):
        assert walk[0] == min(walk)
    firsts = [w[0] for w in trace_faces(triangle())]
    assert firsts == sorted(firsts)


def test_tail_and_head_swap_under_reverse():
    emb = triangle()
    for d in range(emb.dart_count):
        assert emb.tail(d) == emb.head(reverse(d))


def test_construction_errors():
    with pytest.raises(EmbeddingError):
        EmbeddedMultigraph(1, [(0, 0)], [[0, 1]])
    with pytest.raises(EmbeddingError):
        EmbeddedMultigraph(2, [(0, 1)], [[0, 1], []])  # dart 1 leaves vertex 1
    with pytest.raises(EmbeddingError):
        EmbeddedMultigraph(2, [(0, 1)], [[0], []])
    with pytest.raises(EmbeddingError):
        EmbeddedMultigraph(2, [(0, 5)], [[0], [1]])


def test_disconnected():
    emb = EmbeddedMultigraph(4, [(0, 1), (2, 3)], [[0], [1], [2], [3]])
    assert not is_connected(emb)
    assert components(4, [(0, 1), (2, 3)]) == [0, 0, 2, 2]
    with pytest.raises(DisconnectedGraph):
        euler_genus(emb)


def _theta_systems():
    """All rotation systems of the theta graph (3 parallel edges, 2 vertices)."""
    edges = [(0, 1)] * 3
    for p in itertools.permutations([0, 2, 4]):
        for q in itertools.permutations([1, 3, 5]):
            yield EmbeddedMultigraph(2, edges, [list(p), list(q)])


def _oracle_faces(emb):
    # face permutation = rotation successor composed after dart reversal
    succ = [0] * emb.dart_count
    for rot in emb.rotations:
        for i, d in enumerate(rot):
            succ[d] = rot[(i + 1) % len(rot)]
    phi = Permutation([succ[d ^ 1] for d in range(emb.dart_count)])
    return sorted(sorted(c) for c in phi.full_cyclic_form)


def test_theta_graph_against_permutation_oracle():
    tally = {}
    for emb in _theta_systems():
        faces = trace_faces(emb)
        assert sorted(sorted(f) for f in faces) == _oracle_faces(emb)
        g = euler_genus(emb)
        tally[(len(faces), g)] = tally.get((len(faces), g), 0) + 1
    # 36 systems: rotations at the two vertices either mirror each other or not
    assert tally == {(3, 0): 18, (1, 1): 18}


def test_face_index_covers_every_dart():
    emb = triangle()
    owner = face_index(emb)
    for i, walk in enumerate(trace_faces(emb)):
        assert all(owner[d] == i for d in walk)


def test_canonical_code_ignores_labels():
    a = triangle()
    # same triangle with vertices renamed 0->1->2->0 keeping edge ids
    b = EmbeddedMultigraph(3, [(1, 2), (2, 0), (0, 1)], [[4, 3], [0, 5], [2, 1]])
    assert canonical_code(a) == canonical_code(b)
    mirror = EmbeddedMultigraph(3, [(0, 1), (1, 2), (2, 0)], [[5, 0], [1, 2], [3, 4]])
    assert canonical_code(mirror) == canonical_code(a)  # a triangle is achiral
    theta = list(_theta_systems())
    codes = {canonical_code(t) for t in theta}
    assert len(codes) == 2
