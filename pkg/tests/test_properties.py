"""Property suites for face tracing and for KCL versus triangularity."""

import itertools

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st
from sympy.combinatorics import Permutation

from biembed.current import CurrentGraph, check_kcl, label_circuits
from biembed.derive import as_embedded_graph, derive
from biembed.search import SearchProblem, complete
from biembed.topology import (
    EmbeddedMultigraph,
    euler_genus,
    is_connected,
    trace_faces,
)


@st.composite
def rotation_systems(draw):
    v = draw(st.integers(min_value=1, max_value=12))
    if v == 1:
        return EmbeddedMultigraph(1, [], [[]])
    count = draw(st.integers(min_value=0, max_value=18))
    edges = []
    for _ in range(count):
        a = draw(st.integers(min_value=0, max_value=v - 1))
        b = draw(st.integers(min_value=0, max_value=v - 2))
        edges.append((a, b if b < a else b + 1))
    at = [[] for _ in range(v)]
    for e, (a, b) in enumerate(edges):
        at[a].append(2 * e)
        at[b].append(2 * e + 1)
    return EmbeddedMultigraph(v, edges, [draw(st.permutations(d)) for d in at])


def permutation_face_count(emb):
    # faces are the cycles of rotation-successor composed with reversal
    n = emb.dart_count
    if n == 0:
        return 0
    rho = Permutation([emb.successor(d) for d in range(n)])
    theta = Permutation([d ^ 1 for d in range(n)])
    return (theta * rho).cycles


@settings(max_examples=1000, deadline=None)
@given(rotation_systems())
def test_face_tracing_invariants(emb):
    faces = trace_faces(emb)
    darts = [d for f in faces for d in f]
    assert sorted(darts) == list(range(emb.dart_count))
    assert sum(len(f) for f in faces) == 2 * emb.edge_count
    for f in faces:
        for d, nxt in zip(f, f[1:] + f[:1]):
            assert emb.successor(d ^ 1) == nxt
    assert len(faces) == permutation_face_count(emb)
    if is_connected(emb):
        f = len(faces) if emb.edge_count else 1
        assert (emb.vertex_count - emb.edge_count + f) % 2 == 0
        assert euler_genus(emb) >= 0


# units of Z_21 that are 1 mod 3 keep every current in its residue class
UNITS = [u for u in range(1, 21) if u % 3 == 1 and u % 7]


@pytest.fixture(scope="module")
def valid_graphs(k21_search):
    r = complete(SearchProblem(k21_search.template, 21), all_solutions=True)
    return [g for pair in r.solutions for g in pair]


def _scaled(cg, u):
    return CurrentGraph(cg.emb, cg.modulus, [u * c % cg.modulus for c in cg.currents])


def _derived_faces(cg):
    return trace_faces(as_embedded_graph(derive(label_circuits(cg)).rotations))


def test_kcl_gives_triangular_faces(valid_graphs):
    assert len(UNITS) == 6

    @settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(st.sampled_from(valid_graphs), st.sampled_from(UNITS))
    def check(cg, u):
        cg = _scaled(cg, u)
        assert check_kcl(cg)
        faces = _derived_faces(cg)
        assert len(faces) == 70
        assert all(len(f) == 3 for f in faces)

    check()


def _kcl_breaking_swaps(cg):
    # exchanging the currents of two edges that join the same pair of circuits
    # leaves every circuit log a permutation but usually breaks KCL
    labels = label_circuits(cg).dart_labels(cg.emb.dart_count)
    groups = {}
    for e in range(cg.emb.edge_count):
        groups.setdefault((labels[2 * e], labels[2 * e + 1]), []).append(e)
    out = []
    for es in groups.values():
        for e, f in itertools.combinations(es, 2):
            cur = list(cg.currents)
            cur[e], cur[f] = cur[f], cur[e]
            broken = CurrentGraph(cg.emb, cg.modulus, cur)
            if not check_kcl(broken):
                out.append(broken)
    return out


def test_kcl_violation_breaks_triangularity(valid_graphs):
    @settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(st.sampled_from(valid_graphs), st.sampled_from(UNITS), st.data())
    def check(cg, u, data):
        swaps = _kcl_breaking_swaps(_scaled(cg, u))
        assert swaps
        broken = data.draw(st.sampled_from(swaps))
        assert any(len(f) != 3 for f in _derived_faces(broken))

    check()
