"""Acceptance criteria 1 to 8.

Each test carries a ``criterion`` mark; conftest prints one PASS, FAIL or
SKIP line per criterion at the end of the run.  Criterion 8 is the s=1
stretch goal and only runs when CG_S1_BUDGET names a node budget.
"""

import itertools
import os
import random
import time

import pytest

from biembed import cli
from biembed.bounds import b_of_s, bigenus_lower
from biembed.current import CurrentGraph, check_kcl, circuits_with_labeling, label_circuits
from biembed.derive import as_embedded_graph, derive, genus_formula, verify_biembedding
from biembed.family import swap_k
from biembed.io import parse_current_graph, render_current_graph
from biembed.search import FOUND, SearchProblem, complete, search_family
from biembed.topology import (
    EmbeddedMultigraph,
    euler_genus,
    is_connected,
    trace_faces,
)

S1_BUDGET = "CG_S1_BUDGET"


def _derived(cg):
    return as_embedded_graph(derive(label_circuits(cg)).rotations)


def _check_derived_genus(cg):
    emb = _derived(cg)
    assert euler_genus(emb) == genus_formula(cg.vertex_count, cg.modulus // 3)
    return emb


@pytest.mark.criterion(1, "b(s) equals the bigenus lower bound at 24s+21 for s = 0..1000")
def test_criterion_1_bounds_identity():
    start = time.perf_counter()
    for s in range(1001):
        assert b_of_s(s) == bigenus_lower(24 * s + 21)
    assert time.perf_counter() - start < 1.0


@pytest.mark.criterion(2, "search at s=0 gives a certified genus 8 biembedding of K_21")
def test_criterion_2_search_s0():
    start = time.perf_counter()
    r = search_family(0)
    assert time.perf_counter() - start < 600
    assert r.status == FOUND
    cert = r.certificate
    assert cert.valid
    assert all(cert.e_flags[f"E{i}"] for i in range(1, 7))
    edges = set()
    for cg, labeling in zip(r.pair, (cert.labeling_a, cert.labeling_b)):
        assert cg.modulus == 21
        assert cg.vertex_count == 10 and cg.emb.edge_count == 15
        assert all(cg.emb.degree(v) == 3 for v in range(10))
        # B's labeling is the one that makes the two residue sets complementary
        emb = as_embedded_graph(derive(circuits_with_labeling(cg, labeling)).rotations)
        faces = trace_faces(emb)
        assert emb.vertex_count == 21 and emb.edge_count == 105
        assert len(faces) == 70 and all(len(f) == 3 for f in faces)
        assert is_connected(emb)
        assert euler_genus(emb) == 8
        mine = {tuple(sorted(emb.edges[e])) for e in range(emb.edge_count)}
        assert len(mine) == 105
        assert not edges & mine
        edges |= mine
    assert edges == set(itertools.combinations(range(21), 2))


@pytest.mark.criterion(3, "Euler genus equals the vertex-count formula on every verified instance")
def test_criterion_3_genus_cross_check(k21_search, k21_pair, k21_swapped):
    instances = [k21_pair, k21_swapped]
    instances += complete(SearchProblem(k21_search.template, 21), all_solutions=True).solutions
    assert len(instances) == 296
    for a, b in instances:
        cert = verify_biembedding(a, b)
        assert cert.valid and cert.genus_check
        for cg, genus in ((a, cert.genus_a), (b, cert.genus_b)):
            assert euler_genus(_check_derived_genus(cg)) == genus


@pytest.mark.criterion(4, "one rung swap at s=0 gives a (1, 15) biembedding of K_21")
def test_criterion_4_swap(k21_pair):
    a, b = k21_pair
    new_a, new_b, cert = swap_k(a, b, 1)
    assert cert.valid and cert.partition_ok
    assert {cert.genus_a, cert.genus_b} == {1, 15}
    assert (new_a.vertex_count, new_b.vertex_count) == (6, 14)
    assert new_a.vertex_count + new_b.vertex_count == a.vertex_count + b.vertex_count == 20


def _instances(k21_search, count, seed=5):
    """Distinct valid graphs: completions of the winning template scaled by units."""
    sols = complete(SearchProblem(k21_search.template, 21), all_solutions=True).solutions
    graphs = [g for pair in sols for g in pair]
    units = [u for u in range(1, 21) if u % 3 == 1 and u % 7]
    rng = random.Random(seed)
    picked = set()
    while len(picked) < count:
        cg = rng.choice(graphs)
        u = rng.choice(units)
        picked.add(CurrentGraph(cg.emb, 21, [u * c % 21 for c in cg.currents]))
    return sorted(picked, key=lambda g: (g.emb.edges, g.emb.rotations, g.currents))


def _break_kcl(cg, rng):
    labels = label_circuits(cg).dart_labels(cg.emb.dart_count)
    pairs = [
        (e, f)
        for e, f in itertools.combinations(range(cg.emb.edge_count), 2)
        if (labels[2 * e], labels[2 * e + 1]) == (labels[2 * f], labels[2 * f + 1])
    ]
    rng.shuffle(pairs)
    for e, f in pairs:
        cur = list(cg.currents)
        cur[e], cur[f] = cur[f], cur[e]
        broken = CurrentGraph(cg.emb, cg.modulus, cur)
        if not check_kcl(broken):
            return broken
    raise AssertionError("no KCL-breaking swap found")


@pytest.mark.criterion(5, "KCL gives triangular faces; breaking KCL breaks triangularity (100 instances)")
def test_criterion_5_kcl_triangularity(k21_search):
    rng = random.Random(11)
    graphs = _instances(k21_search, 100)
    assert len(graphs) == 100
    for cg in graphs:
        assert check_kcl(cg)
        assert all(len(f) == 3 for f in trace_faces(_derived(cg)))
        broken = _break_kcl(cg, rng)
        assert any(len(f) != 3 for f in trace_faces(_derived(broken)))


def _random_rotation_system(rng):
    v = rng.randint(1, 12)
    edges = []
    if v > 1:
        for _ in range(rng.randint(0, 18)):
            a, b = rng.sample(range(v), 2)
            edges.append((a, b))
    at = [[] for _ in range(v)]
    for e, (a, b) in enumerate(edges):
        at[a].append(2 * e)
        at[b].append(2 * e + 1)
    for darts in at:
        rng.shuffle(darts)
    return EmbeddedMultigraph(v, edges, at)


@pytest.mark.criterion(6, "face tracing invariants on 1000 random rotation systems")
def test_criterion_6_face_tracing():
    rng = random.Random(2024)
    connected = 0
    for _ in range(1000):
        emb = _random_rotation_system(rng)
        faces = trace_faces(emb)
        darts = sorted(d for f in faces for d in f)
        assert darts == list(range(emb.dart_count))
        assert sum(len(f) for f in faces) == 2 * emb.edge_count
        if is_connected(emb):
            connected += 1
            f = len(faces) if emb.edge_count else 1
            assert (emb.vertex_count - emb.edge_count + f) % 2 == 0
    assert connected > 100


@pytest.mark.criterion(7, "golden files round-trip and search output ignores --threads")
def test_criterion_7_round_trip_and_determinism(golden_dir, tmp_path):
    for name in ("k21_A.cg", "k21_B.cg", "k21_swap1_A.cg", "k21_swap1_B.cg"):
        text = (golden_dir / name).read_text(encoding="utf-8")
        assert render_current_graph(parse_current_graph(text)) == text
    outputs = []
    for run, threads in enumerate((1, 1, 2)):
        out = tmp_path / str(run)
        argv = ["search", "--s", "0", "--threads", str(threads), "--max-nodes", "1000000"]
        assert cli.main(argv + ["--out", str(out)]) == 0
        outputs.append([(out / n).read_bytes() for n in ("A.cg", "B.cg", "certificate.json")])
    assert outputs[0] == outputs[1] == outputs[2]
    assert outputs[0][0] == (golden_dir / "k21_A.cg").read_bytes()


@pytest.mark.criterion(8, "stretch: search at s=1 gives a genus 61 biembedding of K_45")
@pytest.mark.skipif(S1_BUDGET not in os.environ, reason=f"stretch goal, set {S1_BUDGET}=<nodes> to run")
def test_criterion_8_search_s1():
    budget = int(os.environ[S1_BUDGET])
    r = search_family(1, max_nodes=budget, max_seconds=None)
    assert r.status == FOUND, f"{r.status} after {r.nodes} nodes"
    assert r.certificate.valid
    assert r.certificate.genera == (61, 61) == (bigenus_lower(45), bigenus_lower(45))
