"""Derived embeddings on Z_n and pairwise biembedding certificates."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

from .current import (
    CurrentGraph,
    LabeledCircuits,
    NoConsistentLabeling,
    WrongIndex,
    check_kcl,
    check_pair,
    check_simplicity,
    circuits_with_labeling,
    consistent_labelings,
)
from .topology import (
    DisconnectedGraph,
    EmbeddedMultigraph,
    components,
    euler_genus,
    is_triangular,
    trace_faces,
)


class InvalidLog(ValueError):
    pass


class NotDivisible(ValueError):
    pass


class AsymmetricRotations(ValueError):
    """Some vertex lists a neighbour that does not list it back."""


@dataclass(frozen=True)
class DerivedEmbedding:
    n: int
    rotations: tuple[tuple[int, ...], ...]

    def neighbours(self, i: int) -> tuple[int, ...]:
        return self.rotations[i]

    def edge_set(self) -> set[tuple[int, int]]:
        return {
            (min(i, j), max(i, j)) for i, rot in enumerate(self.rotations) for j in rot
        }


def derive(circuits: LabeledCircuits, n: int | None = None) -> DerivedEmbedding:
    """Rotation at vertex i is the log of circuit [i mod 3] shifted by i."""
    n = circuits.modulus if n is None else n
    if n % 3:
        raise InvalidLog(f"vertex set Z_{n} cannot be split into three classes")
    for k, log in enumerate(circuits.logs):
        reduced = [c % n for c in log]
        if 0 in reduced:
            raise InvalidLog(f"log of circuit [{k}] contains 0")
        if len(set(reduced)) != len(reduced):
            raise InvalidLog(f"log of circuit [{k}] repeats a residue")
    rotations = tuple(
        tuple((i + c) % n for c in circuits.logs[i % 3]) for i in range(n)
    )
    return DerivedEmbedding(n, rotations)


def as_embedded_graph(rotations: Sequence[Sequence[int]]) -> EmbeddedMultigraph:
    """Materialize a simple-graph rotation system (neighbour lists) as darts."""
    n = len(rotations)
    edge_id: dict[tuple[int, int], int] = {}
    edges: list[tuple[int, int]] = []
    for i, rot in enumerate(rotations):
        for j in rot:
            if j == i:
                raise AsymmetricRotations(f"vertex {i} lists itself")
            if i < j:
                if (i, j) in edge_id:
                    raise AsymmetricRotations(f"vertex {i} lists {j} twice")
                edge_id[(i, j)] = len(edges)
                edges.append((i, j))
    dart_rot = []
    for i, rot in enumerate(rotations):
        darts = []
        for j in rot:
            e = edge_id.get((min(i, j), max(i, j)))
            if e is None:
                raise AsymmetricRotations(f"vertex {i} lists {j} but not conversely")
            darts.append(2 * e if i < j else 2 * e + 1)
        dart_rot.append(darts)
    try:
        return EmbeddedMultigraph(n, edges, dart_rot)
    except ValueError as exc:
        raise AsymmetricRotations(str(exc)) from exc


@dataclass(frozen=True)
class DerivedReport:
    triangular: bool
    genus: int | None
    connected: bool
    regular_degree: int
    symmetric: bool = True
    vertices: int = 0
    edges: int = 0
    faces: int = 0


def verify_rotations(rotations: Sequence[Sequence[int]]) -> DerivedReport:
    n = len(rotations)
    degrees = {len(r) for r in rotations}
    regular = degrees.pop() if len(degrees) == 1 else -1
    try:
        emb = as_embedded_graph(rotations)
    except AsymmetricRotations:
        pairs = [(i, j) for i, rot in enumerate(rotations) for j in rot if 0 <= j < n]
        connected = len(set(components(n, pairs))) == 1
        return DerivedReport(False, None, connected, regular, symmetric=False, vertices=n)
    faces = len(trace_faces(emb))
    try:
        genus: int | None = euler_genus(emb)
        connected = True
    except DisconnectedGraph:
        genus, connected = None, False
    return DerivedReport(
        triangular=is_triangular(emb),
        genus=genus,
        connected=connected,
        regular_degree=regular,
        vertices=n,
        edges=emb.edge_count,
        faces=faces,
    )


def verify_derived(de: DerivedEmbedding) -> DerivedReport:
    return verify_rotations(de.rotations)


def genus_formula(v: int, m: int) -> int:
    """Genus of the derived embedding of a connected index 3 current graph.

    ``v`` is the number of current graph vertices and the group is Z_{3m}.
    """
    if ((v - 6) * m) % 4:
        raise NotDivisible(f"(v - 6) * m = {(v - 6) * m} is not divisible by 4")
    return (v - 6) * m // 4 + 1


def classify_edges(
    cg: CurrentGraph, circuits: LabeledCircuits
) -> dict[int, tuple[int, int]]:
    """For every edge, the labels of the circuits through e+ and e-."""
    labels = circuits.dart_labels(cg.emb.dart_count)
    return {e: (labels[2 * e], labels[2 * e + 1]) for e in range(cg.emb.edge_count)}


@dataclass
class SideReport:
    vertices: int
    e1: bool = False
    e2: bool = False
    e3: bool = False
    e4: bool = False
    circuits: LabeledCircuits | None = None
    derived: DerivedReport | None = None
    edges: set[tuple[int, int]] = field(default_factory=set)
    formula_genus: int | None = None
    errors: list[str] = field(default_factory=list)


def _inspect(cg: CurrentGraph) -> tuple[SideReport, list[tuple[int, int, int]]]:
    side = SideReport(vertices=cg.vertex_count)
    side.e2 = check_kcl(cg)
    labelings: list[tuple[int, int, int]] = []
    try:
        labelings = consistent_labelings(cg)
        side.e1 = True
    except WrongIndex as exc:
        side.errors.append(str(exc))
        return side, labelings
    side.e4 = bool(labelings)
    if not labelings:
        side.errors.append(str(NoConsistentLabeling("no circuit labeling satisfies E4")))
    return side, labelings


def _finish(side: SideReport, cg: CurrentGraph, circuits: LabeledCircuits) -> None:
    side.circuits = circuits
    side.e3 = check_simplicity(circuits, cg.modulus)
    if not side.e3:
        side.errors.append("a circuit log repeats a residue")
        return
    de = derive(circuits, cg.modulus)
    side.derived = verify_derived(de)
    side.edges = de.edge_set()
    try:
        side.formula_genus = genus_formula(cg.vertex_count, cg.modulus // 3)
    except NotDivisible as exc:
        side.errors.append(str(exc))


@dataclass
class BiembeddingCertificate:
    n: int
    va: int
    vb: int
    e_flags: dict[str, bool]
    logs_a: tuple[tuple[int, ...], ...] | None
    logs_b: tuple[tuple[int, ...], ...] | None
    labeling_a: tuple[int, ...] | None
    labeling_b: tuple[int, ...] | None
    alternatives_a: tuple[tuple[int, ...], ...]
    alternatives_b: tuple[tuple[int, ...], ...]
    genus_a: int | None
    genus_b: int | None
    formula_genus_a: int | None
    formula_genus_b: int | None
    triangular_a: bool
    triangular_b: bool
    connected_a: bool
    connected_b: bool
    partition_ok: bool
    duplicate_edges: list[tuple[int, int]]
    missing_edges: list[tuple[int, int]]
    pair_diagnostics: dict[str, dict[int, tuple[int, ...]]]
    errors: list[str]

    @property
    def genus_check(self) -> bool:
        return (
            self.genus_a is not None
            and self.genus_b is not None
            and self.genus_a == self.formula_genus_a
            and self.genus_b == self.formula_genus_b
        )

    @property
    def valid(self) -> bool:
        """A triangular biembedding of K_n was certified.

        E6 is reported but not required: unequal vertex counts are exactly
        the rung-swapped pairs living on surfaces of different genus.
        """
        return (
            all(self.e_flags[f"E{i}"] for i in range(1, 6))
            and self.triangular_a
            and self.triangular_b
            and self.connected_a
            and self.connected_b
            and self.partition_ok
            and self.genus_check
        )

    @property
    def genera(self) -> tuple[int | None, int | None]:
        return (self.genus_a, self.genus_b)

    def to_dict(self) -> dict[str, Any]:
        def logs(x: tuple[tuple[int, ...], ...] | None) -> list[list[int]] | None:
            return None if x is None else [list(log) for log in x]

        return {
            "n": self.n,
            "vA": self.va,
            "vB": self.vb,
            **{k: self.e_flags[k] for k in ("E1", "E2", "E3", "E4", "E5", "E6")},
            "logs": {"A": logs(self.logs_a), "B": logs(self.logs_b)},
            "labelingA": None if self.labeling_a is None else list(self.labeling_a),
            "labelingB": None if self.labeling_b is None else list(self.labeling_b),
            "alternativeLabelingsA": [list(p) for p in self.alternatives_a],
            "alternativeLabelingsB": [list(p) for p in self.alternatives_b],
            "genusA": self.genus_a,
            "genusB": self.genus_b,
            "formulaGenusA": self.formula_genus_a,
            "formulaGenusB": self.formula_genus_b,
            "genusCheck": self.genus_check,
            "triangularA": self.triangular_a,
            "triangularB": self.triangular_b,
            "connectedA": self.connected_a,
            "connectedB": self.connected_b,
            "partitionOK": self.partition_ok,
            "duplicateEdges": [list(p) for p in self.duplicate_edges],
            "missingEdges": [list(p) for p in self.missing_edges],
            "missingResidues": {
                f"[{k}]": list(v) for k, v in self.pair_diagnostics["missing"].items() if v
            },
            "duplicatedResidues": {
                f"[{k}]": list(v)
                for k, v in self.pair_diagnostics["duplicated"].items()
                if v
            },
            "errors": list(self.errors),
            "valid": self.valid,
        }


def verify_biembedding(cg_a: CurrentGraph, cg_b: CurrentGraph) -> BiembeddingCertificate:
    """Run every check on a pair of current graphs and collect the results.

    Graph A gets its lexicographically least valid labeling; graph B takes
    the first of its valid labelings that makes the residue partition work,
    since simultaneous relabeling of both graphs by a translation of Z_3
    only translates both derived embeddings.
    """
    if cg_a.modulus != cg_b.modulus:
        raise ValueError(
            f"current groups differ: Z_{cg_a.modulus} and Z_{cg_b.modulus}"
        )
    n = cg_a.modulus
    side_a, labs_a = _inspect(cg_a)
    side_b, labs_b = _inspect(cg_b)

    report = None
    circ_a = circ_b = None
    if labs_a:
        circ_a = circuits_with_labeling(cg_a, labs_a[0], labs_a)
    if labs_b:
        circ_b = circuits_with_labeling(cg_b, labs_b[0], labs_b)
        if circ_a is not None:
            for lab in labs_b:
                trial = circuits_with_labeling(cg_b, lab, labs_b)
                r = check_pair(circ_a, trial, n, cg_a.vertex_count, cg_b.vertex_count)
                if report is None or r.e5:
                    report, circ_b = r, trial
                if r.e5:
                    break
    if circ_a is not None:
        _finish(side_a, cg_a, circ_a)
    if circ_b is not None:
        _finish(side_b, cg_b, circ_b)

    duplicates: list[tuple[int, int]] = []
    missing: list[tuple[int, int]] = []
    partition_ok = False
    if side_a.derived is not None and side_b.derived is not None:
        duplicates = sorted(side_a.edges & side_b.edges)
        union = side_a.edges | side_b.edges
        missing = [p for p in combinations(range(n), 2) if p not in union]
        partition_ok = not duplicates and not missing

    e_flags = {
        "E1": side_a.e1 and side_b.e1,
        "E2": side_a.e2 and side_b.e2,
        "E3": side_a.e3 and side_b.e3,
        "E4": side_a.e4 and side_b.e4,
        "E5": bool(report and report.e5),
        "E6": cg_a.vertex_count == cg_b.vertex_count,
    }
    errors = [f"A: {m}" for m in side_a.errors] + [f"B: {m}" for m in side_b.errors]
    da, db = side_a.derived, side_b.derived
    for tag, d, f in (("A", da, side_a.formula_genus), ("B", db, side_b.formula_genus)):
        if d is not None and d.genus is not None and f is not None and d.genus != f:
            errors.append(f"{tag}: traced genus {d.genus} disagrees with formula {f}")
    return BiembeddingCertificate(
        n=n,
        va=cg_a.vertex_count,
        vb=cg_b.vertex_count,
        e_flags=e_flags,
        logs_a=circ_a.logs if circ_a else None,
        logs_b=circ_b.logs if circ_b else None,
        labeling_a=circ_a.labeling if circ_a else None,
        labeling_b=circ_b.labeling if circ_b else None,
        alternatives_a=tuple(labs_a),
        alternatives_b=tuple(labs_b),
        genus_a=da.genus if da else None,
        genus_b=db.genus if db else None,
        formula_genus_a=side_a.formula_genus,
        formula_genus_b=side_b.formula_genus,
        triangular_a=bool(da and da.triangular),
        triangular_b=bool(db and db.triangular),
        connected_a=bool(da and da.connected),
        connected_b=bool(db and db.connected),
        partition_ok=partition_ok,
        duplicate_edges=duplicates,
        missing_edges=missing,
        pair_diagnostics={
            "missing": report.missing if report else {},
            "duplicated": report.duplicated if report else {},
        },
        errors=errors,
    )
