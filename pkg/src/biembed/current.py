"""Index 3 current graphs over the cyclic group Z_n.

Currents are stored once per edge, as the value carried by the positive dart;
the negative dart carries the group inverse.
"""

from __future__ import annotations

import itertools
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .topology import EmbeddedMultigraph, FaceWalk, face_index, trace_faces


class CurrentGraphError(ValueError):
    """Malformed current graph (bad modulus, zero or missing current)."""


class ZeroCurrent(CurrentGraphError):
    pass


class WrongIndex(ValueError):
    """The embedding does not have exactly three faces."""


class NoConsistentLabeling(ValueError):
    """No assignment of labels [0], [1], [2] to the circuits satisfies the mod 3 rule."""


class CurrentGraph:
    __slots__ = ("emb", "modulus", "currents")

    def __init__(self, emb: EmbeddedMultigraph, modulus: int, currents: Iterable[int]) -> None:
        if modulus < 3 or modulus % 3:
            raise CurrentGraphError(f"modulus must be a positive multiple of 3, got {modulus}")
        currents = tuple(int(c) % modulus for c in currents)
        if len(currents) != emb.edge_count:
            raise CurrentGraphError(
                f"{emb.edge_count} edges but {len(currents)} currents"
            )
        for e, c in enumerate(currents):
            if c == 0:
                raise ZeroCurrent(f"edge {e} carries the zero current")
        self.emb = emb
        self.modulus = modulus
        self.currents = currents

    def current(self, d: int) -> int:
        c = self.currents[d >> 1]
        return (self.modulus - c) if d & 1 else c

    @property
    def vertex_count(self) -> int:
        return self.emb.vertex_count

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CurrentGraph):
            return NotImplemented
        return (
            self.modulus == other.modulus
            and self.currents == other.currents
            and self.emb == other.emb
        )

    def __hash__(self) -> int:
        return hash((self.modulus, self.currents, self.emb))

    def __repr__(self) -> str:
        return f"CurrentGraph(Z_{self.modulus}, V={self.emb.vertex_count}, E={self.emb.edge_count})"


@dataclass(frozen=True)
class LabeledCircuits:
    """The three face walks of a current graph, indexed by circuit label.

    ``labeling[i]`` is the label given to the i-th traced face; ``alternatives``
    lists every labeling that satisfies the mod 3 incidence rule, in
    lexicographic order.
    """

    modulus: int
    circuits: tuple[FaceWalk, FaceWalk, FaceWalk]
    logs: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    labeling: tuple[int, int, int]
    alternatives: tuple[tuple[int, int, int], ...] = field(default=())

    def dart_labels(self, dart_count: int) -> list[int]:
        labels = [0] * dart_count
        for k, walk in enumerate(self.circuits):
            for d in walk:
                labels[d] = k
        return labels


def check_kcl(cg: CurrentGraph) -> bool:
    """Every vertex has degree 3 and its outgoing currents sum to zero."""
    n = cg.modulus
    for rot in cg.emb.rotations:
        if len(rot) != 3:
            return False
        if sum(cg.current(d) for d in rot) % n:
            return False
    return True


def consistent_labelings(cg: CurrentGraph) -> list[tuple[int, int, int]]:
    faces = trace_faces(cg.emb)
    if len(faces) != 3:
        raise WrongIndex(f"current graph has index {len(faces)}, not 3")
    owner = face_index(cg.emb)
    found = []
    for perm in itertools.permutations(range(3)):
        if all(
            (c - (perm[owner[2 * e + 1]] - perm[owner[2 * e]])) % 3 == 0
            for e, c in enumerate(cg.currents)
        ):
            found.append(perm)
    return found


def circuits_with_labeling(
    cg: CurrentGraph,
    labeling: Sequence[int],
    alternatives: Sequence[tuple[int, int, int]] = (),
) -> LabeledCircuits:
    faces = trace_faces(cg.emb)
    if len(faces) != 3:
        raise WrongIndex(f"current graph has index {len(faces)}, not 3")
    by_label: list[FaceWalk] = [(), (), ()]
    for i, walk in enumerate(faces):
        by_label[labeling[i]] = walk
    logs = tuple(tuple(cg.current(d) for d in walk) for walk in by_label)
    return LabeledCircuits(
        modulus=cg.modulus,
        circuits=tuple(by_label),
        logs=logs,
        labeling=tuple(labeling),
        alternatives=tuple(alternatives),
    )


def label_circuits(cg: CurrentGraph) -> LabeledCircuits:
    """Label the three circuits so that a current on e+ is b - a mod 3.

    Here [a] traverses e+ and [b] traverses e-.  All six permutations are
    tried; the lexicographically least valid one is used.
    """
    valid = consistent_labelings(cg)
    if not valid:
        raise NoConsistentLabeling("no circuit labeling satisfies the mod 3 incidence rule")
    return circuits_with_labeling(cg, valid[0], valid)


def log_of(circuits: LabeledCircuits, label: int) -> tuple[int, ...]:
    if label not in (0, 1, 2):
        raise ValueError(f"circuit label must be 0, 1 or 2, got {label}")
    return circuits.logs[label]


def check_simplicity(circuits: LabeledCircuits, n: int | None = None) -> bool:
    """No residue repeats within any single log (and none is zero)."""
    n = circuits.modulus if n is None else n
    for log in circuits.logs:
        reduced = [c % n for c in log]
        if 0 in reduced or len(set(reduced)) != len(reduced):
            return False
    return True


@dataclass(frozen=True)
class PairReport:
    e5: bool
    e6: bool
    missing: dict[int, tuple[int, ...]]
    duplicated: dict[int, tuple[int, ...]]

    def summary(self) -> str:
        lines = []
        for k in range(3):
            if self.missing.get(k) or self.duplicated.get(k):
                lines.append(
                    f"label [{k}]: missing {list(self.missing.get(k, ()))}, "
                    f"duplicated {list(self.duplicated.get(k, ()))}"
                )
        return "\n".join(lines)


def check_pair(
    a: LabeledCircuits, b: LabeledCircuits, n: int, va: int, vb: int
) -> PairReport:
    """Each nonzero residue shows up exactly once per label across the pair."""
    missing: dict[int, tuple[int, ...]] = {}
    duplicated: dict[int, tuple[int, ...]] = {}
    for k in range(3):
        counts = Counter(c % n for c in a.logs[k] + b.logs[k])
        missing[k] = tuple(r for r in range(1, n) if counts[r] == 0)
        duplicated[k] = tuple(sorted(r for r, m in counts.items() if m > 1 or r == 0))
    e5 = not any(missing.values()) and not any(duplicated.values())
    return PairReport(e5=e5, e6=(va == vb), missing=missing, duplicated=duplicated)
