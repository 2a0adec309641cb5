"""Embedded multigraphs described by rotation systems.

Darts are plain integers: edge ``e`` owns the darts ``2*e`` (``e+``, from tail
to head) and ``2*e + 1`` (``e-``, from head to tail), so ``d ^ 1`` reverses a
dart and ``d >> 1`` recovers its edge.  Ordering darts as integers therefore
orders them by edge id first, with ``e+`` before ``e-``.

Faces are traced with the successor convention: the dart following ``d`` on a
face boundary is the rotation successor of ``reverse(d)`` at ``head(d)``.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from typing import NamedTuple

FaceWalk = tuple[int, ...]


class EmbeddingError(ValueError):
    """Raised when a rotation system does not describe a valid embedding."""


class DisconnectedGraph(ValueError):
    """Raised when genus is requested for a disconnected embedding."""


class Dart(NamedTuple):
    edge: int
    sign: str  # "+" or "-"

    def __int__(self) -> int:
        return dart(self.edge, self.sign)

    def __str__(self) -> str:
        return f"{self.edge}{self.sign}"


def dart(edge: int, sign: str = "+") -> int:
    if sign not in ("+", "-"):
        raise ValueError(f"dart sign must be '+' or '-', got {sign!r}")
    return 2 * edge + (sign == "-")


def reverse(d: int) -> int:
    return d ^ 1


def dart_edge(d: int) -> int:
    return d >> 1


def is_positive(d: int) -> bool:
    return not d & 1


def as_dart(d: int) -> Dart:
    return Dart(d >> 1, "-" if d & 1 else "+")


def format_dart(d: int) -> str:
    return f"{d >> 1}{'-' if d & 1 else '+'}"


def parse_dart(text: str) -> int:
    text = text.strip()
    if len(text) < 2 or text[-1] not in "+-" or not text[:-1].isdigit():
        raise ValueError(f"malformed dart {text!r}; expected '<edge>+' or '<edge>-'")
    return dart(int(text[:-1]), text[-1])


class EmbeddedMultigraph:
    """A loopless multigraph together with a rotation system.

    ``edges[e] = (tail, head)`` and ``rotations[v]`` lists the darts leaving
    ``v`` in cyclic order.  Instances are immutable after construction.
    """

    __slots__ = ("vertex_count", "edges", "rotations", "_succ", "_faces")

    def __init__(
        self,
        vertex_count: int,
        edges: Iterable[tuple[int, int]],
        rotations: Iterable[Iterable[int]],
    ) -> None:
        if vertex_count < 1:
            raise EmbeddingError("an embedded graph needs at least one vertex")
        edges = tuple((int(a), int(b)) for a, b in edges)
        rotations = tuple(tuple(int(d) for d in rot) for rot in rotations)
        if len(rotations) != vertex_count:
            raise EmbeddingError(
                f"expected {vertex_count} rotations, got {len(rotations)}"
            )
        for e, (a, b) in enumerate(edges):
            if not (0 <= a < vertex_count and 0 <= b < vertex_count):
                raise EmbeddingError(f"edge {e} has an endpoint out of range")
            if a == b:
                raise EmbeddingError(f"edge {e} is a self-loop at vertex {a}")

        ndarts = 2 * len(edges)
        succ = [-1] * ndarts
        for v, rot in enumerate(rotations):
            for i, d in enumerate(rot):
                if not 0 <= d < ndarts:
                    raise EmbeddingError(f"rotation at {v} names unknown dart {d}")
                if succ[d] != -1:
                    raise EmbeddingError(f"dart {format_dart(d)} appears twice")
                a, b = edges[d >> 1]
                tail = b if d & 1 else a
                if tail != v:
                    raise EmbeddingError(
                        f"dart {format_dart(d)} leaves vertex {tail}, not {v}"
                    )
                succ[d] = rot[(i + 1) % len(rot)]
        missing = [format_dart(d) for d in range(ndarts) if succ[d] == -1]
        if missing:
            raise EmbeddingError(f"darts missing from rotations: {', '.join(missing)}")

        self.vertex_count = vertex_count
        self.edges = edges
        self.rotations = rotations
        self._succ = tuple(succ)
        self._faces: tuple[FaceWalk, ...] | None = None

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def dart_count(self) -> int:
        return 2 * len(self.edges)

    def tail(self, d: int) -> int:
        a, b = self.edges[d >> 1]
        return b if d & 1 else a

    def head(self, d: int) -> int:
        a, b = self.edges[d >> 1]
        return a if d & 1 else b

    def successor(self, d: int) -> int:
        """Rotation successor of ``d`` at its tail."""
        return self._succ[d]

    def degree(self, v: int) -> int:
        return len(self.rotations[v])

    def face_successor(self, d: int) -> int:
        return self._succ[d ^ 1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddedMultigraph):
            return NotImplemented
        return (
            self.vertex_count == other.vertex_count
            and self.edges == other.edges
            and self.rotations == other.rotations
        )

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.edges, self.rotations))

    def __repr__(self) -> str:
        return (
            f"EmbeddedMultigraph(V={self.vertex_count}, E={self.edge_count}, "
            f"F={len(trace_faces(self))})"
        )


def trace_faces(emb: EmbeddedMultigraph) -> tuple[FaceWalk, ...]:
    """Face boundary walks of ``emb`` in canonical order.

    Each walk starts at its smallest dart and the walks are sorted by that
    dart, which falls out of scanning darts in increasing order.
    """
    if emb._faces is not None:
        return emb._faces
    succ = emb._succ
    seen = bytearray(emb.dart_count)
    faces = []
    for start in range(emb.dart_count):
        if seen[start]:
            continue
        walk = []
        d = start
        while not seen[d]:
            seen[d] = 1
            walk.append(d)
            d = succ[d ^ 1]
        if d != start:
            raise EmbeddingError("face tracing did not close up")  # unreachable for permutations
        faces.append(tuple(walk))
    emb._faces = tuple(faces)
    return emb._faces


def face_index(emb: EmbeddedMultigraph) -> list[int]:
    """Map every dart to the index of the face walk that contains it."""
    owner = [0] * emb.dart_count
    for i, walk in enumerate(trace_faces(emb)):
        for d in walk:
            owner[d] = i
    return owner


def components(vertex_count: int, edges: Sequence[tuple[int, int]]) -> list[int]:
    """Component id of every vertex (union-find with path halving)."""
    parent = list(range(vertex_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return [find(v) for v in range(vertex_count)]


def is_connected(emb: EmbeddedMultigraph) -> bool:
    return len(set(components(emb.vertex_count, emb.edges))) == 1


def euler_genus(emb: EmbeddedMultigraph) -> int:
    """Genus of the orientable surface carrying ``emb``.

    Uses V - E + F = 2 - 2g; a lone vertex counts as one face on the sphere.
    """
    if not is_connected(emb):
        raise DisconnectedGraph("genus is only defined for connected embeddings")
    faces = len(trace_faces(emb)) if emb.edge_count else 1
    twice_g = 2 - emb.vertex_count + emb.edge_count - faces
    if twice_g < 0 or twice_g % 2:
        raise EmbeddingError(f"Euler characteristic gives 2g = {twice_g}")
    return twice_g // 2


def is_triangular(emb: EmbeddedMultigraph) -> bool:
    faces = trace_faces(emb)
    return bool(faces) and all(len(f) == 3 for f in faces)


def canonical_code(emb: EmbeddedMultigraph, colors: Sequence | None = None) -> tuple:
    """Invariant of ``emb`` under orientation-preserving isomorphism.

    From every starting dart the darts are renumbered in breadth-first order
    along rotation successors and reversals; the smallest resulting table
    wins.  Two connected embeddings (with dart colours) get equal codes
    exactly when an isomorphism maps one onto the other.
    """
    if colors is None:
        colors = [0] * emb.dart_count
    succ = emb._succ
    best = None
    for start in range(emb.dart_count):
        order = {start: 0}
        queue = [start]
        rows = []
        smaller = best is None
        for d in queue:
            row = [colors[d]]
            for nxt in (succ[d], d ^ 1):
                if nxt not in order:
                    order[nxt] = len(queue)
                    queue.append(nxt)
                row.append(order[nxt])
            row = tuple(row)
            if not smaller:
                if len(rows) == len(best) or row > best[len(rows)]:
                    break
                smaller = row < best[len(rows)]
            rows.append(row)
        else:
            if smaller or len(rows) < len(best):
                best = tuple(rows)
    return best
