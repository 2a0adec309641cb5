"""Ladder templates for the Z_{24s+21} family and the rung swap.

A ladder has ``r`` rungs.  Rung ``i`` joins a top vertex ``t_i`` to a bottom
vertex ``b_i``; a simple rung is one edge, a ring-shaped rung is the path
``t_i -> x_i => y_i -> b_i`` where ``x_i`` and ``y_i`` are joined by two
parallel arcs.  The rails run ``t_0 -> t_1 -> ...`` and ``b_0 -> b_1 -> ...``;
a circular ladder closes each rail on itself, a Moebius ladder closes the top
rail onto the bottom one.

Rotations are described relative to the planar drawing of a circular ladder
(top rail left to right, rungs hanging down).  A rung's ``twist`` is a pair
of bits saying whether the rotation at its top and at its bottom attachment
vertex is reversed relative to that drawing.  Inside a ring exactly one
of the two inner vertices is reversed relative to the drawing: ``y`` when
``ring_twist`` is 0, ``x`` when it is 1.  Rings with both inner vertices
agreeing never satisfy the circuit incidence rules, so they are not
enumerated.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field, replace
from types import MappingProxyType

from .current import (
    CurrentGraph,
    LabeledCircuits,
    WrongIndex,
    check_kcl,
    consistent_labelings,
)
from .derive import BiembeddingCertificate, verify_biembedding
from .topology import EmbeddedMultigraph, face_index, trace_faces

SIMPLE = "simple"
RING = "ring"
CIRCULAR = "circular"
MOBIUS = "mobius"

# edge roles
RAIL = "rail"
RUNG = "rung"
VERTICAL = "vertical"
ARC = "arc"


class IncompleteAssignment(ValueError):
    pass


class NotSwappable(ValueError):
    pass


class RepairFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class RungSpec:
    kind: str
    position: int
    meets: tuple[int, int] = (0, 0)
    twist: tuple[int, int] | None = None
    ring_twist: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in (SIMPLE, RING):
            raise ValueError(f"unknown rung kind {self.kind!r}")
        if self.kind == RING and self.meets != (0, 0):
            raise ValueError("ring-shaped rungs have fixed incidences")

    @property
    def extra_vertices(self) -> int:
        return 2 if self.kind == RING else 0

    @property
    def edge_count(self) -> int:
        return 4 if self.kind == RING else 1


@dataclass(frozen=True)
class ArithmeticSection:
    """Consecutive rungs whose vertical currents step by ``step`` in size.

    Rung ``start + i`` carries ``first_current + step*i`` from top to bottom,
    up to a direction.  With ``alternate`` the directions alternate along the
    section and only the overall sign is open; otherwise every rung's
    direction is chosen separately.
    """

    start: int
    count: int
    first_current: int
    step: int = 3
    alternate: bool = True

    def magnitudes(self) -> list[tuple[int, int]]:
        return [(self.start + i, self.first_current + self.step * i) for i in range(self.count)]

    def currents(self, sign: int) -> list[tuple[int, int]]:
        out = []
        for i, (pos, c) in enumerate(self.magnitudes()):
            flip = -1 if (self.alternate and i % 2) else 1
            out.append((pos, sign * flip * c))
        return out

    def direction_patterns(self) -> list[tuple[int, ...]]:
        """Admissible direction vectors, in the order the search tries them."""
        if self.alternate:
            base = tuple(-1 if i % 2 else 1 for i in range(self.count))
            return [base, tuple(-x for x in base)]
        return [tuple(1 - 2 * b for b in bits) for bits in itertools.product((0, 1), repeat=self.count)]


@dataclass(frozen=True)
class EdgeRole:
    role: str
    rung: int  # -1 for rails
    upper: bool = False  # for ring verticals: the one at the top vertex


@dataclass(frozen=True)
class LadderLayout:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    roles: tuple[EdgeRole, ...]
    rung_vertices: tuple[tuple[int, ...], ...]
    rung_edges: tuple[tuple[int, ...], ...]
    rail_edges: tuple[int, ...]


@dataclass(frozen=True)
class LadderSpec:
    kind: str
    rungs: tuple[RungSpec, ...]
    arithmetic_sections: tuple[ArithmeticSection, ...] = ()
    fixed_currents: Mapping[int, int] = field(default_factory=lambda: MappingProxyType({}))

    def __post_init__(self) -> None:
        if self.kind not in (CIRCULAR, MOBIUS):
            raise ValueError(f"unknown ladder kind {self.kind!r}")
        if len(self.rungs) < 2:
            raise ValueError("a ladder needs at least two rungs")
        if [r.position for r in self.rungs] != list(range(len(self.rungs))):
            raise ValueError("rung positions must be 0, 1, ..., r-1 in order")
        object.__setattr__(self, "fixed_currents", MappingProxyType(dict(self.fixed_currents)))

    def __hash__(self) -> int:
        return hash((self.kind, self.rungs, self.arithmetic_sections,
                     tuple(sorted(self.fixed_currents.items()))))

    # mapping proxies do not pickle; worker processes need specs
    def __getstate__(self) -> dict:
        state = dict(self.__dict__)
        state["fixed_currents"] = dict(self.fixed_currents)
        return state

    def __setstate__(self, state: dict) -> None:
        state = dict(state)
        state["fixed_currents"] = MappingProxyType(state["fixed_currents"])
        self.__dict__.update(state)

    @property
    def ring_count(self) -> int:
        return sum(r.kind == RING for r in self.rungs)

    @property
    def vertex_count(self) -> int:
        return 2 * len(self.rungs) + 2 * self.ring_count

    @property
    def edge_count(self) -> int:
        return 3 * self.vertex_count // 2

    @property
    def resolved(self) -> bool:
        return all(
            r.twist is not None and (r.kind == SIMPLE or r.ring_twist is not None)
            for r in self.rungs
        )

    def layout(self) -> LadderLayout:
        return _layout(self)

    @property
    def free_slots(self) -> tuple[int, ...]:
        """Edges whose current is neither fixed nor set by an arithmetic section."""
        lay = self.layout()
        arith = set()
        for sec in self.arithmetic_sections:
            for pos, _ in sec.magnitudes():
                arith.update(vertical_edges(lay, pos))
        return tuple(
            e for e in range(len(lay.edges)) if e not in self.fixed_currents and e not in arith
        )

    def with_twists(
        self, twists: Sequence[tuple[int, int]], ring_twists: Sequence[int | None]
    ) -> LadderSpec:
        rungs = tuple(
            replace(r, twist=t, ring_twist=(rt if r.kind == RING else None))
            for r, t, rt in zip(self.rungs, twists, ring_twists)
        )
        return replace(self, rungs=rungs)

    def embedding(self) -> EmbeddedMultigraph:
        if not self.resolved:
            raise ValueError("rotation patterns are not fixed for every rung")
        return _embedding(self)

    def twist_patterns(self, alternating: bool = False) -> Iterator[LadderSpec]:
        """Resolutions of the per-rung rotation patterns, in a fixed order.

        With ``alternating`` the top and bottom reversal bits flip from each
        rung to the next except for at most one slip, where a rung repeats
        its predecessor's pair.  That leaves 4(r+1) patterns instead of 4^r
        and on the small ladders it keeps every index 3 pattern found by the
        full enumeration.
        """
        rings = [i for i, r in enumerate(self.rungs) if r.kind == RING]
        ends = ((0, 0), (0, 1), (1, 0), (1, 1))
        r = len(self.rungs)
        if alternating:
            choices = []
            for slip in range(r):  # slip 0 means no slip
                for t, b in ends:
                    phase = [(i - (1 if slip and i >= slip else 0)) & 1 for i in range(r)]
                    choices.append(tuple((t ^ f, b ^ f) for f in phase))
        else:
            choices = itertools.product(ends, repeat=r)
        for twists in choices:
            for inner in itertools.product((0, 1), repeat=len(rings)):
                ring_twists: list[int | None] = [None] * len(self.rungs)
                for i, t in zip(rings, inner):
                    ring_twists[i] = t
                yield self.with_twists(twists, ring_twists)


def vertical_edges(lay: LadderLayout, position: int) -> tuple[int, ...]:
    """Edges of a rung that carry its vertical current (top-to-bottom darts)."""
    return tuple(
        e for e in lay.rung_edges[position] if lay.roles[e].role in (RUNG, VERTICAL)
    )


def _layout(spec: LadderSpec) -> LadderLayout:
    r = len(spec.rungs)
    edges: list[tuple[int, int]] = []
    roles: list[EdgeRole] = []
    tops, bottoms, rung_vertices, rung_edges = [], [], [], []
    v = 0
    for rung in spec.rungs:
        verts = [v, v + 1] + ([v + 2, v + 3] if rung.kind == RING else [])
        tops.append(v)
        bottoms.append(v + 1)
        rung_vertices.append(tuple(verts))
        v += len(verts)
    for i, rung in enumerate(spec.rungs):
        ids = []
        if rung.kind == SIMPLE:
            ids.append(len(edges))
            edges.append((tops[i], bottoms[i]))
            roles.append(EdgeRole(RUNG, i))
        else:
            t, b, x, y = rung_vertices[i]
            for pair, role in (
                ((t, x), EdgeRole(VERTICAL, i, upper=True)),
                ((x, y), EdgeRole(ARC, i)),
                ((x, y), EdgeRole(ARC, i)),
                ((y, b), EdgeRole(VERTICAL, i, upper=False)),
            ):
                ids.append(len(edges))
                edges.append(pair)
                roles.append(role)
        rung_edges.append(tuple(ids))
    rails = []
    for i in range(r):
        j = (i + 1) % r
        if spec.kind == MOBIUS and i == r - 1:
            pairs = ((tops[i], bottoms[0]), (bottoms[i], tops[0]))
        else:
            pairs = ((tops[i], tops[j]), (bottoms[i], bottoms[j]))
        for pair in pairs:
            rails.append(len(edges))
            edges.append(pair)
            roles.append(EdgeRole(RAIL, -1))
    return LadderLayout(
        vertex_count=v,
        edges=tuple(edges),
        roles=tuple(roles),
        rung_vertices=tuple(rung_vertices),
        rung_edges=tuple(rung_edges),
        rail_edges=tuple(rails),
    )


def _embedding(spec: LadderSpec) -> EmbeddedMultigraph:
    lay = spec.layout()
    out: list[dict[str, int]] = [dict() for _ in range(lay.vertex_count)]
    # every rail edge leaves its tail as "next" and enters its head as "prev"
    for e in lay.rail_edges:
        a, b = lay.edges[e]
        out[a]["next"] = 2 * e
        out[b]["prev"] = 2 * e + 1
    rotations: list[tuple[int, ...]] = [()] * lay.vertex_count
    for i, rung in enumerate(spec.rungs):
        verts = lay.rung_vertices[i]
        ids = lay.rung_edges[i]
        t, b = verts[0], verts[1]
        if rung.kind == SIMPLE:
            down_t, up_b = 2 * ids[0], 2 * ids[0] + 1
        else:
            down_t, up_b = 2 * ids[0], 2 * ids[3] + 1
        top = (out[t]["next"], out[t]["prev"], down_t)
        bottom = (out[b]["next"], up_b, out[b]["prev"])
        if rung.twist[0]:
            top = top[::-1]
        if rung.twist[1]:
            bottom = bottom[::-1]
        rotations[t], rotations[b] = top, bottom
        if rung.kind == RING:
            x, y = verts[2], verts[3]
            vx, a1, a2, vy = ids
            at_x = (2 * vx + 1, 2 * a1, 2 * a2)
            at_y = (2 * vy, 2 * a1 + 1, 2 * a2 + 1)
            if rung.ring_twist:
                at_x, at_y = at_x[::-1], at_y[::-1]
            rotations[x], rotations[y] = at_x, at_y
    return EmbeddedMultigraph(lay.vertex_count, lay.edges, rotations)


def incidence_labelings(spec: LadderSpec) -> list[tuple[int, int, int]]:
    """Circuit labelings compatible with the ladder's edge roles.

    Rails separate [0] from [1] or [2]; a simple rung sees ``meets`` on its
    two sides; each vertical of a ring sees a single circuit, [1] on one and
    [2] on the other; ring arcs separate [1] from [2].
    """
    emb = spec.embedding()
    faces = trace_faces(emb)
    if len(faces) != 3:
        return []
    owner = face_index(emb)
    lay = spec.layout()
    found = []
    for perm in itertools.permutations(range(3)):
        sides = [
            (perm[owner[2 * e]], perm[owner[2 * e + 1]]) for e in range(len(lay.edges))
        ]
        if _roles_ok(spec, lay, sides):
            found.append(perm)
    return found


def _roles_ok(spec: LadderSpec, lay: LadderLayout, sides: list[tuple[int, int]]) -> bool:
    for e, role in enumerate(lay.roles):
        pair = tuple(sorted(sides[e]))
        if role.role == RAIL and pair not in ((0, 1), (0, 2)):
            return False
        if role.role == ARC and pair != (1, 2):
            return False
        if role.role == RUNG and pair != tuple(sorted(spec.rungs[role.rung].meets)):
            return False
        if role.role == VERTICAL and (pair[0] != pair[1] or pair[0] == 0):
            return False
    for i, rung in enumerate(spec.rungs):
        if rung.kind == RING:
            ids = lay.rung_edges[i]
            if sides[ids[0]][0] == sides[ids[3]][0]:
                return False
    return True


def edge_type_counts(spec: LadderSpec, labeling: Sequence[int]) -> dict[tuple[int, int], int]:
    emb = spec.embedding()
    owner = face_index(emb)
    counts: dict[tuple[int, int], int] = {}
    for e in range(emb.edge_count):
        key = tuple(sorted((labeling[owner[2 * e]], labeling[owner[2 * e + 1]])))
        counts[key] = counts.get(key, 0) + 1
    return counts


def counts_compatible(
    n: int, counts_a: Mapping[tuple[int, int], int], counts_b: Mapping[tuple[int, int], int]
) -> bool:
    """Necessary condition for E5 from counting darts per label and residue class."""
    pairs_of_multiples = (n // 3 - 1) // 2
    others = 2 * n // 3
    for k in range(3):
        same = counts_a.get((k, k), 0) + counts_b.get((k, k), 0)
        mixed = sum(
            c.get(tuple(sorted((k, j))), 0) for c in (counts_a, counts_b) for j in range(3) if j != k
        )
        if same != pairs_of_multiples or mixed != others:
            return False
    return True


@dataclass(frozen=True)
class FamilyPair:
    s: int
    spec_a: LadderSpec
    spec_b: LadderSpec
    labeling_a: tuple[int, int, int] | None = None
    labeling_b: tuple[int, int, int] | None = None

    @property
    def modulus(self) -> int:
        return 24 * self.s + 21


def ladder_a(s: int, kind: str = CIRCULAR) -> LadderSpec:
    count = 4 * s + 3
    rungs = tuple(RungSpec(RING if i % 2 == 0 else SIMPLE, i) for i in range(count))
    # an odd number of rungs with alternating directions would break flow
    # conservation across the circular ladder, so directions are left open
    return LadderSpec(kind, rungs, (ArithmeticSection(0, count, 3, alternate=False),))


def ladder_b(s: int, kind: str = MOBIUS, placement: int | None = None) -> LadderSpec:
    """Second ladder: alternating simple/ring rungs plus one rung meeting [1] and [2].

    ``placement`` is where that extra rung sits (default: last).
    """
    count = 4 * s + 3
    placement = count if placement is None else placement
    if not 0 <= placement <= count:
        raise ValueError(f"placement must lie in 0..{count}")
    kinds = [SIMPLE if i % 2 == 0 else RING for i in range(count)]
    rungs = []
    for i in range(count + 1):
        if i < placement:
            rungs.append(RungSpec(kinds[i], i))
        elif i == placement:
            rungs.append(RungSpec(SIMPLE, i, meets=(1, 2)))
        else:
            rungs.append(RungSpec(kinds[i - 1], i))
    sections = []
    if placement > 0:
        sections.append(ArithmeticSection(0, placement, 3))
    if placement < count:
        sections.append(ArithmeticSection(placement + 1, count - placement, 3 * (placement + 1)))
    return LadderSpec(kind, tuple(rungs), tuple(sections))


def build_family(s: int) -> FamilyPair:
    """Structural templates for K_{24s+21}.

    Graph A has 4s+3 rungs, ring-shaped at even positions, so 2s+2 rings.
    Graph B has 2s+2 simple and 2s+1 ring rungs in the complementary
    pattern plus one extra rung between circuits [1] and [2].  Both have
    12s+10 vertices.  Rung currents are multiples of 3 stepping by 3, so each
    multiple of 3 is a simple rung in one graph and a ring in the other.
    """
    if s < 0:
        raise ValueError(f"family parameter must be nonnegative, got {s}")
    return FamilyPair(s, ladder_a(s), ladder_b(s))


def materialize(
    spec: LadderSpec, assignment: Mapping[int, int], modulus: int
) -> CurrentGraph:
    """Build the current graph of a resolved template.

    ``assignment`` maps edge ids to positive-dart currents; together with
    ``spec.fixed_currents`` it must cover every edge.
    """
    emb = spec.embedding()
    currents = []
    for e in range(emb.edge_count):
        if e in assignment:
            c = assignment[e]
        elif e in spec.fixed_currents:
            c = spec.fixed_currents[e]
        else:
            raise IncompleteAssignment(f"no current for edge {e}")
        currents.append(c)
    return CurrentGraph(emb, modulus, currents)


# --- rung swap -------------------------------------------------------------


@dataclass(frozen=True)
class Ring:
    top: int
    bottom: int
    x: int
    y: int
    down: int  # dart top -> x
    arcs: tuple[int, int]  # darts x -> y
    out: int  # dart y -> bottom
    current: int  # current carried top -> bottom

    @property
    def edges(self) -> tuple[int, ...]:
        return (self.down >> 1, self.arcs[0] >> 1, self.arcs[1] >> 1, self.out >> 1)


def find_rings(cg: CurrentGraph) -> list[Ring]:
    """Ring-shaped rungs: two cubic vertices joined by exactly two parallel edges."""
    emb = cg.emb
    by_pair: dict[tuple[int, int], list[int]] = {}
    for e, (a, b) in enumerate(emb.edges):
        by_pair.setdefault((min(a, b), max(a, b)), []).append(e)
    rings = []
    for (p, q), es in sorted(by_pair.items()):
        if len(es) != 2 or emb.degree(p) != 3 or emb.degree(q) != 3:
            continue
        for x, y in ((p, q), (q, p)):
            (up,) = [d for d in emb.rotations[x] if d >> 1 not in es]
            (out,) = [d for d in emb.rotations[y] if d >> 1 not in es]
            down = up ^ 1
            if cg.current(down) != cg.current(out):
                continue
            arcs = tuple(2 * e if emb.edges[e][0] == x else 2 * e + 1 for e in es)
            top, bottom = emb.tail(down), emb.head(out)
            if top != bottom:
                rings.append(Ring(top, bottom, x, y, down, arcs, out, cg.current(down)))
            break
    return rings


def find_simple_rungs(cg: CurrentGraph) -> dict[int, int]:
    """Residue -> dart for edges with a multiple of 3 seen by one face on both sides."""
    owner = face_index(cg.emb)
    ring_edges = {e for ring in find_rings(cg) for e in ring.edges}
    found = {}
    for e, c in enumerate(cg.currents):
        if e not in ring_edges and c % 3 == 0 and owner[2 * e] == owner[2 * e + 1]:
            found[c] = 2 * e
            found[cg.modulus - c] = 2 * e + 1
    return found


def find_swappable(cg_a: CurrentGraph, cg_b: CurrentGraph) -> list[tuple[int, str]]:
    """Rung currents that are a ring in one graph and a simple rung in the other.

    Returns ``(c, side)`` with ``0 < c < n/2`` and ``side`` naming the graph
    that holds the ring, sorted by ``c``.
    """
    out = set()
    for side, ring_g, simple_g in (("A", cg_a, cg_b), ("B", cg_b, cg_a)):
        simple = find_simple_rungs(simple_g)
        for ring in find_rings(ring_g):
            if ring.current in simple:
                c = ring.current
                out.add((min(c, ring_g.modulus - c), side))
    return sorted(out)


class _Editable:
    """Mutable copy of a current graph used while cutting and pasting rungs."""

    def __init__(self, cg: CurrentGraph) -> None:
        emb = cg.emb
        self.modulus = cg.modulus
        self.vertices = list(range(emb.vertex_count))
        self.edges = {e: (a, b, cg.currents[e]) for e, (a, b) in enumerate(emb.edges)}
        self.rotations = {v: list(emb.rotations[v]) for v in range(emb.vertex_count)}
        self.next_vertex = emb.vertex_count
        self.next_edge = emb.edge_count

    def add_edge(self, a: int, b: int, current: int) -> int:
        e = self.next_edge
        self.next_edge += 1
        self.edges[e] = (a, b, current)
        return e

    def add_vertex(self) -> int:
        v = self.next_vertex
        self.next_vertex += 1
        self.vertices.append(v)
        return v

    def substitute(self, v: int, old: int, new: int) -> None:
        rot = self.rotations[v]
        rot[rot.index(old)] = new

    def compact(self) -> tuple[int, list, list, list, dict[int, int]]:
        vmap = {v: i for i, v in enumerate(self.vertices)}
        emap = {e: i for i, e in enumerate(sorted(self.edges))}
        edges = [(vmap[self.edges[e][0]], vmap[self.edges[e][1]]) for e in sorted(self.edges)]
        currents = [self.edges[e][2] for e in sorted(self.edges)]
        rotations = [
            [2 * emap[d >> 1] + (d & 1) for d in self.rotations[v]] for v in self.vertices
        ]
        return len(self.vertices), edges, currents, rotations, vmap


def _cut_ring(g: _Editable, ring: Ring) -> list[int]:
    for e in ring.edges:
        del g.edges[e]
    for v in (ring.x, ring.y):
        g.vertices.remove(v)
        del g.rotations[v]
    e = g.add_edge(ring.top, ring.bottom, ring.current)
    g.substitute(ring.top, ring.down, 2 * e)
    g.substitute(ring.bottom, ring.out ^ 1, 2 * e + 1)
    return [ring.top, ring.bottom]


def _paste_ring(g: _Editable, rung_dart: int, ring: Ring, donor: CurrentGraph) -> list[int]:
    """Replace the simple rung ``rung_dart`` by a copy of ``ring`` taken from ``donor``."""
    e_old = rung_dart >> 1
    a, b, _ = g.edges[e_old]
    top, bottom = (b, a) if rung_dart & 1 else (a, b)
    del g.edges[e_old]
    x, y = g.add_vertex(), g.add_vertex()
    down = g.add_edge(top, x, ring.current)
    arc1 = g.add_edge(x, y, donor.current(ring.arcs[0]))
    arc2 = g.add_edge(x, y, donor.current(ring.arcs[1]))
    out = g.add_edge(y, bottom, ring.current)
    g.substitute(top, rung_dart, 2 * down)
    g.substitute(bottom, rung_dart ^ 1, 2 * out + 1)
    dmap = {
        ring.down ^ 1: 2 * down + 1,
        ring.arcs[0]: 2 * arc1,
        ring.arcs[1]: 2 * arc2,
        ring.arcs[0] ^ 1: 2 * arc1 + 1,
        ring.arcs[1] ^ 1: 2 * arc2 + 1,
        ring.out: 2 * out,
    }
    g.rotations[x] = [dmap[d] for d in donor.emb.rotations[ring.x]]
    g.rotations[y] = [dmap[d] for d in donor.emb.rotations[ring.y]]
    return [top, bottom, x, y]


def _variants(g: _Editable, affected: Sequence[int], repair: bool) -> Iterator[CurrentGraph]:
    """Graphs obtained by reversing rotations at subsets of ``affected``, identity first."""
    nv, edges, currents, rotations, vmap = g.compact()
    idx = [vmap[v] for v in affected]
    for mask in range(1 << len(idx) if repair else 1):
        rot = [list(r) for r in rotations]
        for i, v in enumerate(idx):
            if mask >> i & 1:
                rot[v].reverse()
        cg = CurrentGraph(EmbeddedMultigraph(nv, edges, rot), g.modulus, currents)
        try:
            if check_kcl(cg) and consistent_labelings(cg):
                yield cg
        except WrongIndex:
            continue


def swap_rungs(
    cg_a: CurrentGraph,
    cg_b: CurrentGraph,
    rung_currents: Sequence[int],
    direction_repair: bool = True,
) -> tuple[CurrentGraph, CurrentGraph, BiembeddingCertificate]:
    """Move the rings carrying ``rung_currents`` from A into B.

    Each current must sit on a ring-shaped rung of A and a simple rung of B.
    A's ring becomes a simple rung with the same current; B's simple rung is
    replaced by a copy of the ring, arc currents included, so every residue
    stays in the log of the same circuit label.  Keeping both graphs at
    index 3 may require reversing rotations at the touched vertices; with
    ``direction_repair`` every combination of reversals is tried (identity
    first) and the first pair whose certificate is valid is returned.
    """
    if not rung_currents:
        return cg_a, cg_b, verify_biembedding(cg_a, cg_b)
    n = cg_a.modulus
    rings = {r.current: r for r in find_rings(cg_a)}
    simple_b = find_simple_rungs(cg_b)
    chosen: list[tuple[Ring, int]] = []
    for c in rung_currents:
        matches = [cur for cur in rings if cur in (c % n, (-c) % n)]
        if not matches:
            raise NotSwappable(f"graph A has no ring-shaped rung carrying {c}")
        ring = rings[matches[0]]
        if ring.current not in simple_b:
            raise NotSwappable(f"graph B has no simple rung carrying {c}")
        if any(r is ring for r, _ in chosen):
            raise NotSwappable(f"rung {c} named twice")
        chosen.append((ring, simple_b[ring.current]))

    ga, gb = _Editable(cg_a), _Editable(cg_b)
    touched_a: list[int] = []
    touched_b: list[int] = []
    for ring, rung_dart in chosen:
        touched_a += _cut_ring(ga, ring)
        touched_b += _paste_ring(gb, rung_dart, ring, cg_a)

    options_b = list(_variants(gb, touched_b, direction_repair))
    for new_a in _variants(ga, touched_a, direction_repair):
        for new_b in options_b:
            cert = verify_biembedding(new_a, new_b)
            if cert.valid:
                return new_a, new_b, cert
    raise RepairFailed(
        "no choice of rotations at the swapped rungs keeps both graphs valid"
    )


def swap_k(
    cg_a: CurrentGraph, cg_b: CurrentGraph, k: int, direction_repair: bool = True
) -> tuple[CurrentGraph, CurrentGraph, BiembeddingCertificate]:
    """Apply k two-rung swaps moving rings from A to B.

    At most s + 1 swaps are possible for Z_{24s+21}: graph A starts with
    2s + 2 ring-shaped rungs and each swap consumes two.  Candidate rung
    pairs are tried in increasing order of current.
    """
    n = cg_a.modulus
    if k < 0:
        raise NotSwappable("the number of swaps must be nonnegative")
    if (n - 21) % 24 == 0 and n >= 21:
        limit = (n - 21) // 24 + 1
        if k > limit:
            raise NotSwappable(f"at most {limit} swap pairs exist for Z_{n}, asked for {k}")
    if k == 0:
        return cg_a, cg_b, verify_biembedding(cg_a, cg_b)
    available = [c for c, side in find_swappable(cg_a, cg_b) if side == "A"]
    if len(available) < 2:
        raise NotSwappable("graph A has fewer than two swappable ring-shaped rungs")
    last_error: Exception | None = None
    for pair in itertools.combinations(available, 2):
        try:
            new_a, new_b, cert = swap_rungs(cg_a, cg_b, pair, direction_repair)
        except RepairFailed as exc:
            last_error = exc
            continue
        if k == 1:
            return new_a, new_b, cert
        try:
            return swap_k(new_a, new_b, k - 1, direction_repair)
        except (RepairFailed, NotSwappable) as exc:
            last_error = exc
            continue
    if isinstance(last_error, NotSwappable):
        raise last_error
    raise RepairFailed(str(last_error) if last_error else "no swap pair could be repaired")
