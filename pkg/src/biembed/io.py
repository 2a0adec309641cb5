"""Text formats: current graph files, derived rotation files, certificates.

A current graph file is line oriented, with ``#`` starting a comment::

    group 21
    vertices 10
    edge 0 0 1 3
    ...
    rot 0 0+ 5- 7+

Edge lines give the current of the positive dart (tail to head), in
1..n-1.  There is one ``rot`` line per vertex, in vertex order.
"""

from __future__ import annotations

import json
from collections.abc import Sequence

from .current import CurrentGraph, CurrentGraphError
from .derive import BiembeddingCertificate
from .topology import EmbeddedMultigraph, EmbeddingError, format_dart, parse_dart


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def render_current_graph(cg: CurrentGraph) -> str:
    emb = cg.emb
    lines = [f"group {cg.modulus}", f"vertices {emb.vertex_count}"]
    for e, (a, b) in enumerate(emb.edges):
        lines.append(f"edge {e} {a} {b} {cg.currents[e]}")
    for v, rot in enumerate(emb.rotations):
        lines.append(" ".join([f"rot {v}"] + [format_dart(d) for d in rot]))
    return "\n".join(lines) + "\n"


def _int(token: str, what: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", line) from None


def parse_current_graph(text: str) -> CurrentGraph:
    n = v = None
    edges: dict[int, tuple[int, int, int]] = {}
    rotations: dict[int, list[int]] = {}
    first_line: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        key, args = words[0], words[1:]
        if key == "group":
            if n is not None or len(args) != 1:
                raise ParseError("expected a single 'group <n>' line", lineno)
            n = _int(args[0], "group order", lineno)
            if n < 3 or n % 3:
                raise ParseError(f"group order must be a positive multiple of 3, got {n}", lineno)
        elif key == "vertices":
            if v is not None or len(args) != 1:
                raise ParseError("expected a single 'vertices <v>' line", lineno)
            v = _int(args[0], "vertex count", lineno)
            if v < 1:
                raise ParseError(f"vertex count must be positive, got {v}", lineno)
        elif key == "edge":
            if len(args) != 4:
                raise ParseError("expected 'edge <id> <tail> <head> <current>'", lineno)
            if n is None or v is None:
                raise ParseError("'group' and 'vertices' must come before edges", lineno)
            e, a, b, c = (_int(x, name, lineno) for x, name in zip(args, ("edge id", "tail", "head", "current")))
            if e in edges:
                raise ParseError(f"edge {e} defined twice", lineno)
            if e != len(edges):
                raise ParseError(f"edges must be numbered 0, 1, ... in order; got {e}", lineno)
            for end in (a, b):
                if not 0 <= end < v:
                    raise ParseError(f"vertex {end} out of range 0..{v - 1}", lineno)
            if a == b:
                raise ParseError(f"edge {e} is a loop", lineno)
            if c % n == 0:
                raise ParseError(f"edge {e} carries the zero current", lineno)
            if not 1 <= c <= n - 1:
                raise ParseError(f"current {c} outside 1..{n - 1}", lineno)
            edges[e] = (a, b, c)
            first_line.setdefault("edge", lineno)
        elif key == "rot":
            if v is None:
                raise ParseError("'vertices' must come before rotations", lineno)
            if not args:
                raise ParseError("expected 'rot <vertex> <dart> ...'", lineno)
            w = _int(args[0], "vertex", lineno)
            if w != len(rotations):
                raise ParseError(f"rotations must be listed in vertex order; expected {len(rotations)}, got {w}", lineno)
            darts = []
            for tok in args[1:]:
                try:
                    d = parse_dart(tok)
                except ValueError as exc:
                    raise ParseError(str(exc), lineno) from None
                if d >> 1 not in edges:
                    raise ParseError(f"dart {tok} names an undefined edge", lineno)
                a, b, _ = edges[d >> 1]
                if (b if d & 1 else a) != w:
                    raise ParseError(f"dart {tok} does not leave vertex {w}", lineno)
                darts.append(d)
            rotations[w] = darts
            first_line.setdefault("rot", lineno)
        else:
            raise ParseError(f"unknown keyword {key!r}", lineno)
    if n is None or v is None:
        raise ParseError("missing 'group' or 'vertices' line")
    if len(rotations) != v:
        raise ParseError(f"{v} vertices but {len(rotations)} rotation lines")
    edge_list = [edges[e][:2] for e in range(len(edges))]
    try:
        emb = EmbeddedMultigraph(v, edge_list, [rotations[w] for w in range(v)])
        return CurrentGraph(emb, n, [edges[e][2] for e in range(len(edges))])
    except (EmbeddingError, CurrentGraphError) as exc:
        raise ParseError(str(exc), first_line.get("rot")) from None


def render_rotations(rotations: Sequence[Sequence[int]]) -> str:
    return "".join(f"{i}: {' '.join(map(str, rot))}\n" for i, rot in enumerate(rotations))


def parse_rotations(text: str) -> list[list[int]]:
    rotations = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        head, sep, rest = body.partition(":")
        if not sep:
            raise ParseError("expected '<vertex>: <neighbour> ...'", lineno)
        i = _int(head.strip(), "vertex", lineno)
        if i != len(rotations):
            raise ParseError(f"expected vertex {len(rotations)}, got {i}", lineno)
        rotations.append([_int(tok, "neighbour", lineno) for tok in rest.split()])
    for i, rot in enumerate(rotations):
        for j in rot:
            if not 0 <= j < len(rotations):
                raise ParseError(f"vertex {i} lists neighbour {j} outside 0..{len(rotations) - 1}")
    return rotations


def certificate_json(cert: BiembeddingCertificate, stats: dict | None = None) -> str:
    doc = cert.to_dict()
    if stats is not None:
        doc["stats"] = stats
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
