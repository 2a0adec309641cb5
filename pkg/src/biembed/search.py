"""Backtracking completion of current assignments on ladder templates.

The solver works on both graphs of a pair at once.  Every edge is a
variable holding the current of its positive dart.  Besides Kirchhoff's law
at each vertex, the two graphs share one pool of residues per circuit label:
a residue leaves pool [k] when a dart of a circuit labeled [k] takes it, so
each label's residues are used exactly once across the pair.

A found pair is only reported after :func:`biembed.derive.verify_biembedding`
(which shares no code with the solver) certifies it.
"""

from __future__ import annotations

import itertools
import logging
import time
from collections.abc import Iterator, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .current import CurrentGraph
from .derive import BiembeddingCertificate, verify_biembedding
from .family import (
    CIRCULAR,
    MOBIUS,
    FamilyPair,
    LadderSpec,
    counts_compatible,
    edge_type_counts,
    incidence_labelings,
    ladder_a,
    ladder_b,
    materialize,
    vertical_edges,
)
from .topology import canonical_code, face_index

log = logging.getLogger(__name__)

FOUND = "found"
EXHAUSTED = "exhausted"
TIMEOUT = "timeout"

DEFAULT_MAX_NODES = 10**8
DEFAULT_MAX_SECONDS = 600.0


@dataclass(frozen=True)
class SearchProblem:
    """A resolved template pair plus optional pre-assigned currents.

    ``preassigned`` maps ``(graph, edge)`` with graph 0 for A and 1 for B to
    the current of the edge's positive dart.
    """

    pair: FamilyPair
    modulus: int
    use_arithmetic: bool = True
    preassigned: Mapping[tuple[int, int], int] = field(default_factory=dict)

    @property
    def specs(self) -> tuple[LadderSpec, LadderSpec]:
        return (self.pair.spec_a, self.pair.spec_b)

    @property
    def labelings(self) -> tuple[tuple[int, int, int], tuple[int, int, int]]:
        if self.pair.labeling_a is None or self.pair.labeling_b is None:
            raise ValueError("search problems need both circuit labelings fixed")
        return (self.pair.labeling_a, self.pair.labeling_b)


@dataclass
class SearchResult:
    status: str
    pair: tuple[CurrentGraph, CurrentGraph] | None = None
    certificate: BiembeddingCertificate | None = None
    solutions: list[tuple[CurrentGraph, CurrentGraph]] = field(default_factory=list)
    nodes: int = 0
    seconds: float = 0.0
    rejected: int = 0
    variant: int | None = None
    template: FamilyPair | None = None

    @property
    def found(self) -> bool:
        return self.status == FOUND


class _Budget(Exception):
    pass


class _Done(Exception):
    pass


class _Solver:
    def __init__(self, problem: SearchProblem, check_invariants: bool = False) -> None:
        n = problem.modulus
        self.n = n
        self.problem = problem
        self.check_invariants = check_invariants
        self.embs = [spec.embedding() for spec in problem.specs]

        # flattened variables: one per edge of A, then one per edge of B
        self.var_of: list[dict[int, int]] = [{}, {}]
        self.side = []  # (label of e+, label of e-)
        self.smask = []  # residues allowed for the positive dart
        self.nmask = []  # their negatives
        self.ends = []  # (tail vertex, head vertex), global ids
        vertex_darts: list[list[tuple[int, int]]] = []
        class_mask = [sum(1 << c for c in range(1, n) if c % 3 == k) for k in range(3)]
        offset = 0
        for g, (emb, labeling) in enumerate(zip(self.embs, problem.labelings)):
            owner = face_index(emb)
            for _ in range(emb.vertex_count):
                vertex_darts.append([])
            for e, (a, b) in enumerate(emb.edges):
                la, lb = labeling[owner[2 * e]], labeling[owner[2 * e + 1]]
                mask = class_mask[(lb - la) % 3]
                if la == lb and n % 2 == 0:
                    mask &= ~(1 << (n // 2))
                var = len(self.side)
                self.var_of[g][e] = var
                self.side.append((la, lb))
                self.smask.append(mask)
                self.nmask.append(self._negate(mask))
                self.ends.append((a + offset, b + offset))
                vertex_darts[a + offset].append((var, 1))
                vertex_darts[b + offset].append((var, -1))
            offset += emb.vertex_count
        self.vertex_darts = vertex_darts
        self.nvars = len(self.side)
        self.cur = [0] * self.nvars
        full = (1 << n) - 2
        self.pool = [full, full, full]
        self.negpool = [full, full, full]
        self.trail: list[int] = []
        self.nodes = 0

        # arithmetic sections: (variables, candidate value tuples)
        self.units: list[tuple[list[int], list[tuple[int, ...]]]] = []
        if problem.use_arithmetic:
            for g, spec in enumerate(problem.specs):
                lay = spec.layout()
                for sec in spec.arithmetic_sections:
                    variables, sizes = [], []
                    for pos, c in sec.magnitudes():
                        for e in vertical_edges(lay, pos):
                            variables.append(self.var_of[g][e])
                            sizes.append((pos, c))
                    options = []
                    for dirs in sec.direction_patterns():
                        sign = dict(zip(range(sec.start, sec.start + sec.count), dirs))
                        options.append(tuple((sign[pos] * c) % n for pos, c in sizes))
                    self.units.append((variables, options))
        self.fixed: list[tuple[int, int]] = []
        for g, spec in enumerate(problem.specs):
            for e, c in spec.fixed_currents.items():
                self.fixed.append((self.var_of[g][e], c % n))
        for (g, e), c in sorted(problem.preassigned.items()):
            self.fixed.append((self.var_of[g][e], c % n))

    def _negate(self, mask: int) -> int:
        n = self.n
        return sum(1 << (n - c) for c in range(1, n) if mask >> c & 1)

    # -- state changes -----------------------------------------------------

    def _assign(self, var: int, c: int) -> bool:
        if self.cur[var]:
            return self.cur[var] == c
        if not (self.smask[var] >> c) & 1:
            return False
        a, b = self.side[var]
        m = self.n - c
        bit_c, bit_m = 1 << c, 1 << m
        if not self.pool[a] & bit_c:
            return False
        self.pool[a] &= ~bit_c
        self.negpool[a] &= ~bit_m
        if not self.pool[b] & bit_m:
            self.pool[a] |= bit_c
            self.negpool[a] |= bit_m
            return False
        self.pool[b] &= ~bit_m
        self.negpool[b] &= ~bit_c
        self.cur[var] = c
        self.trail.append(var)
        return True

    def _undo(self, mark: int) -> None:
        n = self.n
        while len(self.trail) > mark:
            var = self.trail.pop()
            c = self.cur[var]
            m = n - c
            a, b = self.side[var]
            self.pool[a] |= 1 << c
            self.negpool[a] |= 1 << m
            self.pool[b] |= 1 << m
            self.negpool[b] |= 1 << c
            self.cur[var] = 0

    def _propagate(self, start: int) -> bool:
        """Kirchhoff forcing from the variables assigned since ``start``."""
        n = self.n
        queue = []
        for var in self.trail[start:]:
            queue.extend(self.ends[var])
        while queue:
            w = queue.pop()
            total = 0
            missing = None
            count = 0
            for var, sgn in self.vertex_darts[w]:
                c = self.cur[var]
                if c:
                    total += sgn * c
                else:
                    count += 1
                    missing = (var, sgn)
            if count == 0:
                if total % n:
                    return False
            elif count == 1:
                var, sgn = missing
                c = (-total * sgn) % n
                if c == 0 or not self._assign(var, c):
                    return False
                queue.extend(self.ends[var])
        return True

    # -- search ------------------------------------------------------------

    def _check_pools(self) -> None:
        for k in range(3):
            used = 0
            for var in range(self.nvars):
                if self.cur[var]:
                    used += (self.side[var][0] == k) + (self.side[var][1] == k)
            assert used + self.pool[k].bit_count() == self.n - 1, "pool conservation violated"

    def _choose(self) -> tuple[int, int] | None:
        """Most constrained unassigned edge and its domain; (-1, 0) if all assigned."""
        pool, negpool = self.pool, self.negpool
        cover = [0, 0, 0]
        best, best_dom, best_size = -1, 0, 1 << 30
        for var in range(self.nvars):
            if self.cur[var]:
                continue
            a, b = self.side[var]
            dom = self.smask[var] & pool[a] & negpool[b]
            if not dom:
                return None
            cover[a] |= dom
            cover[b] |= self.nmask[var] & negpool[a] & pool[b]
            size = dom.bit_count()
            if size < best_size:
                best, best_dom, best_size = var, dom, size
        if best >= 0:
            for k in range(3):
                if pool[k] & ~cover[k]:
                    return None
        return best, best_dom

    def run(
        self,
        max_nodes: int | None,
        deadline: float | None,
        on_solution,
    ) -> str:
        mark = len(self.trail)
        for var, c in self.fixed:
            if not self._assign(var, c):
                self._undo(mark)
                return EXHAUSTED
        if not self._propagate(mark):
            self._undo(mark)
            return EXHAUSTED

        def visit(depth: int) -> None:
            self.nodes += 1
            if max_nodes is not None and self.nodes > max_nodes:
                raise _Budget
            if deadline is not None and self.nodes % 1024 == 0 and time.monotonic() > deadline:
                raise _Budget
            if self.check_invariants:
                self._check_pools()
            if depth < len(self.units):
                variables, options = self.units[depth]
                for values in options:
                    mark = len(self.trail)
                    ok = all(self._assign(var, c) for var, c in zip(variables, values))
                    if ok and self._propagate(mark):
                        visit(depth + 1)
                    self._undo(mark)
                return
            choice = self._choose()
            if choice is None:
                return
            var, dom = choice
            if var < 0:
                on_solution(list(self.cur))
                return
            c = 0
            while dom:
                low = dom & -dom
                c = low.bit_length() - 1
                dom ^= low
                mark = len(self.trail)
                if self._assign(var, c) and self._propagate(mark):
                    visit(depth + 1)
                self._undo(mark)

        try:
            visit(0)
        except _Budget:
            return TIMEOUT
        finally:
            self._undo(0)
        return EXHAUSTED

    def to_graphs(self, values: Sequence[int]) -> tuple[CurrentGraph, CurrentGraph]:
        graphs = []
        for g, spec in enumerate(self.problem.specs):
            assignment = {e: values[var] for e, var in self.var_of[g].items()}
            graphs.append(materialize(spec, assignment, self.n))
        return graphs[0], graphs[1]


def complete(
    problem: SearchProblem,
    max_nodes: int | None = DEFAULT_MAX_NODES,
    max_seconds: float | None = None,
    all_solutions: bool = False,
    max_solutions: int | None = None,
    check_invariants: bool = False,
) -> SearchResult:
    """Fill in every current of ``problem`` or report why not.

    Deterministic for a given problem and node budget: edges are branched in
    most-constrained-first order (ties by edge), values in increasing order.
    Each complete assignment is certified independently before it counts.
    """
    solver = _Solver(problem, check_invariants=check_invariants)
    result = SearchResult(status=EXHAUSTED)
    started = time.monotonic()
    deadline = None if max_seconds is None else started + max_seconds

    def on_solution(values: list[int]) -> None:
        ga, gb = solver.to_graphs(values)
        cert = verify_biembedding(ga, gb)
        if not cert.valid:
            result.rejected += 1
            return
        if result.pair is None:
            result.pair, result.certificate = (ga, gb), cert
        result.solutions.append((ga, gb))
        if not all_solutions or (max_solutions is not None and len(result.solutions) >= max_solutions):
            raise _Done

    try:
        status = solver.run(max_nodes, deadline, on_solution)
    except _Done:
        status = FOUND
    result.nodes = solver.nodes
    result.seconds = time.monotonic() - started
    if result.pair is not None:
        result.status = FOUND
        result.template = problem.pair
    else:
        result.status = status
    return result


def _labeled_code(spec: LadderSpec, labeling: Sequence[int], use_arithmetic: bool) -> tuple:
    emb = spec.embedding()
    owner = face_index(emb)
    lay = spec.layout()
    value = {}
    if use_arithmetic:
        for sec in spec.arithmetic_sections:
            for pos, c in sec.magnitudes():
                for e in vertical_edges(lay, pos):
                    value[2 * e], value[2 * e + 1] = c, -c
    colors = [
        (lay.roles[d >> 1].role, labeling[owner[d]], value.get(d, 0))
        for d in range(emb.dart_count)
    ]
    return canonical_code(emb, colors)


def _resolutions(
    spec: LadderSpec, use_arithmetic: bool, all_labelings: bool, alternating: bool = False
) -> list[tuple[LadderSpec, tuple[int, int, int]]]:
    """Index 3 resolutions of ``spec`` with role-compatible labelings, one per isomorphism class."""
    seen = set()
    out = []
    for resolved in spec.twist_patterns(alternating):
        labs = incidence_labelings(resolved)
        if not all_labelings:
            labs = labs[:1]
        for lab in labs:
            code = _labeled_code(resolved, lab, use_arithmetic)
            if code in seen:
                continue
            seen.add(code)
            out.append((resolved, lab))
    return out


def enumerate_topologies(
    s: int,
    kinds: Sequence[tuple[str, str]] | None = None,
    placements: Sequence[int] | None = None,
    use_arithmetic: bool = True,
    exhaustive: bool | None = None,
) -> list[FamilyPair]:
    """All resolved template pairs for parameter ``s`` in a fixed order.

    Ladder kinds, placement of the extra rung of graph B and per-rung
    rotation patterns are enumerated; templates that are isomorphic as
    labeled embedded graphs are kept once.  Graph A keeps only its
    lexicographically least role-compatible labeling because exchanging
    labels [1] and [2] in both graphs (and negating every current) maps
    solutions to solutions.
    """
    if s < 0:
        raise ValueError(f"family parameter must be nonnegative, got {s}")
    n = 24 * s + 21
    alternating = not (s == 0 if exhaustive is None else exhaustive)
    kinds = list(kinds) if kinds is not None else [
        (ka, kb) for ka in (CIRCULAR, MOBIUS) for kb in (CIRCULAR, MOBIUS)
    ]
    placements = list(placements) if placements is not None else [4 * s + 3] + list(range(4 * s + 3))
    cache_a: dict[str, list] = {}
    variants = []
    for ka, kb in kinds:
        if ka not in cache_a:
            cache_a[ka] = _resolutions(ladder_a(s, ka), use_arithmetic, False, alternating)
        res_a = cache_a[ka]
        if not res_a:
            continue
        for p in placements:
            res_b = _resolutions(ladder_b(s, kb, p), use_arithmetic, True, alternating)
            for (spec_a, lab_a), (spec_b, lab_b) in itertools.product(res_a, res_b):
                if counts_compatible(
                    n, edge_type_counts(spec_a, lab_a), edge_type_counts(spec_b, lab_b)
                ):
                    variants.append(FamilyPair(s, spec_a, spec_b, lab_a, lab_b))
    log.info("s=%d: %d template variants", s, len(variants))
    return variants


def _run_variant(args) -> SearchResult:
    problem, max_nodes, max_seconds, all_solutions, max_solutions = args
    return complete(problem, max_nodes, max_seconds, all_solutions, max_solutions)


def search_family(
    s: int,
    max_nodes: int | None = DEFAULT_MAX_NODES,
    max_seconds: float | None = None,
    threads: int = 1,
    use_arithmetic: bool = True,
    all_solutions: bool = False,
    max_solutions: int | None = None,
    variants: Sequence[FamilyPair] | None = None,
) -> SearchResult:
    """Search template variants in priority order until one completes.

    ``max_nodes`` is a budget shared by the variants in order.  With several
    worker processes every variant is run with the full budget and the
    sequential outcome is then replayed, so the reported result, including
    node counts, does not depend on ``threads``.
    """
    variants = list(variants) if variants is not None else enumerate_topologies(
        s, use_arithmetic=use_arithmetic
    )
    n = 24 * s + 21
    problems = [SearchProblem(v, n, use_arithmetic) for v in variants]
    started = time.monotonic()
    deadline = None if max_seconds is None else started + max_seconds

    def remaining_seconds() -> float | None:
        return None if deadline is None else max(0.0, deadline - time.monotonic())

    merged = SearchResult(status=EXHAUSTED)
    used = 0

    def account(i: int, r: SearchResult) -> bool:
        """Fold one variant's outcome in; True when the search should stop."""
        nonlocal used
        budget_left = None if max_nodes is None else max_nodes - used
        if r.status == TIMEOUT or (budget_left is not None and r.nodes > budget_left):
            merged.status = TIMEOUT
            merged.nodes = used + (r.nodes if budget_left is None else min(r.nodes, budget_left))
            return True
        used += r.nodes
        merged.rejected += r.rejected
        if r.found:
            if merged.pair is None:
                merged.pair, merged.certificate, merged.variant = r.pair, r.certificate, i
                merged.template = variants[i]
            merged.solutions.extend(r.solutions)
            if not all_solutions or (
                max_solutions is not None and len(merged.solutions) >= max_solutions
            ):
                merged.solutions = merged.solutions[: max_solutions or None]
                merged.status = FOUND
                return True
        return False

    if threads <= 1:
        for i, problem in enumerate(problems):
            budget_left = None if max_nodes is None else max_nodes - used
            left = None if max_solutions is None else max_solutions - len(merged.solutions)
            r = complete(problem, budget_left, remaining_seconds(), all_solutions, left)
            if account(i, r):
                break
    else:
        pool = ProcessPoolExecutor(max_workers=threads)
        try:
            futures = [
                pool.submit(_run_variant, (p, max_nodes, remaining_seconds(), all_solutions, max_solutions))
                for p in problems
            ]
            for i, future in enumerate(futures):
                r = future.result()
                left = None if max_solutions is None else max_solutions - len(merged.solutions)
                if left is not None and len(r.solutions) > left:
                    # the sequential run would have stopped early inside this variant
                    budget_left = None if max_nodes is None else max_nodes - used
                    r = complete(problems[i], budget_left, remaining_seconds(), all_solutions, left)
                if account(i, r):
                    break
        finally:
            pool.shutdown(wait=True, cancel_futures=True)
    if merged.status != TIMEOUT:
        merged.nodes = used
        merged.status = FOUND if merged.pair is not None else EXHAUSTED
    merged.seconds = time.monotonic() - started
    return merged
