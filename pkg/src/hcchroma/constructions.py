"""Lower-bound construction and semi-bipartite subgraph extraction.

`necessary_construction` builds, for a given minimum degree delta, a
bipartite graph together with a list assignment of per-vertex size at
least deg(v)/log(deg(v)) on one side and deg(v) on the other that admits
no proper list colouring.  The recursion multiplies the maximum degree by
a tower of exponentials per level, so only tiny (delta, level) pairs are
materialisable; non-colourability is verified by exhaustive backtracking
plus a structural cross-check.

`semi_bipartite_extract` finds an induced subgraph consisting of all edges
between an independent set A and its complement with large average degree,
by scoring hard-core samples (exact enumeration below the cutoff) by their
boundary-edge count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable

from . import hardcore
from .errors import HypothesisError, InputError, InternalError, SizeError
from .graph import Graph, VertexSet, is_triangle_free, vertex_set

Colour = tuple[int, int]  # (index, level)

DEFAULT_SIZE_CAP = 500_000
DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class NecessaryInstance:
    """A level of the recursive non-colourable bipartite construction.

    ``lists[v]`` is the set of (index, level) colours available to v;
    ``copies`` holds the vertex blocks of the sub-instances merged at the
    last level (empty at level 0) and ``special_vertex`` is the vertex of
    maximum degree added by that step.
    """

    graph: Graph
    lists: tuple[frozenset, ...]
    level: int
    delta: int
    a_side: VertexSet
    b_side: VertexSet
    special_vertex: int
    copies: tuple[VertexSet, ...] = ()


@dataclass(frozen=True)
class PropertyReport:
    ok: bool
    failures: tuple[str, ...]


def check_recursive_properties(inst: NecessaryInstance) -> PropertyReport:
    """Check the four structural properties of a construction level.

    Bipartite across (A, B); every A-vertex of degree at least delta with
    the special vertex attaining the maximum; every B-vertex of degree
    level + 1; and list sizes at least deg/log(deg) on A (natural log) and
    deg on B.
    """
    g = inst.graph
    failures = []
    a_set, b_set = set(inst.a_side), set(inst.b_side)
    if a_set & b_set or len(a_set) + len(b_set) != g.n:
        failures.append("A and B do not partition the vertices")
    for u, v in g.edges():
        if (u in a_set) == (v in a_set):
            failures.append(f"edge {u}-{v} does not cross the bipartition")
    max_deg = max((g.degree(v) for v in inst.a_side), default=0)
    for v in inst.a_side:
        if g.degree(v) < inst.delta:
            failures.append(f"A-vertex {v} has degree {g.degree(v)} < {inst.delta}")
    if inst.a_side and g.degree(inst.special_vertex) != max_deg:
        failures.append("special vertex does not attain the maximum A-degree")
    for v in inst.b_side:
        if g.degree(v) != inst.level + 1:
            failures.append(
                f"B-vertex {v} has degree {g.degree(v)}, expected {inst.level + 1}"
            )
    for v in inst.a_side:
        d = g.degree(v)
        need = d / math.log(d) if d > 1 else 1
        if len(inst.lists[v]) < need:
            failures.append(
                f"A-vertex {v}: list size {len(inst.lists[v])} < deg/log deg = {need}"
            )
    for v in inst.b_side:
        if len(inst.lists[v]) < g.degree(v):
            failures.append(
                f"B-vertex {v}: list size {len(inst.lists[v])} < degree {g.degree(v)}"
            )
    return PropertyReport(not failures, tuple(failures))


def necessary_construction(
    delta: int, level: int, size_cap: int = DEFAULT_SIZE_CAP
) -> NecessaryInstance:
    """Build the recursive non-colourable instance at the given level.

    Level 0 is the star K_{1,delta} whose centre lists all delta colours
    and whose leaves each hold the single clashing colour.  Each later
    level takes ceil(exp(t)/t) copies of the previous one (t the running
    tower value), joins a new vertex to every B-vertex, gives it the list
    of copy indices, and appends the copy index to every B-list in that
    copy.  The copy count is a ceiling of the real tower ratio; the
    structural properties are re-checked on the output rather than assumed
    from the closed form.
    """
    if delta < 3:
        raise InputError("delta must be at least 3 (smaller breaks the list bound)")
    if level < 0:
        raise InputError("level must be non-negative")
    if level > delta - 1:
        raise InputError("level must be at most delta - 1")
    centre_list = frozenset((i, 0) for i in range(1, delta + 1))
    lists: list[frozenset] = [centre_list] + [frozenset({(i, 0)}) for i in range(1, delta + 1)]
    inst = NecessaryInstance(
        graph=Graph.from_edges(delta + 1, [(0, i) for i in range(1, delta + 1)]),
        lists=tuple(lists),
        level=0,
        delta=delta,
        a_side=(0,),
        b_side=tuple(range(1, delta + 1)),
        special_vertex=0,
    )
    tower = float(delta)
    for lvl in range(1, level + 1):
        if tower > 30.0:
            raise SizeError(
                f"copy count exp({tower:.3g})/{tower:.3g} exceeds any materialisable size"
            )
        copies_needed = math.ceil(math.exp(tower) / tower)
        size = inst.graph.n
        new_n = copies_needed * size + 1
        if new_n > size_cap:
            raise SizeError(
                f"level {lvl} needs {new_n} vertices, above the cap {size_cap}"
            )
        edges: list[tuple[int, int]] = []
        new_lists: list[frozenset] = []
        a_side: list[int] = []
        b_side: list[int] = []
        blocks: list[VertexSet] = []
        b_all: list[int] = []
        for j in range(copies_needed):
            off = j * size
            blocks.append(tuple(range(off, off + size)))
            edges.extend((off + u, off + v) for u, v in inst.graph.edges())
            copy_colour = (j + 1, lvl)
            for v in range(size):
                if v in inst.b_side:
                    new_lists.append(inst.lists[v] | {copy_colour})
                    b_side.append(off + v)
                    b_all.append(off + v)
                else:
                    new_lists.append(inst.lists[v])
                    a_side.append(off + v)
        new_vertex = copies_needed * size
        edges.extend((b, new_vertex) for b in b_all)
        new_lists.append(frozenset((j + 1, lvl) for j in range(copies_needed)))
        a_side.append(new_vertex)
        inst = NecessaryInstance(
            graph=Graph.from_edges(new_n, edges),
            lists=tuple(new_lists),
            level=lvl,
            delta=delta,
            a_side=vertex_set(a_side),
            b_side=vertex_set(b_side),
            special_vertex=new_vertex,
            copies=tuple(blocks),
        )
        tower = math.exp(tower)
    report = check_recursive_properties(inst)
    if not report.ok:
        raise InternalError(
            "construction violates its own properties: " + "; ".join(report.failures)
        )
    return inst


def _list_colourable(g: Graph, lists, budget: int, counter: list[int]) -> bool:
    """Exhaustive backtracking with unit propagation; True iff colourable."""
    domains = [set(l) for l in lists]
    return _search(g, domains, [False] * g.n, g.n, budget, counter)


def _search(g, domains, done, remaining, budget, counter) -> bool:
    counter[0] += 1
    if counter[0] > budget:
        raise SizeError(f"colourability search exceeded budget {budget}")
    # unit propagation on singleton lists
    trail: list[tuple[int, object]] = []
    forced: list[int] = [v for v in range(g.n) if not done[v] and len(domains[v]) == 1]
    fixed: list[int] = []
    ok = True
    while forced and ok:
        v = forced.pop()
        if done[v]:
            continue
        colour = next(iter(domains[v]))
        done[v] = True
        fixed.append(v)
        remaining -= 1
        for u in g.adjacency[v]:
            if done[u]:
                continue
            if colour in domains[u]:
                domains[u].discard(colour)
                trail.append((u, colour))
                if not domains[u]:
                    ok = False
                    break
                if len(domains[u]) == 1:
                    forced.append(u)
    if ok:
        if remaining == 0:
            result = True
        else:
            # fail-first: smallest domain relative to degree
            v = min(
                (u for u in range(g.n) if not done[u]),
                key=lambda u: len(domains[u]) / max(1, g.degree(u)),
            )
            result = False
            done[v] = True
            for colour in sorted(domains[v]):
                saved = domains[v]
                domains[v] = {colour}
                sub_trail = []
                wipe = False
                for u in g.adjacency[v]:
                    if not done[u] and colour in domains[u]:
                        domains[u].discard(colour)
                        sub_trail.append((u, colour))
                        if not domains[u]:
                            wipe = True
                if not wipe and _search(g, domains, done, remaining - 1, budget, counter):
                    result = True
                for u, col in sub_trail:
                    domains[u].add(col)
                domains[v] = saved
                if result:
                    break
            done[v] = False
    else:
        result = False
    for u, col in trail:
        domains[u].add(col)
    for v in fixed:
        done[v] = False
    return result


def verify_not_colourable(inst: NecessaryInstance, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff the instance admits no proper list colouring.

    Exhaustive backtracking over the list assignment with unit propagation
    on singleton lists; the structural recursion is run alongside as a
    cross-check whenever it applies (it refutes colourability copy by
    copy), and disagreement with the search is an internal error.
    """
    counter = [0]
    colourable = _list_colourable(inst.graph, inst.lists, budget, counter)
    structural = structural_not_colourable(inst, budget)
    if structural is True and colourable:
        raise InternalError("structural argument and exhaustive search disagree")
    return not colourable


def structural_not_colourable(
    inst: NecessaryInstance, budget: int = DEFAULT_BUDGET
) -> bool | None:
    """Refute colourability via the copy recursion; None when not applicable.

    At level 0 the star is not colourable exactly when the leaf colours
    cover the centre list.  At higher levels every colour of the special
    vertex must be a copy colour (j, level) whose copy, with that colour
    removed, is itself not colourable.  Returns True only when every
    branch is refuted; a modified instance (extra colours, missing
    metadata) yields False or None rather than a wrong claim.
    """
    g = inst.graph
    if inst.level == 0:
        centre = inst.special_vertex
        leaf_colours = set()
        for v in range(g.n):
            if v != centre:
                leaf_colours.update(inst.lists[v])
        return inst.lists[centre] <= leaf_colours
    if not inst.copies:
        return None
    counter = [0]
    for colour in inst.lists[inst.special_vertex]:
        if not (isinstance(colour, tuple) and len(colour) == 2):
            return False  # foreign colour: cannot refute this branch
        j, lvl = colour
        if lvl != inst.level or not 1 <= j <= len(inst.copies):
            return False
        block = inst.copies[j - 1]
        local = {v: i for i, v in enumerate(block)}
        sub_lists = [inst.lists[v] - {colour} for v in block]
        sub_edges = [
            (local[u], local[v])
            for u, v in g.edges()
            if u in local and v in local
        ]
        sub_g = Graph.from_edges(len(block), sub_edges)
        if _list_colourable(sub_g, sub_lists, budget, counter):
            return False
    return True


def with_extra_colour(inst: NecessaryInstance, vertex: int, colour) -> NecessaryInstance:
    """Copy of the instance with one colour added to a vertex list."""
    lists = list(inst.lists)
    lists[vertex] = lists[vertex] | {colour}
    return replace(inst, lists=tuple(lists))


# ---------------------------------------------------------------------------
# Semi-bipartite extraction.

def auto_fugacity(g: Graph) -> float:
    """The default fugacity n / sum of log deg(v) over non-isolated vertices."""
    s = math.fsum(math.log(g.degree(v)) for v in range(g.n) if g.degree(v) >= 1)
    if not s > 0:
        raise InputError(
            "degenerate graph: sum of log-degrees vanishes, supply a fugacity"
        )
    return g.n / s


def _boundary_score(g: Graph, members: Iterable[int]) -> int:
    return sum(g.degree(v) for v in members)


def semi_bipartite_extract(
    g: Graph,
    lam="auto",
    trials: int = 32,
    seed: int = 0,
    cutoff: int = hardcore.DEFAULT_CUTOFF,
    steps: int | None = None,
    threads: int = 1,
) -> tuple[VertexSet, VertexSet, float]:
    """Independent set A maximising the boundary edge count, with complement.

    Every edge leaving an independent set A crosses into the complement,
    so the number of edges of the semi-bipartite subgraph on (A, V - A) is
    the degree sum over A.  Below the cutoff every independent set is
    scored exactly; above it, ``trials`` seeded Glauber samples are scored
    instead (chains run per trial seed, possibly across ``threads``, and
    are reduced in trial order, so the result is identical for any thread
    count).  Ties break towards the lexicographically smallest A.
    Returns (A, B, average degree 2 e(A, B) / n).
    """
    if not is_triangle_free(g):
        raise HypothesisError("semi_bipartite_extract requires a triangle-free graph")
    if lam == "auto":
        lam = auto_fugacity(g)
    if not lam > 0:
        raise InputError("fugacity must be positive")
    if g.n == 0:
        return (), (), 0.0
    best: VertexSet | None = None
    best_score = -1
    if g.n <= cutoff:
        for mask in hardcore.independent_set_masks(g):
            members = hardcore.mask_to_vertex_set(mask)
            score = _boundary_score(g, members)
            if score > best_score:
                best, best_score = members, score
    else:
        if trials < 1:
            raise InputError("trials must be at least 1")
        n_steps = steps if steps is not None else max(10_000, 50 * g.n)
        if threads > 1:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=threads) as pool:
                samples = list(
                    pool.map(
                        lambda t: hardcore.glauber_sample(g, lam, n_steps, seed + t),
                        range(trials),
                    )
                )
        else:
            samples = [
                hardcore.glauber_sample(g, lam, n_steps, seed + t) for t in range(trials)
            ]
        for members in samples:
            score = _boundary_score(g, members)
            if score > best_score or (score == best_score and (best is None or members < best)):
                best, best_score = members, score
    assert best is not None
    b_side = tuple(v for v in range(g.n) if v not in set(best))
    avg_degree = 2.0 * best_score / g.n
    return best, b_side, avg_degree


def expected_crossing_edges(
    g: Graph, lam: float, cutoff: int = hardcore.DEFAULT_CUTOFF
) -> tuple[float, float]:
    """E[boundary edge count] written both ways: sum deg * Pr(v in I) and
    sum of expected occupied neighbours.  The two must agree exactly."""
    stats = hardcore.enumerate_stats(g, lam, max_distance=1, cutoff=cutoff)
    by_degree = math.fsum(g.degree(v) * stats.occupancy[v] for v in range(g.n))
    by_neighbours = math.fsum(stats.neighbour_occupancy[1])
    return by_degree, by_neighbours


def semi_bipartite_lower_bound(g: Graph, lam: float, ratio: float) -> float:
    """Pre-asymptotic lower bound on the expected boundary edge count.

    ``ratio`` is alpha/beta.  Requires every degree at least 1 so the mean
    log-degree is defined.
    """
    if any(g.degree(v) == 0 for v in range(g.n)):
        raise InputError("lower bound needs minimum degree at least 1")
    if g.n == 0:
        return 0.0
    mean_log_deg = math.fsum(math.log(g.degree(v)) for v in range(g.n)) / g.n
    log1l = math.log1p(lam)
    return (
        g.n
        * lam
        * (mean_log_deg + math.log(ratio) + math.log(log1l) + 1.0)
        / ((1.0 + ratio) * (1.0 + lam) * log1l)
    )
