"""Shared test machinery: brute-force oracles and instance generators.

The oracles here deliberately avoid the package's enumeration kernels so
they can serve as independent references: independent sets come from
itertools subsets, triangles from a full triple scan, distances from
networkx.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import networkx as nx

from hcchroma import Graph
from hcchroma.graph import random_triangle_free
from hcchroma.dpcolor import Cover, finishing_blow_hypothesis, from_list_assignment


def to_nx(g: Graph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges())
    return G


def brute_independent_sets(g: Graph) -> list[tuple[int, ...]]:
    """Every independent set, via itertools subsets and pairwise checks."""
    adj = [set(g.adjacency[v]) for v in range(g.n)]
    out = []
    for r in range(g.n + 1):
        for combo in itertools.combinations(range(g.n), r):
            if all(v not in adj[u] for u, v in itertools.combinations(combo, 2)):
                out.append(combo)
    return out


def brute_occupancy(g: Graph, lam) -> tuple[object, list]:
    """Partition function and per-vertex occupancy from the brute sets."""
    lam = Fraction(lam)
    z = Fraction(0)
    occ = [Fraction(0)] * g.n
    for s in brute_independent_sets(g):
        w = lam ** len(s)
        z += w
        for v in s:
            occ[v] += w
    return z, [o / z for o in occ]


def brute_has_triangle(g: Graph) -> bool:
    adj = [set(g.adjacency[v]) for v in range(g.n)]
    for u, v, w in itertools.combinations(range(g.n), 3):
        if v in adj[u] and w in adj[u] and w in adj[v]:
            return True
    return False


def connected_triangle_free_family(max_n: int) -> dict[int, list[Graph]]:
    """All connected triangle-free graphs up to isomorphism, by vertex count.

    Grows each graph by one vertex joined to a nonempty independent subset
    (every connected triangle-free graph arises this way from a smaller
    one), deduplicating with a Weisfeiler-Lehman hash bucket plus exact
    isomorphism checks.
    """
    from hcchroma.hardcore import independent_set_masks, mask_to_vertex_set

    levels: dict[int, list[Graph]] = {1: [Graph.from_edges(1, [])]}
    for n in range(2, max_n + 1):
        buckets: dict[str, list[nx.Graph]] = {}
        out: list[Graph] = []
        for parent in levels[n - 1]:
            parent_edges = list(parent.edges())
            for mask in independent_set_masks(parent):
                if mask == 0:
                    continue
                members = mask_to_vertex_set(mask)
                cand = Graph.from_edges(
                    n, parent_edges + [(u, n - 1) for u in members]
                )
                gnx = to_nx(cand)
                key = nx.weisfeiler_lehman_graph_hash(gnx, iterations=3)
                bucket = buckets.setdefault(key, [])
                if not any(nx.is_isomorphic(gnx, other) for other in bucket):
                    bucket.append(gnx)
                    out.append(cand)
        levels[n] = out
    return levels


def labelled_connected_triangle_free_count(n: int) -> int:
    """Isomorphism classes by brute force over all labelled graphs on n vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    reps: list[nx.Graph] = []
    for bits in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if bits >> i & 1]
        g = Graph.from_edges(n, edges)
        gnx = to_nx(g)
        if not nx.is_connected(gnx) if n > 0 else False:
            continue
        if n > 1 and not nx.is_connected(gnx):
            continue
        if brute_has_triangle(g):
            continue
        if not any(nx.is_isomorphic(gnx, r) for r in reps):
            reps.append(gnx)
    return len(reps)


def triangle_free_base(n: int, avg_degree: float, seed: int) -> Graph:
    p = min(1.0, avg_degree / max(1, n - 1))
    return random_triangle_free(n, p, seed)


def random_cover(
    n: int, avg_degree: float, list_size: int, max_star: int, seed: int
) -> Cover:
    """Random cover with lists of exactly ``list_size`` and deg* <= ``max_star``.

    Per base edge, up to three random matching pairs are added subject to
    per-node star-degree caps, so the finishing-blow hypothesis with
    ell = list_size holds whenever max_star <= list_size / 8.
    """
    g = triangle_free_base(n, avg_degree, seed)
    rng = random.Random(seed * 977 + 13)
    owner = tuple(u for u in range(n) for _ in range(list_size))
    lists = [tuple(range(u * list_size, (u + 1) * list_size)) for u in range(n)]
    capacity = [max_star] * (n * list_size)
    cross = set()
    for u, v in g.edges():
        used_u: set[int] = set()
        used_v: set[int] = set()
        for _ in range(rng.randint(1, max_star)):
            cands_u = [a for a in lists[u] if capacity[a] > 0 and a not in used_u]
            cands_v = [b for b in lists[v] if capacity[b] > 0 and b not in used_v]
            if not cands_u or not cands_v:
                break
            a = rng.choice(cands_u)
            b = rng.choice(cands_v)
            cross.add((a, b) if a < b else (b, a))
            capacity[a] -= 1
            capacity[b] -= 1
            used_u.add(a)
            used_v.add(b)
    return Cover(g, owner, frozenset(cross))


def random_list_instance(
    n: int, avg_degree: float, list_size: int, palette: int, seed: int
):
    """A list assignment meeting the finishing-blow hypothesis, via rejection.

    Draws ``list_size`` labels per vertex from a palette large enough that
    colour collisions between neighbours stay below list_size / 8, bumping
    the seed deterministically until the hypothesis check passes.
    """
    g = triangle_free_base(n, avg_degree, seed)
    attempt = 0
    while True:
        rng = random.Random(seed * 104729 + attempt)
        lists = [sorted(rng.sample(range(palette), list_size)) for _ in range(n)]
        cover, labels = from_list_assignment(g, lists)
        if finishing_blow_hypothesis(cover, list_size).ok:
            return g, lists, cover, labels
        attempt += 1
        if attempt > 200:
            raise RuntimeError("could not draw a hypothesis-satisfying instance")


def glauber_empirical_occupancy(g, lam, chains, steps, seed0):
    """Empirical Pr(v in I) over independent seeded chains."""
    from hcchroma.hardcore import glauber_sample

    counts = [0] * g.n
    for t in range(chains):
        for v in glauber_sample(g, lam, steps, seed0 + t):
            counts[v] += 1
    return [c / chains for c in counts]
