"""Correspondence (DP) colouring: covers, certification, and solving.

A cover of a base graph G is a graph H on "colour nodes" partitioned into
one list L(u) per base vertex u, where every same-list pair is implicitly
adjacent, and cross-list edges exist only between lists of adjacent base
vertices and form a matching per base edge.  An H-colouring picks one node
per list so that no two picks are adjacent; ordinary list colouring is the
special case where equal labels of adjacent vertices are matched.

The finishing-blow hypothesis (list sizes at least ell >= 3 and cross
degrees at most one eighth of the neighbouring ell) admits a local-lemma
certificate, which this module both evaluates numerically and realises
constructively by Moser-Tardos resampling.
"""

from __future__ import annotations

import json
import math
import os
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Mapping, Sequence

from .errors import (
    FormatError,
    HypothesisError,
    InputError,
    InternalError,
    SizeError,
)
from .graph import Graph, induced_subgraph, is_triangle_free, parse_edge_list

DEFAULT_MAX_RESAMPLES = 10**6


def _normalise_ell(c: "Cover", ell) -> list[int]:
    if isinstance(ell, int):
        out = [ell] * c.base.n
    else:
        out = [int(x) for x in ell]
        if len(out) != c.base.n:
            raise InputError("need one list-size target per base vertex")
    return out


@dataclass(frozen=True)
class Cover:
    """Correspondence-colouring instance over ``base``.

    ``owner[c]`` is the base vertex whose list contains colour node c, and
    ``cross_edges`` holds the unordered pairs of colour nodes matched
    across lists.  Same-list adjacency is implicit and never stored, so
    the star degree of a node counts cross edges only.  Construction only
    checks ranges; the four cover axioms are checked by `validate_cover`,
    which therefore can report on malformed instances.
    """

    base: Graph
    owner: tuple[int, ...]
    cross_edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "owner", tuple(int(u) for u in self.owner))
        for u in self.owner:
            if not 0 <= u < self.base.n:
                raise InputError(f"owner {u} out of range")
        canon = set()
        for e in self.cross_edges:
            a, b = e
            if a == b:
                raise InputError(f"cross edge ({a},{b}) is a loop")
            if not (0 <= a < len(self.owner) and 0 <= b < len(self.owner)):
                raise InputError(f"cross edge ({a},{b}) out of range")
            canon.add((a, b) if a < b else (b, a))
        object.__setattr__(self, "cross_edges", frozenset(canon))

    @property
    def num_colour_nodes(self) -> int:
        return len(self.owner)

    @cached_property
    def lists(self) -> tuple[tuple[int, ...], ...]:
        """Colour nodes per base vertex, sorted."""
        out: list[list[int]] = [[] for _ in range(self.base.n)]
        for node, u in enumerate(self.owner):
            out[u].append(node)
        return tuple(tuple(lst) for lst in out)

    @cached_property
    def star_adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Cross-edge partners per colour node."""
        out: list[list[int]] = [[] for _ in range(len(self.owner))]
        for a, b in self.cross_edges:
            out[a].append(b)
            out[b].append(a)
        return tuple(tuple(sorted(lst)) for lst in out)


def star_degree(c: Cover, node: int) -> int:
    """Number of cross edges at a colour node (same-list edges excluded)."""
    if not 0 <= node < c.num_colour_nodes:
        raise InputError(f"colour node {node} out of range")
    return len(c.star_adjacency[node])


@dataclass(frozen=True)
class CoverReport:
    ok: bool
    violations: tuple[str, ...]


def validate_cover(c: Cover) -> CoverReport:
    """Check the four cover axioms, reporting every violation found."""
    violations = []
    base_adj = [set(nbrs) for nbrs in c.base.adjacency]
    for a, b in sorted(c.cross_edges):
        ua, ub = c.owner[a], c.owner[b]
        if ua == ub:
            violations.append(f"cross edge ({a},{b}) joins nodes of one list ({ua})")
        elif ub not in base_adj[ua]:
            violations.append(
                f"cross edge ({a},{b}) joins lists of non-adjacent vertices {ua},{ub}"
            )
    # matching axiom: per base edge, no node may have two partners in one list
    partner_lists: dict[tuple[int, int], set[int]] = {}
    for a, b in sorted(c.cross_edges):
        ua, ub = c.owner[a], c.owner[b]
        if ua == ub:
            continue
        for node, other_owner in ((a, ub), (b, ua)):
            key = (node, other_owner)
            seen = partner_lists.setdefault(key, set())
            partner = b if node == a else a
            seen.add(partner)
            if len(seen) > 1:
                violations.append(
                    f"node {node} has {len(seen)} cross partners in the list of "
                    f"vertex {other_owner}; matching violated"
                )
    return CoverReport(not violations, tuple(violations))


def from_list_assignment(
    g: Graph, lists: Sequence[Sequence[Hashable]]
) -> tuple[Cover, tuple[Hashable, ...]]:
    """Cover encoding an ordinary list assignment, plus node labels.

    One colour node per (vertex, label) pair; equal labels of adjacent
    vertices are matched.  An H-colouring of the result corresponds
    exactly to a proper list colouring.  Returns the cover and the label
    of each colour node.
    """
    if len(lists) != g.n:
        raise InputError("need one list per vertex")
    owner: list[int] = []
    labels: list[Hashable] = []
    node_of: list[dict[Hashable, int]] = []
    for v in range(g.n):
        table = {}
        for lab in sorted(set(lists[v])):
            table[lab] = len(owner)
            owner.append(v)
            labels.append(lab)
        node_of.append(table)
    cross = set()
    for u, v in g.edges():
        for lab, a in node_of[u].items():
            b = node_of[v].get(lab)
            if b is not None:
                cross.add((a, b))
    return Cover(g, tuple(owner), frozenset(cross)), tuple(labels)


@dataclass(frozen=True)
class HypothesisReport:
    ok: bool
    violations: tuple[str, ...]
    max_star_degree: int
    min_list_size: int


def finishing_blow_hypothesis(c: Cover, ell) -> HypothesisReport:
    """Check ell >= 3, |L(u)| >= ell(u), and the cross-degree condition.

    The cross-degree condition requires deg*(c') <= min_{v ~ u} ell(v) / 8
    for every base vertex u and node c' in L(u); for isolated u the
    condition is vacuous (such nodes have no cross edges anyway).
    """
    ell_v = _normalise_ell(c, ell)
    violations = []
    max_star = 0
    min_list = min((len(l) for l in c.lists), default=0)
    for u in range(c.base.n):
        if ell_v[u] < 3:
            violations.append(f"ell({u}) = {ell_v[u]} < 3")
        if len(c.lists[u]) < ell_v[u]:
            violations.append(
                f"|L({u})| = {len(c.lists[u])} < ell({u}) = {ell_v[u]}"
            )
        nbrs = c.base.adjacency[u]
        cap = min(ell_v[v] for v in nbrs) / 8.0 if nbrs else math.inf
        for node in c.lists[u]:
            d = len(c.star_adjacency[node])
            max_star = max(max_star, d)
            if d > cap:
                violations.append(
                    f"node {node} in L({u}) has star degree {d} > {cap}"
                )
    return HypothesisReport(not violations, tuple(violations), max_star, min_list)


def truncate_lists(c: Cover, ell) -> tuple[Cover, tuple[int, ...]]:
    """Keep the lexicographically first ell(u) nodes per list.

    Returns the truncated cover (nodes renumbered densely) and the map
    from new node ids to old ones.
    """
    ell_v = _normalise_ell(c, ell)
    keep: list[int] = []
    for u in range(c.base.n):
        lst = c.lists[u]
        if len(lst) < ell_v[u]:
            raise InputError(f"list of vertex {u} shorter than ell({u})")
        keep.extend(lst[: ell_v[u]])
    keep.sort()
    new_id = {old: new for new, old in enumerate(keep)}
    owner = tuple(c.owner[old] for old in keep)
    cross = frozenset(
        (new_id[a], new_id[b])
        for a, b in c.cross_edges
        if a in new_id and b in new_id
    )
    return Cover(c.base, owner, cross), tuple(keep)


@dataclass(frozen=True)
class LllReport:
    """Numeric local-lemma certificate for the finishing-blow hypothesis.

    Evaluated on the ell-truncated cover with weights
    x(c1c2) = 3 / (ell(u1) * ell(u2)).  ``proof_slack`` is the minimum of
    x * exp(-1.4 * S) - Pr over cross edges, with S the weight sum over
    the dependency set (edges sharing either list, the edge itself
    included); ``glll_slack`` is the same for the raw product form
    x * prod (1 - x') over the dependency set minus the edge itself.
    """

    certified: bool
    proof_slack: float | None
    glll_slack: float | None
    max_x: float
    num_bad_events: int


def lll_certify(c: Cover, ell, enforce_hypothesis: bool = True) -> LllReport:
    """Verify the local-lemma hypothesis edge by edge on the truncated cover.

    With ``enforce_hypothesis`` (the default) a failing finishing-blow
    check is a precondition error; passing False skips only the
    star-degree part, so the numeric inequality can be evaluated on
    instances the coarse degree condition rejects (it may still certify
    them, list sizes permitting).
    """
    report = finishing_blow_hypothesis(c, ell)
    if not report.ok:
        star_only = all("star degree" in v for v in report.violations)
        if enforce_hypothesis or not star_only:
            raise HypothesisError(
                "finishing-blow hypothesis fails: " + "; ".join(report.violations[:3])
            )
    ell_v = _normalise_ell(c, ell)
    trunc, _ = truncate_lists(c, ell_v)
    edges = sorted(trunc.cross_edges)
    if not edges:
        return LllReport(True, None, None, 0.0, 0)
    x = {}
    for a, b in edges:
        ua, ub = trunc.owner[a], trunc.owner[b]
        x[(a, b)] = 3.0 / (ell_v[ua] * ell_v[ub])
    vertex_sum = [0.0] * trunc.base.n
    vertex_logsum = [0.0] * trunc.base.n
    pair_sum: dict[tuple[int, int], float] = {}
    pair_logsum: dict[tuple[int, int], float] = {}
    for e in edges:
        a, b = e
        ua, ub = trunc.owner[a], trunc.owner[b]
        xe = x[e]
        lg = math.log1p(-xe)
        vertex_sum[ua] += xe
        vertex_sum[ub] += xe
        vertex_logsum[ua] += lg
        vertex_logsum[ub] += lg
        key = (ua, ub) if ua < ub else (ub, ua)
        pair_sum[key] = pair_sum.get(key, 0.0) + xe
        pair_logsum[key] = pair_logsum.get(key, 0.0) + lg
    proof_slack = math.inf
    glll_slack = math.inf
    max_x = 0.0
    certified = True
    for e in edges:
        a, b = e
        ua, ub = trunc.owner[a], trunc.owner[b]
        xe = x[e]
        max_x = max(max_x, xe)
        if xe >= 0.5:
            certified = False
        key = (ua, ub) if ua < ub else (ub, ua)
        prob = 1.0 / (ell_v[ua] * ell_v[ub])
        dep_sum = vertex_sum[ua] + vertex_sum[ub] - pair_sum[key]
        proof_slack = min(proof_slack, xe * math.exp(-1.4 * dep_sum) - prob)
        dep_log = vertex_logsum[ua] + vertex_logsum[ub] - pair_logsum[key]
        glll_slack = min(glll_slack, xe * math.exp(dep_log - math.log1p(-xe)) - prob)
    certified = certified and proof_slack >= 0.0
    return LllReport(certified, proof_slack, glll_slack, max_x, len(edges))


def verify_dp_colouring(c: Cover, choice: Mapping[int, int]) -> tuple[bool, str]:
    """Independent check that ``choice`` is an H-colouring of the cover.

    Deliberately dumb: one node per base vertex, owned by that vertex, and
    no cross edge with both ends chosen.
    """
    if sorted(choice) != list(range(c.base.n)):
        return False, "choice does not assign exactly the base vertices"
    chosen = set()
    for u, node in choice.items():
        if not 0 <= node < c.num_colour_nodes:
            return False, f"node {node} out of range"
        if c.owner[node] != u:
            return False, f"node {node} not owned by vertex {u}"
        chosen.add(node)
    if len(chosen) != c.base.n:
        return False, "repeated colour node"
    for a, b in c.cross_edges:
        if a in chosen and b in chosen:
            return False, f"cross edge ({a},{b}) has both ends chosen"
    return True, "ok"


def solve(
    c: Cover,
    seed: int = 0,
    max_resamples: int = DEFAULT_MAX_RESAMPLES,
    ell=None,
) -> dict[int, int]:
    """Moser-Tardos resampling to an H-colouring.

    Samples one node per list uniformly (from the ell-truncated list when
    ``ell`` is given), then repeatedly resamples both endpoints of the
    first violated cross edge in canonical edge order until no bad event
    holds.  Deterministic for a fixed seed.  Exceeding ``max_resamples``
    raises a SizeError, which is never expected on certified instances.
    """
    node_map = None
    work = c
    if ell is not None:
        work, node_map = truncate_lists(c, ell)
    for u in range(work.base.n):
        if not work.lists[u]:
            raise InputError(f"vertex {u} has an empty colour list")
    rng = random.Random(seed)
    choice = {u: rng.choice(work.lists[u]) for u in range(work.base.n)}
    chosen = set(choice.values())
    edges = sorted(work.cross_edges)
    resamples = 0
    while True:
        violated = None
        for e in edges:
            if e[0] in chosen and e[1] in chosen:
                violated = e
                break
        if violated is None:
            break
        resamples += 1
        if resamples > max_resamples:
            raise SizeError(f"gave up after {max_resamples} resamples")
        for node in violated:
            u = work.owner[node]
            chosen.discard(choice[u])
            choice[u] = rng.choice(work.lists[u])
            chosen.add(choice[u])
    if node_map is not None:
        choice = {u: node_map[node] for u, node in choice.items()}
    ok, msg = verify_dp_colouring(c, choice)
    if not ok:
        raise InternalError(f"solver produced an invalid colouring: {msg}")
    return choice


class PartialDpState:
    """Partial correspondence colouring with maintained residual lists.

    ``chosen`` maps coloured base vertices to their colour node; the
    residual list of an uncoloured vertex is its list minus the cross
    partners of every chosen node.
    """

    def __init__(self, cover: Cover):
        self.cover = cover
        self.chosen: dict[int, int] = {}
        self.residual: list[set[int]] = [set(lst) for lst in cover.lists]

    def domain(self) -> tuple[int, ...]:
        return tuple(sorted(self.chosen))

    def residual_list(self, u: int) -> tuple[int, ...]:
        return tuple(sorted(self.residual[u]))

    def conflicts(self, node: int) -> bool:
        """True if ``node`` is H-adjacent to an already chosen node."""
        u = self.cover.owner[node]
        if u in self.chosen:
            return True
        chosen_nodes = set(self.chosen.values())
        return any(p in chosen_nodes for p in self.cover.star_adjacency[node])

    def choose(self, node: int) -> None:
        u = self.cover.owner[node]
        if u in self.chosen:
            raise InputError(f"vertex {u} already coloured")
        self.chosen[u] = node
        for p in self.cover.star_adjacency[node]:
            self.residual[self.cover.owner[p]].discard(p)

    def recomputed_residual(self, u: int) -> tuple[int, ...]:
        """Residual list of ``u`` recomputed from scratch (test oracle)."""
        banned = set()
        for node in self.chosen.values():
            banned.update(self.cover.star_adjacency[node])
        return tuple(sorted(set(self.cover.lists[u]) - banned))


def residual_cover(c: Cover, chosen: Mapping[int, int]):
    """The cover induced on the uncoloured vertices after ``chosen``.

    Removes the coloured vertices from the base graph and the H-closed
    neighbourhood of the chosen nodes from the lists.  Returns the new
    cover, the map new colour node -> old colour node, and the map old
    base vertex -> new base vertex.
    """
    banned = set(chosen.values())
    for node in chosen.values():
        banned.update(c.star_adjacency[node])
    keep_vertices = [u for u in range(c.base.n) if u not in chosen]
    sub_base, base_map = induced_subgraph(c.base, keep_vertices)
    keep_nodes = [
        node
        for node in range(c.num_colour_nodes)
        if c.owner[node] not in chosen and node not in banned
    ]
    node_new = {old: new for new, old in enumerate(keep_nodes)}
    owner = tuple(base_map[c.owner[old]] for old in keep_nodes)
    cross = frozenset(
        (node_new[a], node_new[b])
        for a, b in c.cross_edges
        if a in node_new and b in node_new
    )
    return Cover(sub_base, owner, cross), tuple(keep_nodes), base_map


@dataclass(frozen=True)
class TwoPhaseResult:
    colouring: dict[int, int] | None
    rounds_used: int
    certified: bool
    diagnostics: dict


def two_phase_colour(
    g: Graph,
    c: Cover,
    ell,
    rounds: int = 10,
    seed: int = 0,
    max_resamples: int = DEFAULT_MAX_RESAMPLES,
) -> TwoPhaseResult:
    """Random partial colouring followed by the certified finisher.

    Phase 1 draws one uniform node per list and greedily keeps the
    non-conflicting draws, forming a partial colouring; phase 2 checks the
    finishing-blow hypothesis on the residual cover and, when it passes,
    completes the colouring with the resampling solver.  When the
    hypothesis fails, a bounded uncertified solve of the residual instance
    is still attempted before restarting, so small instances succeed even
    without a certificate.  No asymptotic list-size guarantee is promised;
    after ``rounds`` failed restarts a diagnostic report is returned.
    Every colouring produced is verified against the original cover.
    """
    if g != c.base:
        raise InputError("cover does not belong to the given graph")
    if not is_triangle_free(g):
        raise HypothesisError("two_phase_colour requires a triangle-free base graph")
    ell_v = _normalise_ell(c, ell)
    diagnostics: dict = {}
    certified = False
    for attempt in range(max(1, rounds)):
        rng = random.Random(seed * 1_000_003 + attempt)
        state = PartialDpState(c)
        draws = [rng.choice(c.lists[u]) if c.lists[u] else None for u in range(c.base.n)]
        for u, node in enumerate(draws):
            if node is not None and not state.conflicts(node):
                state.choose(node)
        residual, node_map, base_map = residual_cover(c, state.chosen)
        remaining = [u for u in range(c.base.n) if u not in state.chosen]
        ell_res = [ell_v[u] for u in remaining]
        report = finishing_blow_hypothesis(residual, ell_res)
        diagnostics = {
            "attempt": attempt,
            "phase1_coloured": len(state.chosen),
            "residual_min_list": min(
                (len(lst) for lst in residual.lists), default=0
            ),
            "residual_max_star": report.max_star_degree,
            "hypothesis_ok": report.ok,
            "violations": list(report.violations[:5]),
        }
        sub_choice = None
        if report.ok:
            sub_choice = solve(residual, seed=seed * 7 + attempt, max_resamples=max_resamples, ell=ell_res)
            certified = True
        elif all(residual.lists[u] for u in range(residual.base.n)):
            try:
                sub_choice = solve(
                    residual, seed=seed * 7 + attempt, max_resamples=max_resamples
                )
            except SizeError:
                sub_choice = None
        if sub_choice is not None:
            colouring = dict(state.chosen)
            inv_base = {new: old for old, new in base_map.items()}
            for u_new, node_new in sub_choice.items():
                colouring[inv_base[u_new]] = node_map[node_new]
            ok, msg = verify_dp_colouring(c, colouring)
            if not ok:
                raise InternalError(f"two-phase produced an invalid colouring: {msg}")
            return TwoPhaseResult(colouring, attempt + 1, certified, diagnostics)
    return TwoPhaseResult(None, max(1, rounds), False, diagnostics)


# ---------------------------------------------------------------------------
# Cover files: {"graph": <edge-list path>, "lists": {...}} for list mode or
# {"graph": <path>, "owner": [...], "cross_edges": [[a, b], ...]} in general.

def load_cover(filename) -> tuple[Cover, tuple[Hashable, ...] | None]:
    """Read a cover file; returns (cover, labels) with labels None in general mode."""
    with open(filename, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"bad cover file: {exc}") from exc
    if "graph" not in data:
        raise FormatError("cover file lacks a 'graph' entry")
    graph_path = os.path.join(os.path.dirname(os.path.abspath(filename)), data["graph"])
    with open(graph_path, "r", encoding="utf-8") as fh:
        g = parse_edge_list(fh.read())
    if "lists" in data:
        lists = []
        for v in range(g.n):
            lists.append(data["lists"].get(str(v), []))
        cover, labels = from_list_assignment(g, lists)
        return cover, labels
    if "owner" in data and "cross_edges" in data:
        cover = Cover(
            g,
            tuple(data["owner"]),
            frozenset(tuple(e) for e in data["cross_edges"]),
        )
        return cover, None
    raise FormatError("cover file needs either 'lists' or 'owner'+'cross_edges'")


def dump_cover(c: Cover, filename, graph_filename) -> None:
    """Write a cover in general form, referencing an edge-list file."""
    data = {
        "graph": os.path.relpath(
            os.path.abspath(graph_filename), os.path.dirname(os.path.abspath(filename))
        ),
        "owner": list(c.owner),
        "cross_edges": sorted([a, b] for a, b in c.cross_edges),
    }
    with open(filename, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
