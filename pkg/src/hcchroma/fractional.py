"""Greedy fractional colouring with a pluggable distribution oracle.

A fractional colouring assigns pairwise disjoint right-half-open real
intervals to independent sets so that every vertex accumulates total
measure at least 1 across the sets containing it.  The greedy algorithm
repeatedly asks an oracle for a probability distribution on the
independent sets of the surviving induced subgraph, adds tau units of
measure split across the sets in proportion to their probabilities, and
removes saturated vertices.  With the locally optimised weights computed
here from per-vertex degrees, feeding in the exact hard-core distribution
colours every vertex v of a triangle-free graph inside
[0, (1 + lam)/lam * exp(W(deg(v) * log(1 + lam)))).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from . import hardcore
from .errors import HypothesisError, InputError, InternalError, StateError
from .graph import Graph, VertexSet, induced_subgraph, neighbourhood_at_distance, vertex_set
from .numerics import lambert_w

Interval = tuple[float, float]

SATURATE_TOL = 1e-9
HYPOTHESIS_TOL = 1e-9
CAP_TOL = 1e-12


def interval_measure(intervals: Iterable[Interval]) -> float:
    return math.fsum(b - a for a, b in intervals)


@dataclass(frozen=True)
class SetDistribution:
    """Explicit probability distribution on independent sets of a subgraph.

    ``sets`` holds local vertex ids of the subgraph handed to the oracle,
    strictly increasing in the canonical (lexicographic) order, and
    ``probs`` the matching probabilities.
    """

    sets: tuple[VertexSet, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        if len(self.sets) != len(self.probs):
            raise InputError("sets and probs must have equal length")
        if any(p < 0 for p in self.probs):
            raise InputError("probabilities must be non-negative")
        if abs(math.fsum(self.probs) - 1.0) > 1e-9:
            raise InputError("probabilities must sum to 1")
        for a, b in zip(self.sets, self.sets[1:]):
            if not a < b:
                raise InputError("sets must be strictly increasing in canonical order")

    def occupancy(self, n: int) -> list[float]:
        occ = [0.0] * n
        for s, p in zip(self.sets, self.probs):
            for v in s:
                occ[v] += p
        return occ


DistributionOracle = Callable[[Graph, tuple[int, ...]], SetDistribution]


def hard_core_oracle(lam: float, cutoff: int = hardcore.DEFAULT_CUTOFF) -> DistributionOracle:
    """Oracle serving the exact hard-core distribution at fugacity ``lam``."""

    def oracle(h: Graph, old_ids: tuple[int, ...]) -> SetDistribution:
        masks, probs = hardcore.exact_distribution(h, lam, cutoff=cutoff)
        sets = tuple(hardcore.mask_to_vertex_set(m) for m in masks)
        return SetDistribution(sets, tuple(probs))

    return oracle


def table_oracle(table: Mapping[VertexSet, float]) -> DistributionOracle:
    """Oracle from an explicit weight table on independent sets of G.

    On a subgraph the distribution is the push-forward under intersection
    with the surviving vertices; weights of sets with equal restriction
    merge.  Weights are normalised, so any positive table works.
    """
    entries = [(vertex_set(s), float(w)) for s, w in table.items()]
    total = math.fsum(w for _, w in entries)
    if not total > 0:
        raise InputError("table weights must have positive total")

    def oracle(h: Graph, old_ids: tuple[int, ...]) -> SetDistribution:
        local = {old: new for new, old in enumerate(old_ids)}
        merged: dict[VertexSet, float] = {}
        for s, w in entries:
            restricted = tuple(local[v] for v in s if v in local)
            merged[restricted] = merged.get(restricted, 0.0) + w / total
        sets = tuple(sorted(merged))
        return SetDistribution(sets, tuple(merged[s] for s in sets))

    return oracle


def uniform_set_oracle(sets: Iterable[Iterable[int]]) -> DistributionOracle:
    """Oracle for the uniform distribution over the given independent sets."""
    sets = list(sets)
    if not sets:
        raise InputError("need at least one set")
    table: dict[VertexSet, float] = {}
    for s in sets:
        key = vertex_set(s)
        table[key] = table.get(key, 0.0) + 1.0
    return table_oracle(table)


@dataclass(frozen=True)
class LocalWeights:
    """Per-vertex distance-weight lists (alpha_j(v)) with derived totals.

    ``alpha[v]`` has length r + 1 and ``gamma[v]`` equals
    sum_j alpha_j(v) * |N^j(v)| in the ambient graph; gamma caps the total
    measure the greedy algorithm may spend while v is unsaturated.
    """

    r: int
    alpha: tuple[tuple[float, ...], ...]
    gamma: tuple[float, ...]

    @classmethod
    def from_alpha(cls, g: Graph, alpha: Sequence[Sequence[float]]) -> "LocalWeights":
        if len(alpha) != g.n:
            raise InputError("need one weight list per vertex")
        if g.n == 0:
            return cls(0, (), ())
        r = len(alpha[0]) - 1
        if r < 0 or any(len(a) != r + 1 for a in alpha):
            raise InputError("all weight lists must share length r + 1")
        gamma = tuple(
            math.fsum(
                alpha[v][j] * len(neighbourhood_at_distance(g, v, j))
                for j in range(r + 1)
            )
            for v in range(g.n)
        )
        return cls(r, tuple(tuple(map(float, a)) for a in alpha), gamma)


@dataclass(frozen=True)
class FractionalColouring:
    """Mapping from independent sets to disjoint half-open intervals.

    ``parts`` maps each independent set (sorted vertex tuple, possibly the
    empty tuple) to its intervals; across all sets the intervals are
    pairwise disjoint and tile [0, total).  ``taus`` records the measure
    added per greedy iteration.
    """

    parts: Mapping[VertexSet, tuple[Interval, ...]]
    total: float
    taus: tuple[float, ...] = field(default=(), compare=False)

    def vertex_intervals(self, v: int) -> list[Interval]:
        out = [iv for s, ivs in self.parts.items() if v in s for iv in ivs]
        out.sort()
        return out

    def vertex_measure(self, v: int) -> float:
        return interval_measure(self.vertex_intervals(v))

    def set_measure(self, s: Iterable[int]) -> float:
        return interval_measure(self.parts.get(vertex_set(s), ()))

    def to_json_dict(self) -> dict:
        return {
            "total": self.total,
            "parts": [
                {"set": list(s), "intervals": [[a, b] for a, b in self.parts[s]]}
                for s in sorted(self.parts)
            ],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "FractionalColouring":
        parts = {
            tuple(entry["set"]): tuple((a, b) for a, b in entry["intervals"])
            for entry in data["parts"]
        }
        return FractionalColouring(parts, float(data["total"]))


def _oracle_scores(h: Graph, occ: Sequence[float], alpha_rows, r: int) -> list[float]:
    """Per-vertex value of sum_j alpha_j(v) * E|N^j_H(v) /\\ I| on the subgraph."""
    scores = []
    for v in range(h.n):
        s = alpha_rows[v][0] * occ[v]
        for j in range(1, r + 1):
            layer = h.adjacency[v] if j == 1 else neighbourhood_at_distance(h, v, j)
            if layer:
                s += alpha_rows[v][j] * math.fsum(occ[u] for u in layer)
        scores.append(s)
    return scores


def greedy_fractional_colouring(
    g: Graph, weights: LocalWeights, oracle: DistributionOracle
) -> FractionalColouring:
    """Run the greedy measure-spreading loop until every vertex saturates.

    Each iteration queries the oracle on the induced subgraph H of the
    unsaturated vertices, checks the hypothesis
    sum_j alpha_j(v) * E|N^j_H(v) /\\ I_H| >= 1 for every v in H, takes

        tau = min( min_v (1 - w(v)) / Pr(v in I_H),
                   min_v gamma(v) - w(G) ),

    slices [w(G), w(G) + tau) into consecutive blocks of length
    Pr(I_H = I) * tau in the canonical set order (the empty set receives
    measure but colours nobody), and removes vertices with w(v) >= 1 up to
    tolerance.  Termination within |V(G)| iterations is guaranteed while
    the hypothesis holds; exceeding that is an internal error.
    """
    n = g.n
    if weights.r < 0 or (n and len(weights.alpha) != n):
        raise InputError("weights do not match the graph")
    parts: dict[VertexSet, list[Interval]] = {}
    w_total = 0.0
    w_vertex = [0.0] * n
    taus: list[float] = []
    live = [v for v in range(n)]
    iterations = 0
    while live:
        iterations += 1
        if iterations > n:
            raise InternalError(
                "greedy colouring exceeded |V(G)| iterations; termination "
                "argument violated"
            )
        h, _ = induced_subgraph(g, live)
        old_ids = tuple(live)
        dist = oracle(h, old_ids)
        occ = dist.occupancy(h.n)
        alpha_rows = [weights.alpha[v] for v in old_ids]
        scores = _oracle_scores(h, occ, alpha_rows, weights.r)
        for i, s in enumerate(scores):
            if s < 1.0 - HYPOTHESIS_TOL:
                raise HypothesisError(
                    f"oracle distribution violates the weight hypothesis at "
                    f"vertex {old_ids[i]}: score {s!r} < 1"
                )
        tau_list = min(
            (1.0 - w_vertex[old]) / occ[i] if occ[i] > 0.0 else math.inf
            for i, old in enumerate(old_ids)
        )
        tau_gamma = min(weights.gamma[old] - w_total for old in old_ids)
        tau = min(tau_list, tau_gamma)
        if not math.isfinite(tau) or tau <= 0.0:
            raise InternalError(f"degenerate measure increment tau={tau!r}")
        start = w_total
        for s_local, p in zip(dist.sets, dist.probs):
            length = p * tau
            if length <= 0.0:
                continue
            end = start + length
            global_set = tuple(old_ids[i] for i in s_local)
            parts.setdefault(global_set, []).append((start, end))
            start = end
        w_total = start
        for i, old in enumerate(old_ids):
            w_vertex[old] += occ[i] * tau
            if w_vertex[old] > 1.0 + CAP_TOL:
                raise InternalError(
                    f"vertex {old} accumulated measure {w_vertex[old]!r} > 1"
                )
        taus.append(tau)
        live = [v for v in live if w_vertex[v] < 1.0 - SATURATE_TOL]
    return FractionalColouring(
        {s: tuple(ivs) for s, ivs in parts.items()}, w_total, tuple(taus)
    )


def alpha_from_beta(lam: float, beta_v: float) -> float:
    """The alpha making the occupancy lower bound equal exactly 1."""
    if not (lam > 0 and beta_v > 0):
        raise InputError("lam and beta_v must be positive")
    log1l = math.log1p(lam)
    return beta_v * (1.0 + lam) ** ((1.0 + lam) / (beta_v * lam)) / (math.e * log1l)


def vertex_interval_bound(lam: float, degree: int) -> float:
    """Measure cap (1 + lam)/lam * exp(W(degree * log(1 + lam))).

    Equals alpha_v + beta_v * degree at the optimising weights; degree 0
    gives (1 + lam)/lam.
    """
    if not lam > 0:
        raise InputError("lam must be positive")
    return (1.0 + lam) / lam * math.exp(lambert_w(degree * math.log1p(lam)))


def choose_local_weights(g: Graph, epsilon: float) -> tuple[float, LocalWeights]:
    """Degree-local weights minimising the per-vertex measure cap.

    Sets lam = epsilon / 2 and, for each vertex of positive degree,

        beta_v  = (1 + lam)/lam * log(1 + lam) / (1 + W(deg(v) log(1 + lam)))
        alpha_v = beta_v * (1 + lam)^((1 + lam)/(beta_v lam)) / (e log(1 + lam))

    so that the hard-core occupancy bound equals 1 exactly and
    alpha_v + beta_v deg(v) = (1 + lam)/lam * e^(W(deg(v) log(1 + lam))).
    Isolated vertices get alpha_v = beta_v = (1 + lam)/lam, the smallest
    weight satisfying the greedy hypothesis when the oracle is the
    hard-core model.
    """
    if not 0.0 < epsilon <= 4.0:
        raise InputError("epsilon must lie in (0, 4]")
    lam = epsilon / 2.0
    log1l = math.log1p(lam)
    alpha: list[tuple[float, float]] = []
    for v in range(g.n):
        d = g.degree(v)
        if d == 0:
            a = b = (1.0 + lam) / lam
        else:
            b = (1.0 + lam) / lam * log1l / (1.0 + lambert_w(d * log1l))
            a = alpha_from_beta(lam, b)
        alpha.append((a, b))
    return lam, LocalWeights.from_alpha(g, alpha)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validating a fractional colouring against a bound."""

    ok: bool
    failures: tuple[str, ...]
    vertex_measure: tuple[float, ...]
    vertex_slack: tuple[float, ...]

    @property
    def worst_slack(self) -> float:
        return min(self.vertex_slack) if self.vertex_slack else math.inf


def validate_colouring(g: Graph, col: FractionalColouring, bound) -> ValidationReport:
    """Check every colouring invariant plus containment w(v) in [0, bound(v)).

    ``bound`` is a scalar or a per-vertex sequence.  The report lists every
    violation found; the bound check tolerates 1e-9 of floating-point
    slack, so callers wanting a strict comparison can tighten the bound
    themselves.  Slack per vertex is bound(v) minus the largest endpoint
    coloured with v.
    """
    if isinstance(bound, (int, float)):
        bounds = [float(bound)] * g.n
    else:
        bounds = [float(b) for b in bound]
        if len(bounds) != g.n:
            raise InputError("need one bound per vertex")
    failures: list[str] = []
    adj_masks = g.adjacency_masks
    flat: list[Interval] = []
    per_vertex: list[list[Interval]] = [[] for _ in range(g.n)]
    for s, ivs in col.parts.items():
        mask = 0
        for v in s:
            if adj_masks[v] & mask:
                failures.append(f"part {s} is not independent")
                break
            mask |= 1 << v
        for a, b in ivs:
            if not b > a:
                failures.append(f"degenerate interval [{a}, {b}) on part {s}")
            flat.append((a, b))
        for v in s:
            per_vertex[v].extend(ivs)
    for ivs in per_vertex:
        ivs.sort()
    flat.sort()
    if flat:
        if abs(flat[0][0]) > 1e-9:
            failures.append(f"colouring does not start at 0 (starts {flat[0][0]!r})")
        for (a1, b1), (a2, b2) in zip(flat, flat[1:]):
            if a2 < b1 - 1e-12:
                failures.append(f"overlapping intervals [{a1},{b1}) and [{a2},{b2})")
            elif a2 > b1 + 1e-9:
                failures.append(f"gap between {b1!r} and {a2!r}")
        if abs(flat[-1][1] - col.total) > 1e-9:
            failures.append(
                f"intervals end at {flat[-1][1]!r}, not at total {col.total!r}"
            )
    elif col.total > 1e-9:
        failures.append("no intervals but positive total")
    measures = []
    slacks = []
    for v in range(g.n):
        ivs = per_vertex[v]
        mv = interval_measure(ivs)
        measures.append(mv)
        if mv < 1.0 - SATURATE_TOL:
            failures.append(f"vertex {v} has measure {mv!r} < 1")
        if ivs and ivs[0][0] < -1e-12:
            failures.append(f"vertex {v} coloured below 0")
        top = ivs[-1][1] if ivs else 0.0
        slack = bounds[v] - top
        slacks.append(slack)
        if slack < -1e-9:
            failures.append(
                f"vertex {v} coloured up to {top!r}, beyond bound {bounds[v]!r}"
            )
    for u, v in g.edges():
        ius = per_vertex[u]
        ivs = per_vertex[v]
        i = j = 0
        while i < len(ius) and j < len(ivs):
            a1, b1 = ius[i]
            a2, b2 = ivs[j]
            if min(b1, b2) - max(a1, a2) > 1e-12:
                failures.append(f"adjacent vertices {u},{v} share colour measure")
                break
            if b1 <= b2:
                i += 1
            else:
                j += 1
    return ValidationReport(not failures, tuple(failures), tuple(measures), tuple(slacks))


def extract_independent_set(g: Graph, col: FractionalColouring) -> VertexSet:
    """Largest colour class of a complete colouring.

    Sweeps the elementary intervals of the colouring (each belongs to a
    single independent set because interval blocks are disjoint) and
    returns the largest class, breaking ties towards the lexicographically
    smallest set.  The averaging argument guarantees size at least
    n / total, up to the completion tolerance.
    """
    measures = [0.0] * g.n
    for s, ivs in col.parts.items():
        mv = interval_measure(ivs)
        for v in s:
            measures[v] += mv
    for v, mv in enumerate(measures):
        if mv < 1.0 - SATURATE_TOL:
            raise StateError(f"colouring incomplete at vertex {v}: measure {mv!r}")
    best: VertexSet | None = None
    for s in sorted(col.parts):
        if interval_measure(col.parts[s]) <= 0.0:
            continue
        if best is None or len(s) > len(best):
            best = s
    if best is None:
        if g.n == 0:
            return ()
        raise StateError("colouring has no positive-measure part")
    for i, u in enumerate(best):
        for v in best[i + 1:]:
            if v in g.adjacency[u]:
                raise InternalError(f"extracted class has edge {u}-{v}")
    return best
