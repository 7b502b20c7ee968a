import math

import pytest

from hcchroma import choose_local_weights, greedy_fractional_colouring, hard_core_oracle
from hcchroma.graph import random_triangle_free

import helpers


@pytest.fixture(scope="session")
def tf_family():
    """All connected triangle-free graphs on up to 9 vertices, by size."""
    return helpers.connected_triangle_free_family(9)


# Sizes and densities chosen so exact set enumeration stays fast; the
# density peaks in the middle because the triangle destruction thins
# denser draws back out.
PIPELINE_SIZES = (
    [(25, 0.30)] * 3
    + [(24, 0.30)] * 3
    + [(22, 0.30)] * 4
    + [(20, 0.30)] * 5
    + [(18, 0.32)] * 5
    + [(16, 0.35)] * 5
    + [(15, 0.35)] * 5
    + [(14, 0.35)] * 5
    + [(12, 0.40)] * 5
    + [(10, 0.40)] * 5
    + [(8, 0.45)] * 5
)

PIPELINE_EPSILONS = (1.0, 2.0, 4.0)


def pipeline_graphs():
    """50 seeded random triangle-free graphs without isolated vertices."""
    graphs = []
    for idx, (n, p) in enumerate(PIPELINE_SIZES):
        seed = 1000 + idx
        while True:
            g = random_triangle_free(n, p, seed)
            if g.n and min(g.degree(v) for v in range(g.n)) >= 1:
                break
            seed += 10_000
        graphs.append(g)
    return graphs


@pytest.fixture(scope="session")
def pipeline_runs():
    """The full weight-selection + greedy-colouring pipeline on 50 graphs."""
    runs = []
    for g in pipeline_graphs():
        for eps in PIPELINE_EPSILONS:
            lam, weights = choose_local_weights(g, eps)
            colouring = greedy_fractional_colouring(g, weights, hard_core_oracle(lam))
            runs.append((g, eps, lam, weights, colouring))
    return runs
