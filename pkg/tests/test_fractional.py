import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hcchroma import (
    HypothesisError,
    InputError,
    StateError,
    complete_bipartite,
    cycle,
    edgeless,
    petersen,
    random_triangle_free,
    star,
)
from hcchroma.fractional import (
    FractionalColouring,
    LocalWeights,
    SetDistribution,
    alpha_from_beta,
    choose_local_weights,
    extract_independent_set,
    greedy_fractional_colouring,
    hard_core_oracle,
    interval_measure,
    table_oracle,
    uniform_set_oracle,
    validate_colouring,
    vertex_interval_bound,
)
from hcchroma.hardcore import enumerate_stats, hcm_lower_bound

K1 = edgeless(1)
K2 = complete_bipartite(1, 1)
C5_MAX_SETS = [(0, 2), (1, 3), (2, 4), (0, 3), (1, 4)]


def weights_alpha0(g, a0):
    return LocalWeights.from_alpha(g, [(a0, 0.0)] * g.n)


def test_hand_trace_k1():
    col = greedy_fractional_colouring(K1, LocalWeights.from_alpha(K1, [(2.0,)]), hard_core_oracle(1.0))
    assert col.taus == (2.0,)
    assert abs(col.total - 2.0) <= 1e-9
    assert abs(col.set_measure(()) - 1.0) <= 1e-9
    assert abs(col.set_measure((0,)) - 1.0) <= 1e-9
    assert abs(col.vertex_measure(0) - 1.0) <= 1e-9
    # the vertex is coloured by one unit-length block inside [0, 2)
    ivs = col.vertex_intervals(0)
    assert len(ivs) == 1 and 0.0 <= ivs[0][0] and ivs[0][1] <= 2.0


def test_hand_trace_k2():
    col = greedy_fractional_colouring(K2, weights_alpha0(K2, 3.0), hard_core_oracle(1.0))
    assert col.taus == (3.0,)
    assert abs(col.total - 3.0) <= 1e-9
    for s in ((), (0,), (1,)):
        assert abs(col.set_measure(s) - 1.0) <= 1e-9
    # adjacent vertices never share measure
    i0 = col.vertex_intervals(0)
    i1 = col.vertex_intervals(1)
    for a1, b1 in i0:
        for a2, b2 in i1:
            assert min(b1, b2) <= max(a1, a2)


def test_hand_trace_c5_uniform():
    g = cycle(5)
    col = greedy_fractional_colouring(
        g, weights_alpha0(g, 2.5), uniform_set_oracle(C5_MAX_SETS)
    )
    assert col.taus == (2.5,)
    assert abs(col.total - 2.5) <= 1e-9
    for s in C5_MAX_SETS:
        assert abs(col.set_measure(s) - 0.5) <= 1e-9
    for v in range(5):
        assert abs(col.vertex_measure(v) - 1.0) <= 1e-9


def test_validate_examples():
    g = cycle(5)
    col = greedy_fractional_colouring(
        g, weights_alpha0(g, 2.5), uniform_set_oracle(C5_MAX_SETS)
    )
    assert validate_colouring(g, col, 2.5 + 1e-9).ok
    bad = validate_colouring(g, col, 0.0)
    assert not bad.ok and len(bad.failures) >= 5

    col2 = greedy_fractional_colouring(K2, weights_alpha0(K2, 3.0), hard_core_oracle(1.0))
    assert validate_colouring(K2, col2, 3.0).ok


def test_extract_examples():
    g = cycle(5)
    col = greedy_fractional_colouring(
        g, weights_alpha0(g, 2.5), uniform_set_oracle(C5_MAX_SETS)
    )
    picked = extract_independent_set(g, col)
    assert len(picked) == 2
    assert picked == (0, 2)  # lexicographically smallest maximum class

    col2 = greedy_fractional_colouring(K2, weights_alpha0(K2, 3.0), hard_core_oracle(1.0))
    assert len(extract_independent_set(K2, col2)) == 1

    g4 = edgeless(4)
    manual = FractionalColouring({(0, 1, 2, 3): ((0.0, 1.0),)}, 1.0)
    assert extract_independent_set(g4, manual) == (0, 1, 2, 3)


def test_extract_requires_completion():
    g = edgeless(2)
    partial = FractionalColouring({(0, 1): ((0.0, 0.5),)}, 0.5)
    with pytest.raises(StateError):
        extract_independent_set(g, partial)


def test_hypothesis_violation_identifies_vertex():
    # uniform over the empty set gives zero occupancy everywhere
    g = K2
    with pytest.raises(HypothesisError) as err:
        greedy_fractional_colouring(g, weights_alpha0(g, 3.0), uniform_set_oracle([()]))
    assert "vertex" in str(err.value)


def test_choose_local_weights_validation():
    with pytest.raises(InputError):
        choose_local_weights(cycle(5), 0.0)
    with pytest.raises(InputError):
        choose_local_weights(cycle(5), 4.5)


def test_choose_local_weights_identities():
    for eps in (1.0, 2.0, 4.0):
        for g in (cycle(5), star(3), petersen(), random_triangle_free(14, 0.3, 4)):
            lam, weights = choose_local_weights(g, eps)
            assert lam == eps / 2
            for v in range(g.n):
                a, b = weights.alpha[v]
                d = g.degree(v)
                if d == 0:
                    continue
                assert abs(hcm_lower_bound(lam, a, b) - 1.0) <= 1e-9
                assert abs(weights.gamma[v] - vertex_interval_bound(lam, d)) <= 1e-9


def test_weight_perturbation_never_improves():
    lam = 1.0
    for d in (1, 2, 3, 5, 10, 25, 100):
        beta = choose_local_weights(star(d), 2.0)[1].alpha[0][1]
        best = alpha_from_beta(lam, beta) + beta * d
        for factor in (0.99, 1.01):
            b2 = beta * factor
            assert alpha_from_beta(lam, b2) + b2 * d >= best - 1e-12


def test_isolated_vertices_get_feasible_weights():
    g = edgeless(3)
    lam, weights = choose_local_weights(g, 2.0)
    col = greedy_fractional_colouring(g, weights, hard_core_oracle(lam))
    assert validate_colouring(g, col, [vertex_interval_bound(lam, 0)] * 3).ok


def test_empty_graph_colours_trivially():
    col = greedy_fractional_colouring(
        edgeless(0), LocalWeights.from_alpha(edgeless(0), []), hard_core_oracle(1.0)
    )
    assert col.total == 0.0 and col.parts == {}


def test_set_distribution_validation():
    with pytest.raises(InputError):
        SetDistribution(((0,),), (0.5,))  # does not sum to 1
    with pytest.raises(InputError):
        SetDistribution(((1,), (0,)), (0.5, 0.5))  # not canonical order


def test_table_oracle_restricts_by_intersection():
    from hcchroma import induced_subgraph, path

    g = path(3)
    oracle = table_oracle({(0, 2): 1.0, (1,): 1.0})
    sub, _ = induced_subgraph(g, [0, 1])
    dist = oracle(sub, (0, 1))
    assert dist.sets == ((0,), (1,))
    assert dist.probs == (0.5, 0.5)


def test_general_r_weights_run_end_to_end():
    # distance-2 weight term: alpha = (5, 0, 1) keeps the hypothesis valid
    # on every induced subgraph of C5 at fugacity 1 (worst case is the
    # centre of an induced P3, occupancy exactly 1/5)
    g = cycle(5)
    weights = LocalWeights.from_alpha(g, [(5.0, 0.0, 1.0)] * 5)
    assert weights.r == 2
    assert all(abs(gv - 7.0) <= 1e-12 for gv in weights.gamma)
    col = greedy_fractional_colouring(g, weights, hard_core_oracle(1.0))
    assert validate_colouring(g, col, list(weights.gamma)).ok
    assert len(col.taus) <= g.n


def test_local_weights_gamma_recomputable():
    g = petersen()
    _, weights = choose_local_weights(g, 2.0)
    rebuilt = LocalWeights.from_alpha(g, weights.alpha)
    assert all(abs(a - b) <= 1e-12 for a, b in zip(rebuilt.gamma, weights.gamma))


def test_greedy_rejects_mismatched_weights():
    g = cycle(5)
    short = LocalWeights.from_alpha(edgeless(2), [(2.0,), (2.0,)])
    with pytest.raises(InputError):
        greedy_fractional_colouring(g, short, hard_core_oracle(1.0))


def test_measure_accounting_and_cap():
    for seed in range(4):
        g = random_triangle_free(10, 0.35, seed)
        lam, weights = choose_local_weights(g, 2.0)
        col = greedy_fractional_colouring(g, weights, hard_core_oracle(lam))
        assert len(col.taus) <= g.n
        assert abs(col.total - math.fsum(col.taus)) <= 1e-9
        for v in range(g.n):
            mv = col.vertex_measure(v)
            assert mv <= 1.0 + 1e-7
            assert mv >= 1.0 - 1e-9
        # interval blocks tile [0, total) without overlap
        flat = sorted(iv for ivs in col.parts.values() for iv in ivs)
        assert abs(flat[0][0]) <= 1e-12
        for (a1, b1), (a2, b2) in zip(flat, flat[1:]):
            assert abs(a2 - b1) <= 1e-9
        assert abs(flat[-1][1] - col.total) <= 1e-9


def test_json_round_trip():
    g = cycle(5)
    col = greedy_fractional_colouring(
        g, weights_alpha0(g, 2.5), uniform_set_oracle(C5_MAX_SETS)
    )
    data = col.to_json_dict()
    back = FractionalColouring.from_json_dict(data)
    assert back.parts == col.parts
    assert back.total == col.total


@settings(max_examples=15, deadline=None)
@given(
    st.integers(min_value=2, max_value=8),
    st.floats(min_value=0.1, max_value=0.6),
    st.integers(min_value=0, max_value=1000),
    st.sampled_from([1.0, 2.0, 4.0]),
)
def test_pipeline_property_small(n, p, seed, eps):
    g = random_triangle_free(n, p, seed)
    lam, weights = choose_local_weights(g, eps)
    col = greedy_fractional_colouring(g, weights, hard_core_oracle(lam))
    assert len(col.taus) <= g.n
    bounds = [vertex_interval_bound(lam, g.degree(v)) for v in range(g.n)]
    assert validate_colouring(g, col, bounds).ok
