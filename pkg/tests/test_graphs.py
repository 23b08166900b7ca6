import math

import pytest

from ewcg.errors import CapacityError, ConfigError
from ewcg.graphs import (
    FunctionTable,
    build_bipartite,
    builtin_function,
    power_graph,
    project_ewcg,
)
from ewcg.prob import JointPmf

from test_prob import example_joint

ALPHA = (-2, -1, 0, 1, 2)


def first_fn():
    return builtin_function("first", ALPHA, ALPHA)


def test_bipartite_edges_are_support(spec1):
    bg = build_bipartite(spec1.joint, spec1.function)
    assert bg.num_edges == 10
    for (x1, x2), p in bg.edges.items():
        assert p > 0
        assert spec1.joint.prob(x1, x2) == p


def test_function_table_total_check():
    f = FunctionTable({(0, 0): 1})
    with pytest.raises(ConfigError):
        f.check_total((0, 1), (0,))


def test_builtin_functions():
    f = builtin_function("sum", (1, 2), (10,))
    assert f(2, 10) == 12
    f = builtin_function("product", (2, 3), (4,))
    assert f(3, 4) == 12
    f = builtin_function("modulo", (1, 2), (3,), k=3)
    assert f(2, 3) == 2
    with pytest.raises(ConfigError):
        builtin_function("modulo", (1,), (1,))
    with pytest.raises(ConfigError):
        builtin_function("nope", (1,), (1,))


def test_projection_weights_match_reference(g1):
    expected = {
        (-2, -1): 0.2,
        (-2, 0): 0.3,
        (0, 1): 0.32,
        (1, 2): 0.08,
        (-1, 2): 0.1,
    }
    assert set(g1.edges) == set(expected)
    for k, w in expected.items():
        assert g1.edges[k] == pytest.approx(w, abs=1e-9)


def test_projection_weight_multiset_is_col_marginal(g1, spec1):
    assert sorted(g1.edges.values()) == pytest.approx(
        sorted(spec1.joint.col_marginal().probs), abs=1e-9)


def test_projection_counting_rule(spec1):
    bg = build_bipartite(spec1.joint, spec1.function)
    g = project_ewcg(bg, 1, rule="counting")
    # same edge set, integer weights
    assert set(g.edges) == {(-2, -1), (-2, 0), (0, 1), (1, 2), (-1, 2)}
    assert all(w == int(w) and w >= 1 for w in g.edges.values())


def test_projection_side2_edgeless_for_first(g2_side):
    assert g2_side.edges == {}


def test_projection_constant_function():
    j = example_joint()
    f = FunctionTable.from_callable(lambda a, b: 0, ALPHA, ALPHA)
    g = project_ewcg(build_bipartite(j, f), 1)
    assert g.edges == {}


def test_normalized_weights(g1):
    assert g1.max_weight == pytest.approx(0.32)
    expected = {
        (-2, -1): 0.625,
        (-2, 0): 0.9375,
        (0, 1): 1.0,
        (1, 2): 0.25,
        (-1, 2): 0.3125,
    }
    for (u, v), w in expected.items():
        assert g1.normalized_weight(u, v) == pytest.approx(w, abs=1e-9)


def test_required_disjoint(g1):
    assert g1.required_disjoint(0, 1, 2) == 2          # weight 1.0
    assert g1.required_disjoint(1, 2, 2) == 1          # weight 0.25 -> ceil(0.5)=1
    assert g1.required_disjoint(-2, -1, 2) == 2        # 0.625 -> ceil(1.25)=2
    assert g1.required_disjoint(-2, 1, 2) == 0         # non-edge
    # exact multiples of 1/b do not round up
    assert g1.required_disjoint(1, 2, 4) == 1          # 0.25*4 = 1


def test_unweighted_view(g1):
    u = g1.unweighted()
    assert set(u.edges) == set(g1.edges)
    assert all(w == 1.0 for w in u.edges.values())
    assert u.required_disjoint(1, 2, 3) == 3


def test_power_graph_structure(g1_pow2):
    assert len(g1_pow2.vertices) == 25
    assert len(g1_pow2.edges) == 200
    positive = [w for w in g1_pow2.edges.values() if w > 0]
    assert len(positive) == 100
    assert g1_pow2.max_weight == pytest.approx(0.1024, abs=1e-9)


def test_power_graph_specific_weight(g1_pow2):
    # both coordinates adjacent: weight sums products of distinguishing pairs
    assert g1_pow2.weight((-2, -2), (-1, -1)) == pytest.approx(0.02, abs=1e-9)


def test_power_graph_marginal_is_product(g1, g1_pow2):
    base = dict(zip(g1.vertices, g1.vertex_probs))
    for v, p in zip(g1_pow2.vertices, g1_pow2.vertex_probs):
        assert p == pytest.approx(base[v[0]] * base[v[1]], abs=1e-12)
    assert math.fsum(g1_pow2.vertex_probs) == pytest.approx(1.0, abs=1e-9)


def test_power_graph_or_adjacency(g1, g1_pow2):
    adj = g1.adjacency()
    for (u, v) in g1_pow2.edges:
        assert any(v[i] in adj[u[i]] for i in range(2))
    # non-adjacent tuples stay non-edges
    assert not g1_pow2.has_edge((-2, -2), (1, 1))


def test_power_graph_budget(g1, spec1):
    with pytest.raises(CapacityError):
        power_graph(g1, 3, spec1.joint, spec1.function, budget=100)


def test_power_one_is_identity(g1, spec1):
    assert power_graph(g1, 1, spec1.joint, spec1.function) is g1


def test_projection_bad_side(spec1):
    bg = build_bipartite(spec1.joint, spec1.function)
    with pytest.raises(ConfigError):
        project_ewcg(bg, 3)
    with pytest.raises(ConfigError):
        project_ewcg(bg, 1, rule="fancy")


def test_weight_symmetry(g1):
    for (u, v) in g1.edges:
        assert g1.weight(u, v) == g1.weight(v, u)
