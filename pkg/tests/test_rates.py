import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ewcg.coloring import FoldedColoring, validate_folded
from ewcg.errors import ConfigError
from ewcg.fixtures import (
    EXAMPLE1_SIDE1_CLASSES,
    EXAMPLE1_SIDE2_CLASSES,
    load_fixture,
)
from ewcg.prob import Pmf, entropy
from ewcg.rates import (
    ccc_check,
    ccc_refine,
    color_pmf,
    conditional_color_entropy,
    entropy_rate,
    joint_color_pmf,
    rate_region,
    savings,
    subset_entropy_average,
)

from test_prob import example_joint

ALPHA = (-2, -1, 0, 1, 2)


def side1_min_coloring():
    slots = {}
    for col, cls in enumerate(EXAMPLE1_SIDE1_CLASSES):
        for v in cls:
            slots[v] = (col,)
    return FoldedColoring(len(EXAMPLE1_SIDE1_CLASSES), 1, slots)


def identity_coloring():
    return FoldedColoring(5, 1, {v: (i,) for i, v in enumerate(ALPHA)})


def test_color_pmf_weighted_fixture(g1):
    fx = load_fixture("weighted_5_2")
    cp = color_pmf(fx.coloring, g1.marginal(), g1.vertices)
    assert sorted(cp.pmf.probs) == pytest.approx(sorted(fx.reference_pmf), abs=1e-9)
    assert cp.entropy() / 2 == pytest.approx(fx.reference_rate, abs=5e-3)


def test_entropy_rate_matches_fixture(g1):
    fx = load_fixture("weighted_6_3")
    rate = entropy_rate(fx.coloring, g1.marginal(), 1, g1.vertices)
    assert rate == pytest.approx(fx.reference_rate, abs=5e-3)
    assert rate == pytest.approx(
        color_pmf(fx.coloring, g1.marginal(), g1.vertices).entropy() / 3, abs=1e-12)


def test_entropy_rate_rejects_bad_power(g1):
    fx = load_fixture("weighted_5_2")
    with pytest.raises(ConfigError):
        entropy_rate(fx.coloring, g1.marginal(), 0, g1.vertices)


def test_color_pmf_length_mismatch(g1):
    fx = load_fixture("weighted_5_2")
    with pytest.raises(ConfigError):
        color_pmf(fx.coloring, Pmf.uniform(3), g1.vertices)


def test_joint_color_pmf_sums_to_one():
    j = example_joint()
    jcp = joint_color_pmf(side1_min_coloring(), identity_coloring(), j)
    assert math.fsum(jcp.values()) == pytest.approx(1.0, abs=1e-12)


def test_joint_color_pmf_singleton_classes_recover_joint():
    j = example_joint()
    ident = identity_coloring()
    jcp = joint_color_pmf(ident, ident, j)
    expected = {(frozenset({i}), frozenset({k})): j.matrix[i][k]
                for i in range(5) for k in range(5) if j.matrix[i][k] > 0}
    assert set(jcp) == set(expected)
    for key, p in expected.items():
        assert jcp[key] == pytest.approx(p, abs=1e-12)


def test_joint_color_pmf_direct_summation_oracle():
    j = example_joint()
    c1, c2 = side1_min_coloring(), identity_coloring()
    jcp = joint_color_pmf(c1, c2, j)
    oracle: dict = {}
    for x1, x2, p in j.support():
        key = (c1.color_set(x1), c2.color_set(x2))
        oracle[key] = oracle.get(key, 0.0) + p
    assert set(jcp) == set(oracle)
    for key in oracle:
        assert jcp[key] == pytest.approx(oracle[key], abs=1e-12)


def test_conditional_color_entropy_reference_value():
    # corner value for the side-1 minimum-entropy coloring given the
    # identity side-2 coloring
    j = example_joint()
    h = conditional_color_entropy(side1_min_coloring(), identity_coloring(), j)
    assert h == pytest.approx(0.9609076311523359, abs=1e-9)


def test_conditional_entropy_zero_given_identity_of_self():
    j = example_joint()
    ident = identity_coloring()
    # side-2 colors determine side-1 colors only when classes collapse;
    # but identity given identity is exactly H(X1|X2)
    h = conditional_color_entropy(ident, ident, j)
    h_joint = entropy(Pmf.normalized([p for _, _, p in j.support()]))
    h2 = entropy(j.col_marginal())
    assert h == pytest.approx(h_joint - h2, abs=1e-12)


def test_conditional_at_most_marginal():
    j = example_joint()
    c1 = side1_min_coloring()
    h_cond = conditional_color_entropy(c1, identity_coloring(), j)
    h_marg = color_pmf(c1, j.row_marginal(), ALPHA).entropy()
    assert h_cond <= h_marg + 1e-9


def test_ccc_check_safe_configuration(spec1):
    j = example_joint()
    assert ccc_check(side1_min_coloring(), identity_coloring(), j,
                     spec1.function) is None


def test_ccc_check_side2_classes_safe(spec1):
    j = example_joint()
    slots = {}
    for col, cls in enumerate(EXAMPLE1_SIDE2_CLASSES):
        for v in cls:
            slots[v] = (col,)
    c2 = FoldedColoring(len(EXAMPLE1_SIDE2_CLASSES), 1, slots)
    assert ccc_check(side1_min_coloring(), c2, j, spec1.function) is None


def test_ccc_check_witness(spec1):
    j = example_joint()
    # collapsing everything on side 1 merges distinct function values
    c1 = FoldedColoring(1, 1, {v: (0,) for v in ALPHA})
    wit = ccc_check(c1, identity_coloring(), j, spec1.function)
    assert wit is not None
    key, (a1, a2, fa), (b1, b2, fb) = wit
    assert fa != fb
    assert spec1.function(a1, a2) == fa
    assert spec1.function(b1, b2) == fb


def test_ccc_refine_fixes_witness(spec1):
    j = example_joint()
    c1 = side1_min_coloring()
    # one giant side-2 class: ambiguous until refined
    c2 = FoldedColoring(1, 1, {v: (0,) for v in ALPHA})
    assert ccc_check(c1, c2, j, spec1.function) is not None
    refined = ccc_refine(c1, c2, j, spec1.function)
    assert ccc_check(c1, refined, j, spec1.function) is None
    assert refined.fold == 1


def test_ccc_refine_unresolvable(spec1):
    from ewcg.errors import AmbiguousLookupError

    j = example_joint()
    # merging -2 and -1 on side 1 is ambiguous inside a single column
    # (both pair with x2 = -2), which no side-2 split can fix
    bad_c1 = FoldedColoring(2, 1, {-2: (0,), -1: (0,), 0: (1,), 1: (1,), 2: (0,)})
    c2 = identity_coloring()
    assert ccc_check(bad_c1, c2, j, spec1.function) is not None
    with pytest.raises(AmbiguousLookupError):
        ccc_refine(bad_c1, c2, j, spec1.function)


def test_subset_entropy_average_boundaries(g1):
    fx = load_fixture("weighted_6_3")
    c = fx.coloring
    marginal = g1.marginal()
    vals = [subset_entropy_average(c, marginal, g1.vertices, k)
            for k in range(1, c.fold + 1)]
    # Han's inequality: average per-slot entropy nonincreasing in subset size
    assert all(vals[i] >= vals[i + 1] - 1e-9 for i in range(len(vals) - 1))
    # the mixture color PMF entropy dominates the average single-slot entropy
    assert vals[0] <= color_pmf(c, marginal, g1.vertices).entropy() + 1e-9
    assert vals[-1] >= 0.0


def test_subset_entropy_bad_k(g1):
    fx = load_fixture("weighted_5_2")
    with pytest.raises(ConfigError):
        subset_entropy_average(fx.coloring, g1.marginal(), g1.vertices, 3)


def test_savings():
    assert savings(2.0, 1.0) == pytest.approx(0.5)
    assert savings(1.3458, 1.3458) == 0.0
    with pytest.raises(ConfigError):
        savings(0.0, 1.0)


def test_rate_region_n1_b1(spec1):
    rep = rate_region(spec1.joint, spec1.function, n=1, b=1, mode="exact")
    assert rep.rate_1 == pytest.approx(1.3458, abs=1e-3)
    assert rep.rate_2 == 0.0          # side-2 graph is edgeless for f=first
    assert rep.traditional_rate_1 == rep.rate_1
    assert rep.savings_1 == 0.0
    from fractions import Fraction
    assert rep.chi_f_1 == Fraction(5, 2) and rep.chi_f_2 == 1
    assert rep.complete
    assert rep.sum_rate_bound == pytest.approx(3.0961, abs=1e-3)


def test_rate_region_b2_improves(spec1):
    rep1 = rate_region(spec1.joint, spec1.function, n=1, b=1, mode="exact")
    rep2 = rate_region(spec1.joint, spec1.function, n=1, b=2, mode="exact")
    assert rep2.rate_1 <= rep1.rate_1 + 1e-9
    assert rep2.savings_1 > 0
    # the exact search finds a valid 4:2 side-1 coloring (rate 0.9967)
    assert rep2.b == 2 and rep2.a_1 >= 4


def test_rate_region_joint_dominates_parts(spec1):
    rep = rate_region(spec1.joint, spec1.function, n=1, b=1, mode="exact")
    # H(c1, c2) >= H(c1) and H(c1, c2) >= H(c2)
    assert rep.joint_rate >= rep.rate_1 - 1e-9
    assert rep.joint_rate >= rep.rate_2 - 1e-9
    assert rep.conditional_rate_1 <= rep.rate_1 + 1e-9
