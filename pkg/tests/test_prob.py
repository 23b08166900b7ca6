import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ewcg.errors import ValidationError
from ewcg.prob import (
    JointPmf,
    Pmf,
    conditional_entropy,
    entropy,
    joint_entropy,
    marginals,
)

EXAMPLE_ROWS = [
    [0.1, 0.1, 0.0, 0.0, 0.0],
    [0.1, 0.0, 0.0, 0.0, 0.05],
    [0.0, 0.2, 0.12, 0.0, 0.0],
    [0.0, 0.0, 0.2, 0.04, 0.0],
    [0.0, 0.0, 0.0, 0.04, 0.05],
]


def example_joint():
    alpha = (-2, -1, 0, 1, 2)
    return JointPmf.from_rows(EXAMPLE_ROWS, alpha, alpha)


def pmfs(min_size=1, max_size=8):
    """Random valid PMFs via normalized positive weights."""
    return st.lists(
        st.floats(min_value=1e-6, max_value=1.0), min_size=min_size, max_size=max_size
    ).map(lambda ws: Pmf.normalized(ws))


def test_entropy_example_marginal():
    assert entropy(Pmf.of(0.2, 0.15, 0.32, 0.24, 0.09)) == pytest.approx(2.2078, abs=1e-3)


def test_entropy_degenerate():
    assert entropy(Pmf.of(1.0)) == 0.0


def test_entropy_uniform_five():
    assert entropy(Pmf.uniform(5)) == pytest.approx(math.log2(5), abs=1e-12)


def test_pmf_rejects_negative():
    with pytest.raises(ValidationError):
        Pmf.of(0.5, 0.6, -0.1)


def test_pmf_rejects_bad_sum():
    with pytest.raises(ValidationError):
        Pmf.of(0.5, 0.4)


def test_marginals_example():
    p1, p2 = marginals(example_joint())
    assert list(p1.probs) == pytest.approx([0.2, 0.15, 0.32, 0.24, 0.09])
    assert list(p2.probs) == pytest.approx([0.2, 0.3, 0.32, 0.08, 0.1])


def test_marginals_diagonal():
    j = JointPmf.from_rows([[0.5, 0.0], [0.0, 0.5]], (0, 1), (0, 1))
    p1, p2 = marginals(j)
    assert list(p1.probs) == [0.5, 0.5]
    assert list(p2.probs) == [0.5, 0.5]


def test_joint_shape_mismatch():
    with pytest.raises(ValidationError):
        JointPmf.from_rows([[1.0]], (0, 1), (0,))


def test_conditional_entropy_independent_uniform():
    j = JointPmf.from_rows([[0.25, 0.25], [0.25, 0.25]], (0, 1), (0, 1))
    assert conditional_entropy(j) == pytest.approx(1.0, abs=1e-12)


def test_conditional_entropy_diagonal():
    j = JointPmf.from_rows([[0.5, 0.0], [0.0, 0.5]], (0, 1), (0, 1))
    assert conditional_entropy(j) == pytest.approx(0.0, abs=1e-12)


def test_conditional_entropy_matches_double_sum_oracle():
    j = example_joint()
    # brute-force H(joint) minus column entropy
    flat = [p for row in EXAMPLE_ROWS for p in row if p > 0]
    h_joint = -sum(p * math.log2(p) for p in flat)
    cols = [sum(row[c] for row in EXAMPLE_ROWS) for c in range(5)]
    h_col = -sum(p * math.log2(p) for p in cols)
    assert conditional_entropy(j) == pytest.approx(h_joint - h_col, abs=1e-12)
    assert joint_entropy(j) == pytest.approx(h_joint, abs=1e-12)


@given(pmfs())
def test_entropy_permutation_invariant(p):
    rev = Pmf(tuple(reversed(p.probs)))
    assert entropy(p) == pytest.approx(entropy(rev), abs=1e-9)


@given(pmfs())
def test_entropy_bounded_by_log_support(p):
    h = entropy(p)
    assert -1e-9 <= h <= math.log2(len(p)) + 1e-9


@given(st.integers(min_value=1, max_value=16))
def test_entropy_uniform_attains_bound(k):
    assert entropy(Pmf.uniform(k)) == pytest.approx(math.log2(k), abs=1e-9)


@given(pmfs(min_size=2, max_size=4), pmfs(min_size=2, max_size=4))
def test_conditional_below_marginal(p, q):
    # independent product joint: H(row|col) equals H(row) <= H(row)
    matrix = [[a * b for b in q.probs] for a in p.probs]
    j = JointPmf.from_rows(matrix, tuple(range(len(p))), tuple(range(len(q))))
    assert conditional_entropy(j) <= entropy(j.row_marginal()) + 1e-9
