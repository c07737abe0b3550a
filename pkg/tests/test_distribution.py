"""Label distributions and exact half-up percentage rounding."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from jalign.core.distribution import distribution_from_counts, label_distribution, percentage
from jalign.core.labels import JudgementLabel
from jalign.errors import InvalidInputError

S = JudgementLabel.STRONG
M = JudgementLabel.MODERATE
P = JudgementLabel.POOR


def test_simple_distribution():
    report = label_distribution([S, S, M, P])
    assert report.counts == {S: 2, M: 1, P: 1}
    assert report.percentages == {S: 50.0, M: 25.0, P: 25.0}
    assert report.total == 4


def test_half_up_at_the_boundary():
    # 1/8 = 12.5% -> one decimal rounds up, not to even
    assert percentage(1, 8) == 12.5
    assert percentage(1, 800) == 0.1  # 0.125 -> 0.1 at 1dp (0.125 < 0.15)
    assert percentage(1, 16, decimals=2) == 6.25
    assert percentage(5, 1000) == 0.5
    assert percentage(15, 1000) == 1.5  # exact .5 in the hundredths goes up: 1.45 -> 1.5
    assert percentage(145, 10000) == 1.5


def test_zero_counts_allowed_in_count_form():
    report = distribution_from_counts({S: 0, M: 3, P: 1})
    assert report.percentages[S] == 0.0
    assert report.total == 4


def test_empty_inputs_rejected():
    with pytest.raises(InvalidInputError):
        label_distribution([])
    with pytest.raises(InvalidInputError):
        distribution_from_counts({S: 0, M: 0, P: 0})
    with pytest.raises(InvalidInputError):
        distribution_from_counts({S: -1, M: 2, P: 0})


def test_published_style_rows_round_trip():
    # representative multi-rater rows at single-decimal precision
    rows = {
        (155, 472, 11): (24.3, 74.0, 1.7),
        (195, 392, 51): (30.6, 61.4, 8.0),
        (150, 437, 51): (23.5, 68.5, 8.0),
        (136, 469, 10): (22.1, 76.3, 1.6),
    }
    for (strong, moderate, poor), expected in rows.items():
        report = distribution_from_counts({S: strong, M: moderate, P: poor})
        assert (
            report.percentages[S],
            report.percentages[M],
            report.percentages[P],
        ) == expected


@given(
    counts=st.tuples(
        st.integers(min_value=0, max_value=5000),
        st.integers(min_value=0, max_value=5000),
        st.integers(min_value=0, max_value=5000),
    ).filter(lambda c: sum(c) > 0),
    decimals=st.integers(min_value=0, max_value=4),
)
@settings(max_examples=300)
def test_percentage_matches_fraction_oracle(counts, decimals):
    total = sum(counts)
    for c in counts:
        assert percentage(c, total, decimals=decimals) == oracles.percentage(
            c, total, decimals=decimals
        )


@given(
    counts=st.tuples(
        st.integers(min_value=0, max_value=2000),
        st.integers(min_value=0, max_value=2000),
        st.integers(min_value=0, max_value=2000),
    ).filter(lambda c: sum(c) > 0)
)
@settings(max_examples=200)
def test_distribution_oracle_agreement(counts):
    report = distribution_from_counts({S: counts[0], M: counts[1], P: counts[2]})
    total = sum(counts)
    for label, count in zip((S, M, P), counts):
        assert report.percentages[label] == oracles.half_up_fraction(
            Fraction(100 * count, total), 1
        )
