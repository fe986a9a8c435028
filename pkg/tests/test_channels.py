"""Channel arithmetic: audits, entropies, leakage, capacity, serialization."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpchannel import (
    ChannelMatrix,
    PrivacyParameter,
    Prior,
    ROUNDED_FIXTURE_LN_TOL,
    as_fraction,
    build_clique,
    build_cycle,
    column_maxima_sum,
    distance_ratio_audit,
    dp_audit,
    is_dp,
    leakage,
    min_capacity,
    min_entropy,
    optimal_mechanism,
    posterior_min_entropy,
    posterior_success,
    prior_from_csv,
    prior_to_csv,
    truncated_geometric_fixture,
)

HALF = PrivacyParameter.from_ratio(Fraction(1, 2))


def weights_to_matrix(weights):
    rows = []
    for w in weights:
        total = sum(w)
        rows.append([Fraction(x, total) for x in w])
    return ChannelMatrix.from_rows(rows)


def weights_to_prior(weights):
    total = sum(weights)
    return Prior(tuple(Fraction(x, total) for x in weights))


matrix_weights = st.integers(2, 4).flatmap(
    lambda n: st.integers(2, 5).flatmap(
        lambda m: st.lists(
            st.lists(st.integers(0, 9), min_size=m, max_size=m)
            .filter(lambda row: sum(row) > 0),
            min_size=n, max_size=n)))


class TestCoercion:
    def test_string_forms(self):
        assert as_fraction("2/7") == Fraction(2, 7)
        assert as_fraction("0.535") == Fraction(107, 200)
        assert as_fraction(" 1/3 ") == Fraction(1, 3)

    def test_float_reads_decimal_literal(self):
        assert as_fraction(0.25) == Fraction(1, 4)
        assert as_fraction(0.1) == Fraction(1, 10)

    def test_rejects_other_types(self):
        with pytest.raises(TypeError):
            as_fraction(object())


class TestPrivacyParameter:
    def test_ratio_bounds(self):
        with pytest.raises(ValueError):
            PrivacyParameter.from_ratio(0)
        with pytest.raises(ValueError):
            PrivacyParameter.from_ratio("3/2")
        assert PrivacyParameter.from_ratio(1).epsilon == 0.0

    def test_epsilon_of_half(self):
        assert HALF.epsilon == pytest.approx(math.log(2), abs=1e-15)
        assert HALF.inv_ratio == 2

    def test_from_epsilon_roundtrip(self):
        pp = PrivacyParameter.from_epsilon(1.0)
        assert pp.epsilon == pytest.approx(1.0, abs=1e-12)
        with pytest.raises(ValueError):
            PrivacyParameter.from_epsilon(-0.5)


class TestPrior:
    def test_validation(self):
        with pytest.raises(ValueError):
            Prior((Fraction(1, 2), Fraction(1, 3)))
        with pytest.raises(ValueError):
            Prior((Fraction(3, 2), Fraction(-1, 2)))

    def test_min_entropy_examples(self):
        assert min_entropy(Prior.uniform(4)) == 2.0
        assert min_entropy(Prior((Fraction(1),) + (Fraction(0),) * 3)) == 0.0
        mixed = Prior((Fraction(1, 10), Fraction(1, 10)) + (Fraction(1, 5),) * 4)
        assert min_entropy(mixed) == pytest.approx(math.log2(5), abs=1e-12)

    def test_csv_roundtrip(self):
        prior = Prior((Fraction(1, 10), Fraction(1, 5), Fraction(7, 10)))
        text = prior_to_csv(prior, ["A", "B", "C"])
        again, labels = prior_from_csv(text)
        assert again == prior
        assert labels == ("A", "B", "C")


class TestChannelMatrix:
    def test_rows_must_sum_to_one_exactly(self):
        with pytest.raises(ValueError):
            ChannelMatrix.from_rows([[Fraction(1, 2), Fraction(1, 3)]])

    def test_no_negative_entries(self):
        with pytest.raises(ValueError):
            ChannelMatrix.from_rows([[Fraction(3, 2), Fraction(-1, 2)]])

    def test_ragged_rows_rejected(self):
        with pytest.raises(ValueError):
            ChannelMatrix.from_rows([[1], [Fraction(1, 2), Fraction(1, 2)]])

    def test_csv_roundtrip_exact(self):
        m = ChannelMatrix.from_rows(
            [["1/3", "2/3"], ["0.25", "3/4"]], ["x0", "x1"], ["z0", "z1"])
        again = ChannelMatrix.from_csv(m.to_csv())
        assert again == m

    def test_json_roundtrip_exact(self):
        m = truncated_geometric_fixture()
        assert ChannelMatrix.from_json(m.to_json()) == m


class TestDpAudit:
    def test_constant_rows_leak_nothing(self):
        m = ChannelMatrix.constant_rows([Fraction(1, 3)] * 3, 3)
        audit = dp_audit(m, build_clique(3))
        assert audit.eps_star == 0.0
        assert audit.max_ratio == 1

    def test_identity_on_edge_is_infinite(self):
        audit = dp_audit(ChannelMatrix.identity(2), build_clique(2))
        assert math.isinf(audit.eps_star)
        assert audit.max_ratio is None
        assert not audit.is_dp(HALF, tol=1e9)

    def test_fixture_overshoots_by_rounding_only(self):
        audit = dp_audit(truncated_geometric_fixture(), build_clique(6))
        assert audit.max_ratio == Fraction(535, 267)
        assert audit.eps_star == pytest.approx(0.6950, abs=5e-4)
        assert abs(audit.eps_star - math.log(2)) < 0.01
        assert not audit.is_dp(HALF)  # default 1e-9 tolerance
        assert audit.is_dp(HALF, ROUNDED_FIXTURE_LN_TOL)

    def test_witness_reproduces_the_ratio(self):
        m = truncated_geometric_fixture()
        audit = dp_audit(m, build_clique(6))
        i, h, j = audit.worst_witness
        assert m.entry(i, j) / m.entry(h, j) == audit.max_ratio

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            dp_audit(ChannelMatrix.identity(3), build_clique(2))

    def test_exact_comparison_at_zero_tolerance(self):
        m = optimal_mechanism(build_clique(4), HALF).matrix
        assert is_dp(m, build_clique(4), HALF, tol=0)
        tighter = PrivacyParameter.from_ratio(Fraction(51, 100))
        assert not is_dp(m, build_clique(4), tighter, tol=0)

    def test_invariant_under_column_permutation(self):
        m = truncated_geometric_fixture()
        perm = [3, 0, 5, 1, 4, 2]
        permuted = ChannelMatrix.from_rows(
            [[row[j] for j in perm] for row in m.entries],
            m.row_labels, [m.col_labels[j] for j in perm])
        g = build_clique(6)
        assert dp_audit(permuted, g).max_ratio == dp_audit(m, g).max_ratio


class TestPosterior:
    def test_identity_channel_reveals_everything(self):
        m = ChannelMatrix.identity(5)
        u = Prior.uniform(5)
        assert posterior_success(u, m) == 1
        assert posterior_min_entropy(u, m) == 0.0
        assert leakage(u, m) == pytest.approx(math.log2(5), abs=1e-12)

    def test_synthesised_clique_matrix_success(self):
        m = optimal_mechanism(build_clique(6), HALF).matrix
        u = Prior.uniform(6)
        assert posterior_success(u, m) == Fraction(2, 7)
        assert posterior_min_entropy(u, m) == pytest.approx(math.log2(3.5), abs=1e-12)
        assert leakage(u, m) == pytest.approx(math.log2(Fraction(12, 7)), abs=1e-12)

    def test_fixture_success_matches_published_value(self):
        m = truncated_geometric_fixture()
        success = posterior_success(Prior.uniform(6), m)
        assert success == Fraction(673, 3000)
        assert float(success) == pytest.approx(0.2242, abs=5e-4)

    def test_constant_rows_leak_exactly_zero(self):
        m = ChannelMatrix.constant_rows([Fraction(1, 4)] * 4, 3)
        prior = Prior((Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)))
        assert leakage(prior, m) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            posterior_success(Prior.uniform(3), ChannelMatrix.identity(2))

    def test_bit_exact_reproducibility(self):
        m = truncated_geometric_fixture()
        p = Prior((Fraction(1, 10), Fraction(1, 5), Fraction(1, 5),
                   Fraction(1, 5), Fraction(1, 5), Fraction(1, 10)))
        assert posterior_success(p, m) == posterior_success(p, m) == Fraction(603, 2500)


class TestCapacity:
    def test_identity(self):
        assert min_capacity(ChannelMatrix.identity(8)) == 3.0

    def test_constant_rows(self):
        m = ChannelMatrix.constant_rows([Fraction(1, 2), Fraction(1, 2)], 4)
        assert min_capacity(m) == 0.0

    def test_synthesised_clique_matrix(self):
        m = optimal_mechanism(build_clique(6), HALF).matrix
        assert column_maxima_sum(m) == Fraction(12, 7)
        assert min_capacity(m) == pytest.approx(math.log2(Fraction(12, 7)), abs=1e-12)


class TestDistanceRatioAudit:
    def test_adjacent_feasibility_chains_to_all_distances(self):
        g = build_cycle(6)
        m = optimal_mechanism(g, HALF).matrix
        assert distance_ratio_audit(m, g, HALF).ok

    def test_identity_fails(self):
        g = build_clique(3)
        result = distance_ratio_audit(ChannelMatrix.identity(3), g, HALF)
        assert not result.ok
        assert result.worst_witness is not None

    def test_synthesised_matrix_is_pinned_at_every_entry(self):
        g = build_cycle(6)
        from dpchannel import distances

        m = optimal_mechanism(g, HALF).matrix
        dm = distances(g)
        c = Fraction(8, 21)
        for i in range(6):
            for j in range(6):
                assert m.entry(i, j) == c * Fraction(1, 2) ** dm.d(i, j)
                # the constraint towards the diagonal is an equality
                assert m.entry(j, j) == m.entry(i, j) * Fraction(2) ** dm.d(i, j)


@settings(max_examples=60, deadline=None)
@given(matrix_weights, st.data())
def test_success_dominates_prior_and_capacity_dominates_leakage(weights, data):
    matrix = weights_to_matrix(weights)
    prior_weights = data.draw(st.lists(
        st.integers(0, 9), min_size=matrix.rows, max_size=matrix.rows
    ).filter(lambda w: sum(w) > 0))
    prior = weights_to_prior(prior_weights)
    success = posterior_success(prior, matrix)
    assert success >= prior.max_prob
    assert leakage(prior, matrix) >= 0.0
    assert min_capacity(matrix) >= leakage(prior, matrix) - 1e-9


@settings(max_examples=40, deadline=None)
@given(matrix_weights)
def test_capacity_attained_at_uniform_with_distinct_maxima_rows(weights):
    matrix = weights_to_matrix(weights)
    uniform = Prior.uniform(matrix.rows)
    gap = min_capacity(matrix) - leakage(uniform, matrix)
    assert gap >= -1e-9
    maxima_rows = [matrix.column(j).index(max(matrix.column(j)))
                   for j in range(matrix.cols)]
    if len(set(maxima_rows)) == matrix.cols:
        assert gap == pytest.approx(0.0, abs=1e-9)
