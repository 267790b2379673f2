"""Tests for the closed-form equilibrium and the independent LP oracle."""

import math

import numpy as np
import pytest

from identity_channel.equilibrium import (
    AssumptionViolated,
    IndeterminateParams,
    augmented_params,
    check_equivalence,
    closed_form_equilibrium,
    compare_on,
    full_lp_oracle,
    lower_bound_check,
    random_restricted_population,
    reduced_lp_feasible,
)
from identity_channel.model import IdentityProfile, Population
from identity_channel.receiver import believes


def make_population(la_A, ls_A, dI_A, dO_A, la_B, ls_B, dI_B, dO_B):
    return Population(
        IdentityProfile(la_A, ls_A, dI_A, dO_A),
        IdentityProfile(la_B, ls_B, dI_B, dO_B),
    )


class TestAugmentedParams:
    def test_balanced_values(self, balanced_population):
        params = augmented_params(balanced_population)
        assert params.k_A == pytest.approx(1.0 / 0.35)
        assert round(params.k_A, 3) == 2.857
        assert params.k_B == pytest.approx(1.025)

    def test_zero_identity_weight(self):
        pop = make_population(0.5, 0.0, 1, 2, 0.5, 0.0, 1, 2)
        params = augmented_params(pop)
        assert params.k_A == pytest.approx(-1.0)
        assert params.k_B == pytest.approx(-1.0)

    def test_infinite_k_A(self):
        # denominator ls*dO - la exactly zero with positive numerator
        pop = make_population(0.5, 0.25, 1, 2, 0.5, 0.45, 1, 3.5)
        assert augmented_params(pop).k_A == math.inf

    def test_indeterminate(self):
        pop = make_population(0.0, 0.0, 1, 2, 0.5, 0.45, 1, 3.5)
        with pytest.raises(IndeterminateParams):
            augmented_params(pop)


class TestReducedLpFeasible:
    def test_origin_always_feasible(self, balanced_population, low_accuracy_population):
        for pop in (balanced_population, low_accuracy_population):
            assert reduced_lp_feasible(0.0, 0.0, pop) == (True, True)

    def test_truth_infeasible_for_B(self, balanced_population):
        assert reduced_lp_feasible(1.0, 1.0, balanced_population) == (True, False)

    def test_band_edge(self, balanced_population):
        assert reduced_lp_feasible(0.9756, 1.0, balanced_population) == (True, True)

    def test_out_of_range_rejected(self, balanced_population):
        with pytest.raises(ValueError):
            reduced_lp_feasible(1.5, 0.0, balanced_population)


class TestClosedForm:
    def test_balanced_equilibrium(self, balanced_population):
        result = closed_form_equilibrium(balanced_population)
        assert result.case_label == "k_A>k_B>1"
        assert result.strategy.m_A == 1.0
        assert result.strategy.m_B == 1.0
        assert result.strategy.n_A == pytest.approx(1.0 / 1.025, abs=1e-12)
        assert result.strategy.n_B == pytest.approx(1.0, abs=1e-12)
        assert result.quality == pytest.approx(2.0 + 1.0 + 1.0 / 1.025, abs=1e-9)
        assert believes(result.strategy, balanced_population) == (True, True)

    def test_pure_accuracy_seekers(self):
        pop = make_population(0.5, 0.0, 1, 2, 0.7, 0.0, 1, 3.5)
        result = closed_form_equilibrium(pop)
        assert result.case_label == "k_A<0,k_B<0"
        assert result.quality == 4.0

    def test_middle_band_case(self):
        # k_A ~ 0.1647 with k_B = -1 lands in the 1>k_A>k_B case.
        pop = make_population(0.1, 0.9, 0.2, 2, 0.5, 0.0, 1, 2)
        result = closed_form_equilibrium(pop)
        k_A = augmented_params(pop).k_A
        assert k_A == pytest.approx(0.28 / 1.7)
        assert result.case_label == "1>k_A>k_B"
        assert result.strategy.n_A == pytest.approx(1.0, abs=1e-12)
        assert result.strategy.n_B == pytest.approx(k_A, abs=1e-12)
        assert result.quality == pytest.approx(3.0 + k_A, abs=1e-9)

    def test_straddling_band(self, high_accuracy_population):
        # k_B = 0.8 < 1 < k_A: full truth-telling survives.
        result = closed_form_equilibrium(high_accuracy_population)
        assert result.case_label == "k_A>1>k_B"
        assert result.quality == 4.0

    def test_empty_band(self):
        # k_B > k_A > 0 forces silence on bad news.
        pop = make_population(0.1, 0.9, 1, 1.2, 0.1, 0.9, 1, 3.5)
        params = augmented_params(pop)
        assert 0.0 < params.k_A < params.k_B
        result = closed_form_equilibrium(pop)
        assert result.case_label == "k_B>k_A>0"
        assert result.strategy.n_A == 0.0
        assert result.strategy.n_B == 0.0
        assert result.quality == 2.0

    def test_assumption_violation_names_type(self):
        pop = make_population(0.55, 0.45, 2.0, 1.0, 0.55, 0.45, 1, 3.5)
        with pytest.raises(AssumptionViolated, match="type A"):
            closed_form_equilibrium(pop)

    def test_boundary_k_A_equals_one(self):
        # ls=1, la=0.5, dI=1, dO=2 gives k_A = 1.5/1.5 = 1 exactly.
        pop = make_population(0.5, 1.0, 1, 2, 0.5, 0.0, 1, 2)
        result = closed_form_equilibrium(pop)
        assert result.quality == pytest.approx(4.0)

    def test_equilibrium_believed(self, balanced_population, low_accuracy_population):
        for pop in (balanced_population, low_accuracy_population):
            result = closed_form_equilibrium(pop)
            assert believes(result.strategy, pop) == (True, True)


class TestLpOracle:
    def test_matches_closed_form_on_balanced(self, balanced_population):
        closed = closed_form_equilibrium(balanced_population)
        lp = full_lp_oracle(balanced_population)
        assert lp.quality == pytest.approx(closed.quality, abs=1e-9)
        assert lp.strategy.n_A == pytest.approx(closed.strategy.n_A, abs=1e-9)
        assert lp.strategy.n_B == pytest.approx(closed.strategy.n_B, abs=1e-9)

    def test_full_truth_when_no_identity(self):
        pop = make_population(0.5, 0.0, 1, 2, 0.5, 0.0, 1, 2)
        lp = full_lp_oracle(pop)
        assert lp.quality == pytest.approx(4.0, abs=1e-12)

    def test_unrestricted_population_supported(self):
        # The oracle needs no penalty-ordering restriction.
        pop = make_population(0.55, 0.45, 2.0, 1.0, 0.55, 0.45, 1.5, 1.0)
        lp = full_lp_oracle(pop)
        assert 0.0 <= lp.quality <= 4.0
        assert believes(lp.strategy, pop) == (True, True)

    def test_lower_bound_check(self, balanced_population):
        assert lower_bound_check(closed_form_equilibrium(balanced_population))
        assert lower_bound_check(full_lp_oracle(balanced_population))


class TestEquivalence:
    def test_random_equivalence(self):
        report = check_equivalence(300, seed=20240824)
        assert report.ok, report.failures[:3]
        assert report.max_quality_gap <= 1e-9
        assert report.max_coordinate_gap <= 1e-9

    def test_compare_on_single(self, balanced_population):
        case = compare_on(balanced_population)
        assert case.quality_gap <= 1e-9
        assert case.coordinate_gap <= 1e-9

    def test_structural_properties_random(self):
        rng = np.random.default_rng(99)
        for _ in range(300):
            pop = random_restricted_population(rng)
            try:
                result = closed_form_equilibrium(pop)
            except IndeterminateParams:
                continue
            assert result.strategy.m_A == 1.0
            assert result.strategy.m_B == 1.0
            assert 2.0 - 1e-12 <= result.quality <= 4.0
            assert believes(result.strategy, pop) == (True, True)
            lp = full_lp_oracle(pop)
            if lp.strategy.n_B > 0.0:
                assert lp.strategy.m_A == pytest.approx(1.0, abs=1e-9)
