"""Tests for sweeps, monotonicity audits and Monte Carlo accuracy."""

import math

import pytest

from identity_channel.experiments import (
    Direction,
    NonBelievingReceiver,
    SweepAxis,
    SweepSpec,
    audit_monotonicity,
    expected_direction,
    monte_carlo_accuracy,
    run_sweep,
    write_simulation_csv,
    write_sweep_csv,
)
from identity_channel.model import (
    IdentityProfile,
    Population,
    SenderStrategy,
    population_from_params,
)


class TestSweepAxis:
    def test_values(self):
        axis = SweepAxis("lambda_a_A", 0.0, 1.0, 5)
        assert list(axis.values()) == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_validation(self):
        with pytest.raises(ValueError):
            SweepAxis("bogus", 0.0, 1.0, 5)
        with pytest.raises(ValueError):
            SweepAxis("lambda_a_A", 0.0, 1.0, 0)
        with pytest.raises(ValueError):
            SweepAxis("lambda_a_A", 0.0, math.inf, 5)


class TestRunSweep:
    def test_degenerate_grid_equals_closed_form(self, balanced_population):
        from identity_channel.equilibrium import closed_form_equilibrium

        spec = SweepSpec(
            base=balanced_population,
            axes=(SweepAxis("lambda_a_A", 0.55, 0.55, 1),),
        )
        result = run_sweep(spec)
        assert len(result.records) == 1
        base = closed_form_equilibrium(balanced_population)
        assert result.records[0].Q == pytest.approx(base.quality, abs=1e-12)
        assert result.records[0].case == base.case_label

    def test_2d_sweep_shape_and_bounds(self, balanced_population):
        spec = SweepSpec(
            base=balanced_population,
            axes=(
                SweepAxis("lambda_s_A", 0.0, 1.0, 11),
                SweepAxis("lambda_a_A", 0.0, 1.0, 11),
            ),
        )
        result = run_sweep(spec)
        # The (0, 0) cell has a type-A receiver with no weights at all and
        # is skipped; every computed cell keeps at least half the quality.
        assert len(result.records) + len(result.skipped) == 121
        assert result.skipped == ((0.0, 0.0),)
        for rec in result.records:
            assert 2.0 - 1e-12 <= rec.Q <= 4.0 + 1e-12

    def test_restriction_violating_cells_skipped(self, balanced_population):
        spec = SweepSpec(
            base=balanced_population,
            axes=(SweepAxis("delta_I_A", 0.0, 4.0, 5),),
        )
        result = run_sweep(spec)
        # delta_I_A in {3, 4} exceeds delta_O_A = 2 and must be skipped.
        assert len(result.skipped) == 2
        assert len(result.records) == 3

    def test_row_major_and_deterministic_csv(self, balanced_population, tmp_path):
        spec = SweepSpec(
            base=balanced_population,
            axes=(
                SweepAxis("lambda_s_A", 0.1, 0.9, 3),
                SweepAxis("lambda_a_A", 0.1, 0.9, 3),
            ),
        )
        result = run_sweep(spec)
        firsts = [rec.axis1 for rec in result.records]
        assert firsts == sorted(firsts)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_sweep_csv(result, p1)
        write_sweep_csv(run_sweep(spec), p2)
        assert p1.read_bytes() == p2.read_bytes()
        header = p1.read_text().splitlines()[0]
        assert header == "axis1,axis2,k_A,k_B,case,n_A,n_B,Q"

    def test_simplex_constrained_weights(self, balanced_params):
        base = population_from_params(balanced_params)
        spec = SweepSpec(
            base=base,
            axes=(SweepAxis("lambda_s_A", 0.0, 1.0, 3),),
            simplex_constrained=True,
        )
        result = run_sweep(spec)
        # At lambda_s_A = 1 the complementary lambda_a_A becomes 0.
        assert len(result.records) == 3
        last = result.records[-1]
        assert last.axis1 == 1.0


class TestAudit:
    def test_expected_directions(self):
        assert expected_direction("lambda_s_A") is Direction.NONINCREASING
        assert expected_direction("lambda_a_B") is Direction.NONDECREASING
        assert expected_direction("delta_O_A") is Direction.NONDECREASING
        with pytest.raises(ValueError):
            expected_direction("delta_I_A")

    def test_lambda_s_A_nonincreasing(self, balanced_population):
        spec = SweepSpec(
            base=balanced_population,
            axes=(SweepAxis("lambda_s_A", 0.0, 1.0, 101),),
        )
        assert audit_monotonicity(spec, "lambda_s_A", Direction.NONINCREASING) == ()

    def test_lambda_a_A_nondecreasing(self, balanced_population):
        spec = SweepSpec(
            base=balanced_population,
            axes=(SweepAxis("lambda_a_A", 0.0, 1.0, 101),),
        )
        assert audit_monotonicity(spec, "lambda_a_A", Direction.NONDECREASING) == ()

    def test_constant_plateau_passes_both_directions(self):
        profile = IdentityProfile(0.9, 0.05, 1.0, 2.0)
        pop = Population(profile, profile)
        spec = SweepSpec(
            base=pop, axes=(SweepAxis("lambda_a_A", 0.8, 1.0, 21),)
        )
        for direction in Direction:
            assert audit_monotonicity(spec, "lambda_a_A", direction) == ()

    def test_axis_mismatch_rejected(self, balanced_population):
        spec = SweepSpec(
            base=balanced_population,
            axes=(SweepAxis("lambda_s_A", 0.0, 1.0, 5),),
        )
        with pytest.raises(ValueError):
            audit_monotonicity(spec, "lambda_a_A", Direction.NONDECREASING)


class TestMonteCarlo:
    def test_noiseless_channel_exact(self):
        profile = IdentityProfile(1.0, 0.0, 1.0, 2.0)
        pop = Population(profile, profile)
        acc, se = monte_carlo_accuracy(SenderStrategy(1, 1, 1, 1), pop, 5000, 0)
        assert acc == 1.0
        assert se == 0.0

    def test_silence_is_a_coin_flip(self):
        # With accuracy-only receivers the (1,1,0,0) residuals are exactly 0,
        # so both types still (tie-break) believe and accuracy is Q/4 = 1/2.
        profile = IdentityProfile(1.0, 0.0, 1.0, 2.0)
        pop = Population(profile, profile)
        acc, se = monte_carlo_accuracy(SenderStrategy(1, 1, 0, 0), pop, 100000, 1)
        assert abs(acc - 0.5) <= 3.0 * math.sqrt(0.25 / 100000)

    def test_matches_quality_over_four(self, balanced_population):
        from identity_channel.equilibrium import closed_form_equilibrium

        result = closed_form_equilibrium(balanced_population)
        acc, se = monte_carlo_accuracy(result.strategy, balanced_population, 200000, 7)
        assert abs(acc - result.quality / 4.0) <= 4.0 * max(se, 1e-6)

    def test_rejects_nonbelieved_strategy(self, balanced_population):
        with pytest.raises(NonBelievingReceiver):
            monte_carlo_accuracy(SenderStrategy(1, 1, 1, 1), balanced_population, 10, 0)

    def test_rejects_bad_N(self, balanced_population):
        from identity_channel.equilibrium import closed_form_equilibrium

        strat = closed_form_equilibrium(balanced_population).strategy
        with pytest.raises(ValueError):
            monte_carlo_accuracy(strat, balanced_population, 0, 0)

    def test_deterministic_given_seed(self, balanced_population):
        from identity_channel.equilibrium import closed_form_equilibrium

        strat = closed_form_equilibrium(balanced_population).strategy
        a1 = monte_carlo_accuracy(strat, balanced_population, 10000, 3)
        a2 = monte_carlo_accuracy(strat, balanced_population, 10000, 3)
        assert a1 == a2

    def test_simulation_csv(self, tmp_path):
        path = tmp_path / "sim.csv"
        write_simulation_csv(path, 1000, 3, 0.9939, 0.0025, 0.99390243902)
        lines = path.read_text().splitlines()
        assert lines[0] == "N,seed,accuracy,std_error,expected"
        assert lines[1].startswith("1000,3,0.9939,")
