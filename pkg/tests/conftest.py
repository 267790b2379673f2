"""Shared fixtures: the three heatmap base configurations.

All three share accuracy/identity weights (0.55, 0.45) for type A,
in-group penalties of 1 for both types, and out-group penalties of 2 (A)
and 3.5 (B); they differ only in the type-B weights.
"""

import pytest

from identity_channel.model import population_from_params


def _base_params(lambda_a_B, lambda_s_B):
    return {
        "lambda_a_A": 0.55,
        "lambda_s_A": 0.45,
        "delta_I_A": 1.0,
        "delta_O_A": 2.0,
        "lambda_a_B": lambda_a_B,
        "lambda_s_B": lambda_s_B,
        "delta_I_B": 1.0,
        "delta_O_B": 3.5,
    }


@pytest.fixture(scope="session")
def high_accuracy_params():
    return _base_params(0.6, 0.4)


@pytest.fixture(scope="session")
def balanced_params():
    return _base_params(0.55, 0.45)


@pytest.fixture(scope="session")
def low_accuracy_params():
    return _base_params(0.4, 0.6)


@pytest.fixture(scope="session")
def high_accuracy_population(high_accuracy_params):
    return population_from_params(high_accuracy_params)


@pytest.fixture(scope="session")
def balanced_population(balanced_params):
    return population_from_params(balanced_params)


@pytest.fixture(scope="session")
def low_accuracy_population(low_accuracy_params):
    return population_from_params(low_accuracy_params)
