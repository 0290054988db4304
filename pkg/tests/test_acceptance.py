"""Acceptance gate: the twelve headline claims, measured at full scope.

Each test runs one numbered criterion over the complete configuration sweep
(cycle lengths 3-9, decoherence rates 0.1/0.5/0.9, balanced and generic
coins) or over the pinned dynamics runs the criterion calls for, and fails
with the measured line if the bound is not met.  ``pytest -v`` therefore
prints one pass/fail line per criterion.
"""

import pytest

from dqwalk import verify
from dqwalk.verify import (
    criterion_adjoint_duality,
    criterion_certification,
    criterion_condition_equivalence,
    criterion_contractivity,
    criterion_decay_envelope,
    criterion_distributions,
    criterion_limit_even,
    criterion_limit_odd,
    criterion_mutual_info,
    criterion_oracle_equivalence,
    criterion_spectrum_even,
    criterion_spectrum_odd,
)
from dqwalk.walk import CoinOperator, WalkSpec, node_state, parity_balanced_state

SEED = 0
MAX_T = 10_000

#: Pinned runs for the dynamics criteria: one odd and one even cycle at a
#: moderate decoherence rate, plus dedicated specs for the randomized checks.
ODD_RUN = WalkSpec(5, 0.2, CoinOperator.hadamard())
EVEN_RUN = WalkSpec(4, 0.2, CoinOperator.hadamard())
CONTRACT_RUN = WalkSpec(4, 0.5, CoinOperator.hadamard())


@pytest.fixture(scope="module")
def sweep_analyses():
    return [verify.analyze(spec) for spec in verify.default_sweep()]


@pytest.fixture(scope="module")
def odd_bundle():
    return verify.study_dynamics(ODD_RUN, node_state(ODD_RUN, 0, "r"), max_t=MAX_T)


@pytest.fixture(scope="module")
def even_node_bundle():
    return verify.study_dynamics(EVEN_RUN, node_state(EVEN_RUN, 0, "r"), max_t=MAX_T)


@pytest.fixture(scope="module")
def even_balanced_bundle():
    return verify.study_dynamics(EVEN_RUN, parity_balanced_state(EVEN_RUN), max_t=MAX_T)


@pytest.fixture(scope="module")
def odd_run_radius():
    return verify.analyze(ODD_RUN).report.interior_max_modulus


def check(result):
    print(result.line())
    assert result.passed, result.line()


def test_criterion_01_odd_cycle_peripheral_spectrum(sweep_analyses):
    check(criterion_spectrum_odd(sweep_analyses))


def test_criterion_02_even_cycle_peripheral_spectrum(sweep_analyses):
    check(criterion_spectrum_even(sweep_analyses))


def test_criterion_03_eigenoperator_condition_equivalence(sweep_analyses):
    check(criterion_condition_equivalence(sweep_analyses, ODD_RUN, SEED))


def test_criterion_04_odd_cycle_limit_state(odd_bundle):
    check(criterion_limit_odd(odd_bundle, SEED, MAX_T))


def test_criterion_05_even_cycle_limit_state(even_node_bundle, even_balanced_bundle):
    check(criterion_limit_even(even_node_bundle, even_balanced_bundle))


def test_criterion_06_limit_position_distributions(
    odd_bundle, even_node_bundle, even_balanced_bundle
):
    check(criterion_distributions(odd_bundle, even_node_bundle, even_balanced_bundle))


def test_criterion_07_mutual_information_collapse(
    odd_bundle, even_node_bundle, even_balanced_bundle
):
    check(criterion_mutual_info([odd_bundle, even_node_bundle, even_balanced_bundle]))


def test_criterion_08_channel_certification(sweep_analyses):
    check(criterion_certification(sweep_analyses))


def test_criterion_09_norm_contractivity():
    check(criterion_contractivity(CONTRACT_RUN, SEED))


def test_criterion_10_adjoint_duality(sweep_analyses):
    check(criterion_adjoint_duality(sweep_analyses, CONTRACT_RUN, SEED))


def test_criterion_11_matricization_oracle_agreement(sweep_analyses):
    check(criterion_oracle_equivalence(sweep_analyses, SEED))


def test_criterion_12_geometric_decay_envelope(odd_bundle, odd_run_radius):
    check(criterion_decay_envelope(odd_bundle, odd_run_radius))
