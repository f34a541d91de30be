"""Shared fixtures: canonical parameter sets and reusable solved profiles."""

import pytest

from warpcsc import ModelParams, derive_constants, profile_from_energy, solve_period


@pytest.fixture(scope="session")
def p3():
    return ModelParams(3, 2.0, 2.0)


@pytest.fixture(scope="session")
def p4():
    return ModelParams(4, 2.0, 2.0)


@pytest.fixture(scope="session")
def p5():
    return ModelParams(5, 2.0, 2.0)


@pytest.fixture(scope="session")
def p6():
    return ModelParams(6, 2.0, 2.0)


@pytest.fixture(scope="session")
def k3(p3):
    return derive_constants(p3)


@pytest.fixture(scope="session")
def k4(p4):
    return derive_constants(p4)


@pytest.fixture(scope="session")
def k5(p5):
    return derive_constants(p5)


@pytest.fixture(scope="session")
def k6(p6):
    return derive_constants(p6)


@pytest.fixture(scope="session")
def profile3(p3, k3):
    # moderate-amplitude n=3 orbit shared by the solver, geometry and CLI tests
    return profile_from_energy(k3.c_min + 0.5 * abs(k3.c_min), p3, 512)


@pytest.fixture(scope="session")
def profile5(p5, k5):
    return solve_period(1.05 * k5.T0, p5, 512)
