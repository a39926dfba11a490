"""Shared fixtures: reference parameters and cached expensive objects."""

import math

import numpy as np
import pytest

from floqgate import (
    IntegratorConfig,
    SystemParams,
    build_schedule,
    design_gate,
)

TWO_PI = 2.0 * math.pi

#: Reference operating point used across the suite.
V_REF = TWO_PI * 70.18
OMEGA_REF = TWO_PI * 3.5
GAMMA_REF = 1.0 / 800.0   # gamma0 = gamma1 = 1/(2 * 400 us)
THETA_REF = math.pi / 2.0


@pytest.fixture(scope="session")
def ref_system():
    return SystemParams(v_int=V_REF, gamma0=GAMMA_REF, gamma1=GAMMA_REF)


@pytest.fixture(scope="session")
def closed_system():
    return SystemParams(v_int=V_REF)


@pytest.fixture(scope="session")
def design_n0(ref_system):
    return design_gate(ref_system, OMEGA_REF, branch=0, theta=THETA_REF)


@pytest.fixture(scope="session")
def square_drive_n0(design_n0):
    return build_schedule(design_n0, "square", OMEGA_REF)


@pytest.fixture(scope="session")
def gaussian_drive_n0(design_n0):
    return build_schedule(design_n0, "gaussian", TWO_PI * 8.1)


@pytest.fixture(scope="session")
def fast_cfg():
    """Coarser sampling for unit tests; tolerances stay at the defaults."""
    return IntegratorConfig(sample_count=200)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
