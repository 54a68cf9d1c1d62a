import math
import sys

import pytest

from lhmedium import DecayRates, DriveConfig, SweepConfig, derive_dampings

GAMMA = 1.0e7


@pytest.fixture
def default_cfg():
    return SweepConfig()


@pytest.fixture
def rates():
    return DecayRates()


@pytest.fixture
def dampings(rates):
    return derive_dampings(rates)


def drive_at(omega_s=14.0, delta_p=2.0, **overrides):
    """Default drive in gamma units, with overrides also in gamma units."""
    values = dict(omega_pe=0.05, omega_pm=SweepConfig().resolved_omega_pm(), omega_c=8.0,
                  omega_s=omega_s, delta_p=delta_p, delta_c=0.005, delta_m=0.005,
                  theta=math.pi / 6)
    values.update(overrides)
    return DriveConfig.from_gamma_units(GAMMA, **values)


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
