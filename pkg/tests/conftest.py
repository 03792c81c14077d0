import numpy as np
import pytest

from eitfluct.medium import FieldConfig, InputNoise, MediumParams, SqueezedNoise


@pytest.fixture
def medium():
    """Symmetric medium in natural units (gamma = 1)."""
    return MediumParams(gamma1=0.5, gamma2=0.5, g1=0.1, g2=0.1,
                        atom_number=1.0e6, medium_length=1.0, light_speed=1.0)


@pytest.fixture
def fields(medium):
    """Equal resonant drives, Omega1 = Omega2 = 1."""
    return FieldConfig(alpha1=10.0, alpha2=10.0)


@pytest.fixture
def squeezed_probe():
    """Coherent pump, squeezed probe with xi = 1."""
    return InputNoise(probe=SqueezedNoise(1.0))


@pytest.fixture
def noisy_both():
    """Squeezing on both fields (exercises the general formulas)."""
    return InputNoise(pump=SqueezedNoise(0.3), probe=SqueezedNoise(1.0))


def theta_grid(n=8):
    return np.linspace(0.0, np.pi, n, endpoint=False)
