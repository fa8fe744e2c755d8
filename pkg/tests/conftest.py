import numpy as np
import pytest

from domewave import DomeGeometry, DriveSignal, Medium, PiezoFilm


@pytest.fixture
def geom():
    # the fabricated base design: R = 1 mm, H0 = 100 um, T = 25 um
    return DomeGeometry(radius_R=1e-3, apex_height_H0=100e-6, thickness_T=25e-6)


@pytest.fixture
def film():
    return PiezoFilm()


@pytest.fixture
def water():
    return Medium()


@pytest.fixture
def drive():
    return DriveSignal(amplitude_Vm=10.0, frequency_f=20e3)


def draw_valid_dome_params(rng, n):
    """Random (d, Vm, R, H0, T) tuples kept inside the model's validity region.

    The drive is rescaled whenever the voltage perturbation would exceed
    half of H0^2, so the radical stays comfortably positive.
    """
    out = []
    for _ in range(n):
        d = rng.uniform(1e-14, 1e-10) * rng.choice([-1.0, 1.0])
        vm = rng.uniform(0.01, 20.0)
        r = rng.uniform(0.2e-3, 3e-3)
        h0 = rng.uniform(20e-6, 400e-6)
        t = rng.uniform(5e-6, 120e-6)
        lift = abs(2 * d * vm * (r * r + h0 * h0) / t)
        if lift > 0.5 * h0 * h0:
            vm *= 0.5 * h0 * h0 / lift
        out.append((d, vm, r, h0, t))
    return out
