"""domewave: piezoelectric microdome-array transducer and FH-BFSK link simulator.

Library layout:

``dome``
    Closed-form electromechanics of a single microdome.
``resonance``
    Clamped stretched-film eigenproblem and first resonance frequency.
``field``
    Discretized Rayleigh-integral radiation, SPL, beam patterns,
    subdivided-source oracle and d_eff calibration.
``sweep``
    Parametric study engine and frequency responses (CSV tables).
``link``
    FH-BFSK modem, transducer/water/hydrophone channel, spectrograms,
    SNR and BER estimation, image framing.
``config`` / ``cli``
    JSON configuration and the ``domewave`` command-line front end.

The hot field kernel runs compiled (Cython) when built, with a NumPy
fallback selected at import; see ``domewave._kernels.BACKEND``.
"""

from ._kernels import BACKEND as kernel_backend
from .dome import (DomeGeometry, DriveSignal, PiezoFilm, average_deflection,
                   deflection_profile, dome_apex_height, peak_deflection)
from .field import (ArrayLayout, CalibrationResult, DomeElement, FieldPoint,
                    Medium, beam_pattern, build_array, calibrate_d_eff,
                    rayleigh_pressure, spl, subdivided_pressure)
from .resonance import (ResonanceModel, first_resonance, flexural_rigidity,
                        resonance_frequency, solve_wavenumber,
                        spherical_cap_tension, tension_from_height)
from .sweep import (FrequencyResponse, Scenario, SweepSpec, frequency_response,
                    run_sweep)

__version__ = "0.1.0"

__all__ = [
    "kernel_backend", "DomeGeometry", "DriveSignal", "PiezoFilm",
    "average_deflection", "deflection_profile", "dome_apex_height",
    "peak_deflection", "ArrayLayout", "CalibrationResult", "DomeElement",
    "FieldPoint", "Medium", "beam_pattern", "build_array", "calibrate_d_eff",
    "rayleigh_pressure", "spl", "subdivided_pressure", "ResonanceModel",
    "first_resonance", "flexural_rigidity", "resonance_frequency",
    "solve_wavenumber", "spherical_cap_tension", "tension_from_height",
    "FrequencyResponse", "Scenario", "SweepSpec", "frequency_response",
    "run_sweep", "__version__",
]
