"""Closed-form electromechanics of a single piezoelectric microdome.

A shallow spherical-cap diaphragm clamped at its rim lifts or settles as a
through-thickness field strains the film in-plane. The apex height under a
DC voltage, the parabolic radial deflection profile under an AC drive, and
its area average feed the array radiation model.

All quantities are SI. Every function here is pure and thread-safe.
"""

import math
from dataclasses import dataclass

from .errors import NegativeRadicand, OutOfDome, ValidationError


@dataclass(frozen=True)
class DomeGeometry:
    """One microdome: aperture radius, steady-state apex height, film thickness."""

    radius_R: float        # aperture radius [m]
    apex_height_H0: float  # steady-state apex height [m]
    thickness_T: float     # film thickness [m]

    def __post_init__(self):
        if not self.radius_R > 0:
            raise ValidationError("must be > 0", "radius_R")
        if not self.thickness_T > 0:
            raise ValidationError("must be > 0", "thickness_T")
        if self.apex_height_H0 < 0:
            raise ValidationError("must be >= 0", "apex_height_H0")

    @property
    def is_shallow(self):
        """True in the thin-film regime (R/T > 100) the closed forms assume."""
        return self.radius_R / self.thickness_T > 100.0


@dataclass(frozen=True)
class PiezoFilm:
    """Material parameters of the porous piezoelectric film.

    ``d_eff`` is signed and defaults to a placeholder magnitude typical of
    PVDF; calibration against a measured SPL (see
    :func:`domewave.field.calibrate_d_eff`) is expected to replace it.
    """

    d_eff: float = 30e-12            # effective piezoelectric coefficient [m/V]
    youngs_modulus_E: float = 2.5e9  # [Pa]
    poisson_ratio_nu: float = 0.34
    density_rho_f: float = 1780.0    # [kg/m^3]
    residual_tension_T0: float = 0.0  # [N/m]

    def __post_init__(self):
        if not self.youngs_modulus_E > 0:
            raise ValidationError("must be > 0", "youngs_modulus_E")
        if not 0.0 <= self.poisson_ratio_nu < 0.5:
            raise ValidationError("must be in [0, 0.5)", "poisson_ratio_nu")
        if not self.density_rho_f > 0:
            raise ValidationError("must be > 0", "density_rho_f")
        if self.residual_tension_T0 < 0:
            raise ValidationError("must be >= 0", "residual_tension_T0")


@dataclass(frozen=True)
class DriveSignal:
    """Sinusoidal excitation: amplitude (not peak-to-peak), frequency, phase."""

    amplitude_Vm: float  # [V]
    frequency_f: float   # [Hz]
    phase_phi: float = 0.0  # [rad]

    def __post_init__(self):
        if self.amplitude_Vm < 0:
            raise ValidationError("must be >= 0", "amplitude_Vm")
        if not self.frequency_f > 0:
            raise ValidationError("must be > 0", "frequency_f")


def _voltage_lift(geom, film, voltage):
    """Perturbation term of the apex-height radical, and H0^2."""
    h0_sq = geom.apex_height_H0 ** 2
    lift = 2.0 * film.d_eff * voltage * (geom.radius_R ** 2 + h0_sq) / geom.thickness_T
    return lift, h0_sq


def dome_apex_height(geom, film, voltage):
    """Apex height under a DC voltage: sqrt(2 d V (R^2 + H0^2)/T + H0^2).

    The steady-state height H0 is used inside the parenthesis (small-signal
    operation). Returns H0 exactly when V = 0 or d = 0. Raises
    :class:`NegativeRadicand` when the drive would collapse the dome beyond
    model validity.
    """
    if voltage == 0.0 or film.d_eff == 0.0:
        return geom.apex_height_H0
    lift, h0_sq = _voltage_lift(geom, film, voltage)
    if lift < -h0_sq:
        raise NegativeRadicand(
            f"voltage {voltage} V drives the height radical negative "
            f"({lift:.3e} < {-h0_sq:.3e})")
    return math.sqrt(lift + h0_sq)


def peak_deflection(geom, film, amplitude_Vm):
    """Apex deflection amplitude under a sine drive: [x(+Vm) - x(-Vm)] / 2.

    Evaluated as lift / (x(+Vm) + x(-Vm)) where lift = 2 d Vm (R^2+H0^2)/T,
    which is algebraically identical but free of the subtractive
    cancellation of the direct difference (keeps full float64 accuracy for
    arbitrarily small drives). Odd in d*Vm, zero when Vm = 0.
    """
    if amplitude_Vm == 0.0 or film.d_eff == 0.0:
        return 0.0
    lift, h0_sq = _voltage_lift(geom, film, amplitude_Vm)
    if abs(lift) > h0_sq:
        raise NegativeRadicand(
            f"drive amplitude {amplitude_Vm} V exceeds model validity "
            f"(|{lift:.3e}| > {h0_sq:.3e})")
    x_plus = math.sqrt(h0_sq + lift)
    x_minus = math.sqrt(h0_sq - lift)
    return lift / (x_plus + x_minus)


def deflection_profile(geom, film, amplitude_Vm, r):
    """Deflection amplitude at radial distance r: peak * [1 - (r/R)^2]."""
    if r < 0 or r > geom.radius_R:
        raise OutOfDome(f"r = {r} m outside aperture radius {geom.radius_R} m")
    x = r / geom.radius_R
    return peak_deflection(geom, film, amplitude_Vm) * (1.0 - x * x)


def average_deflection(geom, film, amplitude_Vm):
    """Area average of the parabolic profile over the aperture: peak / 2.

    Closed form of (1/piR^2) * integral of D(r) * 2*pi*r dr from 0 to R.
    """
    return 0.5 * peak_deflection(geom, film, amplitude_Vm)
