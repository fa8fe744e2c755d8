"""Discretized Rayleigh-integral radiation of the microdome array.

Each dome is a baffled point source at its centre with strength
w_bar_n * A_n * exp(i phi_n); the field at r_d is

    P = i 2 pi rho f^2 * sum_n w_bar_n A_n e^{i phi_n} e^{i k |r_d - r_n|} / |r_d - r_n|

with k = 2 pi f / c and w_bar_n the area-averaged deflection of dome n at
its drive voltage. The baffle is the z = 0 plane; radiation fills z > 0.

:func:`subdivided_pressure` is the brute-force oracle for that lumping: it
splits every dome into concentric annuli carrying the local parabolic
deflection, with exact per-annulus propagation handled by azimuthal
quadrature. The two agree in the far field and diverge (by design) close
to a dome.

Summations run through the selected kernel backend (compiled or NumPy, see
``domewave._kernels``); both accumulate compensated/pairwise, so results
are deterministic to better than 1e-12 relative regardless of evaluation
order.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from ._kernels import pressure_sum
from .dome import DomeGeometry, DriveSignal, PiezoFilm, average_deflection, peak_deflection
from .errors import (PitchTooSmall, SingularDistance, TargetUnreachable,
                     ValidationError, ZeroPressure)


@dataclass(frozen=True)
class Medium:
    """Acoustic half-space; defaults are water with the 1 uPa SPL reference."""

    density_rho: float = 1000.0     # [kg/m^3]
    sound_speed_c: float = 1480.0   # [m/s]
    ref_pressure_Pr: float = 1e-6   # [Pa]

    def __post_init__(self):
        for name in ("density_rho", "sound_speed_c", "ref_pressure_Pr"):
            if not getattr(self, name) > 0:
                raise ValidationError("must be > 0", name)


@dataclass(frozen=True)
class DomeElement:
    """One dome of the panel: centre, aperture area, drive phase and voltage."""

    center_pos: tuple   # (x, y, z) [m], z = 0 on the baffle
    area_An: float      # [m^2]
    phase_phin: float = 0.0  # [rad]
    drive_Vn: float = 0.0    # [V]

    def __post_init__(self):
        if not self.area_An > 0:
            raise ValidationError("must be > 0", "area_An")
        if len(self.center_pos) != 3:
            raise ValidationError("must be a 3-vector", "center_pos")


@dataclass(frozen=True)
class FieldPoint:
    """Observation point in the radiation half-space z > 0."""

    position: tuple  # (x, y, z) [m]

    def __post_init__(self):
        if len(self.position) != 3:
            raise ValidationError("must be a 3-vector", "position")
        if not self.position[2] > 0:
            raise ValidationError("must lie in the half-space z > 0", "position")


class ArrayLayout:
    """The dome panel: elements, extent and the shared dome geometry.

    ``validate_overlap=False`` skips the pairwise 2R separation check; tests
    use it to stack fictitious coincident domes for superposition checks.
    """

    def __init__(self, elements, panel_extent, geom, validate_overlap=True):
        elements = tuple(elements)
        if not elements:
            raise ValidationError("layout needs at least one element", "elements")
        self.elements = elements
        self.panel_extent = (float(panel_extent[0]), float(panel_extent[1]))
        self.geom = geom
        self.centers = np.ascontiguousarray(
            [e.center_pos for e in elements], dtype=np.float64)
        half_x = self.panel_extent[0] / 2 + 1e-12
        half_y = self.panel_extent[1] / 2 + 1e-12
        if np.any(np.abs(self.centers[:, 0]) > half_x) or np.any(np.abs(self.centers[:, 1]) > half_y):
            raise ValidationError("element centres outside the panel extent", "elements")
        if validate_overlap and len(elements) > 1:
            diff = self.centers[:, None, :] - self.centers[None, :, :]
            dist = np.sqrt(np.sum(diff * diff, axis=2))
            np.fill_diagonal(dist, np.inf)
            if dist.min() < 2 * geom.radius_R - 1e-12:
                raise ValidationError(
                    "element centres closer than one dome diameter", "elements")

    def __len__(self):
        return len(self.elements)

    def with_drive(self, amplitude_Vm):
        """Copy of the layout with every element driven at ``amplitude_Vm``."""
        elements = [replace(e, drive_Vn=amplitude_Vm) for e in self.elements]
        return ArrayLayout(elements, self.panel_extent, self.geom, validate_overlap=False)


def build_array(panel_extent, pitch, geom, drive):
    """Square grid of identical domes filling the panel, all in phase.

    Grid count per axis is floor(extent/pitch); the grid is centred on the
    panel. Every element gets area pi R^2, phase ``drive.phase_phi`` and
    voltage ``drive.amplitude_Vm``.
    """
    if pitch < 2 * geom.radius_R:
        raise PitchTooSmall(
            f"pitch {pitch} m < dome diameter {2 * geom.radius_R} m")
    # small epsilon so exact-integer ratios like 0.03/0.002 do not floor down
    nx = int(panel_extent[0] / pitch + 1e-9)
    ny = int(panel_extent[1] / pitch + 1e-9)
    if nx < 1 or ny < 1:
        raise ValidationError("panel smaller than one pitch", "panel_extent")
    area = math.pi * geom.radius_R ** 2
    elements = []
    for iy in range(ny):
        for ix in range(nx):
            x = (ix - (nx - 1) / 2.0) * pitch
            y = (iy - (ny - 1) / 2.0) * pitch
            elements.append(DomeElement(
                center_pos=(x, y, 0.0), area_An=area,
                phase_phin=drive.phase_phi, drive_Vn=drive.amplitude_Vm))
    return ArrayLayout(elements, panel_extent, geom, validate_overlap=False)


def _element_weights(layout, film):
    """Complex source strengths w_bar_n * A_n * exp(i phi_n) for all elements."""
    w_bar_cache = {}
    weights = np.empty(len(layout.elements), dtype=np.complex128)
    for n, el in enumerate(layout.elements):
        if el.drive_Vn not in w_bar_cache:
            w_bar_cache[el.drive_Vn] = average_deflection(layout.geom, film, el.drive_Vn)
        weights[n] = w_bar_cache[el.drive_Vn] * el.area_An * np.exp(1j * el.phase_phin)
    return weights


def _summed_field(sources, weights, points, wavenumber):
    try:
        return pressure_sum(
            sources, np.ascontiguousarray(weights.real),
            np.ascontiguousarray(weights.imag),
            np.ascontiguousarray(points, dtype=np.float64), float(wavenumber))
    except ValueError as exc:
        raise SingularDistance(str(exc)) from exc


def _prefactor(medium, frequency):
    return 1j * 2.0 * math.pi * medium.density_rho * frequency ** 2


def rayleigh_pressure(layout, film, medium, point, frequency):
    """Complex pressure [Pa] of the lumped dome sum at one field point."""
    if not frequency > 0:
        raise ValidationError("must be > 0", "frequency")
    pts = np.asarray([point.position], dtype=np.float64)
    k = 2.0 * math.pi * frequency / medium.sound_speed_c
    total = _summed_field(layout.centers, _element_weights(layout, film), pts, k)[0]
    return complex(_prefactor(medium, frequency) * total)


def rayleigh_pressure_many(layout, film, medium, points_xyz, frequency):
    """Vectorised :func:`rayleigh_pressure` over an (M, 3) point array."""
    if not frequency > 0:
        raise ValidationError("must be > 0", "frequency")
    k = 2.0 * math.pi * frequency / medium.sound_speed_c
    total = _summed_field(layout.centers, _element_weights(layout, film),
                          np.asarray(points_xyz, dtype=np.float64), k)
    return _prefactor(medium, frequency) * total


def spl(pressure, medium):
    """Sound pressure level 20 log10(|p| / Pr) [dB re Pr]."""
    magnitude = abs(pressure)
    if magnitude == 0.0:
        raise ZeroPressure("SPL of zero pressure is undefined")
    return 20.0 * math.log10(magnitude / medium.ref_pressure_Pr)


def subdivided_pressure(layout, film, medium, point, frequency, rings,
                        azimuth_nodes=64):
    """Brute-force oracle: every dome as ``rings`` annuli of local deflection.

    Annulus j spans [jR/rings, (j+1)R/rings], radiates with the parabolic
    profile at its mid-radius and its exact propagation geometry (the
    annulus is integrated azimuthally with an ``azimuth_nodes``-point
    trapezoid rule, spectrally accurate for this smooth periodic kernel).
    ``rings=1`` is defined to use the dome-average deflection at the dome
    centre and therefore reproduces :func:`rayleigh_pressure` exactly.
    """
    if rings < 1:
        raise ValidationError("must be >= 1", "rings")
    if rings == 1:
        return rayleigh_pressure(layout, film, medium, point, frequency)
    if not frequency > 0:
        raise ValidationError("must be > 0", "frequency")

    radius = layout.geom.radius_R
    edges = np.linspace(0.0, radius, rings + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    ring_area = math.pi * (edges[1:] ** 2 - edges[:-1] ** 2)
    profile_shape = 1.0 - (mid / radius) ** 2
    theta = np.arange(azimuth_nodes) * (2.0 * math.pi / azimuth_nodes)
    offsets = np.stack([
        np.outer(mid, np.cos(theta)).ravel(),
        np.outer(mid, np.sin(theta)).ravel(),
        np.zeros(rings * azimuth_nodes),
    ], axis=1)  # (rings*naz, 3)

    peak_cache = {}
    sources = np.empty((len(layout.elements) * rings * azimuth_nodes, 3))
    weights = np.empty(len(layout.elements) * rings * azimuth_nodes, dtype=np.complex128)
    block = rings * azimuth_nodes
    for n, el in enumerate(layout.elements):
        if el.drive_Vn not in peak_cache:
            peak_cache[el.drive_Vn] = peak_deflection(layout.geom, film, el.drive_Vn)
        local_w = peak_cache[el.drive_Vn] * profile_shape  # per ring
        ring_weight = (local_w * ring_area / azimuth_nodes) * np.exp(1j * el.phase_phin)
        sources[n * block:(n + 1) * block] = np.asarray(el.center_pos) + offsets
        weights[n * block:(n + 1) * block] = np.repeat(ring_weight, azimuth_nodes)

    pts = np.asarray([point.position], dtype=np.float64)
    k = 2.0 * math.pi * frequency / medium.sound_speed_c
    total = _summed_field(sources, weights, pts, k)[0]
    return complex(_prefactor(medium, frequency) * total)


def beam_pattern(layout, film, medium, frequency, arc_radius, angles_deg,
                 plane_azimuth_deg=0.0):
    """SPL on an arc through the array centre: list of (angle_deg, spl_db).

    Angles are polar angles from the broadside (+z) axis inside the plane
    rotated ``plane_azimuth_deg`` about z; they must satisfy |angle| < 90 so
    the points stay in the radiation half-space.
    """
    if not arc_radius > 0:
        raise ValidationError("must be > 0", "arc_radius")
    angles = np.asarray(list(angles_deg), dtype=float)
    if angles.size == 0:
        return []
    if np.any(np.abs(angles) >= 90.0):
        raise ValidationError("angles must satisfy |angle| < 90 deg", "angles")
    az = math.radians(plane_azimuth_deg)
    th = np.radians(angles)
    points = arc_radius * np.stack([
        np.sin(th) * math.cos(az), np.sin(th) * math.sin(az), np.cos(th)], axis=1)
    pressures = rayleigh_pressure_many(layout, film, medium, points, frequency)
    return [(float(a), spl(p, medium)) for a, p in zip(angles, pressures)]


@dataclass(frozen=True)
class CalibrationResult:
    """Outcome of the SPL -> d_eff inversion."""

    d_eff: float          # [m/V]
    achieved_spl_db: float
    iterations: int


def calibrate_d_eff(layout, medium, target_spl_db, at, frequency, amplitude_Vm,
                    d_lo=1e-16, d_hi=1e-9, tolerance_db=0.01, max_iterations=100):
    """Invert the radiation model for the effective piezoelectric coefficient.

    Monotone bisection on d_eff in [d_lo, d_hi] until the modelled SPL at
    ``at`` matches ``target_spl_db`` within ``tolerance_db``. Every element
    of ``layout`` is driven at ``amplitude_Vm``. Raises
    :class:`TargetUnreachable` when the target lies outside the bracket.
    """
    driven = layout.with_drive(amplitude_Vm)

    def spl_of(d_eff):
        film = PiezoFilm(d_eff=d_eff)
        return spl(rayleigh_pressure(driven, film, medium, at, frequency), medium)

    spl_lo, spl_hi = spl_of(d_lo), spl_of(d_hi)
    if not spl_lo <= target_spl_db <= spl_hi:
        raise TargetUnreachable(
            f"target {target_spl_db} dB outside [{spl_lo:.2f}, {spl_hi:.2f}] dB "
            f"reachable with d_eff in [{d_lo:.1e}, {d_hi:.1e}] m/V")
    lo, hi = d_lo, d_hi
    for iteration in range(1, max_iterations + 1):
        mid = 0.5 * (lo + hi)
        spl_mid = spl_of(mid)
        if abs(spl_mid - target_spl_db) < tolerance_db:
            return CalibrationResult(mid, spl_mid, iteration)
        if spl_mid < target_spl_db:
            lo = mid
        else:
            hi = mid
    raise TargetUnreachable(
        f"bisection did not reach {target_spl_db} dB within {max_iterations} iterations")
