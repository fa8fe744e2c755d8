"""First resonance of a microdome as a clamped circular film under tension.

The film obeys D grad^4 w - Tm grad^2 w = ps w'' with a clamped rim. The
mode shape mixes a propagating J0(alpha r) part and an evanescent
I0(beta r) part with beta^2 = alpha^2 + Tm/D; the clamped boundary gives
the characteristic equation

    beta J0(alpha R) I1(beta R) + alpha I0(beta R) J1(alpha R) = 0

whose smallest positive alpha is the fundamental wavenumber k_r. The
resonance frequency follows as f_r = (k_r / 2 pi) sqrt(D k_r^2 / ps + Tm / ps).

The dome's curvature enters through a height-to-tension mapping: embossing
a cap of height H0 stretches the film by the leading-order arc-vs-chord
strain (2/3)(H0/R)^2, so Tm = T0 + [E t / (1 - nu)] (2/3)(H0/R)^2. Swap in
:func:`first_resonance`'s ``tension_map`` argument to use measured tension
instead.

In-vacuum model: no water mass loading, so absolute values sit above
measured underwater peaks.
"""

import math
from dataclasses import dataclass

from scipy.special import i0e, i1e, j0, j1

from .errors import NoRootInBracket, ValidationError

#: First root of J0(x) I1(x) + I0(x) J1(x) = 0 (zero-tension plate limit).
PLATE_LIMIT_KR = 3.1962206165825334
#: First zero of J0 (zero-rigidity membrane limit).
MEMBRANE_LIMIT_KR = 2.404825557695773


@dataclass(frozen=True)
class ResonanceModel:
    """Reduced parameters of the stretched clamped circular film."""

    flexural_rigidity_D: float  # [N*m]
    tension_Tm: float           # [N/m]
    areal_density_ps: float     # [kg/m^2]
    radius_R: float             # [m]

    def __post_init__(self):
        if self.flexural_rigidity_D < 0:
            raise ValidationError("must be >= 0", "flexural_rigidity_D")
        if self.tension_Tm < 0:
            raise ValidationError("must be >= 0", "tension_Tm")
        if self.flexural_rigidity_D == 0 and self.tension_Tm == 0:
            raise ValidationError("rigidity and tension cannot both be zero", "tension_Tm")
        if not self.areal_density_ps > 0:
            raise ValidationError("must be > 0", "areal_density_ps")
        if not self.radius_R > 0:
            raise ValidationError("must be > 0", "radius_R")


def flexural_rigidity(film, thickness):
    """Thin-plate bending stiffness E t^3 / (12 (1 - nu^2)) [N*m]."""
    if not thickness > 0:
        raise ValidationError("must be > 0", "thickness")
    return (film.youngs_modulus_E * thickness ** 3
            / (12.0 * (1.0 - film.poisson_ratio_nu ** 2)))


def spherical_cap_tension(geom, film):
    """Residual tension plus embossing pre-strain from spherical-cap stretch.

    T0 + [E t / (1 - nu)] * (2/3) * (H0/R)^2  [N/m].
    """
    strain = (2.0 / 3.0) * (geom.apex_height_H0 / geom.radius_R) ** 2
    biaxial_modulus = film.youngs_modulus_E * geom.thickness_T / (1.0 - film.poisson_ratio_nu)
    return film.residual_tension_T0 + biaxial_modulus * strain


# Established name for the default height-to-tension strategy.
tension_from_height = spherical_cap_tension


def _characteristic(lam, tension_ratio):
    """Clamped-rim characteristic function, normalised to O(1).

    ``lam`` is alpha*R, ``tension_ratio`` is Tm R^2 / D. The raw equation is
    scaled by 1 / (beta I1(beta R)); the exponentially-scaled Bessel ratio
    i0e/i1e keeps it finite for arbitrarily stiff tension.
    """
    beta_r = math.sqrt(lam * lam + tension_ratio)
    return j0(lam) + (lam / beta_r) * (i0e(beta_r) / i1e(beta_r)) * j1(lam)


def _first_sign_change_root(func, scan_step, scan_max):
    """Smallest positive root located by bracket scan plus bisection."""
    x_prev = scan_step
    f_prev = func(x_prev)
    x = x_prev
    while x < scan_max:
        x = min(x + scan_step, scan_max)
        f_here = func(x)
        if f_here == 0.0:
            return x
        if f_prev * f_here < 0.0:
            lo, hi, f_lo = x_prev, x, f_prev
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if mid == lo or mid == hi:
                    break
                f_mid = func(mid)
                if f_mid == 0.0:
                    return mid
                if f_lo * f_mid < 0.0:
                    hi = mid
                else:
                    lo, f_lo = mid, f_mid
            return 0.5 * (lo + hi)
        x_prev, f_prev = x, f_here
    raise NoRootInBracket(
        f"no sign change of the characteristic equation below k_r*R = {scan_max}")


def solve_wavenumber(model, scan_step=0.01, scan_max=20.0):
    """Smallest k_r > 0 [1/m] satisfying the clamped boundary condition.

    Bracketing scan in steps of ``scan_step`` (in k_r*R) up to ``scan_max``,
    then bisection; the normalised residual at the returned root is far
    below 1e-9. The zero-rigidity membrane reduces to J0(k_r R) = 0 and is
    solved with the same machinery.
    """
    if model.flexural_rigidity_D == 0.0:
        func = j0
    else:
        ratio = model.tension_Tm * model.radius_R ** 2 / model.flexural_rigidity_D
        func = lambda lam: _characteristic(lam, ratio)
    lam = _first_sign_change_root(func, scan_step, scan_max)
    return lam / model.radius_R


def characteristic_residual(model, k_r):
    """Normalised characteristic-equation value at wavenumber ``k_r``."""
    lam = k_r * model.radius_R
    if model.flexural_rigidity_D == 0.0:
        return j0(lam)
    ratio = model.tension_Tm * model.radius_R ** 2 / model.flexural_rigidity_D
    return _characteristic(lam, ratio)


def resonance_frequency(model):
    """f_r = (k_r / 2 pi) sqrt(D k_r^2 / ps + Tm / ps) [Hz]."""
    k_r = solve_wavenumber(model)
    d_over_ps = model.flexural_rigidity_D / model.areal_density_ps
    t_over_ps = model.tension_Tm / model.areal_density_ps
    return (k_r / (2.0 * math.pi)) * math.sqrt(d_over_ps * k_r ** 2 + t_over_ps)


def first_resonance(geom, film, tension_map=spherical_cap_tension):
    """First resonance frequency [Hz] of a dome with the given geometry/film.

    Assembles rigidity, tension (via ``tension_map``) and areal density
    ps = rho_f * t, then solves the clamped-film eigenproblem.
    """
    model = ResonanceModel(
        flexural_rigidity_D=flexural_rigidity(film, geom.thickness_T),
        tension_Tm=tension_map(geom, film),
        areal_density_ps=film.density_rho_f * geom.thickness_T,
        radius_R=geom.radius_R,
    )
    return resonance_frequency(model)
