"""Characteristic scales and validity checks for the massive-static scenario.

All quantities derive from three SI inputs (mass, particle size l0, peak
separation) and the frozen constants in :mod:`selfgrav.constants`.  The
dimensionless strength of the metric perturbation is

    xi = G m / (l0 c^2),

the ratio of the particle's gravitational radius to its size.  Internally the
rest of the package works in natural units (lengths in l0, hbar = c = 1); this
module is the only place SI values enter or leave.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .constants import C_LIGHT, G_NEWTON, HBAR
from .errors import DomainError, require_nonnegative, require_positive


@dataclass(frozen=True)
class PhysicalScales:
    """Derived scales for one scenario (all SI)."""

    mass_kg: float
    size_m: float
    separation_m: float  # peak-to-peak distance 2|L|
    xi: float
    compton_m: float
    tau_g_s: float
    tau_qm_s: float
    tau_light_s: float
    e_grav_J: float
    energy_scale_J: float

    @property
    def tau_g_pointlike_s(self) -> float:
        """Alternate gravitational timescale hbar*l0/(G m^2), i.e. tau_g/2.

        Obtained when the self-energy is taken as G m^2 / l0 instead of the
        two-point-particle value G m^2 / (2 l0). Exposed for comparison only;
        every derived quantity in this package uses ``tau_g_s``.
        """
        return 0.5 * self.tau_g_s

    @property
    def omega_compton_hz(self) -> float:
        """Fundamental angular frequency m c^2 / hbar of the excitation."""
        return self.mass_kg * C_LIGHT**2 / HBAR

    def mass_natural(self) -> float:
        """Particle mass in units hbar/(c*l0), i.e. l0 / lambda_C."""
        return self.size_m / self.compton_m

    def seconds_to_natural(self, t_s: float) -> float:
        """Convert a lab time to units of the light-crossing time l0/c."""
        return t_s / self.tau_light_s


@dataclass(frozen=True)
class RegimeThresholds:
    eps_xi: float = 1e-2
    eps_static: float = 1e-2
    eps_time: float = 1e-2


@dataclass(frozen=True)
class RegimeReport:
    xi_ok: bool
    static_ok: bool
    time_ok: bool
    thresholds: RegimeThresholds
    messages: list[str] = field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return self.xi_ok and self.static_ok and self.time_ok


def compute_scales(mass_kg: float, size_m: float, separation_m: float = 0.0) -> PhysicalScales:
    """Derive all characteristic scales from SI inputs.

    Raises :class:`DomainError` for non-positive mass or size; the separation
    may be zero.
    """
    mass_kg = require_positive("mass_kg", mass_kg)
    size_m = require_positive("size_m", size_m)
    separation_m = require_nonnegative("separation_m", separation_m)

    xi = G_NEWTON * mass_kg / (size_m * C_LIGHT**2)
    compton = HBAR / (mass_kg * C_LIGHT)
    e_grav = G_NEWTON * mass_kg**2 / (2.0 * size_m)
    tau_g = HBAR / e_grav
    tau_qm = size_m**2 / (compton * C_LIGHT)
    tau_light = size_m / C_LIGHT
    energy_scale = mass_kg * C_LIGHT**2

    return PhysicalScales(
        mass_kg=mass_kg,
        size_m=size_m,
        separation_m=separation_m,
        xi=xi,
        compton_m=compton,
        tau_g_s=tau_g,
        tau_qm_s=tau_qm,
        tau_light_s=tau_light,
        e_grav_J=e_grav,
        energy_scale_J=energy_scale,
    )


def check_regime(
    scales: PhysicalScales,
    t_s: float,
    thresholds: RegimeThresholds | None = None,
) -> RegimeReport:
    """Check that a scenario sits inside the perturbative massive-static regime.

    Flags: xi_ok (weak field), static_ok (size much larger than the Compton
    wavelength), time_ok (t well below both tau_g and tau_qm).
    """
    if t_s < 0.0:
        raise DomainError(f"t_s must be >= 0, got {t_s!r}")
    th = thresholds or RegimeThresholds()
    messages: list[str] = []

    xi_ok = scales.xi < th.eps_xi
    if not xi_ok:
        messages.append(f"xi = {scales.xi:.3e} exceeds weak-field threshold {th.eps_xi:.1e}")

    static_ratio = scales.compton_m / scales.size_m
    static_ok = static_ratio < th.eps_static
    if not static_ok:
        messages.append(
            f"compton/size = {static_ratio:.3e} exceeds static threshold {th.eps_static:.1e}"
        )

    ratio_g = t_s / scales.tau_g_s
    ratio_qm = t_s / scales.tau_qm_s
    time_ok = (ratio_g < th.eps_time) and (ratio_qm < th.eps_time)
    if ratio_g >= th.eps_time:
        messages.append(f"t/tau_g = {ratio_g:.3e} exceeds threshold {th.eps_time:.1e}")
    if ratio_qm >= th.eps_time:
        messages.append(f"t/tau_qm = {ratio_qm:.3e} exceeds threshold {th.eps_time:.1e}")

    return RegimeReport(
        xi_ok=xi_ok,
        static_ok=static_ok,
        time_ok=time_ok,
        thresholds=th,
        messages=messages,
    )
