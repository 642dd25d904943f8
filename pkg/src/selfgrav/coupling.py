"""Coupling integrals between the two-site state and its own metric.

The number-conserving coupling is an overlap of the left/right interference
density with the metric trace,

    kA_plus(t) = 2 m t  int d3x/(2pi)^3  F~*(x-L) F~(x+L) h(x),

linear in the dimensionless product m*t; its imaginary part defines the
kernel kappa = Im kA_plus / (m t) that drives every first-order observable.
The pair-creation couplings carry oscillatory time factors

    kB_plus_(+/-)(t) = m S_plus (e^{+/- 2 i w t} - 1) / (+/- 2 i w),
    kB_minus(t)      = m S_minus (e^{+2 i w t} - 1) / (2 i w),

where S_plus/S_minus are static 6D momentum integrals of the pair-production
vertex against the metric transforms.  They are evaluated in position space:
the vertex weight

    (w_k w_k' + k.k' - m^2) / sqrt(w_k w_k')

is expanded into separable factors using w_k = m + d_k, d_k = k^2/(w_k + m),
which avoids the catastrophic cancellation of w_k w_k' - m^2 at large mass,
and each factor becomes a weighted position profile handled by one FFT.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, require_state_params
from .gravity import TWO_PI_CUBED, MetricPerturbation, interference_density
from .grids import k_to_x, momentum_mesh
from .packets import (
    WavePacket,
    _k_cutoff,
    _simpson,
    angular_averaged_density,
    momentum_amplitude,
)

#: beyond this phase the value of e^{2 i w t} is numerically meaningless
PHASE_RELIABLE_LIMIT = 1e6


@dataclass(frozen=True)
class CouplingSet:
    """All coupling integrals for one (packet, metric, omega) combination.

    ``kA_plus``/``kA_minus`` are stored per unit m*t (both are exactly linear
    in m*t); the kB values are evaluated at ``t_ref`` and their oscillatory
    structure is kept as (amplitude, frequency) pairs so any other time can be
    evaluated without redoing the spatial quadratures.
    """

    kA_plus: complex
    kA_minus: float
    kB_plus_p: complex
    kB_plus_m: complex
    kB_minus: complex
    s_plus: complex
    s_minus: complex
    omega: float
    t_ref: float
    kappa_ab: float
    phase_unreliable: bool

    @property
    def oscillatory_pairs(self) -> dict[str, tuple[complex, float]]:
        """(amplitude, frequency) with value = amplitude * (e^{i freq t} - 1)."""
        # m * S / (+-2 i w) with m = w in the static regime
        return {
            "kB_plus_p": (self.s_plus / 2j, 2.0 * self.omega),
            "kB_plus_m": (-self.s_plus / 2j, -2.0 * self.omega),
            "kB_minus": (self.s_minus / 2j, 2.0 * self.omega),
        }

    def kA_plus_at(self, m_t: float) -> complex:
        return self.kA_plus * m_t

    def kB_values(self, t: float) -> tuple[complex, complex, complex]:
        return _kb_from_spatial(self.s_plus, self.s_minus, self.omega, t)[0]

    def kB_derivatives(self, t: float) -> tuple[complex, complex, complex]:
        return _kb_from_spatial(self.s_plus, self.s_minus, self.omega, t)[1]

    def at_time(self, t: float) -> "CouplingSet":
        vals, _ = _kb_from_spatial(self.s_plus, self.s_minus, self.omega, t)
        return replace(
            self,
            kB_plus_p=vals[0],
            kB_plus_m=vals[1],
            kB_minus=vals[2],
            t_ref=float(t),
            phase_unreliable=abs(2.0 * self.omega * t) > PHASE_RELIABLE_LIMIT,
        )


def _overlap_with_field(density: np.ndarray, field_values: np.ndarray, spacing: float) -> complex:
    return complex(np.sum(density * field_values) * spacing**3)


def compute_kA_plus(packet: WavePacket, metric: MetricPerturbation, m_t: float) -> complex:
    """Interference overlap with the metric trace, scaled by 2 m t."""
    spec = metric.spec
    dens = interference_density(packet, spec)
    return 2.0 * m_t * _overlap_with_field(dens, metric.trace_h.values, spec.spacing)


def compute_kA_minus(packet: WavePacket, metric: MetricPerturbation, m_t: float) -> complex:
    """Single-site overlap with the metric trace (real up to rounding)."""
    spec = metric.spec
    from .packets import position_profile

    left = position_profile(packet, -1, spec).values
    dens = np.conj(left) * left / TWO_PI_CUBED
    return 2.0 * m_t * _overlap_with_field(dens, metric.trace_h.values, spec.spacing)


def _kb_from_spatial(
    s_plus: complex, s_minus: complex, omega: float, t: float
) -> tuple[tuple[complex, complex, complex], tuple[complex, complex, complex]]:
    """Oscillatory factors applied to the spatial integrals: (values, d/dt values)."""
    if t == 0.0:
        zero = 0.0 + 0.0j
        m = omega
        return (zero, zero, zero), (m * s_plus, m * s_plus, m * s_minus)
    phase = 2.0 * omega * t
    e_pos = np.exp(1j * phase)
    e_neg = np.exp(-1j * phase)
    t_pos = (e_pos - 1.0) / (2j * omega)
    t_neg = (e_neg - 1.0) / (-2j * omega)
    m = omega  # static regime: the Compton frequency equals the mass
    values = (m * s_plus * t_pos, m * s_plus * t_neg, m * s_minus * t_pos)
    derivs = (m * s_plus * e_pos, m * s_plus * e_neg, m * s_minus * e_pos)
    return values, derivs


def _pair_vertex_spatial(
    packet: WavePacket, metric: MetricPerturbation, omega: float
) -> tuple[complex, complex]:
    """Spatial integrals S_plus, S_minus of the pair vertex against the metric."""
    spec = metric.spec
    spec.check_covers(packet.l_half)
    m = omega
    amp = momentum_amplitude(packet, spec)
    kx, ky, kz = momentum_mesh(spec)
    k2 = kx**2 + ky**2 + kz**2
    w_k = np.sqrt(k2 + m**2)
    sqw = np.sqrt(w_k)
    delta = k2 / (w_k + m)  # w_k - m, evaluated without cancellation
    weights = {
        "u": delta / sqw,
        "v": 1.0 / sqw,
        "wx": kx / sqw,
        "wy": ky / sqw,
        "wz": kz / sqw,
    }
    lx, ly, lz = packet.L_vec
    phase_pos = np.exp(1j * (kx * lx + ky * ly + kz * lz))

    def transforms(phase: np.ndarray) -> dict[str, np.ndarray]:
        return {name: k_to_x(spec, amp * w * phase) for name, w in weights.items()}

    g_pos = transforms(phase_pos)  # factors carrying e^{+i L.k}
    g_neg = transforms(np.conj(phase_pos))  # factors carrying e^{-i L.k}

    h_jj = metric.h_spatial_trace.values
    h_00 = metric.h00.values
    cell = spec.spacing**3 / TWO_PI_CUBED

    def pair_integral(ga: dict[str, np.ndarray], gb: dict[str, np.ndarray]) -> complex:
        grad = ga["wx"] * gb["wx"] + ga["wy"] * gb["wy"] + ga["wz"] * gb["wz"]
        # (w w' + k.k' - m^2)/sqrt(w w') = m (u v' + v u') + u u' + grad-part
        mass_part = m * (ga["u"] * gb["v"] + ga["v"] * gb["u"]) + ga["u"] * gb["u"]
        integrand = 0.25 * (mass_part + grad) * h_jj + 0.25 * grad * h_00
        return complex(np.sum(integrand) * cell)

    s_plus = pair_integral(g_pos, g_pos)
    s_minus = pair_integral(g_neg, g_pos)
    return s_plus, s_minus


def compute_kB(
    packet: WavePacket, metric: MetricPerturbation, omega: float, t: float
) -> tuple[complex, complex, complex]:
    """Pair couplings (kB_plus_+, kB_plus_-, kB_minus) at time t."""
    if omega <= 0.0:
        raise DomainError(f"omega must be positive, got {omega!r}")
    s_plus, s_minus = _pair_vertex_spatial(packet, metric, omega)
    values, _ = _kb_from_spatial(s_plus, s_minus, omega, t)
    return values


def compute_couplings(
    packet: WavePacket, metric: MetricPerturbation, omega: float, t: float
) -> CouplingSet:
    """Evaluate the full coupling set for one scenario at time t."""
    if omega <= 0.0:
        raise DomainError(f"omega must be positive, got {omega!r}")
    kA_p = compute_kA_plus(packet, metric, 1.0)
    kA_m = compute_kA_minus(packet, metric, 1.0)
    s_plus, s_minus = _pair_vertex_spatial(packet, metric, omega)
    values, _ = _kb_from_spatial(s_plus, s_minus, omega, t)
    return CouplingSet(
        kA_plus=kA_p,
        kA_minus=float(np.real(kA_m)),
        kB_plus_p=values[0],
        kB_plus_m=values[1],
        kB_minus=values[2],
        s_plus=s_plus,
        s_minus=s_minus,
        omega=float(omega),
        t_ref=float(t),
        kappa_ab=float(np.imag(kA_p)),
        phase_unreliable=abs(2.0 * omega * t) > PHASE_RELIABLE_LIMIT,
    )


def extract_kappa(
    packet: WavePacket, metric: MetricPerturbation, alpha: float, beta: float
) -> float:
    """Kernel kappa_{alpha,beta} = Im kA_plus at unit m*t.

    The (alpha, beta) dependence enters through the metric source, so the
    metric must be tagged with the same state and packet.
    """
    alpha, beta = require_state_params(alpha, beta)
    tag = metric.source_tag
    if tag is None:
        raise DomainError("metric carries no source tag; solve it from a tagged state first")
    if (
        abs(tag.alpha - alpha) > 1e-12
        or abs(tag.beta - beta) > 1e-12
        or tag.packet != packet
    ):
        raise DomainError(
            f"metric sourced by (alpha={tag.alpha}, beta={tag.beta}, family={tag.packet.family}) "
            f"does not match requested (alpha={alpha}, beta={beta}, family={packet.family})"
        )
    return float(np.imag(compute_kA_plus(packet, metric, 1.0)))


def massless_decay(packet: WavePacket, t_over_tau_light: float) -> float:
    """Normalized envelope of the light-particle overlap at time t.

    For negligible mass the free phase is e^{i |k| t}; the overlap

        int d3k |F(k)|^2 e^{2 i k.L} e^{i |k| t}

    then decays with t for any integrable density.  Evaluated by dense radial
    quadrature of the direction-averaged density, normalized to its t = 0
    value; time is in units of the light-crossing time l0/c.
    """
    if t_over_tau_light < 0.0:
        raise DomainError(f"t must be >= 0, got {t_over_tau_light!r}")
    kmax = _k_cutoff(packet)
    k = np.linspace(0.0, kmax, 8001)
    dk = k[1] - k[0]
    osc_span = 2.0 * kmax * packet.l_half + kmax * t_over_tau_light
    if osc_span > 0.5 * np.pi * (k.size - 1):
        raise DomainError(
            "time too large for the fixed radial quadrature; "
            f"t/tau_light <= {(0.5 * np.pi * (k.size - 1) - 2.0 * kmax * packet.l_half) / kmax:.3g} supported"
        )
    weight = k**2 * angular_averaged_density(packet, k)
    base = abs(_simpson(weight, dk))
    if base == 0.0:
        raise DomainError("overlap vanishes at t = 0; envelope undefined")
    value = abs(_simpson(weight * np.exp(1j * k * t_over_tau_light), dk))
    return float(value / base)
