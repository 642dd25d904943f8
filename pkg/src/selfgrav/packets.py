"""Momentum-space wave packets and their position-space profiles.

A packet is a normalized momentum amplitude F(k) (int d3k |F|^2 = 1) peaked at
k = 0 with width sigma = 1/l0 by default.  The localized right/left modes use
the same amplitude with plane-wave phases e^{-+ i L.k}; their position shapes
are F~(x -+ L) with F~(x) = int d3k F(k) e^{i k.x}.

Families
--------
gaussian        exp(-|k|^2 / (2 sigma^2))
rectangle       separable cube indicator, |k_j| <= sigma on each axis
sinc            separable sin(k_j/sigma)/(k_j/sigma); box-shaped in position
gaussian_phase  gaussian times exp(i chirp ((k_x/sigma)^2 + (k_x/sigma)^3))

The phase-carrying family exists because every real symmetric amplitude makes
the left/right interference density real, which kills the imaginary part of
the gravitational overlap integral.  A linear phase would not help: it only
translates the profile, and every observable here is translation invariant.
The mixed even+odd polynomial above is the simplest intrinsic phase that
leaves |F|^2 isotropic (so the mean momentum stays zero) while making the
interference density genuinely complex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, require_positive
from .grids import GridSpec, ScalarGridField, k_to_x, momentum_mesh

FAMILIES = ("gaussian", "rectangle", "sinc", "gaussian_phase")

#: fixed resolution of the dense 1D quadratures used for overlaps and decay envelopes
_RADIAL_POINTS = 8001


@dataclass(frozen=True)
class WavePacket:
    family: str
    width: float = 1.0  # sigma, units 1/l0
    k0: tuple[float, float, float] = (0.0, 0.0, 0.0)
    L_vec: tuple[float, float, float] = (0.0, 0.0, 0.0)
    chirp: float = 0.0

    @property
    def l_half(self) -> float:
        return float(np.linalg.norm(self.L_vec))

    def is_real_symmetric(self) -> bool:
        return self.family != "gaussian_phase" or self.chirp == 0.0


@dataclass(frozen=True)
class OverlapReport:
    lr_overlap: complex
    is_orthogonal: bool
    tolerance: float


def make_packet(
    family: str,
    width: float = 1.0,
    k0: tuple[float, float, float] = (0.0, 0.0, 0.0),
    L_vec: tuple[float, float, float] = (0.0, 0.0, 0.0),
    chirp: float = 0.0,
) -> WavePacket:
    if family not in FAMILIES:
        raise DomainError(f"unknown packet family {family!r}; choose one of {FAMILIES}")
    require_positive("width", width)
    k0 = tuple(float(v) for v in k0)
    L_vec = tuple(float(v) for v in L_vec)
    if any(v != 0.0 for v in k0):
        raise DomainError("static regime: packets must have k0 = 0 (stored field only)")
    return WavePacket(family=family, width=float(width), k0=k0, L_vec=L_vec, chirp=float(chirp))


def _amplitude_1d(packet: WavePacket, k: np.ndarray, axis: int) -> np.ndarray:
    """Unnormalized per-axis amplitude factor for separable families."""
    s = packet.width
    if packet.family == "rectangle":
        return (np.abs(k) <= s).astype(float)
    if packet.family == "sinc":
        return np.sinc(k / (np.pi * s))  # sin(k/s)/(k/s)
    raise DomainError(f"family {packet.family!r} is not separable")


def _amplitude_raw(packet: WavePacket, kx: np.ndarray, ky: np.ndarray, kz: np.ndarray) -> np.ndarray:
    s = packet.width
    if packet.family in ("gaussian", "gaussian_phase"):
        k2 = kx**2 + ky**2 + kz**2
        amp = np.exp(-k2 / (2.0 * s**2))
        if packet.family == "gaussian_phase":
            u = kx / s
            amp = amp * np.exp(1j * packet.chirp * (u**2 + u**3))
        return amp
    return _amplitude_1d(packet, kx, 0) * _amplitude_1d(packet, ky, 1) * _amplitude_1d(packet, kz, 2)


def momentum_amplitude(packet: WavePacket, spec: GridSpec) -> np.ndarray:
    """F(k) sampled on the grid's momentum mesh, renormalized so that the
    midpoint-rule norm sum |F|^2 dk^3 equals 1 exactly."""
    kx, ky, kz = momentum_mesh(spec)
    amp = _amplitude_raw(packet, kx, ky, kz).astype(np.complex128)
    norm = np.sum(np.abs(amp) ** 2) * spec.dk**3
    if norm <= 0.0 or not np.isfinite(norm):
        raise DomainError(
            f"packet {packet.family!r} has no support on this grid (norm {norm!r}); refine it"
        )
    return amp / np.sqrt(norm)


def position_profile(packet: WavePacket, sign: int, spec: GridSpec) -> ScalarGridField:
    """Position shape F~(x - sign*L), peaked at +sign*L.

    Computed as the discrete transform of F(k) e^{-i sign L.k}.  The grid must
    leave the peak at least 8 l0 from the boundary.
    """
    if sign not in (+1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign!r}")
    spec.check_covers(packet.l_half)
    amp = momentum_amplitude(packet, spec)
    kx, ky, kz = momentum_mesh(spec)
    lx, ly, lz = packet.L_vec
    phase = np.exp(-1j * sign * (kx * lx + ky * ly + kz * lz))
    values = k_to_x(spec, amp * phase)
    return ScalarGridField(spec=spec, values=values, unit="l0^-3/2 * (2pi)^3/2")


def _simpson(y: np.ndarray, dx: float) -> complex:
    n = y.shape[-1]
    if n % 2 == 0:
        raise ValueError("simpson rule needs an odd number of samples")
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return complex(np.sum(w * y) * dx / 3.0)


def _k_cutoff(packet: WavePacket) -> float:
    s = packet.width
    if packet.family in ("gaussian", "gaussian_phase"):
        return 12.0 * s
    if packet.family == "rectangle":
        return s
    return 200.0 * s  # sinc tails fall off as 1/k^2; truncation fixed for determinism


def _radial_density(packet: WavePacket, k: np.ndarray) -> np.ndarray:
    """|F(k)|^2 for the isotropic-density families, unnormalized."""
    s = packet.width
    return np.exp(-(k**2) / s**2)


def lr_overlap(packet: WavePacket, tolerance: float = 1e-8) -> OverlapReport:
    """<1_L | 1_R> = int d3k |F(k)|^2 e^{-2 i L.k}, by dense quadrature.

    Separable families factor into per-axis 1D integrals; the gaussian
    families reduce to a radial integral against sin(2kL)/(2kL).
    """
    L = np.asarray(packet.L_vec, dtype=float)
    if packet.family in ("gaussian", "gaussian_phase"):
        lmag = float(np.linalg.norm(L))
        kmax = _k_cutoff(packet)
        k = np.linspace(0.0, kmax, _RADIAL_POINTS)
        dens = _radial_density(packet, k) * k**2
        norm = _simpson(dens + 0j, k[1] - k[0]).real
        if lmag == 0.0:
            val = 1.0 + 0.0j
        else:
            kernel = np.sinc(2.0 * k * lmag / np.pi)  # spherical average of e^{-2i L.k}
            val = _simpson(dens * kernel + 0j, k[1] - k[0]) / norm
    else:
        val = 1.0 + 0.0j
        s = packet.width
        kmax = _k_cutoff(packet)
        k = np.linspace(-kmax, kmax, 2 * _RADIAL_POINTS - 1)
        dk = k[1] - k[0]
        for axis in range(3):
            f2 = np.abs(_amplitude_1d(packet, k, axis)) ** 2
            norm = _simpson(f2 + 0j, dk).real
            val *= _simpson(f2 * np.exp(-2j * L[axis] * k), dk) / norm
    val = complex(val)
    return OverlapReport(lr_overlap=val, is_orthogonal=abs(val) < tolerance, tolerance=tolerance)


def angular_averaged_density(packet: WavePacket, k: np.ndarray, n_theta: int = 96) -> np.ndarray:
    """Mean over directions of |F(k n)|^2 e^{2 i k n.L} at each radius k.

    Exact (spherical-average kernel sin/x) for isotropic densities; numeric
    Gauss-Legendre average for the separable cube/sinc families.
    """
    L = np.asarray(packet.L_vec, dtype=float)
    lmag = float(np.linalg.norm(L))
    if packet.family in ("gaussian", "gaussian_phase"):
        out = _radial_density(packet, k).astype(np.complex128)
        if lmag > 0.0:
            out *= np.sinc(2.0 * k * lmag / np.pi)
        return out
    # Lab-frame spherical quadrature; node count is sized for |2kL| phases
    # up to ~n_theta radians across the sphere.
    nodes, weights = np.polynomial.legendre.leggauss(n_theta)
    phis = np.linspace(0.0, 2.0 * np.pi, 2 * n_theta, endpoint=False)
    ct = nodes[:, None]
    st = np.sqrt(1.0 - ct**2)
    dirs = np.stack(
        [
            (st * np.cos(phis[None, :])).ravel(),
            (st * np.sin(phis[None, :])).ravel(),
            np.broadcast_to(ct, (n_theta, phis.size)).ravel(),
        ],
        axis=1,
    )
    wgt = np.broadcast_to(weights[:, None] / (2.0 * len(phis)), (n_theta, phis.size)).ravel()
    out = np.empty(k.shape, dtype=np.complex128)
    for i, kr in enumerate(k):
        kv = kr * dirs
        f2 = np.abs(_amplitude_1d(packet, kv[:, 0], 0)) ** 2
        f2 = f2 * np.abs(_amplitude_1d(packet, kv[:, 1], 1)) ** 2
        f2 = f2 * np.abs(_amplitude_1d(packet, kv[:, 2], 2)) ** 2
        out[i] = np.sum(wgt * f2 * np.exp(2j * kr * (dirs @ (L if lmag else np.zeros(3)))))
    return out
