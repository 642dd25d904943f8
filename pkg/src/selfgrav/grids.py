"""Uniform cubic grids, scalar fields, spectral transforms, and field dumps.

Conventions used throughout the package (all in natural units, lengths in l0):

* cell-centered position samples x_i = -box/2 + (i + 1/2) h, h = box/n;
* momentum samples on the matching FFT grid, k = 2*pi*fftfreq(n, h);
* the continuum pair  f~(x) = int d3k f(k) e^{i k.x}  is realized by the
  Riemann sum over the k grid (and its inverse by the sum over x), so the
  discrete Parseval identity  sum|f|^2 dk^3 = sum|f~|^2 h^3 / (2 pi)^3  holds
  to machine precision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.fft import fftn, ifftn

from .errors import DomainError, require_finite_field


@dataclass(frozen=True)
class GridSpec:
    """Uniform n^3 cubic grid of physical edge length box_l0 (units of l0)."""

    n: int
    box_l0: float

    def __post_init__(self) -> None:
        if self.n < 32 or (self.n & (self.n - 1)) != 0:
            raise DomainError(f"grid n must be a power of two >= 32, got {self.n}")
        if not np.isfinite(self.box_l0) or self.box_l0 <= 0.0:
            raise DomainError(f"box_l0 must be positive, got {self.box_l0!r}")

    @property
    def spacing(self) -> float:
        return self.box_l0 / self.n

    @property
    def dk(self) -> float:
        return 2.0 * np.pi / self.box_l0

    def axis(self) -> np.ndarray:
        h = self.spacing
        return -0.5 * self.box_l0 + (np.arange(self.n) + 0.5) * h

    def k_axis(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)

    def required_box(self, l_half: float) -> float:
        """Minimum admissible box for a packet with half-separation |L|."""
        return 8.0 * (1.0 + l_half)

    def check_covers(self, l_half: float) -> None:
        need = self.required_box(l_half)
        if self.box_l0 < need - 1e-12:
            raise DomainError(
                f"grid box {self.box_l0:g} l0 too small for half-separation "
                f"{l_half:g} l0; need box_l0 >= {need:g}"
            )


def default_grid(l_half: float, n: int = 64) -> GridSpec:
    """Default grid sizing: box = 16 (1 + |L|) l0."""
    return GridSpec(n=n, box_l0=16.0 * (1.0 + abs(l_half)))


_MESH_CACHE: dict[tuple[int, float, str], tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def position_mesh(spec: GridSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    key = (spec.n, spec.box_l0, "x")
    if key not in _MESH_CACHE:
        ax = spec.axis()
        _MESH_CACHE[key] = np.meshgrid(ax, ax, ax, indexing="ij")
    return _MESH_CACHE[key]


def momentum_mesh(spec: GridSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    key = (spec.n, spec.box_l0, "k")
    if key not in _MESH_CACHE:
        kx = spec.k_axis()
        _MESH_CACHE[key] = np.meshgrid(kx, kx, kx, indexing="ij")
    return _MESH_CACHE[key]


@dataclass
class ScalarGridField:
    """Scalar samples on a :class:`GridSpec`, tagged with a unit label."""

    spec: GridSpec
    values: np.ndarray
    unit: str = "dimensionless"

    def __post_init__(self) -> None:
        shape = (self.spec.n,) * 3
        if self.values.shape != shape:
            raise DomainError(f"field shape {self.values.shape} does not match grid {shape}")

    def integrate(self) -> complex:
        """Riemann-sum integral over the box."""
        return complex(np.sum(self.values) * self.spec.spacing**3)

    def check_finite(self, name: str = "field") -> "ScalarGridField":
        require_finite_field(name, self.values)
        return self


def k_to_x(spec: GridSpec, field_k: np.ndarray) -> np.ndarray:
    """Evaluate f~(x) = sum_k f(k) e^{i k.x} dk^3 on the position grid."""
    kx, ky, kz = momentum_mesh(spec)
    x0 = -0.5 * spec.box_l0 + 0.5 * spec.spacing
    shift = np.exp(1j * (kx + ky + kz) * x0)
    return ifftn(field_k * shift) * (spec.n**3 * spec.dk**3)


def x_to_k(spec: GridSpec, field_x: np.ndarray) -> np.ndarray:
    """Evaluate f(k) = sum_x f~(x) e^{-i k.x} h^3 / (2 pi)^3 on the k grid."""
    kx, ky, kz = momentum_mesh(spec)
    x0 = -0.5 * spec.box_l0 + 0.5 * spec.spacing
    shift = np.exp(-1j * (kx + ky + kz) * x0)
    return fftn(field_x) * shift * (spec.spacing**3 / (2.0 * np.pi) ** 3)


def write_field(field: ScalarGridField, path_prefix: str | Path) -> tuple[Path, Path]:
    """Dump a real field as little-endian float64, row-major (i,j,k), plus a JSON sidecar."""
    prefix = Path(path_prefix)
    bin_path = prefix.with_suffix(".bin")
    json_path = prefix.with_suffix(".json")
    data = np.ascontiguousarray(np.real(field.values), dtype="<f8")
    bin_path.write_bytes(data.tobytes(order="C"))
    header = {"n": field.spec.n, "box_l0": field.spec.box_l0, "unit": field.unit}
    json_path.write_text(json.dumps(header, sort_keys=True, indent=2) + "\n")
    return bin_path, json_path


def read_field(path_prefix: str | Path) -> ScalarGridField:
    prefix = Path(path_prefix)
    header = json.loads(prefix.with_suffix(".json").read_text())
    n = int(header["n"])
    raw = np.frombuffer(prefix.with_suffix(".bin").read_bytes(), dtype="<f8")
    if raw.size != n**3:
        raise DomainError(f"field dump has {raw.size} samples, expected {n**3}")
    values = raw.reshape((n, n, n)).astype(np.float64)
    return ScalarGridField(
        spec=GridSpec(n=n, box_l0=float(header["box_l0"])),
        values=values,
        unit=str(header["unit"]),
    )
