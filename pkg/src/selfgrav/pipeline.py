"""Scenario orchestration: packets -> metric -> couplings -> observables.

The constraint equation is linear in its source, and the source is linear in
(alpha, 1-alpha, 2 beta).  A sweep therefore needs only three elementary
solves per (packet, grid) pair — one per density component (right lobe, left
lobe, interference) — after which every (alpha, beta) point combines the
precomputed coupling ingredients algebraically.  Rows of a sweep are then
cheap and evaluated in a worker pool (SELFGRAV_THREADS caps the pool size)
with deterministic, axis-ordered output.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import ScenarioConfig
from .coupling import CouplingSet, PHASE_RELIABLE_LIMIT, _kb_from_spatial, _pair_vertex_spatial
from .dynamics import evolve_main, initial_state, probabilities, purity_entropy, reduce
from .errors import DomainError
from .gravity import (
    TWO_PI_CUBED,
    MetricPerturbation,
    SourceTag,
    assemble_metric,
    interference_density,
    solve_h00,
)
from .grids import GridSpec, ScalarGridField, default_grid
from .packets import WavePacket, make_packet, position_profile
from .scales import PhysicalScales, RegimeReport, RegimeThresholds, check_regime, compute_scales

SWEEP_SCHEMA = "selfgrav.sweep.v1"
SWEEP_COLUMNS = (
    "alpha",
    "beta",
    "L_l0",
    "t_s",
    "xi",
    "kappa",
    "p_L",
    "p_R",
    "gamma_L",
    "gamma_R",
    "dS_L",
    "dS_R",
    "xi_ok",
    "static_ok",
    "time_ok",
)


def packet_from_config(cfg: ScenarioConfig, l_half: float | None = None) -> WavePacket:
    half = cfg.l_half if l_half is None else l_half
    return make_packet(
        cfg.family,
        width=cfg.width_inv_l0,
        L_vec=(half, 0.0, 0.0),
        chirp=cfg.chirp,
    )


def grid_from_config(cfg: ScenarioConfig, l_half: float | None = None) -> GridSpec:
    half = cfg.l_half if l_half is None else l_half
    if cfg.box_l0 > 0.0:
        return GridSpec(n=cfg.grid_n, box_l0=cfg.box_l0)
    return default_grid(half, n=cfg.grid_n)


@dataclass
class MetricBasis:
    """Elementary metric solves and coupling ingredients for one (packet, grid).

    Any (alpha, beta) metric is alpha * right + (1-alpha) * left +
    2 beta * cross, and the coupling integrals inherit the same combination.
    """

    packet: WavePacket
    spec: GridSpec
    omega: float
    h00_parts: tuple[np.ndarray, np.ndarray, np.ndarray]  # right, left, cross
    kA_plus_parts: tuple[complex, complex, complex]
    kA_minus_parts: tuple[complex, complex, complex]
    s_plus_parts: tuple[complex, complex, complex]
    s_minus_parts: tuple[complex, complex, complex]

    def _combine(self, parts: tuple, alpha: float, beta: float):
        return alpha * parts[0] + (1.0 - alpha) * parts[1] + 2.0 * beta * parts[2]

    def metric(self, alpha: float, beta: float) -> MetricPerturbation:
        h00 = ScalarGridField(
            spec=self.spec, values=np.real(self._combine(self.h00_parts, alpha, beta))
        )
        return assemble_metric(
            h00, SourceTag(alpha=float(alpha), beta=float(beta), packet=self.packet)
        )

    def couplings(self, alpha: float, beta: float, t: float) -> CouplingSet:
        kA_p = self._combine(self.kA_plus_parts, alpha, beta)
        kA_m = self._combine(self.kA_minus_parts, alpha, beta)
        s_p = self._combine(self.s_plus_parts, alpha, beta)
        s_m = self._combine(self.s_minus_parts, alpha, beta)
        values, _ = _kb_from_spatial(s_p, s_m, self.omega, t)
        return CouplingSet(
            kA_plus=complex(kA_p),
            kA_minus=float(np.real(kA_m)),
            kB_plus_p=values[0],
            kB_plus_m=values[1],
            kB_minus=values[2],
            s_plus=complex(s_p),
            s_minus=complex(s_m),
            omega=self.omega,
            t_ref=float(t),
            kappa_ab=float(np.imag(kA_p)),
            phase_unreliable=abs(2.0 * self.omega * t) > PHASE_RELIABLE_LIMIT,
        )


def build_metric_basis(packet: WavePacket, spec: GridSpec, omega: float) -> MetricBasis:
    right = position_profile(packet, +1, spec).values
    left = position_profile(packet, -1, spec).values
    densities = (
        np.abs(right) ** 2 / TWO_PI_CUBED,
        np.abs(left) ** 2 / TWO_PI_CUBED,
        np.real(np.conj(right) * left) / TWO_PI_CUBED,
    )
    h00_parts = []
    kA_plus_parts = []
    kA_minus_parts = []
    s_plus_parts = []
    s_minus_parts = []
    cross = interference_density(packet, spec)
    left_dens = np.conj(left) * left / TWO_PI_CUBED
    cell = spec.spacing**3
    for dens in densities:
        h00 = solve_h00(ScalarGridField(spec=spec, values=dens, unit="m / l0^3"))
        metric = assemble_metric(h00)
        h00_parts.append(h00.values)
        kA_plus_parts.append(2.0 * complex(np.sum(cross * metric.trace_h.values) * cell))
        kA_minus_parts.append(2.0 * complex(np.sum(left_dens * metric.trace_h.values) * cell))
        s_p, s_m = _pair_vertex_spatial(packet, metric, omega)
        s_plus_parts.append(s_p)
        s_minus_parts.append(s_m)
    return MetricBasis(
        packet=packet,
        spec=spec,
        omega=float(omega),
        h00_parts=tuple(h00_parts),
        kA_plus_parts=tuple(kA_plus_parts),
        kA_minus_parts=tuple(kA_minus_parts),
        s_plus_parts=tuple(s_plus_parts),
        s_minus_parts=tuple(s_minus_parts),
    )


@dataclass
class SweepRow:
    alpha: float
    beta: float
    l_l0: float
    t_s: float
    xi: float
    kappa: float
    p_l: float
    p_r: float
    gamma_l: float
    gamma_r: float
    ds_l: float
    ds_r: float
    regime: RegimeReport

    def as_csv(self) -> str:
        nums = (
            self.alpha,
            self.beta,
            self.l_l0,
            self.t_s,
            self.xi,
            self.kappa,
            self.p_l,
            self.p_r,
            self.gamma_l,
            self.gamma_r,
            self.ds_l,
            self.ds_r,
        )
        flags = (self.regime.xi_ok, self.regime.static_ok, self.regime.time_ok)
        return ",".join([f"{v:.16e}" for v in nums] + [str(int(f)) for f in flags])


@dataclass
class SweepResult:
    rows: list[SweepRow]
    any_regime_violation: bool

    def to_csv(self) -> str:
        lines = [f"# schema={SWEEP_SCHEMA}", ",".join(SWEEP_COLUMNS)]
        lines.extend(row.as_csv() for row in self.rows)
        return "\n".join(lines) + "\n"


def worker_count() -> int:
    env = os.environ.get("SELFGRAV_THREADS", "").strip()
    if env:
        try:
            cap = int(env)
        except ValueError as exc:
            raise DomainError(f"SELFGRAV_THREADS must be an integer, got {env!r}") from exc
        if cap < 1:
            raise DomainError("SELFGRAV_THREADS must be >= 1")
        return cap
    return min(8, os.cpu_count() or 1)


def evaluate_point(
    basis: MetricBasis,
    scales: PhysicalScales,
    thresholds: RegimeThresholds,
    alpha: float,
    beta: float,
    t_s: float,
) -> SweepRow:
    """All first-order observables for one (alpha, beta, t) point."""
    t_nat = scales.seconds_to_natural(t_s)
    coup = basis.couplings(alpha, beta, t_nat)
    state = evolve_main(initial_state(alpha, beta, scales.xi), coup, t_nat)
    p_l, p_r = probabilities(state)
    m_t_xi_kappa = state.m_t * scales.xi * coup.kappa_ab
    red_l = reduce(state, "L")
    red_r = reduce(state, "R")
    gamma_l, ds_l = purity_entropy(red_l, alpha, beta, m_t_xi_kappa)
    gamma_r, ds_r = purity_entropy(red_r, alpha, beta, m_t_xi_kappa)
    report = check_regime(scales, t_s, thresholds)
    return SweepRow(
        alpha=alpha,
        beta=beta,
        l_l0=basis.packet.l_half,
        t_s=t_s,
        xi=scales.xi,
        kappa=coup.kappa_ab,
        p_l=p_l,
        p_r=p_r,
        gamma_l=gamma_l,
        gamma_r=gamma_r,
        ds_l=ds_l,
        ds_r=ds_r,
        regime=report,
    )


def run_sweep(cfg: ScenarioConfig) -> SweepResult:
    """Evaluate the configured (separation x alpha x beta x t) product grid.

    Rows are ordered by axis index (separation outermost, time innermost)
    regardless of worker scheduling.
    """
    thresholds = RegimeThresholds(
        eps_xi=cfg.eps_xi, eps_static=cfg.eps_static, eps_time=cfg.eps_time
    )
    alphas = cfg.sweep_alphas or [cfg.alpha]
    betas = cfg.sweep_betas or [cfg.beta]
    separations = cfg.sweep_separations_l0 or [cfg.separation_l0]
    times = cfg.times_s()

    rows: list[SweepRow] = []
    for separation in separations:
        l_half = 0.5 * separation
        scales = compute_scales(cfg.mass_kg, cfg.size_m, separation * cfg.size_m)
        packet = packet_from_config(cfg, l_half)
        spec = grid_from_config(cfg, l_half)
        basis = build_metric_basis(packet, spec, scales.mass_natural())
        points = [(a, b, t) for a in alphas for b in betas for t in times]

        def job(point: tuple[float, float, float]) -> SweepRow:
            a, b, t = point
            return evaluate_point(basis, scales, thresholds, a, b, t)

        with ThreadPoolExecutor(max_workers=worker_count()) as pool:
            rows.extend(pool.map(job, points))
    violated = any(not row.regime.all_ok for row in rows)
    return SweepResult(rows=rows, any_regime_violation=violated)
