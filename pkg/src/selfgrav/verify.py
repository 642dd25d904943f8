"""Self-contained verification suite: oracles and invariants for every stage.

``run_checks("quick")`` exercises each module against independent references
(closed-form gaussian integrals, the erf potential of a gaussian source,
brute-force commutator dynamics, numeric time quadratures); ``"full"`` adds
the 128^3 solver oracle and grid-doubling convergence of the coupling
integrals.  Each check returns a pass flag plus a one-line measurement so the
CLI can emit a machine-readable report.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import erf

from . import coupling, dynamics, gravity, packets
from .grids import GridSpec, ScalarGridField, position_mesh
from .scales import RegimeThresholds, check_regime, compute_scales


@dataclass
class CheckResult:
    check_id: str
    passed: bool
    detail: str
    seconds: float


def _check(results: list[CheckResult], check_id: str, fn) -> None:
    start = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crashed check is a failed check
        passed, detail = False, f"exception: {exc!r}"
    results.append(CheckResult(check_id, bool(passed), detail, time.perf_counter() - start))


# --- scales ---------------------------------------------------------------


def _scales_sphere():
    s = compute_scales(1e-14, 1e-6, 2e-6)
    ok = (
        1e-36 <= s.xi <= 1e-35
        and 1e-29 <= s.compton_m <= 1e-28
        and 10.0 <= 1.0 / s.tau_g_s <= 100.0
        and abs(s.tau_g_s * s.e_grav_J / 1.054571817e-34 - 1.0) < 1e-12
    )
    return ok, f"xi={s.xi:.3e} compton={s.compton_m:.3e} 1/tau_g={1/s.tau_g_s:.3e}"


def _scales_scaling_laws():
    a = compute_scales(1e-14, 1e-6)
    b = compute_scales(2e-14, 1e-6)
    c = compute_scales(1e-14, 2e-6)
    ok = (
        abs(b.xi / a.xi - 2.0) < 1e-12
        and abs(a.tau_g_s / b.tau_g_s - 4.0) < 1e-12
        and abs(c.xi / a.xi - 0.5) < 1e-12
        and abs(c.tau_g_s / a.tau_g_s - 2.0) < 1e-12
    )
    return ok, "mass and size scaling identities"


def _scales_regime():
    s = compute_scales(1e-14, 1e-6, 2e-6)
    good = check_regime(s, 1e-4)
    bad = check_regime(s, 1.0)
    ok = good.all_ok and not bad.time_ok and any("tau_g" in m for m in bad.messages)
    return ok, f"t=1e-4 ok={good.all_ok}; t=1 messages={bad.messages}"


# --- packets --------------------------------------------------------------


def _packet_normalization():
    spec = GridSpec(64, 16.0)
    worst = 0.0
    for family, chirp in (("gaussian", 0.0), ("rectangle", 0.0), ("sinc", 0.0), ("gaussian_phase", 0.5)):
        p = packets.make_packet(family, chirp=chirp)
        amp = packets.momentum_amplitude(p, spec)
        norm = np.sum(np.abs(amp) ** 2) * spec.dk**3
        worst = max(worst, abs(norm - 1.0))
    return worst < 1e-10, f"max |norm-1| = {worst:.2e}"


def _packet_overlap():
    worst = 0.0
    for l_half in (0.5, 1.0, 2.0, 5.0, 10.0):
        p = packets.make_packet("gaussian", L_vec=(l_half, 0.0, 0.0))
        got = packets.lr_overlap(p).lr_overlap
        want = np.exp(-(l_half**2))
        worst = max(worst, abs(got - want))
    return worst < 1e-10, f"max |overlap - closed form| = {worst:.2e}"


def _packet_parseval():
    spec = GridSpec(64, 16.0)
    p = packets.make_packet("gaussian_phase", chirp=0.5, L_vec=(1.0, 0.0, 0.0))
    amp = packets.momentum_amplitude(p, spec)
    prof = packets.position_profile(p, +1, spec)
    lhs = np.sum(np.abs(amp) ** 2) * spec.dk**3
    rhs = np.sum(np.abs(prof.values) ** 2) * spec.spacing**3 / (2 * np.pi) ** 3
    rel = abs(lhs - rhs) / abs(lhs)
    return rel < 1e-8, f"parseval mismatch {rel:.2e}"


# --- gravity --------------------------------------------------------------


def _poisson_oracle(n: int):
    spec = GridSpec(n, 16.0)
    x, y, z = position_mesh(spec)
    r = np.sqrt(x**2 + y**2 + z**2)
    src = ScalarGridField(spec=spec, values=np.exp(-(r**2) / 2.0) / (2 * np.pi) ** 1.5)
    sol = gravity.solve_h00(src)
    exact = -2.0 * erf(r / np.sqrt(2.0)) / r
    rel = float(np.linalg.norm(sol.values - exact) / np.linalg.norm(exact))
    limit = 0.01 if n <= 64 else 0.003
    return rel < limit, f"n={n} rel L2 = {rel:.2e} (limit {limit})"


def _poisson_residual():
    spec = GridSpec(32, 16.0)
    x, y, z = position_mesh(spec)
    r = np.sqrt(x**2 + y**2 + z**2)
    src = ScalarGridField(spec=spec, values=np.exp(-(r**2) / 2.0) / (2 * np.pi) ** 1.5)
    sol = gravity.solve_h00(src)
    res = gravity.poisson_residual(sol, src)
    return res < 1e-6, f"interior residual {res:.2e}"


def _poisson_linearity():
    spec = GridSpec(32, 16.0)
    x, y, z = position_mesh(spec)
    s1 = np.exp(-((x - 1) ** 2 + y**2 + z**2))
    s2 = np.exp(-((x + 1) ** 2 + y**2 + z**2) / 1.5)
    f = lambda v: gravity.solve_h00(ScalarGridField(spec=spec, values=v)).values
    combo = f(0.3 * s1 + 1.7 * s2)
    parts = 0.3 * f(s1) + 1.7 * f(s2)
    rel = float(np.linalg.norm(combo - parts) / np.linalg.norm(parts))
    return rel < 1e-10, f"linearity defect {rel:.2e}"


def _poisson_far_field():
    spec = GridSpec(64, 16.0)
    x, y, z = position_mesh(spec)
    r = np.sqrt(x**2 + y**2 + z**2)
    src = ScalarGridField(spec=spec, values=np.exp(-(r**2) / 2.0) / (2 * np.pi) ** 1.5)
    sol = gravity.solve_h00(src)
    shell = np.abs(r - spec.box_l0 / 3.0) < spec.spacing
    rel = np.max(np.abs(sol.values[shell] - (-2.0 / r[shell])) / (2.0 / r[shell]))
    return rel < 0.01, f"far-field deviation {rel:.2e} at r=box/3"


def _metric_identity():
    spec = GridSpec(32, 16.0)
    p = packets.make_packet("gaussian", L_vec=(0.5, 0, 0))
    metric = gravity.metric_for_state(p, 0.5, 0.5, spec)
    a = np.max(np.abs(metric.h_spatial_trace.values - 3 * metric.h00.values))
    b = np.max(np.abs(metric.trace_h.values - 2 * metric.h00.values))
    # isotropic ansatz: lap h_j^j - dd h = 2 lap h00 reduces to 2 lap h00 == 2 lap h00
    lap = gravity.discrete_laplacian(metric.h00.values, spec)
    lhs = 3 * lap - lap
    rel = float(np.linalg.norm(lhs - 2 * lap) / np.linalg.norm(lap))
    return a == 0.0 and b == 0.0 and rel < 1e-8, f"trace identities {a:.1e},{b:.1e}; constraint {rel:.1e}"


def _source_integral():
    spec = GridSpec(64, 32.0)
    p = packets.make_packet("gaussian", L_vec=(1.0, 0, 0))
    src = gravity.stress_energy_source(p, 0.5, 0.5, spec)
    got = float(np.real(src.integrate()))
    want = 1.0 + 2 * 0.5 * np.exp(-1.0)
    return abs(got - want) < 1e-8, f"integral {got:.12f} vs {want:.12f}"


# --- coupling -------------------------------------------------------------


def _coupling_symmetry():
    spec = GridSpec(64, 16.0)
    real_p = packets.make_packet("gaussian", L_vec=(1.0, 0, 0))
    metric = gravity.metric_for_state(real_p, 0.5, 0.5, spec)
    im_real = abs(np.imag(coupling.compute_kA_plus(real_p, metric, 1.0)))
    chirped = packets.make_packet("gaussian_phase", L_vec=(1.0, 0, 0), chirp=0.5)
    metric_c = gravity.metric_for_state(chirped, 0.5, 0.5, spec)
    k1 = coupling.compute_kA_plus(chirped, metric_c, 1.0)
    k2 = coupling.compute_kA_plus(chirped, metric_c, 2.0)
    linear = abs(k2 - 2.0 * k1) / abs(k1)
    ok = im_real < 1e-12 and abs(np.imag(k1)) > 1e-3 and linear < 1e-10
    return ok, f"Im(real)={im_real:.1e} Im(chirped)={np.imag(k1):.3e} linearity={linear:.1e}"


def _coupling_kA_oracle():
    # real gaussian: source is three gaussian lobes, each with an erf potential,
    # so the overlap integral has a closed form
    spec = GridSpec(64, 16.0)
    alpha = beta = 0.5
    l_half = 1.0
    p = packets.make_packet("gaussian", L_vec=(l_half, 0, 0))
    metric = gravity.metric_for_state(p, alpha, beta, spec)
    got = coupling.compute_kA_plus(p, metric, 1.0)
    ov = np.exp(-(l_half**2))
    pot_l = -2.0 * erf(l_half / np.sqrt(2)) / l_half
    pot_0 = -4.0 / np.sqrt(2 * np.pi)
    want = 4.0 * ov * (pot_l + 2 * beta * ov * pot_0)
    rel = abs(got - want) / abs(want)
    return rel < 0.01, f"kA = {got.real:.6f} vs closed form {want:.6f} (rel {rel:.2e})"


def _coupling_kB_time():
    spec = GridSpec(32, 16.0)
    p = packets.make_packet("gaussian_phase", L_vec=(0.8, 0, 0), chirp=0.5)
    metric = gravity.metric_for_state(p, 0.5, 0.5, spec)
    omega = 9.0
    zero = coupling.compute_kB(p, metric, omega, 0.0)
    per = coupling.compute_kB(p, metric, omega, np.pi / omega)
    t = 0.1 / omega
    vals = coupling.compute_kB(p, metric, omega, t)
    # numeric time quadrature against the analytic factor
    s_plus, s_minus = coupling._pair_vertex_spatial(p, metric, omega)
    ts = np.linspace(0.0, t, 2001)
    dt = ts[1] - ts[0]
    simps = lambda y: coupling._simpson(y, dt)
    num = (
        omega * s_plus * simps(np.exp(2j * omega * (t - ts))),
        omega * s_plus * simps(np.exp(-2j * omega * (t - ts))),
        omega * s_minus * simps(np.exp(2j * omega * (t - ts))),
    )
    rel = max(abs(v - n) / abs(n) for v, n in zip(vals, num))
    ok = (
        all(v == 0 for v in zero)
        and max(abs(v) for v in per) < 1e-12 * (1.0 + abs(s_plus))
        and rel < 1e-8
    )
    return ok, f"t=0 zero, period zero, time-factor rel err {rel:.2e}"


def _coupling_distance():
    spec1 = GridSpec(64, 16.0)
    p1 = packets.make_packet("gaussian", L_vec=(1.0, 0, 0))
    m1 = gravity.metric_for_state(p1, 0.5, 0.0, spec1)
    k1 = abs(coupling.compute_kA_plus(p1, m1, 1.0))
    spec4 = GridSpec(64, 40.0)
    p4 = packets.make_packet("gaussian", L_vec=(4.0, 0, 0))
    m4 = gravity.metric_for_state(p4, 0.5, 0.0, spec4)
    k4 = abs(coupling.compute_kA_plus(p4, m4, 1.0))
    ratio = k4 / k1
    return ratio < 1e-4, f"|kA(4)|/|kA(1)| = {ratio:.2e}"


def _massless_decay():
    p = packets.make_packet("gaussian", L_vec=(1.0, 0, 0))
    d0 = coupling.massless_decay(p, 0.0)
    d10 = coupling.massless_decay(p, 10.0)
    d100 = coupling.massless_decay(p, 100.0)
    ok = abs(d0 - 1.0) < 1e-12 and d10 < 0.1 and d100 < 0.01
    return ok, f"envelope 1 -> {d10:.2e} (10 tau) -> {d100:.2e} (100 tau)"


# --- dynamics -------------------------------------------------------------


def _random_couplings(rng: np.random.Generator) -> coupling.CouplingSet:
    z = lambda: complex(rng.normal(), rng.normal())
    omega = float(rng.uniform(3.0, 20.0))
    s_p, s_m = z(), z()
    t = float(rng.uniform(0.05, 0.4))
    vals, _ = coupling._kb_from_spatial(s_p, s_m, omega, t)
    return coupling.CouplingSet(
        kA_plus=z(),
        kA_minus=float(rng.normal()),
        kB_plus_p=vals[0],
        kB_plus_m=vals[1],
        kB_minus=vals[2],
        s_plus=s_p,
        s_minus=s_m,
        omega=omega,
        t_ref=t,
        kappa_ab=0.0,
        phase_unreliable=False,
    )


def _dynamics_commutator(draws: int = 100):
    rng = np.random.default_rng(20260809)
    a_l, a_r = dynamics.mode_operators(3)
    worst = 0.0
    for _ in range(draws):
        alpha = float(rng.uniform(0.0, 1.0))
        bmax = np.sqrt(max(0.25 - (alpha - 0.5) ** 2, 0.0))
        beta = float(rng.uniform(0.0, bmax))
        coup = _random_couplings(rng)
        xi = 1e-6
        state0 = dynamics.initial_state(alpha, beta, xi)
        evolved = dynamics.evolve_main(state0, coup, coup.t_ref)
        gen = dynamics.coupling_generator(coup, coup.t_ref)
        oracle = 1j * (state0.rho0 @ gen - gen @ state0.rho0)
        worst = max(worst, float(np.max(np.abs(evolved.rho1 - oracle))))
    return worst < 1e-10, f"max |closed form - commutator| = {worst:.2e} over {draws} draws"


def _dynamics_probability():
    rng = np.random.default_rng(7)
    worst = 0.0
    leak = 0.0
    for _ in range(50):
        alpha = float(rng.uniform(0, 1))
        bmax = np.sqrt(max(0.25 - (alpha - 0.5) ** 2, 0.0))
        beta = float(rng.uniform(0, bmax))
        coup = _random_couplings(rng)
        state = dynamics.evolve_main(dynamics.initial_state(alpha, beta, 1e-5), coup, coup.t_ref)
        p_l, p_r = dynamics.probabilities(state)
        worst = max(worst, abs(p_l + p_r - 1.0))
        diag = np.real(np.diag(state.rho1)).copy()
        diag[state.index(0, 1)] = 0.0
        diag[state.index(1, 0)] = 0.0
        leak = max(leak, float(np.max(np.abs(diag))))
    return worst < 1e-14 and leak == 0.0, f"|p_L+p_R-1| <= {worst:.1e}, off-site population {leak:.1e}"


def _dynamics_purity_entropy():
    rng = np.random.default_rng(11)
    worst_g = worst_s = 0.0
    for _ in range(50):
        alpha = float(rng.uniform(0.05, 0.95))
        bmax = np.sqrt(max(0.25 - (alpha - 0.5) ** 2, 0.0))
        beta = float(rng.uniform(0, bmax))
        coup = _random_couplings(rng)
        xi = 1e-6
        state = dynamics.evolve_main(dynamics.initial_state(alpha, beta, xi), coup, coup.t_ref)
        mtxk = state.m_t * xi * np.imag(coup.kA_plus)
        red_l = dynamics.reduce(state, "L")
        red_r = dynamics.reduce(state, "R")
        g_l, s_l = dynamics.purity_entropy(red_l, alpha, beta, mtxk)
        g_r, s_r = dynamics.purity_entropy(red_r, alpha, beta, mtxk)
        worst_g = max(
            worst_g,
            abs(g_l - red_l.purity_first_order()),
            abs(g_r - red_r.purity_first_order()),
        )
        worst_s = max(worst_s, abs(s_l + s_r), abs(s_l - red_l.entropy_shift_first_order()))
    return worst_g < 1e-10 and worst_s < 1e-12, f"purity defect {worst_g:.1e}, entropy defect {worst_s:.1e}"


def _dynamics_lindblad(draws: int = 20):
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(draws):
        alpha = float(rng.uniform(0.1, 0.9))
        bmax = np.sqrt(max(0.25 - (alpha - 0.5) ** 2, 0.0))
        beta = float(rng.uniform(0.0, bmax))
        coup = _random_couplings(rng)
        xi = 1e-4
        t = coup.t_ref
        dt = 1e-6
        for side in ("L", "R"):
            red = dynamics.reduce(dynamics.evolve_main(dynamics.initial_state(alpha, beta, xi), coup.at_time(t), t), side)
            ham = dynamics.reduced_hamiltonian(coup, side, alpha, beta, t)
            rhs = dynamics.lindblad_rhs(red, ham)
            rho_p = dynamics.reduce(
                dynamics.evolve_main(dynamics.initial_state(alpha, beta, xi), coup.at_time(t + dt), t + dt), side
            ).rho
            rho_m = dynamics.reduce(
                dynamics.evolve_main(dynamics.initial_state(alpha, beta, xi), coup.at_time(t - dt), t - dt), side
            ).rho
            fd = (rho_p - rho_m) / (2 * dt)
            worst = max(worst, float(np.max(np.abs(fd - rhs))))
    return worst < 1e-9, f"max |finite difference - lindblad rhs| = {worst:.2e}"


def _dynamics_unitarity():
    rng = np.random.default_rng(3)
    coup = _random_couplings(rng)
    xi = 1e-5
    factors = dynamics.effective_unitary(coup, coup.t_ref, xi)
    worst_u = 0.0
    for _, u in factors:
        worst_u = max(worst_u, float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0])))))
    state0 = dynamics.initial_state(0.4, 0.25, xi)
    evolved = dynamics.evolve_main(state0, coup, coup.t_ref)
    # symbolic first-order check: generator commutator equals the closed form
    gen = dynamics.coupling_generator(coup, coup.t_ref)
    sym = float(np.max(np.abs(1j * (state0.rho0 @ gen - gen @ state0.rho0) - evolved.rho1)))
    # full product check: residual must be second order in xi
    via_u = dynamics.apply_effective_unitary(factors, state0.rho0)
    defect = float(np.max(np.abs(via_u - evolved.rho)))
    ok = worst_u < 1e-10 and sym < 1e-10 and defect < 100.0 * xi**2
    return ok, f"unitarity {worst_u:.1e}, symbolic {sym:.1e}, product residual {defect:.1e}"


def _grid_convergence():
    alpha = beta = 0.5
    p = packets.make_packet("gaussian_phase", L_vec=(1.0, 0, 0), chirp=0.5)
    vals = []
    for n in (64, 128):
        spec = GridSpec(n, 16.0)
        metric = gravity.metric_for_state(p, alpha, beta, spec)
        vals.append(coupling.compute_kA_plus(p, metric, 1.0))
    rel = abs(vals[1] - vals[0]) / abs(vals[1])
    return rel < 0.005, f"kA(n=64) vs kA(n=128): rel change {rel:.2e}"


def run_checks(level: str = "quick") -> list[CheckResult]:
    if level not in ("quick", "full"):
        raise ValueError(f"level must be 'quick' or 'full', got {level!r}")
    results: list[CheckResult] = []
    _check(results, "scales.sphere_values", _scales_sphere)
    _check(results, "scales.scaling_laws", _scales_scaling_laws)
    _check(results, "scales.regime_flags", _scales_regime)
    _check(results, "packets.normalization", _packet_normalization)
    _check(results, "packets.overlap_oracle", _packet_overlap)
    _check(results, "packets.parseval", _packet_parseval)
    _check(results, "gravity.source_integral", _source_integral)
    _check(results, "gravity.poisson_oracle_64", lambda: _poisson_oracle(64))
    _check(results, "gravity.poisson_residual", _poisson_residual)
    _check(results, "gravity.poisson_linearity", _poisson_linearity)
    _check(results, "gravity.far_field", _poisson_far_field)
    _check(results, "gravity.metric_identity", _metric_identity)
    _check(results, "coupling.symmetry", _coupling_symmetry)
    _check(results, "coupling.kA_oracle", _coupling_kA_oracle)
    _check(results, "coupling.kB_time_factor", _coupling_kB_time)
    _check(results, "coupling.distance_suppression", _coupling_distance)
    _check(results, "coupling.massless_decay", _massless_decay)
    _check(results, "dynamics.commutator_oracle", _dynamics_commutator)
    _check(results, "dynamics.probability_sum", _dynamics_probability)
    _check(results, "dynamics.purity_entropy", _dynamics_purity_entropy)
    _check(results, "dynamics.lindblad_consistency", _dynamics_lindblad)
    _check(results, "dynamics.unitary_factorization", _dynamics_unitarity)
    if level == "full":
        _check(results, "gravity.poisson_oracle_128", lambda: _poisson_oracle(128))
        _check(results, "coupling.grid_convergence", _grid_convergence)
    return results


def report(results: list[CheckResult]) -> dict:
    return {
        "passed": all(r.passed for r in results),
        "checks": [asdict(r) for r in results],
    }
