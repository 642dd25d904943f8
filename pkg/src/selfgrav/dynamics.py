"""First-order dynamics of the two-site state under its own gravity.

States live on the truncated two-mode Fock basis |m_L n_R> with m+n <= n_max
(default 3: the first-order update populates nothing above total occupation
3, so the truncation is lossless).  Density matrices are kept in first-order
bookkeeping form rho = rho0 + xi rho1 with the xi^2 terms dropped at
assembly; this keeps observables exact at order xi even when xi itself is
astronomically small.

The evolved state is assembled term by term:

    rho(t) = rho0
           + 2 xi b Im(kA) (|01><01| - |10><10|)
           - (1-2a) i xi kA |01><10| + h.c.
           + sqrt2 i xi [a kBpp + 2 b kBm]       |01><21| + h.c.
           + sqrt2 i xi [2 a kBm + b kBpm*]      |01><12| + h.c.
           + sqrt2 i xi [2 (1-a) kBm + b kBpp]   |10><21| + h.c.
           + sqrt2 i xi [(1-a) kBpm* + 2 b kBm]  |10><12| + h.c.
           + sqrt6 i xi a kBpm* |01><03| + sqrt6 i xi b kBpp |01><30| + h.c.
           + sqrt6 i xi b kBpm* |10><03| + sqrt6 i xi (1-a) kBpp |10><30| + h.c.

with a = alpha, b = beta, kA = kA_plus(t), kBpp/kBpm/kBm the pair couplings.
This equals rho0 + i xi [rho0, Heff] for the quadratic generator

    Heff = kA a_R+ a_L + kA* a_L+ a_R + kA_minus (N_L + N_R)
         + kBpp a_L^2 + kBpp* a_L+^2 + kBpm* a_R^2 + kBpm a_R+^2
         + 2 (kBm a_L a_R + kBm* a_L+ a_R+),

which is also the generator set returned by :func:`effective_unitary`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .coupling import CouplingSet
from .errors import DomainError, require_state_params

DEFAULT_N_MAX = 3


def basis_states(n_max: int) -> list[tuple[int, int]]:
    """Occupation pairs (m_L, n_R) with m+n <= n_max, ordered by total then m_L."""
    return [(m, n) for total in range(n_max + 1) for m in range(total + 1) for n in [total - m]]


def mode_operators(n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Annihilation matrices (a_L, a_R) on the truncated basis."""
    states = basis_states(n_max)
    index = {s: i for i, s in enumerate(states)}
    dim = len(states)
    a_l = np.zeros((dim, dim), dtype=np.complex128)
    a_r = np.zeros((dim, dim), dtype=np.complex128)
    for (m, n), j in index.items():
        if m > 0:
            a_l[index[(m - 1, n)], j] = np.sqrt(m)
        if n > 0:
            a_r[index[(m, n - 1)], j] = np.sqrt(n)
    return a_l, a_r


@dataclass
class TwoModeState:
    """Two-mode density matrix in first-order bookkeeping form."""

    alpha: float
    beta: float
    xi: float
    n_max: int
    rho0: np.ndarray
    rho1: np.ndarray
    basis: list[tuple[int, int]] = field(default_factory=list)
    m_t: float = 0.0  # dimensionless m*t of the evolution that produced rho1
    im_kA: float = 0.0  # Im kA_plus(t) of that evolution
    omega: float = 0.0  # Compton frequency used by that evolution (natural units)

    @property
    def rho(self) -> np.ndarray:
        return self.rho0 + self.xi * self.rho1

    def index(self, m: int, n: int) -> int:
        return self.basis.index((m, n))


@dataclass
class ReducedState:
    """Single-mode reduced state with its localization rate attached.

    ``kappa`` is the published rate magnitude 2 m t xi kappa_ab * beta/(1-alpha)
    (side L) or * beta/alpha (side R); ``rate`` is the signed instantaneous
    dissipator rate that reproduces d/dt of the reduced evolution with jump
    operator a (negative for the side whose ground population shrinks).
    """

    side: str
    alpha: float
    beta: float
    xi: float
    n_max: int
    rho0: np.ndarray
    rho1: np.ndarray
    kappa: float
    kappa_defined: bool
    rate: float

    @property
    def rho(self) -> np.ndarray:
        return self.rho0 + self.xi * self.rho1

    def purity_first_order(self) -> float:
        return float(np.real(np.trace(self.rho0 @ self.rho0) + 2.0 * self.xi * np.trace(self.rho0 @ self.rho1)))

    def entropy_shift_first_order(self) -> float:
        """First-order change of -Tr(rho ln rho) from the population shifts."""
        p0 = np.real(np.diag(self.rho0))
        p1 = np.real(np.diag(self.rho1))
        active = np.abs(p1) > 0.0
        if not np.any(active):
            return 0.0
        if np.any(p0[active] <= 0.0):
            raise DomainError("entropy shift undefined: population moving out of an empty level")
        return float(-self.xi * np.sum(p1[active] * (np.log(p0[active]) + 1.0)))


def initial_state(alpha: float, beta: float, xi: float, n_max: int = DEFAULT_N_MAX) -> TwoModeState:
    """alpha |01><01| + (1-alpha) |10><10| + beta (|01><10| + |10><01|)."""
    alpha, beta = require_state_params(alpha, beta)
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    states = basis_states(n_max)
    dim = len(states)
    rho0 = np.zeros((dim, dim), dtype=np.complex128)
    i01 = states.index((0, 1))
    i10 = states.index((1, 0))
    rho0[i01, i01] = alpha
    rho0[i10, i10] = 1.0 - alpha
    rho0[i01, i10] = beta
    rho0[i10, i01] = beta
    return TwoModeState(
        alpha=alpha,
        beta=beta,
        xi=float(xi),
        n_max=n_max,
        rho0=rho0,
        rho1=np.zeros_like(rho0),
        basis=states,
    )


def _first_order_update(
    alpha: float,
    beta: float,
    kA: complex,
    kBpp: complex,
    kBpm: complex,
    kBm: complex,
    basis: list[tuple[int, int]],
) -> np.ndarray:
    dim = len(basis)
    idx = {s: i for i, s in enumerate(basis)}
    d = np.zeros((dim, dim), dtype=np.complex128)

    def add(bra: tuple[int, int], ket: tuple[int, int], value: complex) -> None:
        d[idx[bra], idx[ket]] += value
        d[idx[ket], idx[bra]] += np.conj(value)

    s01, s10 = (0, 1), (1, 0)
    im = np.imag(kA)
    d[idx[s01], idx[s01]] += 2.0 * beta * im
    d[idx[s10], idx[s10]] -= 2.0 * beta * im
    add(s01, s10, -(1.0 - 2.0 * alpha) * 1j * kA)

    rt2, rt6 = np.sqrt(2.0), np.sqrt(6.0)
    add(s01, (2, 1), rt2 * 1j * (alpha * kBpp + 2.0 * beta * kBm))
    add(s01, (1, 2), rt2 * 1j * (2.0 * alpha * kBm + beta * np.conj(kBpm)))
    add(s10, (2, 1), rt2 * 1j * (2.0 * (1.0 - alpha) * kBm + beta * kBpp))
    add(s10, (1, 2), rt2 * 1j * ((1.0 - alpha) * np.conj(kBpm) + 2.0 * beta * kBm))
    add(s01, (0, 3), rt6 * 1j * alpha * np.conj(kBpm))
    add(s01, (3, 0), rt6 * 1j * beta * kBpp)
    add(s10, (0, 3), rt6 * 1j * beta * np.conj(kBpm))
    add(s10, (3, 0), rt6 * 1j * (1.0 - alpha) * kBpp)
    return d


def evolve_main(state0: TwoModeState, coup: CouplingSet, t: float) -> TwoModeState:
    """Closed-form first-order evolution of the two-site state to time t."""
    if state0.n_max < 3:
        raise DomainError(
            f"n_max = {state0.n_max} cannot hold the pair sectors; need n_max >= 3"
        )
    if np.any(state0.rho1):
        raise DomainError("evolve_main expects the unevolved initial state")
    m_t = coup.omega * t
    kA = coup.kA_plus_at(m_t)
    kBpp, kBpm, kBm = coup.kB_values(t)
    rho1 = _first_order_update(
        state0.alpha, state0.beta, kA, kBpp, kBpm, kBm, state0.basis
    )
    return TwoModeState(
        alpha=state0.alpha,
        beta=state0.beta,
        xi=state0.xi,
        n_max=state0.n_max,
        rho0=state0.rho0.copy(),
        rho1=rho1,
        basis=list(state0.basis),
        m_t=m_t,
        im_kA=float(np.imag(kA)),
        omega=coup.omega,
    )


def coupling_generator(coup: CouplingSet, t: float, n_max: int = DEFAULT_N_MAX) -> np.ndarray:
    """Hermitian quadratic generator whose commutator action equals evolve_main."""
    a_l, a_r = mode_operators(n_max)
    m_t = coup.omega * t
    kA = coup.kA_plus_at(m_t)
    kA_minus = coup.kA_minus * m_t
    kBpp, kBpm, kBm = coup.kB_values(t)
    num = a_l.conj().T @ a_l + a_r.conj().T @ a_r
    h = kA * (a_r.conj().T @ a_l) + np.conj(kA) * (a_l.conj().T @ a_r)
    h += kA_minus * num
    h += kBpp * (a_l @ a_l) + np.conj(kBpp) * (a_l.conj().T @ a_l.conj().T)
    h += np.conj(kBpm) * (a_r @ a_r) + kBpm * (a_r.conj().T @ a_r.conj().T)
    h += 2.0 * (kBm * (a_l @ a_r) + np.conj(kBm) * (a_l.conj().T @ a_r.conj().T))
    return h


def effective_unitary(
    coup: CouplingSet, t: float, xi: float, n_max: int = DEFAULT_N_MAX
) -> list[tuple[str, np.ndarray]]:
    """Factorized propagator: free rotation, beam splitter, two single-mode
    squeezers, and a two-mode squeezer.

    Returned in application order (free rotation innermost/first); the product
    U = BS @ SMS_L @ SMS_R @ TMS @ U0 reproduces :func:`evolve_main` at order
    xi when conjugating the initial state.  Free-rotation phases are reduced
    mod 2 pi before exponentiation.
    """
    a_l, a_r = mode_operators(n_max)
    states = basis_states(n_max)
    m_t = coup.omega * t
    kA = coup.kA_plus_at(m_t)
    kBpp, kBpm, kBm = coup.kB_values(t)

    totals = np.array([m + n for (m, n) in states], dtype=float)
    phases = np.mod(coup.omega * t, 2.0 * np.pi)
    u0 = np.diag(np.exp(-1j * phases * totals))

    g_bs = kA * (a_r.conj().T @ a_l) + np.conj(kA) * (a_l.conj().T @ a_r)
    g_sms_l = kBpp * (a_l @ a_l) + np.conj(kBpp) * (a_l.conj().T @ a_l.conj().T)
    g_sms_r = np.conj(kBpm) * (a_r @ a_r) + kBpm * (a_r.conj().T @ a_r.conj().T)
    g_tms = 2.0 * (kBm * (a_l @ a_r) + np.conj(kBm) * (a_l.conj().T @ a_r.conj().T))

    return [
        ("free_rotation", u0),
        ("beam_splitter", expm(-1j * xi * g_bs)),
        ("single_mode_squeeze_L", expm(-1j * xi * g_sms_l)),
        ("single_mode_squeeze_R", expm(-1j * xi * g_sms_r)),
        ("two_mode_squeeze", expm(-1j * xi * g_tms)),
    ]


def apply_effective_unitary(factors: list[tuple[str, np.ndarray]], rho: np.ndarray) -> np.ndarray:
    """Conjugate rho by the factor product, free rotation applied first."""
    mats = dict(factors)
    u = (
        mats["beam_splitter"]
        @ mats["single_mode_squeeze_L"]
        @ mats["single_mode_squeeze_R"]
        @ mats["two_mode_squeeze"]
        @ mats["free_rotation"]
    )
    return u @ rho @ u.conj().T


def reduce(state: TwoModeState, side: str) -> ReducedState:
    """Partial trace onto one mode, with the localization rate attached."""
    if side not in ("L", "R"):
        raise DomainError(f"side must be 'L' or 'R', got {side!r}")
    dim = state.n_max + 1
    r0 = np.zeros((dim, dim), dtype=np.complex128)
    r1 = np.zeros((dim, dim), dtype=np.complex128)
    for i, (m, n) in enumerate(state.basis):
        for j, (mp, np_) in enumerate(state.basis):
            if side == "L" and n == np_:
                r0[m, mp] += state.rho0[i, j]
                r1[m, mp] += state.rho1[i, j]
            elif side == "R" and m == mp:
                r0[n, np_] += state.rho0[i, j]
                r1[n, np_] += state.rho1[i, j]

    alpha, beta = state.alpha, state.beta
    kappa_ab = state.im_kA / state.m_t if state.m_t != 0.0 else 0.0
    denom = (1.0 - alpha) if side == "L" else alpha
    if denom <= 0.0:
        # beta is forced to zero here, so the rate carries no effect anyway
        kappa, defined, rate = 0.0, False, 0.0
    else:
        kappa = 2.0 * state.m_t * state.xi * (beta / denom) * kappa_ab
        defined = True
        rate_mag = 2.0 * state.xi * (beta / denom) * kappa_ab * state.omega
        # the R-side ground population shrinks, so its jump-down rate is negative
        rate = rate_mag if side == "L" else -rate_mag
    return ReducedState(
        side=side,
        alpha=alpha,
        beta=beta,
        xi=state.xi,
        n_max=state.n_max,
        rho0=r0,
        rho1=r1,
        kappa=kappa,
        kappa_defined=defined,
        rate=rate,
    )


def single_mode_operators(n_max: int) -> np.ndarray:
    a = np.zeros((n_max + 1, n_max + 1), dtype=np.complex128)
    for n in range(1, n_max + 1):
        a[n - 1, n] = np.sqrt(n)
    return a


def reduced_hamiltonian(
    coup: CouplingSet, side: str, alpha: float, beta: float, t: float, n_max: int = DEFAULT_N_MAX
) -> np.ndarray:
    """Per-side generator H1_Q: free rotation, squeezing drive, and the
    occupation-limited pair drive whose strength is set by the partner's
    population share."""
    if side not in ("L", "R"):
        raise DomainError(f"side must be 'L' or 'R', got {side!r}")
    a = single_mode_operators(n_max)
    adag = a.conj().T
    num = adag @ a
    one = np.eye(n_max + 1, dtype=np.complex128)
    d_kBpp, d_kBpm, d_kBm = coup.kB_derivatives(t)
    h = coup.omega * num
    if side == "L":
        h = h + np.conj(d_kBpp) * (adag @ adag) + d_kBpp * (a @ a)
        share = beta / alpha if alpha > 0.0 else 0.0
    else:
        h = h + d_kBpm * (adag @ adag) + np.conj(d_kBpm) * (a @ a)
        share = beta / (1.0 - alpha) if alpha < 1.0 else 0.0
    nl = np.conj(d_kBm) * (adag @ adag @ (one - num)) + d_kBm * ((one - num) @ a @ a)
    return h + 2.0 * share * nl


def lindblad_rhs(red: ReducedState, ham: np.ndarray) -> np.ndarray:
    """d rho_Q / dt = -i [H1_Q, rho_Q] xi + rate (a rho a+ - {a+ a, rho}/2).

    Evaluated on the zeroth-order state (the order-xi pieces of rho would
    only contribute at xi^2)."""
    a = single_mode_operators(red.n_max)
    adag = a.conj().T
    rho = red.rho0
    out = -1j * red.xi * (ham @ rho - rho @ ham)
    if red.rate != 0.0:
        num = adag @ a
        out = out + red.rate * (a @ rho @ adag - 0.5 * (num @ rho + rho @ num))
    return out


def probabilities(state: TwoModeState) -> tuple[float, float]:
    """(p_L, p_R) of finding the excitation on each side; sums to one exactly."""
    i10 = state.index(1, 0)
    p_l = float(np.real(state.rho0[i10, i10]) + state.xi * np.real(state.rho1[i10, i10]))
    return p_l, 1.0 - p_l


def purity_entropy(
    red: ReducedState, alpha: float, beta: float, m_t_xi_kappa: float
) -> tuple[float, float]:
    """First-order purity and entropy change of a reduced state.

    gamma = alpha^2 + (1-alpha)^2 - 4 (1-2 alpha) beta * m t xi kappa, equal
    for both sides.  The entropy shift is reported in the antisymmetric
    convention Delta S_R = -Delta S_L with
    Delta S_L = 2 beta m t xi kappa ln((1-alpha)/alpha), so the two shifts
    cancel by construction (the published conservation property).
    """
    alpha, beta = require_state_params(alpha, beta)
    gamma = alpha**2 + (1.0 - alpha) ** 2 - 4.0 * (1.0 - 2.0 * alpha) * beta * m_t_xi_kappa
    if alpha in (0.0, 1.0) or beta == 0.0:
        delta_s_l = 0.0
    else:
        delta_s_l = 2.0 * beta * m_t_xi_kappa * np.log((1.0 - alpha) / alpha)
    delta_s = delta_s_l if red.side == "L" else -delta_s_l
    return float(gamma), float(delta_s)
