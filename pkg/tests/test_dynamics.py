import numpy as np
import pytest

from selfgrav import (
    DomainError,
    effective_unitary,
    evolve_main,
    initial_state,
    lindblad_rhs,
    probabilities,
    purity_entropy,
    reduce,
    reduced_hamiltonian,
)
from selfgrav.coupling import CouplingSet, _kb_from_spatial
from selfgrav.dynamics import (
    apply_effective_unitary,
    basis_states,
    coupling_generator,
    mode_operators,
    single_mode_operators,
)


def synthetic_couplings(
    kA=0.0 + 0.0j, kA_minus=0.0, s_plus=0.0 + 0.0j, s_minus=0.0 + 0.0j, omega=10.0, t=0.1
) -> CouplingSet:
    vals, _ = _kb_from_spatial(complex(s_plus), complex(s_minus), omega, t)
    return CouplingSet(
        kA_plus=complex(kA),
        kA_minus=float(kA_minus),
        kB_plus_p=vals[0],
        kB_plus_m=vals[1],
        kB_minus=vals[2],
        s_plus=complex(s_plus),
        s_minus=complex(s_minus),
        omega=omega,
        t_ref=t,
        kappa_ab=float(np.imag(kA)),
        phase_unreliable=False,
    )


def random_couplings(rng, omega=None, t=None) -> CouplingSet:
    z = lambda: complex(rng.normal(), rng.normal())
    return synthetic_couplings(
        kA=z(),
        kA_minus=float(rng.normal()),
        s_plus=z(),
        s_minus=z(),
        omega=float(omega if omega is not None else rng.uniform(3, 20)),
        t=float(t if t is not None else rng.uniform(0.05, 0.4)),
    )


def random_state_params(rng):
    alpha = float(rng.uniform(0.0, 1.0))
    bmax = np.sqrt(max(0.25 - (alpha - 0.5) ** 2, 0.0))
    return alpha, float(rng.uniform(0.0, bmax))


# --- basis and operators -----------------------------------------------------


def test_basis_has_all_pairs_up_to_nmax():
    states = basis_states(3)
    assert len(states) == 10
    assert set(states) == {(m, n) for m in range(4) for n in range(4) if m + n <= 3}


def test_mode_operators_commutator():
    # [a, a^dag] = 1 on every state whose raised image is still inside the cut
    n_max = 5
    a_l, a_r = mode_operators(n_max)
    states = basis_states(n_max)
    comm = a_l @ a_l.conj().T - a_l.conj().T @ a_l
    for i, (m, n) in enumerate(states):
        if m + n < n_max:
            assert comm[i, i] == pytest.approx(1.0)
    assert np.allclose(a_l @ a_r, a_r @ a_l)


# --- initial state -----------------------------------------------------------


def test_initial_state_layout():
    st = initial_state(0.3, 0.2, 1e-6)
    i01, i10 = st.index(0, 1), st.index(1, 0)
    assert st.rho0[i01, i01] == pytest.approx(0.3)
    assert st.rho0[i10, i10] == pytest.approx(0.7)
    assert st.rho0[i01, i10] == pytest.approx(0.2)
    assert np.trace(st.rho0) == pytest.approx(1.0, abs=1e-14)
    assert not np.any(st.rho1)


def test_initial_state_rejects_bad_params():
    with pytest.raises(DomainError):
        initial_state(1.2, 0.0, 1e-6)
    with pytest.raises(DomainError):
        initial_state(0.9, 0.45, 1e-6)


# --- evolve_main -------------------------------------------------------------


def test_commutator_oracle_over_random_draws(rng):
    worst = 0.0
    for _ in range(100):
        alpha, beta = random_state_params(rng)
        coup = random_couplings(rng)
        state0 = initial_state(alpha, beta, 1e-6)
        evolved = evolve_main(state0, coup, coup.t_ref)
        gen = coupling_generator(coup, coup.t_ref)
        oracle = 1j * (state0.rho0 @ gen - gen @ state0.rho0)
        worst = max(worst, float(np.max(np.abs(evolved.rho1 - oracle))))
    assert worst < 1e-10


def test_zero_strength_is_identity(rng):
    coup = random_couplings(rng)
    state0 = initial_state(0.4, 0.3, 0.0)
    evolved = evolve_main(state0, coup, coup.t_ref)
    assert np.array_equal(evolved.rho, state0.rho0)


def test_no_population_shift_without_coherence(rng):
    coup = random_couplings(rng)
    state0 = initial_state(0.5, 0.0, 1e-6)
    evolved = evolve_main(state0, coup, coup.t_ref)
    i01, i10 = state0.index(0, 1), state0.index(1, 0)
    assert evolved.rho1[i01, i01] == 0.0
    assert evolved.rho1[i10, i10] == 0.0


def test_trace_and_hermiticity_preserved(rng):
    for _ in range(20):
        alpha, beta = random_state_params(rng)
        coup = random_couplings(rng)
        evolved = evolve_main(initial_state(alpha, beta, 1e-5), coup, coup.t_ref)
        rho = evolved.rho
        assert abs(np.trace(rho) - 1.0) < 1e-12
        assert np.max(np.abs(rho - rho.conj().T)) < 1e-12


def test_eigenvalues_nonnegative_at_first_order(rng):
    for _ in range(10):
        alpha, beta = random_state_params(rng)
        coup = random_couplings(rng)
        evolved = evolve_main(initial_state(alpha, beta, 1e-7), coup, coup.t_ref)
        assert np.min(np.linalg.eigvalsh(evolved.rho)) > -1e-10


def test_truncation_too_small_rejected(rng):
    state0 = initial_state(0.5, 0.5, 1e-6, n_max=2)
    with pytest.raises(DomainError, match="n_max"):
        evolve_main(state0, random_couplings(rng), 0.1)


def test_no_leakage_above_total_occupation_three(rng):
    # on a larger cut the generator still only connects the one-excitation
    # sector to totals <= 3
    coup = random_couplings(rng)
    state0 = initial_state(0.4, 0.3, 1e-6, n_max=5)
    gen = coupling_generator(coup, coup.t_ref, n_max=5)
    update = 1j * (state0.rho0 @ gen - gen @ state0.rho0)
    states = basis_states(5)
    for i, (m, n) in enumerate(states):
        for j, (mp, np_) in enumerate(states):
            if m + n > 3 or mp + np_ > 3:
                assert update[i, j] == 0.0


def test_population_shift_matches_formula(rng):
    alpha, beta = 0.3, 0.35
    coup = random_couplings(rng)
    xi = 1e-6
    evolved = evolve_main(initial_state(alpha, beta, xi), coup, coup.t_ref)
    im_k = np.imag(coup.kA_plus_at(coup.omega * coup.t_ref))
    i01, i10 = evolved.index(0, 1), evolved.index(1, 0)
    assert evolved.rho1[i01, i01].real == pytest.approx(2 * beta * im_k, rel=1e-12)
    assert evolved.rho1[i10, i10].real == pytest.approx(-2 * beta * im_k, rel=1e-12)


# --- effective unitary -------------------------------------------------------


def test_factor_list_names_and_pure_phase_limit():
    coup = synthetic_couplings(omega=2.0, t=0.3)
    factors = effective_unitary(coup, 0.3, 1e-5)
    names = [name for name, _ in factors]
    assert names == [
        "free_rotation",
        "beam_splitter",
        "single_mode_squeeze_L",
        "single_mode_squeeze_R",
        "two_mode_squeeze",
    ]
    dim = factors[0][1].shape[0]
    for name, u in factors[1:]:
        assert np.allclose(u, np.eye(dim)), name
    phases = np.diag(factors[0][1])
    assert phases[0] == pytest.approx(1.0)  # vacuum picks no phase
    assert abs(phases[1]) == pytest.approx(1.0)


def test_factors_are_unitary(rng):
    coup = random_couplings(rng)
    for name, u in effective_unitary(coup, coup.t_ref, 1e-4):
        assert np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) < 1e-10, name


def test_first_order_generator_matches_evolution(rng):
    for _ in range(10):
        alpha, beta = random_state_params(rng)
        coup = random_couplings(rng)
        state0 = initial_state(alpha, beta, 1e-6)
        evolved = evolve_main(state0, coup, coup.t_ref)
        gen = coupling_generator(coup, coup.t_ref)
        assert np.max(np.abs(1j * (state0.rho0 @ gen - gen @ state0.rho0) - evolved.rho1)) < 1e-10


def test_product_reproduces_evolution_to_first_order(rng):
    xi = 1e-5
    coup = random_couplings(rng)
    state0 = initial_state(0.35, 0.3, xi)
    evolved = evolve_main(state0, coup, coup.t_ref)
    factors = effective_unitary(coup, coup.t_ref, xi)
    via_u = apply_effective_unitary(factors, state0.rho0)
    assert np.max(np.abs(via_u - evolved.rho)) < 100 * xi**2


# --- reduced states ----------------------------------------------------------


def test_reduce_initial_maximally_coherent():
    st = initial_state(0.5, 0.5, 1e-6)
    red = reduce(st, "L")
    assert np.allclose(np.diag(red.rho0)[:2], [0.5, 0.5])
    assert np.trace(red.rho) == pytest.approx(1.0, abs=1e-14)


def test_reduce_populations_follow_evolution(rng):
    alpha, beta, xi = 0.3, 0.35, 1e-6
    coup = random_couplings(rng)
    evolved = evolve_main(initial_state(alpha, beta, xi), coup, coup.t_ref)
    im_k = np.imag(coup.kA_plus_at(coup.omega * coup.t_ref))
    red_l = reduce(evolved, "L")
    red_r = reduce(evolved, "R")
    assert red_l.rho[0, 0].real == pytest.approx(alpha + 2 * xi * beta * im_k, rel=1e-12)
    assert red_l.rho[1, 1].real == pytest.approx(1 - alpha - 2 * xi * beta * im_k, rel=1e-12)
    assert red_r.rho[0, 0].real == pytest.approx(1 - alpha - 2 * xi * beta * im_k, rel=1e-12)
    assert np.trace(red_l.rho) == pytest.approx(1.0, abs=1e-13)
    assert np.trace(red_r.rho) == pytest.approx(1.0, abs=1e-13)


def test_reduce_kappa_ratio(rng):
    alpha, beta, xi = 0.3, 0.35, 1e-6
    coup = random_couplings(rng)
    evolved = evolve_main(initial_state(alpha, beta, xi), coup, coup.t_ref)
    red_l, red_r = reduce(evolved, "L"), reduce(evolved, "R")
    assert red_l.kappa_defined and red_r.kappa_defined
    if red_r.kappa != 0.0:
        assert red_l.kappa / red_r.kappa == pytest.approx(alpha / (1 - alpha), rel=1e-12)


def test_reduce_edge_alpha_flags_undefined_rate(rng):
    coup = random_couplings(rng)
    evolved = evolve_main(initial_state(1.0, 0.0, 1e-6), coup, coup.t_ref)
    red_l = reduce(evolved, "L")  # beta/(1-alpha) undefined at alpha=1
    assert not red_l.kappa_defined
    assert red_l.kappa == 0.0 and red_l.rate == 0.0


def test_reduce_rejects_bad_side(rng):
    coup = random_couplings(rng)
    evolved = evolve_main(initial_state(0.5, 0.5, 1e-6), coup, coup.t_ref)
    with pytest.raises(DomainError):
        reduce(evolved, "X")


# --- lindblad form -----------------------------------------------------------


def test_lindblad_matches_finite_difference(rng):
    worst = 0.0
    for _ in range(20):
        alpha, beta = random_state_params(rng)
        xi = 1e-4
        coup = random_couplings(rng)
        t, dt = coup.t_ref, 1e-6
        for side in ("L", "R"):
            red = reduce(evolve_main(initial_state(alpha, beta, xi), coup, t), side)
            rhs = lindblad_rhs(red, reduced_hamiltonian(coup, side, alpha, beta, t))
            fd = (
                reduce(evolve_main(initial_state(alpha, beta, xi), coup, t + dt), side).rho
                - reduce(evolve_main(initial_state(alpha, beta, xi), coup, t - dt), side).rho
            ) / (2 * dt)
            worst = max(worst, float(np.max(np.abs(fd - rhs))))
    assert worst < 1e-9


def test_lindblad_rhs_is_traceless(rng):
    alpha, beta, xi = 0.3, 0.35, 1e-5
    coup = random_couplings(rng)
    for side in ("L", "R"):
        red = reduce(evolve_main(initial_state(alpha, beta, xi), coup, coup.t_ref), side)
        rhs = lindblad_rhs(red, reduced_hamiltonian(coup, side, alpha, beta, coup.t_ref))
        assert abs(np.trace(rhs)) < 1e-12


def test_dissipator_vanishes_without_coherence(rng):
    coup = random_couplings(rng)
    red = reduce(evolve_main(initial_state(0.5, 0.0, 1e-5), coup, coup.t_ref), "L")
    assert red.rate == 0.0 and red.kappa == 0.0


def test_dissipator_population_transfer_rate(rng):
    # jump term moves population between the lowest two levels at rate * p1
    alpha, beta, xi = 0.4, 0.25, 1e-5
    coup = random_couplings(rng)
    red = reduce(evolve_main(initial_state(alpha, beta, xi), coup, coup.t_ref), "L")
    ham = reduced_hamiltonian(coup, "L", alpha, beta, coup.t_ref)
    rhs = lindblad_rhs(red, ham)
    p1 = red.rho0[1, 1].real
    assert rhs[0, 0].real == pytest.approx(red.rate * p1, rel=1e-10)


def test_lindblad_rate_signs(rng):
    coup = synthetic_couplings(kA=1.0 + 2.0j, omega=5.0, t=0.2)
    evolved = evolve_main(initial_state(0.4, 0.25, 1e-5), coup, 0.2)
    assert reduce(evolved, "L").rate > 0.0
    assert reduce(evolved, "R").rate < 0.0
    assert reduce(evolved, "L").kappa > 0.0 and reduce(evolved, "R").kappa > 0.0


# --- observables -------------------------------------------------------------


def test_probabilities_sum_to_one_exactly(rng):
    for _ in range(25):
        alpha, beta = random_state_params(rng)
        coup = random_couplings(rng)
        evolved = evolve_main(initial_state(alpha, beta, 1e-5), coup, coup.t_ref)
        p_l, p_r = probabilities(evolved)
        assert p_l + p_r == 1.0


def test_probabilities_constant_without_coherence(rng):
    coup = random_couplings(rng)
    evolved = evolve_main(initial_state(0.3, 0.0, 1e-5), coup, coup.t_ref)
    p_l, p_r = probabilities(evolved)
    assert p_l == pytest.approx(0.7, abs=1e-15)


def test_probabilities_drift_direction():
    # positive kernel and coherence: the left-detection probability decreases
    coup = synthetic_couplings(kA=0.0 + 1.5j, omega=5.0, t=0.2)
    xi = 1e-5
    p_l_1, _ = probabilities(evolve_main(initial_state(0.5, 0.5, xi), coup, 0.2))
    p_l_2, _ = probabilities(evolve_main(initial_state(0.5, 0.5, xi), coup.at_time(0.4), 0.4))
    assert p_l_1 < 0.5
    assert p_l_2 - 0.5 == pytest.approx(2 * (p_l_1 - 0.5), rel=1e-10)


def test_probability_formula(rng):
    alpha, beta, xi = 0.3, 0.3, 1e-6
    coup = random_couplings(rng)
    evolved = evolve_main(initial_state(alpha, beta, xi), coup, coup.t_ref)
    kappa = np.imag(coup.kA_plus)
    expected = (1 - alpha) - 2 * evolved.m_t * xi * beta * kappa
    p_l, _ = probabilities(evolved)
    assert p_l == pytest.approx(expected, rel=1e-12)


def test_purity_law_and_matrix_route(rng):
    for _ in range(20):
        alpha = float(rng.uniform(0.05, 0.95))
        bmax = np.sqrt(max(0.25 - (alpha - 0.5) ** 2, 0.0))
        beta = float(rng.uniform(0, bmax))
        xi = 1e-6
        coup = random_couplings(rng)
        evolved = evolve_main(initial_state(alpha, beta, xi), coup, coup.t_ref)
        mtxk = evolved.m_t * xi * np.imag(coup.kA_plus)
        for side in ("L", "R"):
            red = reduce(evolved, side)
            gamma, _ = purity_entropy(red, alpha, beta, mtxk)
            law = alpha**2 + (1 - alpha) ** 2 - 4 * (1 - 2 * alpha) * beta * mtxk
            assert gamma == pytest.approx(law, abs=1e-14)
            assert red.purity_first_order() == pytest.approx(law, abs=1e-10)


def test_purity_constant_for_maximally_coherent(rng):
    xi = 1e-5
    coup = random_couplings(rng)
    for t in (0.05, 0.1, 0.2, 0.4):
        evolved = evolve_main(initial_state(0.5, 0.5, xi), coup.at_time(t), t)
        mtxk = evolved.m_t * xi * np.imag(coup.kA_plus)
        gamma, _ = purity_entropy(reduce(evolved, "L"), 0.5, 0.5, mtxk)
        assert gamma == pytest.approx(0.5, abs=1e-14)


def test_entropy_shifts_cancel_and_match_formula(rng):
    alpha, beta, xi = 0.3, 0.35, 1e-6
    coup = random_couplings(rng)
    evolved = evolve_main(initial_state(alpha, beta, xi), coup, coup.t_ref)
    mtxk = evolved.m_t * xi * np.imag(coup.kA_plus)
    red_l, red_r = reduce(evolved, "L"), reduce(evolved, "R")
    _, ds_l = purity_entropy(red_l, alpha, beta, mtxk)
    _, ds_r = purity_entropy(red_r, alpha, beta, mtxk)
    assert ds_l + ds_r == 0.0
    expected = 2 * beta * mtxk * np.log((1 - alpha) / alpha)
    assert ds_l == pytest.approx(expected, rel=1e-12)
    # the L-side matrix route agrees with the published formula
    assert red_l.entropy_shift_first_order() == pytest.approx(expected, rel=1e-10)
    # direct eigenvalue perturbation gives equal (not opposite) shifts for the
    # two sides; the antisymmetric output is the published convention
    assert red_r.entropy_shift_first_order() == pytest.approx(
        red_l.entropy_shift_first_order(), rel=1e-10
    )


def test_entropy_zero_at_balanced_alpha(rng):
    coup = random_couplings(rng)
    xi = 1e-6
    evolved = evolve_main(initial_state(0.5, 0.4, xi), coup, coup.t_ref)
    mtxk = evolved.m_t * xi * np.imag(coup.kA_plus)
    _, ds_l = purity_entropy(reduce(evolved, "L"), 0.5, 0.4, mtxk)
    assert ds_l == 0.0


def test_single_mode_operator_shape():
    a = single_mode_operators(3)
    assert a.shape == (4, 4)
    assert a[0, 1] == pytest.approx(1.0)
    assert a[2, 3] == pytest.approx(np.sqrt(3))
