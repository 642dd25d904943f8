import numpy as np
import pytest

from selfgrav import DomainError, check_regime, compute_scales
from selfgrav.constants import C_LIGHT, G_NEWTON, HBAR
from selfgrav.scales import RegimeThresholds

SPHERE = dict(mass_kg=1e-14, size_m=1e-6, separation_m=2e-6)


def test_sphere_values_against_direct_formulas():
    s = compute_scales(**SPHERE)
    assert s.xi == pytest.approx(G_NEWTON * 1e-14 / (1e-6 * C_LIGHT**2), rel=1e-15)
    assert s.xi == pytest.approx(7.4262e-36, rel=1e-4)
    assert s.compton_m == pytest.approx(HBAR / (1e-14 * C_LIGHT), rel=1e-15)
    assert s.compton_m == pytest.approx(3.5177e-29, rel=1e-4)
    assert s.tau_g_s == pytest.approx(2 * HBAR * 1e-6 / (G_NEWTON * 1e-28), rel=1e-15)
    assert s.tau_g_s == pytest.approx(3.160e-2, rel=1e-3)
    assert s.tau_qm_s == pytest.approx(1e-12 / (s.compton_m * C_LIGHT), rel=1e-15)
    assert s.tau_light_s == pytest.approx(1e-6 / C_LIGHT, rel=1e-15)
    assert s.e_grav_J == pytest.approx(G_NEWTON * 1e-28 / 2e-6, rel=1e-15)
    assert s.energy_scale_J == pytest.approx(1e-14 * C_LIGHT**2, rel=1e-15)


def test_sphere_sits_in_paper_ranges():
    s = compute_scales(**SPHERE)
    assert 1e-36 <= s.xi <= 1e-35
    assert 1e-29 <= s.compton_m <= 1e-28
    assert 10.0 <= 1.0 / s.tau_g_s <= 100.0
    assert s.compton_m / s.size_m < 1e-22


def test_tau_g_times_e_grav_is_hbar():
    for mass, size in [(1e-14, 1e-6), (3e-12, 5e-7), (1e-18, 1e-8)]:
        s = compute_scales(mass, size)
        assert s.tau_g_s * s.e_grav_J == pytest.approx(HBAR, rel=1e-14)


def test_pointlike_variant_is_half():
    s = compute_scales(**SPHERE)
    assert s.tau_g_pointlike_s == pytest.approx(0.5 * s.tau_g_s, rel=1e-15)


@pytest.mark.parametrize("mass,size", [(1e-14, 1e-6), (7e-16, 3e-7)])
def test_scaling_laws(mass, size):
    base = compute_scales(mass, size)
    heavier = compute_scales(2 * mass, size)
    bigger = compute_scales(mass, 2 * size)
    assert heavier.xi / base.xi == pytest.approx(2.0, rel=1e-13)
    assert base.tau_g_s / heavier.tau_g_s == pytest.approx(4.0, rel=1e-13)
    assert bigger.xi / base.xi == pytest.approx(0.5, rel=1e-13)
    assert bigger.tau_g_s / base.tau_g_s == pytest.approx(2.0, rel=1e-13)


def test_all_derived_positive():
    s = compute_scales(2.5e-13, 4e-6, 0.0)
    for name in ("xi", "compton_m", "tau_g_s", "tau_qm_s", "tau_light_s", "e_grav_J", "energy_scale_J"):
        assert getattr(s, name) > 0.0


@pytest.mark.parametrize("mass,size", [(0.0, 1e-6), (-1e-14, 1e-6), (1e-14, 0.0), (1e-14, -1.0)])
def test_nonpositive_inputs_rejected(mass, size):
    with pytest.raises(DomainError):
        compute_scales(mass, size)


def test_negative_separation_rejected():
    with pytest.raises(DomainError):
        compute_scales(1e-14, 1e-6, -1e-6)


def test_regime_sphere_short_time_ok():
    s = compute_scales(**SPHERE)
    report = check_regime(s, 1e-4)
    assert report.xi_ok and report.static_ok and report.time_ok
    assert report.all_ok
    assert report.messages == []


def test_regime_long_time_names_tau_g():
    s = compute_scales(**SPHERE)
    report = check_regime(s, 1.0)
    assert not report.time_ok
    assert any("tau_g" in msg for msg in report.messages)


def test_regime_light_particle_fails_static():
    # compton wavelength 3.5e-5 m exceeds the 1e-6 m size
    s = compute_scales(1e-38, 1e-6)
    report = check_regime(s, 0.0)
    assert s.compton_m / s.size_m > 1.0
    assert not report.static_ok
    assert any("static" in msg for msg in report.messages)


def test_regime_thresholds_configurable():
    s = compute_scales(**SPHERE)
    loose = check_regime(s, 1e-3, RegimeThresholds(eps_time=1.0))
    tight = check_regime(s, 1e-3, RegimeThresholds(eps_time=1e-3))
    assert loose.time_ok and not tight.time_ok
    assert not tight.all_ok and len(tight.messages) >= 1


def test_regime_negative_time_rejected():
    s = compute_scales(**SPHERE)
    with pytest.raises(DomainError):
        check_regime(s, -1.0)


def test_natural_unit_helpers():
    s = compute_scales(**SPHERE)
    assert s.mass_natural() == pytest.approx(s.size_m / s.compton_m, rel=1e-15)
    assert s.seconds_to_natural(s.tau_light_s) == pytest.approx(1.0, rel=1e-15)
    assert s.omega_compton_hz * s.tau_light_s == pytest.approx(s.mass_natural(), rel=1e-12)
    # m t xi / 2 equals t / tau_g when both are expressed consistently
    t_s = 1e-5
    lhs = s.mass_natural() * s.seconds_to_natural(t_s) * s.xi / 2.0
    assert lhs == pytest.approx(t_s / s.tau_g_s, rel=1e-12)


def test_report_with_false_flag_has_message():
    s = compute_scales(1e-38, 1e-6)
    report = check_regime(s, 1e9 * s.tau_g_s)
    assert not report.all_ok
    assert len(report.messages) >= 1
