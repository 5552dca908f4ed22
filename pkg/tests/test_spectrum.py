import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxequil import (BoxConfig, EnergyState, deff_gaussian_closed_form, effective_dimension,
                      eigenfunction, energy_level, gaussian_state, gaussian_truncation,
                      sigma_for_deff, uniform_state)


def test_box_config_scales():
    cfg = BoxConfig()
    assert cfg.E1 == pytest.approx(np.pi**2 / 2, rel=1e-15)
    assert cfg.Tg == pytest.approx(4 / np.pi, rel=1e-15)


@given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.1, 10))
def test_nu_times_period_is_two_pi(L, m, hbar):
    cfg = BoxConfig(L, m, hbar)
    assert cfg.nu * cfg.Tg == pytest.approx(2 * np.pi, rel=1e-14)


@pytest.mark.parametrize("field", ["L", "m", "hbar"])
@pytest.mark.parametrize("bad", [0.0, -1.0, np.inf])
def test_box_config_rejects_nonpositive(field, bad):
    with pytest.raises(ValueError):
        BoxConfig(**{field: bad})


def test_energy_levels():
    assert energy_level(1) == pytest.approx(4.9348022005446793, rel=1e-15)
    assert energy_level(2) == pytest.approx(4 * energy_level(1), rel=1e-15)
    assert energy_level(3, BoxConfig(L=2.0)) == pytest.approx(9 * np.pi**2 / 8, rel=1e-15)
    with pytest.raises(ValueError):
        energy_level(0)


def test_eigenfunction_values():
    assert eigenfunction(2, 0.0) == pytest.approx(0.0, abs=1e-15)
    assert eigenfunction(1, 0.0) == pytest.approx(np.sqrt(2), rel=1e-15)
    assert eigenfunction(1, 0.5) == pytest.approx(0.0, abs=1e-15)
    assert eigenfunction(1, -0.5) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        eigenfunction(1, 0.6)


def test_gaussian_even_levels_vanish():
    for mode in ("analytic", "quadrature"):
        state = gaussian_state(0.01, mode=mode)
        assert np.all(state.coeffs[1::2] == 0)


def test_gaussian_modes_agree():
    # exact packet vs closed-form overlap; the difference is exponentially small in L/sigma
    analytic = gaussian_state(0.01, "analytic")
    exact = gaussian_state(0.01, "quadrature")
    assert analytic.n_max == exact.n_max
    assert np.max(np.abs(analytic.coeffs - exact.coeffs)) < 1e-8


def test_truncation_rule_matches_tail_oracle():
    # smallest even N with tail mass below 1e-12, from an mpmath tail sum
    assert gaussian_truncation(0.1, 1e-12) == 12
    assert gaussian_state(0.1, trunc_eps=1e-12).n_max == 12


def test_truncation_is_even_and_sound():
    for r in (0.05, 0.02, 0.01, 0.004):
        n = gaussian_truncation(r)
        assert n % 2 == 0
        c = gaussian_state(r).coeffs
        levels = np.arange(1, 4 * n + 1)
        full = ((2 * np.pi * r**2) ** 0.25 * np.exp(-((levels * np.pi * r) ** 2))
                * 2 * np.sin(levels * np.pi / 2))
        full /= np.linalg.norm(full)
        assert np.sum(full[n:] ** 2) < 1e-12
        assert np.sum(full[n - 2:] ** 2) >= 1e-12
        np.testing.assert_allclose(np.abs(c), np.abs(full[:n]), atol=1e-12)


@pytest.mark.parametrize("r", [0.05, 0.02, 0.01])
def test_doubling_truncation_leaves_deff_unchanged(r):
    state = gaussian_state(r)
    levels = np.arange(1, 2 * state.n_max + 1)
    amps = (np.exp(-((levels * np.pi * r) ** 2)) * np.sin(levels * np.pi / 2))
    doubled = EnergyState.from_amplitudes(amps)
    assert effective_dimension(doubled) == pytest.approx(effective_dimension(state), rel=1e-10)


@pytest.mark.parametrize("sigma", [0.0, 0.25, 0.3, -0.1])
def test_gaussian_rejects_wide_packets(sigma):
    with pytest.raises(ValueError):
        gaussian_state(sigma)


def test_gaussian_rejects_bad_mode_and_eps():
    with pytest.raises(ValueError):
        gaussian_state(0.01, mode="fft")
    with pytest.raises(ValueError):
        gaussian_state(0.01, trunc_eps=1.0)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.002, 0.24))
def test_gaussian_normalized_and_odd(r):
    state = gaussian_state(r)
    assert abs(state.norm - 1) < 1e-12
    assert np.all(state.coeffs[1::2] == 0)


def test_uniform_state():
    ground = uniform_state(1)
    np.testing.assert_array_equal(ground.coeffs, [1.0])
    four = uniform_state(4)
    np.testing.assert_allclose(four.probabilities, 0.25, rtol=1e-15)
    assert effective_dimension(uniform_state(500)) == pytest.approx(500, rel=1e-12)
    with pytest.raises(ValueError):
        uniform_state(0)


def test_single_eigenstate_deff():
    state = EnergyState.from_amplitudes([0, 0, 1j])
    assert effective_dimension(state) == 1.0


def test_closed_form_deff():
    assert deff_gaussian_closed_form(1 / (4 * np.sqrt(np.pi))) == pytest.approx(1.0, rel=1e-15)
    assert deff_gaussian_closed_form(0.001) == pytest.approx(141.04739588693907, rel=1e-14)


def test_summed_deff_near_53():
    state = gaussian_state(sigma_for_deff(53))
    assert effective_dimension(state) == pytest.approx(53, rel=0.01)


def test_closed_form_deff_converges():
    # the correction is exponentially small here, so the ratio sits at 1 up to
    # the 1e-12 truncation floor; require it not to move away from 1
    errors = [abs(effective_dimension(gaussian_state(r)) / deff_gaussian_closed_form(r) - 1)
              for r in (0.04, 0.02, 0.01, 0.005)]
    assert max(errors) < 1e-10
    for before, after in zip(errors, errors[1:]):
        assert after <= before + 5e-12


def test_coeffs_are_read_only():
    state = uniform_state(3)
    with pytest.raises(ValueError):
        state.coeffs[0] = 0
