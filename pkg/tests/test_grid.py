import numpy as np
import pytest

from boxequil import (BoxConfig, Window, build_matrix, gaussian_state, outcome_probability,
                      synthesize, uniform_state, window_probability_grid)

TG = BoxConfig().Tg


def test_ground_state_shape():
    grid = synthesize(uniform_state(1), t=0.37)
    expected = 2 * np.cos(np.pi * grid.x) ** 2
    np.testing.assert_allclose(grid.density, expected, atol=1e-13)
    assert grid.x[np.argmax(grid.density)] == pytest.approx(0.0, abs=1 / grid.n_points)


def test_gaussian_density_at_center():
    s = 0.01
    grid = synthesize(gaussian_state(s), 0.0, n_points=4097)
    centre = grid.density[2048]
    assert centre == pytest.approx(1 / (s * np.sqrt(2 * np.pi)), rel=1e-4)


def test_uniform_state_sits_left():
    grid = synthesize(uniform_state(500))
    assert window_probability_grid(grid, Window.left_half()) > 0.6


def test_boundary_and_norm(gauss53):
    grid = synthesize(gauss53, 0.2)
    assert abs(grid.values[0]) < 1e-10 and abs(grid.values[-1]) < 1e-10
    assert grid.norm() == pytest.approx(1.0, abs=1e-6)
    assert grid.n_points == 4096


def test_undersampled_grid_rejected(gauss53):
    with pytest.raises(ValueError):
        synthesize(gauss53, 0.0, n_points=gauss53.n_max)


def test_full_window_and_half_box():
    grid = synthesize(uniform_state(30), 0.11)
    assert window_probability_grid(grid, Window.centered(1.0)) == pytest.approx(1.0, abs=1e-6)
    ground = synthesize(uniform_state(1), 0.3)
    assert window_probability_grid(ground, Window.left_half()) == pytest.approx(0.5, abs=1e-8)


@pytest.mark.parametrize("state_kind", ["gauss53", "uniform40"])
@pytest.mark.parametrize("win", [Window.centered(0.5), Window.left_half(), Window(0.11, 0.3)])
def test_cross_path_identity(state_kind, win, request, rng):
    state = request.getfixturevalue("gauss53") if state_kind == "gauss53" else uniform_state(40)
    mat = build_matrix(win, state.n_max)
    times = rng.uniform(0, TG, 20)
    energy = outcome_probability(state, mat, times)
    grid = np.array([window_probability_grid(synthesize(state, t), win) for t in times])
    assert np.max(np.abs(energy - grid)) < 1e-6


def test_norm_conserved(gauss53, rng):
    n0 = synthesize(gauss53, 0.0).norm()
    for t in rng.uniform(0, TG, 5):
        assert synthesize(gauss53, t).norm() == pytest.approx(n0, abs=1e-8)
