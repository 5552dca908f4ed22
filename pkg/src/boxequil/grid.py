"""Position-space evaluation path used to cross-check the energy-basis results.

Wavefunctions are synthesized by direct summation of eigenfunctions on a
uniform grid and window probabilities come from Simpson's rule. Nothing here
uses the window matrix elements.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .spectrum import EnergyState, energy_level

_CHUNK = 2048


@dataclass(frozen=True, eq=False)
class SpatialGrid:
    """Wavefunction ``values`` at uniform positions ``x`` spanning the box, at time ``t``."""

    x: np.ndarray
    values: np.ndarray
    t: float
    state: EnergyState

    @property
    def n_points(self):
        return self.x.size

    @property
    def density(self):
        return np.abs(self.values) ** 2

    def norm(self):
        return float(simpson(self.density, x=self.x))


def _synthesize_at(state, t, x):
    cfg = state.config
    levels = np.arange(1, state.n_max + 1)
    amp = state.coeffs * np.exp(-1j * energy_level(levels, cfg) * t / cfg.hbar)
    out = np.empty(x.size, dtype=complex)
    k = levels * np.pi
    for start in range(0, x.size, _CHUNK):
        u = x[start:start + _CHUNK] / cfg.L + 0.5
        out[start:start + _CHUNK] = np.sqrt(2.0 / cfg.L) * (np.sin(np.outer(u, k)) @ amp)
    return out


def default_points(n_max):
    return max(4096, 8 * n_max)


def synthesize(state, t=0.0, n_points=None):
    """``Psi(x, t) = sum_n c_n exp(-i E_n t / hbar) <x|n>`` on a uniform grid."""
    if n_points is None:
        n_points = default_points(state.n_max)
    if n_points < 2 * state.n_max:
        raise ValueError(f"{n_points} grid points cannot resolve level {state.n_max}; "
                         f"need at least {2 * state.n_max}")
    L = state.config.L
    x = np.linspace(-L / 2, L / 2, int(n_points))
    values = _synthesize_at(state, float(t), x)
    # the walls are nodes of every eigenfunction
    values[0] = values[-1] = 0.0
    return SpatialGrid(x, values, float(t), state)


def window_probability_grid(grid, win):
    """Probability of the window by Simpson's rule on a grid fitted to the window.

    The window gets its own odd-sized uniform grid with spacing no coarser
    than ``grid``'s, so its endpoints are always nodes.
    """
    cfg = grid.state.config
    win.validate(cfg)
    lo, hi = win.bounds()
    lo, hi = max(lo, -cfg.L / 2), min(hi, cfg.L / 2)
    if hi <= lo:
        return 0.0
    spacing = grid.x[1] - grid.x[0]
    n = int(np.ceil((hi - lo) / spacing)) + 1
    n += (n + 1) % 2
    x = np.linspace(lo, hi, max(n, 3))
    dens = np.abs(_synthesize_at(grid.state, grid.t, x)) ** 2
    return float(simpson(dens, x=x))
