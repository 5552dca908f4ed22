"""Particle in a box: constants, eigenbasis and initial states.

Coordinates are centered, ``x in [-L/2, L/2]``. The eigenfunctions are
``sqrt(2/L) sin(n pi (x/L + 1/2))`` with energies ``hbar^2 n^2 pi^2 / (2 m L^2)``.
"""

from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np

from .quadrature import adaptive_simpson


@dataclass(frozen=True)
class BoxConfig:
    """Box width ``L``, particle mass ``m`` and ``hbar``; natural units by default."""

    L: float = 1.0
    m: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("L", "m", "hbar"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")

    @property
    def E1(self):
        """Ground state energy."""
        return self.hbar**2 * np.pi**2 / (2.0 * self.m * self.L**2)

    @property
    def Tg(self):
        """Ground state period ``2 pi hbar / E1``; every relative phase recurs after it."""
        return 4.0 * self.m * self.L**2 / (self.hbar * np.pi)

    @property
    def nu(self):
        """Ground state angular frequency ``E1 / hbar``."""
        return self.E1 / self.hbar


@dataclass(frozen=True, eq=False)
class EnergyState:
    """Pure state as amplitudes over levels ``n = 1 .. n_max``.

    ``kind`` records how the state was built (``"gaussian"``, ``"uniform"`` or
    ``"custom"``) and ``params`` the arguments used.
    """

    coeffs: np.ndarray
    config: BoxConfig = field(default_factory=BoxConfig)
    kind: str = "custom"
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise ValueError("an EnergyState needs at least one level")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_amplitudes(cls, amplitudes, config=None, kind="custom", **params):
        """Normalize arbitrary amplitudes (level 1 first) into a state."""
        c = np.asarray(amplitudes, dtype=complex)
        norm = np.sqrt(np.sum(np.abs(c) ** 2))
        if norm == 0 or not np.isfinite(norm):
            raise ValueError("amplitudes must have a finite, nonzero norm")
        return cls(c / norm, config or BoxConfig(), kind, params)

    @property
    def n_max(self):
        return self.coeffs.size

    @property
    def levels(self):
        return np.arange(1, self.n_max + 1)

    @property
    def probabilities(self):
        return np.abs(self.coeffs) ** 2

    @property
    def norm(self):
        return float(np.sum(self.probabilities))

    def energies(self):
        return energy_level(self.levels, self.config)


def _check_levels(n):
    n_arr = np.asarray(n)
    if not np.issubdtype(n_arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(n_arr, 1), 0)):
            raise ValueError("energy levels must be integers")
        n_arr = n_arr.astype(np.int64)
    if np.any(n_arr < 1):
        raise ValueError("energy levels start at n = 1")
    return n_arr


def energy_level(n, cfg=None):
    """Energy of level ``n`` (scalar or array)."""
    cfg = cfg or BoxConfig()
    n = _check_levels(n)
    return cfg.hbar**2 * n.astype(float) ** 2 * np.pi**2 / (2.0 * cfg.m * cfg.L**2)


def _check_positions(x, cfg):
    x = np.asarray(x, dtype=float)
    half = 0.5 * cfg.L
    # tiny slack so that grid endpoints produced by linspace are accepted
    if np.any(np.abs(x) > half * (1.0 + 1e-12)):
        raise ValueError(f"positions must lie in [-L/2, L/2] = [{-half}, {half}]")
    return x


def eigenfunction(n, x, cfg=None):
    """``<x|n>``; broadcasts ``n`` against ``x``."""
    cfg = cfg or BoxConfig()
    n = _check_levels(n)
    x = _check_positions(x, cfg)
    return np.sqrt(2.0 / cfg.L) * np.sin(n * np.pi * (x / cfg.L + 0.5))


def _analytic_gaussian_amplitudes(n, sigma, cfg):
    r = sigma / cfg.L
    return ((2.0 * np.pi * r**2) ** 0.25 * np.exp(-((n * np.pi * r) ** 2))
            * 2.0 * np.sin(n * np.pi / 2.0))


def _parity_mask(n):
    return (n % 2) == 1


def gaussian_truncation(sigma, trunc_eps=1e-12, cfg=None):
    """Smallest even ``N_max`` whose discarded Gaussian probability is below ``trunc_eps``."""
    cfg = cfg or BoxConfig()
    r = sigma / cfg.L
    # levels beyond n_hi carry weight below exp(-2 (n pi r)^2) ~ 1e-40 of the total
    n_hi = int(np.ceil(np.sqrt(50.0 + 0.5 * np.log(1.0 / trunc_eps)) / (np.pi * r))) + 4
    n = np.arange(1, n_hi + 1)
    p = _analytic_gaussian_amplitudes(n, sigma, cfg) ** 2
    p /= p.sum()
    # tail[k] = probability carried by levels > k + 1
    tail = np.concatenate([np.cumsum(p[::-1])[::-1][1:], [0.0]])
    candidates = n[(n % 2 == 0) & (tail < trunc_eps)]
    return int(candidates[0])


def gaussian_state(sigma, mode="analytic", trunc_eps=1e-12, cfg=None):
    """Centered Gaussian wave packet of width ``sigma`` in the energy basis.

    ``mode="analytic"`` uses the closed-form overlap
    ``(2 pi sigma^2/L^2)^(1/4) exp(-(n pi sigma/L)^2) 2 sin(n pi/2)``;
    ``mode="quadrature"`` integrates the exact packet, including the constant
    that makes it vanish at the walls, against each eigenfunction. Both are
    truncated at :func:`gaussian_truncation` and renormalized.
    """
    cfg = cfg or BoxConfig()
    if not 0 < sigma < cfg.L / 4:
        raise ValueError(f"sigma must satisfy 0 < sigma < L/4, got {sigma!r}")
    if not 0 < trunc_eps < 1:
        raise ValueError(f"trunc_eps must lie in (0, 1), got {trunc_eps!r}")
    n_max = gaussian_truncation(sigma, trunc_eps, cfg)
    n = np.arange(1, n_max + 1)
    if mode == "analytic":
        c = _analytic_gaussian_amplitudes(n, sigma, cfg)
    elif mode == "quadrature":
        c = _quadrature_gaussian_amplitudes(n, sigma, cfg)
    else:
        raise ValueError(f"unknown mode {mode!r}; use 'analytic' or 'quadrature'")
    # the packet is even about the box center, so even levels vanish identically
    c = np.where(_parity_mask(n), c, 0.0)
    return EnergyState.from_amplitudes(c, cfg, "gaussian", sigma=float(sigma), mode=mode,
                                       trunc_eps=float(trunc_eps))


def _quadrature_gaussian_amplitudes(n, sigma, cfg, abs_tol=1e-12):
    L = cfg.L
    floor = np.exp(-((L / (4.0 * sigma)) ** 2))

    def packet(x):
        return np.exp(-((x / (2.0 * sigma)) ** 2)) - floor

    panels = max(64, int(np.ceil(8.0 * L / sigma)))
    norm2 = adaptive_simpson(lambda x: packet(x) ** 2, -L / 2, L / 2, abs_tol=abs_tol,
                             initial_intervals=panels)
    amp = 1.0 / np.sqrt(norm2)
    kn = n * np.pi / L

    def integrand(x):
        basis = np.sqrt(2.0 / L) * np.sin(np.outer(x / L + 0.5, n * np.pi))
        return amp * packet(x)[:, None] * basis

    panels = max(panels, int(np.ceil(2.0 * kn[-1] * L)))
    return adaptive_simpson(integrand, -L / 2, L / 2, abs_tol=abs_tol, initial_intervals=panels)


def uniform_state(N, cfg=None):
    """Equal superposition of the lowest ``N`` levels."""
    cfg = cfg or BoxConfig()
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    N = int(N)
    return EnergyState(np.full(N, 1.0 / np.sqrt(N)), cfg, "uniform", {"N": N})


def effective_dimension(state):
    """Inverse participation ratio ``1 / sum |c_n|^4``."""
    return float(1.0 / np.sum(state.probabilities**2))


def deff_gaussian_closed_form(sigma, cfg=None):
    """Leading-order effective dimension ``L / (4 sqrt(pi) sigma)`` of a Gaussian packet."""
    cfg = cfg or BoxConfig()
    return cfg.L / (4.0 * np.sqrt(np.pi) * sigma)


def sigma_for_deff(deff, cfg=None):
    """Packet width whose closed-form effective dimension is ``deff``."""
    cfg = cfg or BoxConfig()
    return cfg.L / (4.0 * np.sqrt(np.pi) * deff)
