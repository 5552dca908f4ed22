"""Analytic time scales and approximations to the distinguishability.

All functions here are independent of the exact dynamics in
:mod:`boxequil.dynamics` and are meant to be compared against it.
"""

from dataclasses import dataclass

import numpy as np

from .dynamics import PRUNE_TOL
from .spectrum import BoxConfig, gaussian_truncation


@dataclass(frozen=True)
class SeriesApprox:
    """Parameters of the Gaussian-packet approximations.

    ``phi = 2 pi sigma / L`` and ``tau_g = m L sigma / (hbar pi)``.
    """

    phi: float
    tau_g: float
    nu: float
    terms_p: int = 16
    terms_kl: int = 64

    def __post_init__(self):
        if self.phi <= 0 or self.tau_g <= 0:
            raise ValueError("phi and tau_g must be positive")
        if self.terms_p < 1 or self.terms_kl < 1:
            raise ValueError("term counts must be at least 1")

    @classmethod
    def from_sigma(cls, sigma, cfg=None, terms_p=16, terms_kl=None, trunc_eps=1e-12):
        cfg = cfg or BoxConfig()
        if terms_kl is None:
            terms_kl = 4 * gaussian_truncation(sigma, trunc_eps, cfg)
        return cls(2.0 * np.pi * sigma / cfg.L, tau_gaussian(sigma, cfg), cfg.nu,
                   int(terms_p), int(terms_kl))

    def r_coefficients(self, terms=None):
        """``R_p = (-1)^p / (2p+1) exp(-(2p+1)^2 phi^2 / 2)`` for ``p < terms``."""
        p = np.arange(self.terms_p if terms is None else terms)
        odd = 2 * p + 1
        return (-1.0) ** p / odd * np.exp(-(odd**2) * self.phi**2 / 2.0)


def tau_gaussian(sigma, cfg=None):
    """Equilibration time ``m L sigma / (hbar pi)`` of a Gaussian packet."""
    cfg = cfg or BoxConfig()
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    return cfg.m * cfg.L * sigma / (cfg.hbar * np.pi)


def tau_over_Tg(deff):
    """``tau_G / T_g = 1 / (16 sqrt(pi) d_eff)``."""
    if deff < 1:
        raise ValueError("effective dimension is at least 1")
    return 1.0 / (16.0 * np.sqrt(np.pi) * deff)


def tau_box(sigma, cfg=None):
    """Time ``m L sigma / hbar`` for the packet to reach a wall."""
    cfg = cfg or BoxConfig()
    return cfg.m * cfg.L * sigma / cfg.hbar


def tau_typical(deff):
    """``tau_typical / T_g = 1 / (16 d_eff^2)`` for random projective measurements."""
    if deff < 1:
        raise ValueError("effective dimension is at least 1")
    return 1.0 / (16.0 * deff**2)


def d_leading(t, approx):
    """Leading-order decay ``(2/pi) exp(-t^2 / (2 tau_G^2))``."""
    t = np.asarray(t, dtype=float)
    return 2.0 / np.pi * np.exp(-(t**2) / (2.0 * approx.tau_g**2))


def d_series(t, approx, terms=None):
    """Partial sum ``(2/pi) |sum_p R_p exp(-t^2 (2p+1)^2 / (2 tau_G^2))|``."""
    t = np.asarray(t, dtype=float)
    r = approx.r_coefficients(terms)
    odd = 2 * np.arange(r.size) + 1
    decay = np.exp(-np.multiply.outer(t**2, odd**2) / (2.0 * approx.tau_g**2))
    return 2.0 / np.pi * np.abs(decay @ r)


def b_coefficient(k, l):
    """``B_kl = [cos(l pi) - cos(k pi)] [sin(k pi/2)/k - sin(l pi/2)/l]``."""
    k = np.asarray(k)
    l = np.asarray(l)
    parity_k = np.where(k % 2 == 0, 1.0, -1.0)
    parity_l = np.where(l % 2 == 0, 1.0, -1.0)
    # sin(m pi / 2) for integer m, exactly
    sk = np.array([0.0, 1.0, 0.0, -1.0])[k % 4]
    sl = np.array([0.0, 1.0, 0.0, -1.0])[l % 4]
    return (parity_l - parity_k) * (sk / k - sl / l)


def d_double_sum(t, approx, chunk=8):
    """Distinguishability from the truncated ``(k, l)`` double sum of ``B_kl`` terms."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    K = approx.terms_kl
    k = np.arange(1, K + 1)
    weights = (np.exp(-(k[:, None] ** 2 + k[None, :] ** 2) * approx.phi**2 / 2.0)
               * b_coefficient(k[:, None], k[None, :]))
    weights[np.abs(weights) < PRUNE_TOL * np.abs(weights).max()] = 0.0
    rows, cols = np.nonzero(weights)
    w = weights[rows, cols]
    kl = (k[rows] * k[cols]).astype(np.float64)
    # 4 k l nu t in cycles, using nu * T_g = 2 pi
    frac = t * approx.nu / (2.0 * np.pi)
    frac = frac - np.floor(frac)
    out = np.empty(t.size)
    for start in range(0, t.size, chunk):
        f = frac[start:start + chunk]
        cycles = np.mod(np.multiply.outer(f, 4.0 * kl), 1.0)
        out[start:start + chunk] = np.cos(2.0 * np.pi * cycles) @ w
    return 2.0 / np.pi * approx.phi / np.sqrt(2.0 * np.pi) * np.abs(out)


def s_moment(p, gamma, terms=None):
    """``S_p(gamma)`` by direct summation over half-integers."""
    if terms is None:
        terms = int(np.ceil(12.0 / gamma)) + 10
    j = np.arange(-terms, terms) + 0.5
    return float(np.sum(gamma ** (2 * p + 1) * j ** (2 * p) * np.exp(-(j**2) * gamma**2))
                 / np.sqrt(np.pi))


_S_LIMIT = {1: 0.5, 2: 0.75}


def energy_moment(p, sigma, cfg=None, exact=False):
    """``tr(H^p rho_G) = (2 E_1 / phi^2)^p S_p(sqrt(2) phi)`` for ``p`` in ``{1, 2}``.

    By default ``S_p`` takes its small-width limit; ``exact=True`` sums it.
    """
    cfg = cfg or BoxConfig()
    if p not in _S_LIMIT:
        raise ValueError("only the first two moments are available")
    if not 0 < sigma < cfg.L / 4:
        raise ValueError("sigma must satisfy 0 < sigma < L/4")
    phi = 2.0 * np.pi * sigma / cfg.L
    s = s_moment(p, np.sqrt(2.0) * phi) if exact else _S_LIMIT[p]
    return (2.0 * cfg.E1 / phi**2) ** p * s


def energy_std(sigma, cfg=None):
    """Energy standard deviation ``hbar^2 / (4 sqrt(2) m sigma^2)`` of a Gaussian packet."""
    cfg = cfg or BoxConfig()
    if not 0 < sigma < cfg.L / 4:
        raise ValueError("sigma must satisfy 0 < sigma < L/4")
    return cfg.hbar**2 / (4.0 * np.sqrt(2.0) * cfg.m * sigma**2)


def uniform_g(t, N, cfg=None):
    """Short-time approximation ``|sin(2N nu t)/sin(nu t) - cos(nu t)| / (N pi)``."""
    cfg = cfg or BoxConfig()
    if int(N) != N or N < 2:
        raise ValueError("N must be an integer >= 2")
    theta = np.asarray(cfg.nu * np.asarray(t, dtype=float))
    q = np.round(theta / np.pi)
    delta = theta - q * np.pi
    near = np.abs(delta) < 1e-6
    safe = np.where(near, 1.0, np.sin(theta))
    ratio = np.where(
        near,
        # sin(2N(q pi + d)) / sin(q pi + d) = (-1)^q sin(2N d) / sin(d)
        (-1.0) ** q * 2 * N * (1.0 - (4.0 * N**2 - 1.0) * delta**2 / 6.0),
        np.sin(2 * N * theta) / safe,
    )
    out = np.abs(ratio - np.cos(theta)) / (N * np.pi)
    return out if out.ndim else float(out)


def uniform_first_zero(N, cfg=None):
    """Large-``N`` estimate ``T_g / (4N)`` of the first zero of ``g``."""
    cfg = cfg or BoxConfig()
    return cfg.Tg / (4.0 * N)


def power_law_fit(points):
    """Fit ``avg_D = prefactor * deff^(-exponent)`` by least squares in log-log space."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise ValueError("need at least 3 (deff, avg_D) points")
    if np.any(pts <= 0) or not np.all(np.isfinite(pts)):
        raise ValueError("power-law fit needs strictly positive, finite data")
    logx, logy = np.log(pts[:, 0]), np.log(pts[:, 1])
    if np.ptp(logx) == 0:
        raise ValueError("all deff values coincide; the slope is undetermined")
    slope, intercept = np.polyfit(logx, logy, 1)
    return float(np.exp(intercept)), float(-slope)
