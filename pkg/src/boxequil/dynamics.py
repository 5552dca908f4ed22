"""Exact dephasing dynamics in the energy basis.

Every matrix element ``<n|rho(t)|j>`` only picks up the phase
``exp(-i (E_n - E_j) t / hbar)``, and ``(E_n - E_j)/hbar = (n^2 - j^2) nu`` with
``nu T_g = 2 pi``. All phases therefore recur after ``T_g`` and time is handled
as the fraction ``t / T_g`` reduced modulo one before any phase is formed.
"""

from dataclasses import dataclass

import numpy as np

from .quadrature import ConvergenceError
from .spectrum import BoxConfig, EnergyState, eigenfunction

#: pairs whose weight falls below this are dropped from the off-diagonal sum
PRUNE_TOL = 1e-16
DEFAULT_SAMPLE_CAP = 2**22


@dataclass(frozen=True, eq=False)
class EquilibriumState:
    """Dephased (time averaged) state: level probabilities ``p_n``."""

    probs: np.ndarray
    config: BoxConfig

    @property
    def n_max(self):
        return self.probs.size


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Distinguishability samples; ``times`` are in units of ``T_g``."""

    times: np.ndarray
    values: np.ndarray


def equilibrium(state):
    """Drop the off-diagonal part of ``state`` in the energy basis."""
    probs = np.array(state.probabilities)
    probs.setflags(write=False)
    return EquilibriumState(probs, state.config)


def _phase_cycles(levels, frac):
    # (n^2 t/T_g) mod 1, with t/T_g already reduced to [0, 1)
    sq = levels.astype(np.float64) ** 2
    return np.mod(np.multiply.outer(sq, frac), 1.0)


class Dephasing:
    """Precomputed off-diagonal sum for one state and one window.

    Construction is ``O(N^2)`` in the number of occupied levels. Evaluation
    at arbitrary times goes through dense matrix products; evaluation on a
    uniform grid over whole periods goes through one FFT.
    """

    def __init__(self, state, matrix):
        if matrix.dim < state.n_max:
            raise ValueError(f"window matrix has dimension {matrix.dim}, state needs {state.n_max}")
        if matrix.config != state.config:
            raise ValueError("state and window matrix use different box configurations")
        self.state = state
        self.matrix = matrix
        self.config = state.config
        c = state.coeffs
        idx = np.flatnonzero(np.abs(c) > 0)
        self.levels = idx + 1
        self.coeffs = c[idx]
        self.block = matrix.entries[np.ix_(idx, idx)]
        # tr(A omega): time independent part
        self.baseline = float(np.sum(np.abs(self.coeffs) ** 2 * np.diag(self.block)))
        self._pairs = None

    @property
    def pairs(self):
        """Upper-triangle pairs ``n > j`` as ``(n^2 - j^2, weight)`` with weight ``c_n* c_j a_nj``."""
        if self._pairs is None:
            jj, nn = np.triu_indices(self.levels.size, k=1)
            w = np.conj(self.coeffs[nn]) * self.coeffs[jj] * self.block[nn, jj]
            keep = np.abs(w) >= PRUNE_TOL
            n = self.levels[nn[keep]].astype(np.int64)
            j = self.levels[jj[keep]].astype(np.int64)
            self._pairs = (n * n - j * j, w[keep])
        return self._pairs

    def _frac(self, t):
        frac = np.asarray(t, dtype=float) / self.config.Tg
        return frac - np.floor(frac)

    def outcome(self, t, chunk=256):
        """``tr(A rho(t))`` for an array of times."""
        frac = np.atleast_1d(self._frac(t)).ravel()
        out = np.empty(frac.size)
        for start in range(0, frac.size, chunk):
            f = frac[start:start + chunk]
            psi = self.coeffs[:, None] * np.exp(-2j * np.pi * _phase_cycles(self.levels, f))
            x, y = psi.real, psi.imag
            out[start:start + chunk] = (np.einsum("it,it->t", x, self.block @ x)
                                        + np.einsum("it,it->t", y, self.block @ y))
        return out.reshape(np.shape(t))

    def signed(self, t):
        """``tr(A (rho(t) - omega))`` for an array of times."""
        return self.outcome(t) - self.baseline

    @property
    def fundamental(self):
        """Largest ``g`` such that the deviation repeats every ``T_g / g``."""
        q, _ = self.pairs
        q = np.abs(q[q != 0])
        return int(np.gcd.reduce(q)) if q.size else 1

    def signed_on_grid(self, n_samples, periods=1, reduced=False):
        """Signed deviation at ``t_k = k * periods * T / n_samples``, ``k < n_samples``.

        ``T`` is ``T_g``, or the fundamental period ``T_g / g`` when ``reduced``.
        """
        n_samples = int(n_samples)
        q, w = self.pairs
        if reduced:
            q = q // self.fundamental
        folded = np.mod(q * int(periods), n_samples)
        spectrum = (np.bincount(folded, weights=w.real, minlength=n_samples)
                    + 1j * np.bincount(folded, weights=w.imag, minlength=n_samples))
        return 2.0 * np.real(np.fft.ifft(spectrum)) * n_samples


def _check_pair(state, matrix):
    if not isinstance(state, EnergyState):
        raise TypeError("expected an EnergyState")
    return Dephasing(state, matrix)


def distinguishability(state, matrix, t):
    """``|tr A (rho(t) - omega)|`` at time(s) ``t``."""
    return np.abs(_check_pair(state, matrix).signed(t))


def outcome_probability(state, matrix, t):
    """Probability ``tr(A rho(t))`` of finding the particle in the window."""
    return _check_pair(state, matrix).outcome(t)


def distinguishability_series(state, matrix, times):
    """Distinguishability at arbitrary ``times`` (absolute units) as a :class:`TimeSeries`."""
    times = np.asarray(times, dtype=float)
    values = distinguishability(state, matrix, times)
    return TimeSeries(times / state.config.Tg, values)


def periodic_series(state, matrix, n_samples, periods=1):
    """Distinguishability on a uniform grid over ``periods`` recurrence periods."""
    dep = _check_pair(state, matrix)
    values = np.abs(dep.signed_on_grid(n_samples, periods))
    times = np.arange(n_samples) * (periods / n_samples)
    return TimeSeries(times, values)


def default_samples(n_max, cap=DEFAULT_SAMPLE_CAP):
    return int(min(64 * n_max**2, cap))


def time_average_distinguishability(state, matrix, n_samples=None, periods=1,
                                    cap=DEFAULT_SAMPLE_CAP, rtol=1e-4):
    """Time average of the distinguishability over whole recurrence periods.

    Averages a uniform grid of ``n_samples`` points per fundamental period
    ``T_g / g`` (``g`` the gcd of the Bohr frequencies in units of ``E_1``), so
    symmetric states are not aliased onto ``t = 0``. The grid starts no coarser
    than twice the highest reduced frequency and is accepted once the average
    over every other point agrees with it to ``rtol``. It doubles until then,
    up to ``cap`` points per period.
    """
    if n_samples is None:
        n_samples = default_samples(state.n_max, cap)
    n_samples = int(n_samples)
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    if n_samples % 2:
        n_samples += 1
    periods = int(periods)
    if periods < 1:
        raise ValueError("periods must be a positive integer")
    dep = _check_pair(state, matrix)
    q, _ = dep.pairs
    if q.size:
        top = int(np.abs(q).max()) // dep.fundamental
        while n_samples <= 2 * top and 2 * n_samples <= cap:
            n_samples *= 2
    while True:
        values = np.abs(dep.signed_on_grid(n_samples * periods, periods, reduced=True))
        fine = float(values.mean())
        coarse = float(values[::2].mean())
        change = abs(fine - coarse)
        if change <= rtol * abs(fine) or change < 1e-15:
            return fine
        if 2 * n_samples > cap:
            raise ConvergenceError(
                f"time average not converged at {n_samples} samples per period "
                f"(relative change {change / abs(fine):.3e})",
                residual=change,
            )
        n_samples *= 2


def density(state, x, t=0.0):
    """Position density of a state at time ``t`` or of an equilibrium state."""
    cfg = state.config
    x = np.asarray(x, dtype=float)
    levels = np.arange(1, state.n_max + 1)
    phi = eigenfunction(levels[:, None], x.ravel()[None, :], cfg)
    if isinstance(state, EquilibriumState):
        out = state.probs @ phi**2
    else:
        frac = np.atleast_1d(np.asarray(t, dtype=float) / cfg.Tg)
        frac = frac - np.floor(frac)
        amp = state.coeffs * np.exp(-2j * np.pi * _phase_cycles(levels, frac)[:, 0])
        out = np.abs(amp @ phi) ** 2
    return out.reshape(x.shape) if x.ndim else float(out[0])


def first_sign_change(state, matrix, t_max, n_samples=4001):
    """Earliest time in ``(0, t_max]`` where ``tr A (rho(t) - omega)`` changes sign.

    The bracketing grid interval is refined with Brent's method. Returns
    ``None`` when no sign change is found.
    """
    from scipy.optimize import brentq

    dep = _check_pair(state, matrix)
    t = np.linspace(0.0, t_max, n_samples)
    s = dep.signed(t)
    flips = np.flatnonzero(np.sign(s[1:]) * np.sign(s[:-1]) <= 0)
    if flips.size == 0:
        return None
    k = flips[0]
    if s[k] == 0:
        return float(t[k])
    return float(brentq(lambda tt: float(dep.signed(np.array([tt]))[0]), t[k], t[k + 1],
                        xtol=1e-15 * t_max))
