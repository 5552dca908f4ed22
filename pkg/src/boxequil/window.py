"""Two-outcome position measurements and their energy-basis matrix elements."""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad_vec

from .quadrature import ConvergenceError
from .spectrum import BoxConfig


@dataclass(frozen=True)
class Window:
    """Interval ``[center - width/2, center + width/2]`` inside the box.

    Its projector ``A`` answers "is the particle in the window?"; the other
    outcome is ``1 - A``.
    """

    center: float = 0.0
    width: float = 0.5

    def bounds(self):
        return self.center - 0.5 * self.width, self.center + 0.5 * self.width

    def validate(self, cfg):
        lo, hi = self.bounds()
        slack = 1e-12 * cfg.L
        if not 0 <= self.width <= cfg.L + slack:
            raise ValueError(f"window width must lie in [0, L], got {self.width!r}")
        if lo < -0.5 * cfg.L - slack or hi > 0.5 * cfg.L + slack:
            raise ValueError(f"window [{lo}, {hi}] leaves the box [-L/2, L/2]")
        return self

    def unit_bounds(self, cfg):
        """Window endpoints in ``u = x/L + 1/2``, clipped to ``[0, 1]``."""
        lo, hi = self.bounds()
        return max(lo / cfg.L + 0.5, 0.0), min(hi / cfg.L + 0.5, 1.0)

    @classmethod
    def centered(cls, width):
        return cls(0.0, width)

    @classmethod
    def left_half(cls, cfg=None):
        """The half box ``[-L/2, 0]``."""
        cfg = cfg or BoxConfig()
        return cls(-0.25 * cfg.L, 0.5 * cfg.L)


@dataclass(frozen=True, eq=False)
class WindowMatrix:
    """Real symmetric matrix ``a[n-1, j-1] = <n|A|j>`` for levels up to ``dim``."""

    entries: np.ndarray
    window: Window
    config: BoxConfig

    @property
    def dim(self):
        return self.entries.shape[0]


def _sinc_term(k, u):
    # antiderivative of cos(k pi u); k is a nonzero integer array
    return np.sin(np.pi * k * u) / (np.pi * k)


def element_closed_form(n, j, win, cfg=None):
    """Exact ``<n|A|j>`` for the window ``win``; broadcasts over ``n`` and ``j``.

    Uses ``sin(n pi u) sin(j pi u) = [cos((n-j) pi u) - cos((n+j) pi u)] / 2``
    integrated over the window in ``u = x/L + 1/2``. The diagonal ``n == j``
    has its own branch. Off the diagonal ``n - j`` is a nonzero integer, so
    no small-denominator guard is needed.
    """
    cfg = cfg or BoxConfig()
    win.validate(cfg)
    n, j = np.broadcast_arrays(np.asarray(n, dtype=np.int64), np.asarray(j, dtype=np.int64))
    if np.any(n < 1) or np.any(j < 1):
        raise ValueError("levels start at 1")
    u0, u1 = win.unit_bounds(cfg)
    if u1 <= u0:
        out = np.zeros(n.shape)
        return out if out.ndim else float(out)
    diff = n - j
    summ = n + j
    diag = diff == 0
    safe = np.where(diag, 1, diff)
    off = (_sinc_term(safe, u1) - _sinc_term(safe, u0)) - (_sinc_term(summ, u1) - _sinc_term(summ, u0))
    on = (u1 - u0) - (_sinc_term(summ, u1) - _sinc_term(summ, u0))
    out = np.where(diag, on, off)
    return out if out.ndim else float(out)


def element_quadrature(n, j, win, cfg=None, abs_tol=1e-10):
    """``<n|A|j>`` by adaptive Gauss-Kronrod quadrature of the position integral.

    Independent of :func:`element_closed_form`; ``n`` and ``j`` broadcast and
    all elements share one adaptive partition.
    """
    cfg = cfg or BoxConfig()
    win.validate(cfg)
    n, j = np.broadcast_arrays(np.asarray(n, dtype=float), np.asarray(j, dtype=float))
    if np.any(n < 1) or np.any(j < 1):
        raise ValueError("levels start at 1")
    lo, hi = win.bounds()
    lo, hi = max(lo, -0.5 * cfg.L), min(hi, 0.5 * cfg.L)
    if hi <= lo:
        out = np.zeros(n.shape)
        return out if out.ndim else float(out)
    L = cfg.L

    def integrand(x):
        u = x / L + 0.5
        return (2.0 / L) * np.sin(n * np.pi * u) * np.sin(j * np.pi * u)

    # split so that no panel spans many oscillations of the fastest component
    top = float(np.max(n + j))
    pieces = max(1, int(np.ceil((hi - lo) / L * top / 4.0)))
    points = np.linspace(lo, hi, pieces + 1)[1:-1]
    value, err, info = quad_vec(integrand, lo, hi, epsabs=abs_tol, epsrel=0.0,
                                points=points if points.size else None, limit=20000,
                                full_output=True)
    if not info.success or err > abs_tol:
        raise ConvergenceError(f"window quadrature did not converge (error {err:.3e})",
                               residual=err)
    value = np.asarray(value)
    return value if value.ndim else float(value)


def build_matrix(win, n_max, cfg=None):
    """All ``<n|A|j>`` for ``1 <= n, j <= n_max`` via the closed form."""
    cfg = cfg or BoxConfig()
    if int(n_max) != n_max or n_max < 1:
        raise ValueError(f"n_max must be a positive integer, got {n_max!r}")
    levels = np.arange(1, int(n_max) + 1)
    upper = element_closed_form(levels[:, None], levels[None, :], win, cfg)
    # symmetric by construction: copy the upper triangle over the lower one
    entries = np.triu(upper) + np.triu(upper, 1).T
    entries.setflags(write=False)
    return WindowMatrix(entries, win, cfg)


def complement_matrix(matrix):
    """Matrix of ``1 - A``."""
    entries = np.eye(matrix.dim) - matrix.entries
    entries.setflags(write=False)
    return WindowMatrix(entries, matrix.window, matrix.config)
