"""Estimator-style wrappers so the simulation composes with scikit-learn tooling.

``BoxEquilibration`` is configured by constructor parameters, ``fit`` builds
the state and window matrix, and ``predict`` maps times (units of ``T_g``) to
distinguishability values. ``PowerLawRegressor`` fits the log-log scaling of
time-averaged distinguishability against effective dimension.
"""

import numbers

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_scalar, as_1d_column
from .closed_form import SeriesApprox, power_law_fit
from .dynamics import Dephasing, equilibrium, time_average_distinguishability
from .spectrum import (BoxConfig, effective_dimension, gaussian_state, uniform_state)
from .window import Window, build_matrix


class BoxEquilibration(TransformerMixin, BaseEstimator):
    """Distinguishability of an evolving box state from its equilibrium.

    Parameters
    ----------
    sigma_over_l : float, optional
        Width of a Gaussian initial packet in units of ``L``.
    uniform_n : int, optional
        Number of levels of a uniform initial superposition. Exactly one of
        ``sigma_over_l`` and ``uniform_n`` must be given.
    window_center, window_width : float, optional
        Measurement window in units of ``L``. Defaults to the centered
        half-width window for Gaussian states and the left half box for
        uniform states.
    trunc_eps : float
        Discarded probability allowed when truncating a Gaussian state.
    mode : {"analytic", "quadrature"}
        How Gaussian amplitudes are obtained.
    L, m, hbar : float
        Physical constants.

    Attributes
    ----------
    state_ : EnergyState
    matrix_ : WindowMatrix
    equilibrium_ : EquilibriumState
    deff_ : float
    """

    def __init__(self, sigma_over_l=None, uniform_n=None, window_center=None,
                 window_width=None, trunc_eps=1e-12, mode="analytic", L=1.0, m=1.0,
                 hbar=1.0):
        self.sigma_over_l = sigma_over_l
        self.uniform_n = uniform_n
        self.window_center = window_center
        self.window_width = window_width
        self.trunc_eps = trunc_eps
        self.mode = mode
        self.L = L
        self.m = m
        self.hbar = hbar

    def _window(self, cfg):
        gaussian = self.sigma_over_l is not None
        center = self.window_center
        width = self.window_width
        if center is None:
            center = 0.0 if gaussian else -0.25
        if width is None:
            width = 0.5
        check_scalar(center, "window_center", min_val=-0.5, max_val=0.5)
        check_scalar(width, "window_width", min_val=0.0, max_val=1.0)
        return Window(center * cfg.L, width * cfg.L).validate(cfg)

    def fit(self, X=None, y=None):
        """Build the initial state and window matrix. ``X`` and ``y`` are ignored."""
        cfg = BoxConfig(self.L, self.m, self.hbar)
        if (self.sigma_over_l is None) == (self.uniform_n is None):
            raise ValueError("give exactly one of sigma_over_l and uniform_n")
        if self.sigma_over_l is not None:
            check_scalar(self.sigma_over_l, "sigma_over_l", min_val=0.0, max_val=0.25,
                         include_min=False, include_max=False)
            check_scalar(self.trunc_eps, "trunc_eps", min_val=0.0, max_val=1.0,
                         include_min=False, include_max=False)
            state = gaussian_state(self.sigma_over_l * cfg.L, self.mode, self.trunc_eps, cfg)
        else:
            check_scalar(self.uniform_n, "uniform_n", numbers.Integral, min_val=1)
            state = uniform_state(self.uniform_n, cfg)
        self.config_ = cfg
        self.window_ = self._window(cfg)
        self.state_ = state
        self.matrix_ = build_matrix(self.window_, state.n_max, cfg)
        self.equilibrium_ = equilibrium(state)
        self.deff_ = effective_dimension(state)
        self.dephasing_ = Dephasing(state, self.matrix_)
        return self

    def _absolute_times(self, X):
        return as_1d_column(X) * self.config_.Tg

    def predict(self, X):
        """Distinguishability at times ``X`` given in units of ``T_g``."""
        check_is_fitted(self, "dephasing_")
        return np.abs(self.dephasing_.signed(self._absolute_times(X)))

    def transform(self, X):
        """Columns ``(window probability, distinguishability)`` at times ``X`` (units of ``T_g``)."""
        check_is_fitted(self, "dephasing_")
        prob = self.dephasing_.outcome(self._absolute_times(X))
        return np.column_stack([prob, np.abs(prob - self.dephasing_.baseline)])

    def time_average(self, n_samples=None):
        check_is_fitted(self, "dephasing_")
        return time_average_distinguishability(self.state_, self.matrix_, n_samples)

    def series_approx(self, terms_p=16, terms_kl=None):
        """Closed-form approximation parameters; Gaussian states only."""
        check_is_fitted(self, "state_")
        if self.sigma_over_l is None:
            raise ValueError("series approximations exist only for Gaussian states")
        if terms_kl is None:
            terms_kl = 4 * self.state_.n_max
        return SeriesApprox.from_sigma(self.sigma_over_l * self.L, self.config_, terms_p,
                                       terms_kl)


class PowerLawRegressor(RegressorMixin, BaseEstimator):
    """Least-squares fit of ``y = prefactor * x^(-exponent)`` in log-log space."""

    def fit(self, X, y):
        x = as_1d_column(X)
        y = np.asarray(y, dtype=float).ravel()
        if x.shape != y.shape:
            raise ValueError("X and y have inconsistent lengths")
        self.prefactor_, self.exponent_ = power_law_fit(np.column_stack([x, y]))
        return self

    def predict(self, X):
        check_is_fitted(self, "exponent_")
        return self.prefactor_ * as_1d_column(X) ** (-self.exponent_)
