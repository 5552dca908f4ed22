"""Equilibration of a particle in a box under coarse-grained position measurements."""

from .closed_form import (SeriesApprox, b_coefficient, d_double_sum, d_leading, d_series,
                          energy_moment, energy_std, power_law_fit, s_moment, tau_box,
                          tau_gaussian, tau_over_Tg, tau_typical, uniform_first_zero,
                          uniform_g)
from .dynamics import (Dephasing, EquilibriumState, TimeSeries, density, distinguishability,
                       distinguishability_series, equilibrium, first_sign_change,
                       outcome_probability, periodic_series, time_average_distinguishability)
from .estimator import BoxEquilibration, PowerLawRegressor
from .grid import SpatialGrid, synthesize, window_probability_grid
from .quadrature import ConvergenceError, adaptive_simpson
from .spectrum import (BoxConfig, EnergyState, deff_gaussian_closed_form, effective_dimension,
                       eigenfunction, energy_level, gaussian_state, gaussian_truncation,
                       sigma_for_deff, uniform_state)
from .window import (Window, WindowMatrix, build_matrix, complement_matrix,
                     element_closed_form, element_quadrature)

__version__ = "0.1.0"
