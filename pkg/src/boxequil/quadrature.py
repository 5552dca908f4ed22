"""Vectorized adaptive Simpson quadrature.

The integrand may be vector valued: ``f(x)`` receives a 1-D array of
abscissae and returns an array of shape ``x.shape + component_shape``. All
components share one adaptive partition; an interval is accepted once every
component meets its local tolerance.
"""

import numpy as np


class ConvergenceError(RuntimeError):
    """A numerical procedure stopped before meeting its tolerance.

    ``residual`` holds the best error estimate that was achieved.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


def _evaluate(f, x, n_expected):
    y = np.asarray(f(x))
    if y.shape[:1] != (n_expected,):
        raise ValueError(f"integrand returned shape {y.shape}, expected leading axis {n_expected}")
    return y


def adaptive_simpson(f, a, b, abs_tol=1e-12, initial_intervals=64, max_depth=40,
                     full_output=False):
    """Integrate ``f`` over ``[a, b]`` with adaptive composite Simpson.

    Each candidate interval is integrated with one Simpson panel and with two
    half panels; the interval is accepted when the difference, divided by 15,
    is below ``abs_tol`` scaled by the interval's share of ``[a, b]``. The
    accepted value includes the Richardson correction.

    Parameters
    ----------
    f : callable
        Vectorized integrand, see module docstring.
    a, b : float
        Integration limits, ``a <= b``.
    abs_tol : float
        Target absolute error, summed over the partition.
    initial_intervals : int
        Size of the uniform starting partition. Keep it large enough to
        resolve narrow features, otherwise a panel can miss them entirely.
    max_depth : int
        Maximum number of bisections of a starting interval.
    full_output : bool
        If true, also return the accumulated error estimate.

    Raises
    ------
    ConvergenceError
        When an interval still fails at ``max_depth``.
    """
    a = float(a)
    b = float(b)
    if b < a:
        raise ValueError("adaptive_simpson requires a <= b")
    if abs_tol <= 0:
        raise ValueError("abs_tol must be positive")
    length = b - a
    if length == 0.0:
        y0 = _evaluate(f, np.array([a]), 1)
        zero = np.zeros(y0.shape[1:], dtype=y0.dtype)
        return (zero, 0.0) if full_output else zero

    edges = np.linspace(a, b, int(initial_intervals) + 1)
    left, right = edges[:-1], edges[1:]
    total = None
    err_total = 0.0
    depth = 0
    while left.size:
        h = right - left
        k = left.size
        x = np.concatenate([left, left + 0.25 * h, left + 0.5 * h, left + 0.75 * h, right])
        y = _evaluate(f, x, 5 * k)
        y = y.reshape((5, k) + y.shape[1:])
        fl, fq1, fm, fq3, fr = y
        hb = h.reshape((k,) + (1,) * (y.ndim - 2))
        coarse = hb / 6.0 * (fl + 4.0 * fm + fr)
        fine = hb / 12.0 * (fl + 4.0 * fq1 + 2.0 * fm + 4.0 * fq3 + fr)
        diff = np.abs(fine - coarse).reshape(k, -1).max(axis=1) / 15.0
        ok = diff <= abs_tol * h / length
        accepted = (fine + (fine - coarse) / 15.0)[ok].sum(axis=0)
        total = accepted if total is None else total + accepted
        err_total += float(diff[ok].sum())
        if ok.all():
            break
        depth += 1
        if depth > max_depth:
            residual = err_total + float(diff[~ok].sum())
            raise ConvergenceError(
                f"adaptive Simpson did not converge after {max_depth} bisections "
                f"(estimated error {residual:.3e}, tolerance {abs_tol:.3e})",
                residual=residual,
            )
        bad_l, bad_r = left[~ok], right[~ok]
        mid = 0.5 * (bad_l + bad_r)
        left = np.concatenate([bad_l, mid])
        right = np.concatenate([mid, bad_r])
    if full_output:
        return total, err_total
    return total
