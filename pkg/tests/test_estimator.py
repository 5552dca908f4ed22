import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from boxequil import (BoxConfig, Window, build_matrix, distinguishability, sigma_for_deff,
                      uniform_state)
from boxequil.estimator import BoxEquilibration


def test_params_round_trip():
    est = BoxEquilibration(sigma_over_l=0.01, window_width=0.3)
    params = est.get_params()
    assert params["sigma_over_l"] == 0.01 and params["window_width"] == 0.3
    twin = clone(est).set_params(window_width=0.4)
    assert twin.window_width == 0.4 and est.window_width == 0.3


def test_predict_matches_functional_api(gauss53, half53):
    est = BoxEquilibration(sigma_over_l=sigma_for_deff(53)).fit()
    t = np.linspace(0, 0.01, 7)
    np.testing.assert_allclose(est.predict(t),
                               distinguishability(gauss53, half53, t * BoxConfig().Tg),
                               atol=1e-14)
    np.testing.assert_allclose(est.predict(t.reshape(-1, 1)), est.predict(t))
    prob, dist = est.transform(t).T
    np.testing.assert_allclose(dist, est.predict(t))
    assert est.deff_ == pytest.approx(53, rel=1e-10)


def test_uniform_defaults_to_left_half():
    est = BoxEquilibration(uniform_n=20).fit()
    assert est.window_ == Window.left_half()
    assert est.matrix_.dim == 20


def test_time_average_and_series():
    est = BoxEquilibration(sigma_over_l=0.02).fit()
    assert 0 < est.time_average(2**14) < 0.5
    assert est.series_approx().terms_kl == 4 * est.state_.n_max
    with pytest.raises(ValueError):
        BoxEquilibration(uniform_n=5).fit().series_approx()


def test_not_fitted():
    with pytest.raises(NotFittedError):
        BoxEquilibration(sigma_over_l=0.01).predict([0.0])


@pytest.mark.parametrize("params", [
    {},
    {"sigma_over_l": 0.01, "uniform_n": 5},
    {"sigma_over_l": 0.3},
    {"uniform_n": 0},
    {"uniform_n": 2.5},
    {"sigma_over_l": 0.01, "window_width": 1.5},
    {"sigma_over_l": 0.01, "window_center": 0.4},
])
def test_invalid_parameters(params):
    with pytest.raises((ValueError, TypeError)):
        BoxEquilibration(**params).fit()


def test_multi_column_input_rejected():
    est = BoxEquilibration(uniform_n=4).fit()
    with pytest.raises(ValueError):
        est.predict(np.zeros((3, 2)))


def test_in_pipeline():
    pipe = make_pipeline(FunctionTransformer(lambda x: np.asarray(x) / 1000.0),
                         BoxEquilibration(uniform_n=50))
    pipe.fit([[0.0]])
    out = pipe.transform(np.array([[0.0], [0.25]]))
    assert out.shape == (2, 2)
    assert out[0, 1] == pytest.approx(distinguishability(
        uniform_state(50), build_matrix(Window.left_half(), 50), 0.0))
