import numpy as np
import pytest

from boxequil import (BoxConfig, Window, build_matrix, gaussian_state, sigma_for_deff,
                      uniform_state)


@pytest.fixture(scope="session")
def cfg():
    return BoxConfig()


@pytest.fixture(scope="session")
def sigma53():
    return sigma_for_deff(53)


@pytest.fixture(scope="session")
def gauss53(sigma53):
    return gaussian_state(sigma53)


@pytest.fixture(scope="session")
def half53(gauss53):
    return build_matrix(Window.centered(0.5), gauss53.n_max)


@pytest.fixture(scope="session")
def uniform500():
    return uniform_state(500)


@pytest.fixture(scope="session")
def left500():
    return build_matrix(Window.left_half(), 500)


@pytest.fixture
def rng():
    return np.random.default_rng(20141016)


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    failed = report.failed
    entry = _CRITERIA.setdefault(number, [title, True])
    if failed:
        entry[1] = False


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, passed = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}")
