import numpy as np
import pytest
from hypothesis import settings

from pseudoherm import calogero

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def reference_grid():
    """The n=61 Calogero grid and its spectra (one dense solve per session)."""
    g = calogero.GridSpec(L=6.0, n=61, lam=2.0, phi=0.1)
    return g, calogero.grid_spectra(g)


def random_complex(rng, dim, scale=1.0):
    return scale * (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))


def random_hermitian(rng, dim):
    a = random_complex(rng, dim)
    return 0.5 * (a + a.conj().T)


# ------------------------------------------------------- acceptance summary

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")


def pytest_runtest_logreport(report):
    marker = dict(report.user_properties).get("criterion")
    if marker is None or (report.when != "call" and report.passed):
        return
    number, title = marker
    values = dict(report.user_properties).get("measured") or {}
    measured = ", ".join(f"{k}={v:.2e}" if isinstance(v, float) else f"{k}={v}" for k, v in values.items())
    verdict = "PASS" if report.passed else "FAIL"
    if report.when == "call" or number not in _criteria:
        _criteria[number] = (title, verdict, measured)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, verdict, measured = _criteria[number]
        line = f"[{verdict}] criterion {number}: {title}"
        terminalreporter.write_line(line + (f"  ({measured})" if measured else ""))


@pytest.fixture
def criterion(request, record_property):
    """Tag a test with its acceptance criterion; returns a recorder for measured values."""
    marker = request.node.get_closest_marker("criterion")
    record_property("criterion", tuple(marker.args))
    measured = {}
    record_property("measured", measured)
    return measured
