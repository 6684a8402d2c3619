import math

from hypothesis import settings, strategies as st

settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")

from gaussfid.state import GaussianState


def angle_dist(a, b):
    """Distance between two axis angles modulo pi."""
    d = abs(a - b) % math.pi
    return min(d, math.pi - d)


variance = st.floats(0.1, 20.0)
angle = st.floats(-4.0, 4.0)
offset = st.floats(-2.0, 2.0)


@st.composite
def physical_states(draw, max_breadth=10.0, centered=False):
    v_minus = draw(st.floats(0.2, 5.0))
    breadth = draw(st.floats(1.0, max_breadth))
    v_plus = breadth / v_minus
    phi = draw(angle)
    if centered:
        return GaussianState(v_plus, v_minus, phi)
    return GaussianState(v_plus, v_minus, phi, draw(offset), draw(offset))


@st.composite
def any_states(draw):
    return GaussianState(draw(variance), draw(variance), draw(angle), draw(offset), draw(offset))


def same_distribution(a, b, tol=1e-9):
    """Equal covariance matrices and centers, regardless of axis labelling."""
    import numpy as np

    return (
        np.allclose(a.covariance(), b.covariance(), rtol=tol, atol=tol)
        and abs(a.delta - b.delta) <= tol * max(1.0, abs(a.delta))
    )


ACCEPTANCE_RESULTS = []


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    status = "PASS" if call.excinfo is None else "FAIL"
    ACCEPTANCE_RESULTS.append((number, title, status))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}")
