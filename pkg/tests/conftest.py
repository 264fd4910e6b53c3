import numpy as np
import pytest

from simplexcert import DegeneracyError, modulus_forward, modulus_inverse, new_simplex
from simplexcert.oracle import OracleConfig

_criteria: dict[int, tuple[str, str, float]] = {}


def random_simplex(rng: np.random.Generator, n: int, d: int, box: float = 1.0):
    """Vertices uniform in ``[-box, box]^d``, redrawn until the margin certifies."""
    while True:
        try:
            return new_simplex(rng.uniform(-box, box, size=(n + 1, d)))
        except DegeneracyError:
            continue


def sample_forward_pairs(s, eps, rng, count):
    """Max coordinate deviation over ``count`` pairs at distance below the forward modulus."""
    delta = modulus_forward(s.constants, eps)
    lam = rng.uniform(-1, 2, (count, s.n + 1))
    lam /= lam.sum(axis=1, keepdims=True)
    X = lam @ s.vertices
    Q, _ = np.linalg.qr((s.vertices[:-1] - s.vertices[-1]).T)
    g = rng.standard_normal((count, s.n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    Y = X + (g * (delta * rng.random(count))[:, None]) @ Q.T
    xi, _ = s.barycentric(X)
    et, _ = s.barycentric(Y)
    return float(np.max(np.sum(np.abs(xi - et), axis=1)))


def sample_inverse_pairs(s, eps, rng, count):
    """Max distance over ``count`` pairs whose first n coordinates differ by less than the modulus."""
    delta = modulus_inverse(s.constants, eps)
    g = rng.laplace(size=(count, s.n))
    g /= np.sum(np.abs(g), axis=1, keepdims=True)
    dz = g * (delta * rng.random(count))[:, None]
    diff = np.hstack([dz, -dz.sum(axis=1, keepdims=True)])
    # drop a random coordinate instead of the last one to exercise every base
    perm = np.array([rng.permutation(s.n + 1) for _ in range(count)])
    diff = np.take_along_axis(diff, perm, axis=1)
    return float(np.max(np.linalg.norm(diff @ s.vertices, axis=1)))


def in_hull_moves(s, delta, rng, count):
    """``count`` vertex sets, each vertex moved within aff(s) by less than ``delta``."""
    Q, _ = np.linalg.qr((s.vertices[:-1] - s.vertices[-1]).T)
    g = rng.standard_normal((count, s.n + 1, s.n))
    g /= np.linalg.norm(g, axis=2, keepdims=True)
    g *= (delta * rng.random((count, s.n + 1)))[..., None]
    return s.vertices + g @ Q.T


@pytest.fixture
def cfg():
    return OracleConfig()


@pytest.fixture
def rng(request):
    # one stream per test, stable under reordering
    key = sum(ord(ch) * (i + 1) for i, ch in enumerate(request.node.nodeid)) % 2**32
    return OracleConfig().rng(key)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    number, title = marker.args
    if report.when == "setup" and report.passed:
        return
    status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    _criteria[number] = (title, status, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status, seconds = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {title}  ({seconds:.2f}s)")
