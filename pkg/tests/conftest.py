import numpy as np
import pytest

from wpls import _backend

BACKENDS = _backend.available()


@pytest.fixture(params=BACKENDS)
def backend(request):
    """Run the test once per importable kernel backend."""
    with _backend.use_backend(request.param):
        yield request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def planted_psd(rng, n, r):
    """``B'B`` for a Gaussian ``r x n`` B: symmetric PSD of rank r (with probability one)."""
    if r == 0:
        return np.zeros((n, n))
    b = rng.standard_normal((r, n))
    return b.T @ b


def random_rank(rng, m, n, r):
    if r == 0:
        return np.zeros((m, n))
    return rng.standard_normal((m, r)) @ rng.standard_normal((r, n))


# (number, passed, detail) per acceptance criterion, printed after the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(ACCEPTANCE, key=lambda t: (t[0] == 0, t[0])):
        label = "INFO" if number == 0 else f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}"
        terminalreporter.write_line(f"{label}  {detail}")
