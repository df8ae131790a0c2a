import functools

import pytest

from npspec.curves import CurveSpec, builtin_specs, make_curve
from npspec.np_kernel import nystrom_matrix
from npspec.spectrum import np_spectrum


@functools.lru_cache(maxsize=None)
def cached_curve(key):
    return make_curve(builtin_specs()[key])


@functools.lru_cache(maxsize=None)
def cached_spectrum(key, N):
    return np_spectrum(nystrom_matrix(cached_curve(key), N))


BUILTIN = tuple(builtin_specs())


@pytest.fixture(params=BUILTIN)
def builtin_key(request):
    return request.param


@pytest.fixture
def ellipse():
    return make_curve(CurveSpec.ellipse(2.0, 1.0))


@pytest.fixture
def circle():
    return make_curve(CurveSpec.circle(1.0))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import ACCEPTANCE_LINES
    except ImportError:
        return
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
