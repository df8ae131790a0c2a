import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from npspec.curves import CurveSpec, make_curve
from npspec.errors import IndefiniteForm, NonRealSpectrum, TrivialEigNotFound
from npspec.np_kernel import DiscreteOperator, nystrom_matrix
from npspec.single_layer import hstar_form
from npspec.spectrum import (
    NOISE_FLOOR,
    Spectrum,
    np_spectrum,
    pair_eigenvalues,
    spectrum_agreement,
    symmetrized_spectrum,
)

from conftest import BUILTIN, cached_curve, cached_spectrum


def _op(matrix, speed=None):
    N = matrix.shape[0]
    return DiscreteOperator(matrix, np.zeros(N), np.full(N, 2 * math.pi / N), "np", "synthetic",
                            np.ones(N) if speed is None else speed)


def test_circle_spectrum():
    s = np_spectrum(nystrom_matrix(make_curve(CurveSpec.circle(1.0)), 64))
    assert np.max(np.abs(s.lambdas)) <= 1e-12
    assert s.dropped_half == pytest.approx(0.5, abs=1e-14)
    assert s.lambdas.size == 63


def test_ellipse_first_six():
    s = cached_spectrum("ellipse", 256)
    want = [1 / 6, -1 / 6, 1 / 18, -1 / 18, 1 / 54, -1 / 54]
    assert np.max(np.abs(s.lambdas[:6] - want)) <= 1e-10


@pytest.mark.parametrize("key", ["limacon_naive", "limacon_optimal"])
def test_limacon_even_magnitudes(key):
    s = cached_spectrum(key, 256)
    assert np.max(np.abs(s.even_magnitudes()[:3] - [0.125, 0.03125, 0.0078125])) <= 1e-8


@pytest.mark.parametrize("a,b", [(2.0, 1.0), (3.0, 2.0), (1.0, 0.3)])
def test_ellipse_family_formula(a, b):
    s = np_spectrum(nystrom_matrix(make_curve(CurveSpec.ellipse(a, b)), 256))
    r = (a - b) / (a + b)
    n = np.arange(1, 9)
    assert np.allclose(s.even_magnitudes()[:8], 0.5 * r ** n, atol=1e-10)


@pytest.mark.parametrize("A", [0.1, 0.25, 0.4])
def test_limacon_family_formula(A):
    # the limacon is a Moebius image of an ellipse with ratio (1 - r)/(1 + r), r = sqrt(1 - 4 A^2)
    r = math.sqrt(1 - 4 * A * A)
    ratio = (1 - r) / (1 + r)
    s = np_spectrum(nystrom_matrix(make_curve(CurveSpec.limacon(A, "optimal")), 256))
    n = np.arange(1, 6)
    assert np.allclose(s.even_magnitudes()[:5], 0.5 * ratio ** n, atol=1e-9)


def test_symmetrized_matches_plain_ellipse():
    c = cached_curve("ellipse")
    op = nystrom_matrix(c, 256)
    sym = symmetrized_spectrum(op, hstar_form(c, 256))
    plain = cached_spectrum("ellipse", 256)
    keep = np.abs(plain.lambdas) > 1e-10
    # entrywise in the sorted order
    assert np.max(np.abs(plain.lambdas[keep] - sym.lambdas[: keep.sum()])) <= 1e-9
    assert sym.dropped_half is None and sym.method == "symmetrized"


def test_symmetrized_circle_all_zero():
    c = cached_curve("circle")
    sym = symmetrized_spectrum(nystrom_matrix(c, 64), hstar_form(c, 64))
    assert np.max(np.abs(sym.lambdas)) < 1e-12


@pytest.mark.parametrize("key", BUILTIN)
def test_method_invariance(key):
    c = cached_curve(key)
    sym = symmetrized_spectrum(nystrom_matrix(c, 256), hstar_form(c, 256))
    plain = cached_spectrum(key, 256)
    assert spectrum_agreement(plain, sym, 1e-10) <= 1e-9
    assert spectrum_agreement(sym, plain, 1e-10) <= 1e-9


def test_parametrization_invariance():
    a = cached_spectrum("limacon_naive", 256)
    b = cached_spectrum("limacon_optimal", 256)
    assert spectrum_agreement(a, b, 1e-10) <= 1e-8
    assert spectrum_agreement(a, b, 1e-8) <= 1e-8
    c = cached_curve("limacon_optimal")
    sym = symmetrized_spectrum(nystrom_matrix(c, 256), hstar_form(c, 256))
    assert spectrum_agreement(a, sym, 1e-10) <= 1e-8
    # the matrices themselves differ
    assert not np.allclose(nystrom_matrix(cached_curve("limacon_naive"), 64).matrix,
                           nystrom_matrix(c, 64).matrix)


def test_agreement_identical_and_refinement():
    s = cached_spectrum("ellipse", 256)
    assert spectrum_agreement(s, s, 0.0) == 0.0
    assert spectrum_agreement(cached_spectrum("ellipse", 128), s, 1e-10) <= 1e-11


@pytest.mark.parametrize("key", BUILTIN)
def test_spectrum_invariants(key):
    s = cached_spectrum(key, 256)
    assert np.all(np.abs(s.lambdas) < 0.5)
    assert s.imag_residual_max <= 1e-9
    mags = np.abs(s.lambdas)
    above = mags > NOISE_FLOOR
    # every eigenvalue above the floor has a +/- partner
    assert 2 * len(s.pairing) == int(above.sum())
    for i, j, gap in s.pairing:
        lam = s.lambdas[i - 1]
        assert gap <= max(1e-10, 1e-6 * abs(lam))
    # |lambda_1| = |lambda_2| >= |lambda_3| = |lambda_4| >= ...
    m = mags[above]
    assert np.all(np.diff(m) <= 1e-10)
    assert np.allclose(m[0::2], m[1::2], rtol=1e-6, atol=1e-10)
    # positive member first in each pair
    assert np.all(s.lambdas[0:int(above.sum()):2] > 0)


def test_spectrum_json_fields():
    obj = cached_spectrum("ellipse", 128).to_json()
    assert list(obj) == ["curve", "N", "lambdas", "dropped_half", "imag_residual_max"]
    assert obj["N"] == 128 and len(obj["lambdas"]) == 127


def test_magnitude_is_one_based():
    s = cached_spectrum("ellipse", 128)
    assert s.magnitude(1) == pytest.approx(1 / 6, abs=1e-12)
    assert s.magnitude(3) == pytest.approx(1 / 18, abs=1e-12)


def test_trivial_eigenvalue_missing():
    with pytest.raises(TrivialEigNotFound):
        np_spectrum(_op(np.diag(np.linspace(-0.4, 0.4, 16))))


def test_trivial_eigenvalue_warns(caplog):
    d = np.linspace(-0.3, 0.3, 16)
    d[0] = 0.5 + 1e-7
    with caplog.at_level(logging.WARNING):
        s = np_spectrum(_op(np.diag(d)))
    assert s.dropped_half == pytest.approx(0.5 + 1e-7)
    assert any("away from 1/2" in r.message for r in caplog.records)


def test_nonreal_spectrum():
    M = np.zeros((16, 16))
    M[0, 0] = 0.5
    M[1, 2], M[2, 1] = 0.1, -0.1
    with pytest.raises(NonRealSpectrum):
        np_spectrum(_op(M))


def test_indefinite_form():
    c = cached_curve("ellipse")
    op = nystrom_matrix(c, 32)
    form = hstar_form(c, 32)
    bad = type(form)(form.sl_matrix, form.weights, -form.gram)
    with pytest.raises(IndefiniteForm):
        symmetrized_spectrum(op, bad)


def test_pairing_skips_noise():
    lam = np.array([0.2, -0.2, 0.05, -0.05, 1e-15, -3e-16])
    pairs = pair_eigenvalues(lam)
    assert [(i, j) for i, j, _ in pairs] == [(1, 2), (3, 4)]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 49), min_size=1, max_size=10, unique=True),
       st.randoms(use_true_random=False))
def test_pairing_recovers_shuffled_pairs(ints, rnd):
    mags = sorted((0.01 * i for i in ints), reverse=True)
    vals = [v for m in mags for v in (m, -m)]
    rnd.shuffle(vals)
    pairs = pair_eigenvalues(np.array(vals))
    assert len(pairs) == len(mags)
    for i, j, gap in pairs:
        assert vals[i - 1] == -vals[j - 1] and gap == 0.0


@settings(max_examples=10, deadline=None)
@given(a=st.floats(1.2, 3.0), A=st.floats(0.05, 0.45))
def test_spectra_inside_open_interval(a, A):
    for spec in (CurveSpec.ellipse(a, 1.0), CurveSpec.limacon(A)):
        s = np_spectrum(nystrom_matrix(make_curve(spec), 64))
        assert np.all(np.abs(s.lambdas) < 0.5)


def test_spectrum_dataclass_even_magnitudes():
    s = Spectrum(np.array([0.3, -0.3, 0.1, -0.1]), 0.5, 0.0)
    assert np.allclose(s.even_magnitudes(), [0.3, 0.1])
