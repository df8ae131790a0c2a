import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from npspec.curves import CurveSpec, eval_complex, fourier_coeffs_of_q, make_curve
from npspec.errors import DegenerateSeries, InsufficientDecay, UnsupportedKind
from npspec.grauert import (
    _Collisions,
    _trim,
    chebyshev_rate,
    closed_form_radius,
    modified_radius,
    strip_radius_upper,
    trigpoly_radius,
)

from conftest import cached_curve

LN3, LN15, LN4 = math.log(3), math.log(1.5), math.log(4)
EXP_EPS = math.log(2 * math.pi - 1)


@pytest.mark.parametrize("spec,want", [
    (CurveSpec.ellipse(2, 1), LN3),
    (CurveSpec.limacon(0.4, "naive"), LN15),
    (CurveSpec.limacon(0.4, "optimal"), LN4),
    (CurveSpec.exp_curve(1j), EXP_EPS),
])
def test_closed_forms(spec, want):
    assert closed_form_radius(spec).value == pytest.approx(want, abs=1e-12)


def test_closed_form_numeric_values():
    assert closed_form_radius(CurveSpec.ellipse(2, 1)).value == pytest.approx(1.0986123, abs=1e-7)
    assert closed_form_radius(CurveSpec.limacon(0.4)).value == pytest.approx(0.4054651, abs=1e-7)
    assert closed_form_radius(CurveSpec.limacon(0.4, "optimal")).value == pytest.approx(1.3862944, abs=1e-7)
    assert closed_form_radius(CurveSpec.exp_curve(1j)).value == pytest.approx(1.6645, abs=1e-4)


def test_circle_infinite():
    est = closed_form_radius(CurveSpec.circle(3.0))
    assert math.isinf(est.value) and est.witness is None
    assert est.to_json()["value"] == math.inf


def test_fourier_has_no_closed_form():
    with pytest.raises(UnsupportedKind):
        closed_form_radius(CurveSpec.fourier([(1, 1.0), (-1, 0.2)]))


@pytest.mark.parametrize("spec", [
    CurveSpec.ellipse(2, 1),
    CurveSpec.ellipse(5, 1),
    CurveSpec.limacon(0.4, "naive"),
    CurveSpec.limacon(0.4, "optimal"),
    CurveSpec.limacon(0.2, "optimal"),
    CurveSpec.exp_curve(1j),
    CurveSpec.exp_curve(2.0 - 0.5j),
])
def test_witness_is_a_collision(spec):
    est = closed_form_radius(spec)
    curve = make_curve(spec)
    s, t = est.witness
    qs = curve.q(s)
    qt = eval_complex(curve, t, strict=False)
    assert abs(qt - qs) <= 1e-9 * (1 + abs(qs))
    assert abs(abs(t.imag) - est.value) <= 1e-9
    assert abs(math.remainder(t.real - s, 2 * math.pi)) > 1e-6 or abs(t.imag) > 0


def test_modified_radius_limacon_is_max():
    for kind in ("naive", "optimal"):
        assert modified_radius(CurveSpec.limacon(0.4, kind)).value == pytest.approx(LN4, abs=1e-12)
    assert modified_radius(CurveSpec.ellipse(2, 1)).value == pytest.approx(LN3)
    assert closed_form_radius(CurveSpec.limacon(0.4)).value != closed_form_radius(
        CurveSpec.limacon(0.4, "optimal")).value


def test_trigpoly_ellipse():
    est = trigpoly_radius([(1, 1.5), (-1, 0.5)])
    assert est.value == pytest.approx(LN3, abs=1e-10)
    col = _Collisions(_trim([(1, 1.5), (-1, 0.5)]))
    for s in np.linspace(-3, 3, 9):
        w = np.exp(1j * s)
        roots = col.nontrivial_roots(s)
        assert roots.size == 1
        assert roots[0] == pytest.approx((2 - 1) / ((2 + 1) * w), abs=1e-12)
        assert abs(roots[0]) == pytest.approx(1 / 3, abs=1e-12)
        assert col.q(roots[0]) == pytest.approx(col.q(w), abs=1e-12)


def test_trigpoly_limacon_witness():
    est = trigpoly_radius([(1, 1.0), (2, 0.4)])
    assert est.value == pytest.approx(LN15, abs=1e-10)
    s, t = est.witness
    # minimal |ln|z|| for z = -w - 2.5 occurs at w = -1
    assert abs(math.remainder(s - math.pi, 2 * math.pi)) < 1e-6
    c = make_curve(CurveSpec.limacon(0.4))
    assert abs(eval_complex(c, t) - c.q(s)) < 1e-9


def test_trigpoly_circle_infinite():
    assert math.isinf(trigpoly_radius([(1, 1.0)]).value)


def test_trigpoly_from_sampled_coefficients():
    for key, want in (("ellipse", LN3), ("limacon_naive", LN15)):
        coeffs = fourier_coeffs_of_q(cached_curve(key), 64)
        assert trigpoly_radius(coeffs).value == pytest.approx(want, abs=1e-9)


def test_trigpoly_degenerate():
    with pytest.raises(DegenerateSeries):
        trigpoly_radius([(0, 1.0)])
    with pytest.raises(ValueError):
        trigpoly_radius([(1, 1.0)], n_samples=16)


@settings(max_examples=25, deadline=None)
@given(a=st.floats(1.05, 4.0), b=st.floats(0.1, 1.0))
def test_trigpoly_matches_closed_form_ellipses(a, b):
    spec = CurveSpec.ellipse(a, b)
    coeffs = [(1, (a + b) / 2), (-1, (a - b) / 2)]
    assert trigpoly_radius(coeffs).value == pytest.approx(closed_form_radius(spec).value, abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(A=st.floats(0.05, 0.45))
def test_trigpoly_matches_closed_form_limacons(A):
    want = closed_form_radius(CurveSpec.limacon(A)).value
    assert trigpoly_radius([(1, 1.0), (2, A)]).value == pytest.approx(want, abs=1e-9)


def test_strip_upper_finite_series():
    for key in ("ellipse", "limacon_naive", "circle"):
        est = strip_radius_upper(fourier_coeffs_of_q(cached_curve(key), 64))
        assert math.isinf(est.value)


@pytest.mark.parametrize("rho", [0.3, 0.5, 0.8])
def test_strip_upper_geometric(rho):
    coeffs = [(k, rho ** abs(k)) for k in range(-30, 31) if k]
    assert strip_radius_upper(coeffs).value == pytest.approx(math.log(1 / rho), rel=0.01)


def test_strip_upper_exp_superexponential():
    coeffs = [(k, 1j ** k / math.factorial(k)) for k in range(0, 20)]
    est = strip_radius_upper(coeffs)
    assert est.extra["late_slope"] > est.extra["early_slope"]
    assert "superexponential" in est.notes
    sampled = strip_radius_upper(fourier_coeffs_of_q(cached_curve("exp"), 64))
    assert sampled.value > EXP_EPS


def test_strip_upper_caps_fast_decay():
    coeffs = [(k, math.exp(-60.0 * k)) for k in range(1, 12)]
    assert math.isinf(strip_radius_upper(coeffs, tol=0).value)


def test_strip_upper_rejects_growth():
    with pytest.raises(InsufficientDecay):
        strip_radius_upper([(k, 1.1 ** k) for k in range(1, 20)])


def test_chebyshev_rate_examples():
    assert chebyshev_rate(0.0) == 0.0
    assert chebyshev_rate(LN3) == pytest.approx(0.3429, abs=1e-4)
    x = 1.3
    assert chebyshev_rate(x) == pytest.approx(math.log((x + math.sqrt(math.pi ** 2 + x * x)) / math.pi))
    assert math.isinf(chebyshev_rate(math.inf))
    with pytest.raises(ValueError):
        chebyshev_rate(-1.0)


def test_chebyshev_below_eps_on_log_grid():
    for x in np.logspace(-3, 2, 200):
        assert chebyshev_rate(x) < x


@settings(max_examples=100)
@given(st.floats(1e-6, 1e6))
def test_chebyshev_monotone_and_below(x):
    assert 0 < chebyshev_rate(x) < x
    assert chebyshev_rate(x) < chebyshev_rate(x * 1.01)


def test_ordering_chebyshev_eps_strip():
    for key in ("exp",):
        eps = closed_form_radius(CurveSpec.exp_curve(1j)).value
        strip = strip_radius_upper(fourier_coeffs_of_q(cached_curve(key), 64)).value
        assert chebyshev_rate(eps) < eps <= strip


def test_estimate_json():
    obj = closed_form_radius(CurveSpec.ellipse(2, 1)).to_json()
    assert obj["method"] == "closed_form"
    assert set(obj["witness"]) == {"s", "t_re", "t_im"}
