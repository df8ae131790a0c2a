"""Modified maximal Grauert radius estimates.

``eps_q`` is the half-width of the largest strip ``|Im t| < eps`` in which a
parametrization takes each boundary value ``q(s)`` only at ``s`` itself.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .curves import CurveSpec, make_curve, _as_complex
from .errors import (
    DegenerateSeries,
    InsufficientDecay,
    RootFindingFailure,
    UnsupportedKind,
)

_INV_PHI = (math.sqrt(5) - 1) / 2
SLOPE_CAP = 50.0


@dataclass
class GrauertEstimate:
    value: float
    method: str
    witness: tuple[float, complex] | None = None
    curve_ref: str = ""
    notes: str = ""
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"curve": self.curve_ref, "method": self.method, "value": self.value}
        if self.witness is not None:
            s, t = self.witness
            out["witness"] = {"s": s, "t_re": t.real, "t_im": t.imag}
        if self.notes:
            out["notes"] = self.notes
        return out


def _canonical_witness(spec: CurveSpec, s: float, t: complex):
    """Map a witness of the defining formula to the oriented curve."""
    if make_curve(spec).flipped:
        s, t = -s, -t
    return (math.remainder(s, 2 * math.pi), complex(t))


def closed_form_radius(spec: CurveSpec) -> GrauertEstimate:
    """Closed-form ``eps_q`` for the built-in example kinds."""
    p = spec.params
    kind = spec.kind
    if kind == "circle":
        return GrauertEstimate(math.inf, "closed_form", None, spec.label,
                               "no nontrivial collisions")
    if kind == "ellipse":
        a, b = float(p["a"]), float(p["b"])
        value = math.log((a + b) / (a - b))
        # exp(it) = (a-b)/(a+b) exp(-is) at s = 0
        return GrauertEstimate(value, "closed_form", _canonical_witness(spec, 0.0, 1j * value),
                               spec.label)
    if kind == "limacon_naive":
        A = float(p["A"])
        value = math.log(1 / A - 1)
        # exp(it) = -exp(is) - 1/A, minimal at s = pi
        return GrauertEstimate(value, "closed_form",
                               _canonical_witness(spec, math.pi, math.pi - 1j * value),
                               spec.label, "parametrization z + A z^2")
    if kind == "limacon_optimal":
        A = float(p["A"])
        r = math.sqrt(1 - 4 * A * A)
        value = math.log((1 + r) / (1 - r))
        return GrauertEstimate(value, "closed_form", _canonical_witness(spec, 0.0, 1j * value),
                               spec.label, "focal-ellipse parametrization")
    if kind == "exp_curve":
        A = _as_complex(p["A"])
        value = math.log(2 * math.pi / abs(A) - 1)
        # A exp(it) = A exp(is) + 2 pi i with exp(is) antiparallel to 2 pi i / A
        v = 2j * math.pi / A
        s = cmath.phase(-v)
        t = cmath.phase(v) - 1j * math.log(abs(v) - 1)
        return GrauertEstimate(value, "exp_closed_form", _canonical_witness(spec, s, t), spec.label)
    raise UnsupportedKind(f"no closed-form radius for kind {kind!r}; use trigpoly_radius")


def modified_radius(spec: CurveSpec) -> GrauertEstimate:
    """Best known ``eps`` over the parametrizations available for the kind.

    For the limacon this is the maximum over the naive and the focal-ellipse
    parametrizations; for the other built-in kinds it is ``eps_q`` itself.
    """
    if spec.kind.startswith("limacon"):
        A = float(spec.params["A"])
        cands = [closed_form_radius(CurveSpec.limacon(A, k)) for k in ("naive", "optimal")]
        best = max(cands, key=lambda e: e.value)
        return GrauertEstimate(best.value, best.method, best.witness, spec.label,
                               f"max over parametrizations ({best.notes})")
    return closed_form_radius(spec)


# trigonometric polynomials ----------------------------------------------------


def _trim(coeffs, tol: float = 1e-14) -> dict[int, complex]:
    out: dict[int, complex] = {}
    for k, c in coeffs:
        out[int(k)] = out.get(int(k), 0) + complex(c)
    scale = max(abs(c) for c in out.values())
    return {k: c for k, c in out.items() if abs(c) > tol * scale}


def _companion_roots(poly: np.ndarray) -> np.ndarray:
    """Roots of ``sum poly[j] z^j`` from the companion matrix eigenvalues."""
    poly = np.trim_zeros(np.asarray(poly, dtype=complex), "b")
    n = poly.size - 1
    if n < 1:
        return np.empty(0, dtype=complex)
    C = np.zeros((n, n), dtype=complex)
    C[1:, :-1] = np.eye(n - 1)
    C[:, -1] = -poly[:-1] / poly[-1]
    try:
        return np.linalg.eigvals(C)
    except np.linalg.LinAlgError as exc:
        raise RootFindingFailure(f"companion eigensolve failed: {exc}") from exc


class _Collisions:
    def __init__(self, coeffs: dict[int, complex]):
        self.kmin = min(min(coeffs), 0)
        self.kmax = max(coeffs)
        self.coeffs = coeffs

    def q(self, z: complex) -> complex:
        return sum(c * z**k for k, c in self.coeffs.items())

    def nontrivial_roots(self, s: float) -> np.ndarray:
        w = cmath.exp(1j * s)
        # z^{-kmin} (q(z) - q(w)) as an ordinary polynomial
        poly = np.zeros(self.kmax - self.kmin + 1, dtype=complex)
        for k, c in self.coeffs.items():
            poly[k - self.kmin] += c
        poly[-self.kmin] -= self.q(w)
        roots = _companion_roots(poly)
        if roots.size == 0:
            return roots
        return np.delete(roots, int(np.argmin(np.abs(roots - w))))

    def objective(self, s: float) -> tuple[float, complex | None]:
        roots = self.nontrivial_roots(s)
        roots = roots[roots != 0]
        if roots.size == 0:
            return math.inf, None
        vals = np.abs(np.log(np.abs(roots)))
        j = int(np.argmin(vals))
        return float(vals[j]), complex(roots[j])


def _golden(f, a: float, b: float, tol: float) -> float:
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def trigpoly_radius(coeffs, n_samples: int = 512, curve_ref: str = "") -> GrauertEstimate:
    """``eps_q`` of a finite Laurent series by solving ``q(z) = q(w)``.

    For each sample ``w = exp(is)`` the polynomial ``z^m (q(z) - q(w))`` is
    solved through its companion matrix, the trivial root ``z = w`` removed,
    and ``min |ln|z||`` over the remaining roots recorded. The grid minimum is
    refined by golden-section search in ``s``.
    """
    if n_samples < 64:
        raise ValueError(f"n_samples must be >= 64, got {n_samples}")
    cs = _trim(coeffs)
    if not any(k != 0 for k in cs):
        raise DegenerateSeries("all k != 0 coefficients vanish")
    col = _Collisions(cs)
    s_grid = -math.pi + 2 * math.pi * np.arange(n_samples) / n_samples
    vals = np.array([col.objective(s)[0] for s in s_grid])
    if not np.any(np.isfinite(vals)):
        return GrauertEstimate(math.inf, "trigpoly_roots", None, curve_ref,
                               "only the trivial collision root")
    i = int(np.argmin(vals))
    h = 2 * math.pi / n_samples
    s_best = _golden(lambda s: col.objective(s)[0], s_grid[i] - h, s_grid[i] + h, 1e-12)
    if col.objective(s_best)[0] > vals[i]:
        s_best = float(s_grid[i])
    value, z = col.objective(s_best)
    t = -1j * cmath.log(z)
    s_best = math.remainder(s_best, 2 * math.pi)
    return GrauertEstimate(value, "trigpoly_roots", (s_best, t), curve_ref,
                           f"grid {n_samples} + golden refinement")


# coefficient decay -----------------------------------------------------------


def strip_radius_upper(coeffs, tol: float = 1e-14, curve_ref: str = "") -> GrauertEstimate:
    """Least-squares decay slope of ``-ln|c_k|`` against ``|k|``.

    Estimates the analyticity half-width, an upper bound for ``eps_q``.
    Series with fewer than 8 resolved coefficients are treated as finite
    (entire continuation) and give ``inf``; slopes above 50 are also reported
    as ``inf``.
    """
    mags: dict[int, float] = {}
    for k, c in coeffs:
        k = abs(int(k))
        if k:
            mags[k] = max(mags.get(k, 0.0), abs(complex(c)))
    ks = np.array(sorted(k for k, m in mags.items() if m > tol), dtype=float)
    if ks.size < 8:
        return GrauertEstimate(math.inf, "fourier_decay_upper", None, curve_ref,
                               f"finite series ({ks.size} resolved coefficients)")
    y = -np.log([mags[int(k)] for k in ks])
    slope, _ = np.polyfit(ks, y, 1)
    if slope <= 0:
        raise InsufficientDecay(f"coefficients do not decrease (slope {slope:.3g})")
    half = ks.size // 2
    early = np.polyfit(ks[:half], y[:half], 1)[0]
    late = np.polyfit(ks[half:], y[half:], 1)[0]
    notes = f"fit over |k| in [{int(ks[0])}, {int(ks[-1])}]"
    if late > 1.25 * early:
        notes += "; local slope increasing (superexponential decay)"
    value = math.inf if slope > SLOPE_CAP else float(slope)
    return GrauertEstimate(value, "fourier_decay_upper", None, curve_ref, notes,
                           {"slope": float(slope), "early_slope": float(early), "late_slope": float(late)})


def chebyshev_rate(eps: float) -> float:
    """``log((eps + sqrt(pi^2 + eps^2)) / pi)``, the Chebyshev-expansion rate."""
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    if math.isinf(eps):
        return math.inf
    # asinh(x) = log(x + sqrt(1 + x^2)); avoids cancellation for small eps
    return math.asinh(eps / math.pi)
