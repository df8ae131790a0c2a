"""Analytic closed-curve parametrizations.

The plane is identified with the complex numbers. Every curve is a
2*pi-periodic map ``q`` with closed-form first and second derivatives and an
analytic continuation to a horizontal strip ``|Im t| < strip_halfwidth``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .errors import DegenerateCurve, DomainError, OutOfStrip

KINDS = ("circle", "ellipse", "limacon_naive", "limacon_optimal", "exp_curve", "fourier")

_STRIP_MARGIN = 1e-9


def _as_complex(value) -> complex:
    if isinstance(value, dict):
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    return complex(value)


@dataclass(frozen=True)
class CurveSpec:
    """Kind tag plus kind-dependent parameters.

    ``params`` keys: circle ``r``; ellipse ``a``, ``b``; limacon kinds ``A``;
    exp_curve ``A`` (complex); fourier ``coeffs`` as a tuple of ``(k, c_k)``.
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown curve kind {self.kind!r}; expected one of {KINDS}")
        p = self.params
        if self.kind == "circle":
            r = float(p.get("r", 1.0))
            if not (r > 0 and math.isfinite(r)):
                raise DomainError(f"circle requires r > 0, got r={r}")
        elif self.kind == "ellipse":
            a, b = float(p["a"]), float(p["b"])
            if not (a > b > 0):
                raise DomainError(f"ellipse requires a > b > 0, got a={a}, b={b}")
        elif self.kind in ("limacon_naive", "limacon_optimal"):
            A = float(p["A"])
            if not (0 < A < 0.5):
                raise DomainError(f"limacon requires 0 < A < 1/2, got A={A}")
        elif self.kind == "exp_curve":
            A = _as_complex(p["A"])
            if not (0 < abs(A) < math.pi):
                raise DomainError(f"exp curve requires 0 < |A| < pi, got |A|={abs(A)}")
        else:
            coeffs = tuple((int(k), complex(c)) for k, c in p["coeffs"])
            if not any(k != 0 and c != 0 for k, c in coeffs):
                raise DomainError("fourier curve needs at least one nonzero c_k with k != 0")
            object.__setattr__(self, "params", {"coeffs": coeffs})

    # constructors -----------------------------------------------------------

    @classmethod
    def circle(cls, r: float = 1.0) -> "CurveSpec":
        return cls("circle", {"r": r})

    @classmethod
    def ellipse(cls, a: float, b: float) -> "CurveSpec":
        return cls("ellipse", {"a": a, "b": b})

    @classmethod
    def limacon(cls, A: float, parametrization: str = "naive") -> "CurveSpec":
        if parametrization not in ("naive", "optimal"):
            raise DomainError(f"limacon parametrization must be naive|optimal, got {parametrization!r}")
        return cls(f"limacon_{parametrization}", {"A": A})

    @classmethod
    def exp_curve(cls, A: complex) -> "CurveSpec":
        return cls("exp_curve", {"A": complex(A)})

    @classmethod
    def fourier(cls, coeffs) -> "CurveSpec":
        return cls("fourier", {"coeffs": coeffs})

    # JSON -------------------------------------------------------------------

    @classmethod
    def from_json(cls, obj: dict) -> "CurveSpec":
        """Parse the curve-spec JSON object (complex numbers as ``{re, im}``)."""
        try:
            kind = obj["kind"]
            if kind == "circle":
                return cls.circle(float(obj.get("r", 1.0)))
            if kind == "ellipse":
                return cls.ellipse(float(obj["a"]), float(obj["b"]))
            if kind == "limacon":
                return cls.limacon(float(obj["A"]), obj.get("parametrization", "naive"))
            if kind in ("limacon_naive", "limacon_optimal"):
                return cls(kind, {"A": float(obj["A"])})
            if kind in ("exp", "exp_curve"):
                return cls.exp_curve(_as_complex(obj["A"]))
            if kind == "fourier":
                return cls.fourier(
                    [(int(c["k"]), complex(float(c.get("re", 0.0)), float(c.get("im", 0.0))))
                     for c in obj["coeffs"]]
                )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"malformed curve spec {obj!r}: {exc}") from exc
        raise DomainError(f"unknown curve kind {obj.get('kind')!r}")

    def to_json(self) -> dict:
        p = self.params
        if self.kind == "circle":
            return {"kind": "circle", "r": float(p.get("r", 1.0))}
        if self.kind == "ellipse":
            return {"kind": "ellipse", "a": float(p["a"]), "b": float(p["b"])}
        if self.kind.startswith("limacon"):
            return {"kind": "limacon", "A": float(p["A"]),
                    "parametrization": self.kind.split("_", 1)[1]}
        if self.kind == "exp_curve":
            A = _as_complex(p["A"])
            return {"kind": "exp", "A": {"re": A.real, "im": A.imag}}
        return {"kind": "fourier",
                "coeffs": [{"k": k, "re": c.real, "im": c.imag} for k, c in p["coeffs"]]}

    @property
    def label(self) -> str:
        p = self.params
        if self.kind == "circle":
            return f"circle(r={p.get('r', 1.0):g})"
        if self.kind == "ellipse":
            return f"ellipse(a={p['a']:g},b={p['b']:g})"
        if self.kind.startswith("limacon"):
            return f"{self.kind}(A={p['A']:g})"
        if self.kind == "exp_curve":
            A = _as_complex(p["A"])
            return f"exp(A={A.real:g}{A.imag:+g}i)"
        return f"fourier({len(p['coeffs'])} terms)"


Jet = Callable[[np.ndarray], tuple]


@dataclass(frozen=True)
class Curve:
    """An immutable, counterclockwise-oriented analytic parametrization.

    ``flipped`` records whether the defining formula was reparametrized by
    ``t -> -t`` to enforce counterclockwise orientation.
    """

    spec: CurveSpec
    _jet: Jet = field(repr=False)
    _qz: Callable = field(repr=False)
    strip_halfwidth: float
    flipped: bool = False
    orientation: str = "ccw"

    @property
    def label(self) -> str:
        return self.spec.label

    def eval_jet(self, t):
        """Return ``(q, q', q'')`` at real ``t`` (scalar or array)."""
        t = np.asarray(t, dtype=float)
        if self.flipped:
            q, dq, ddq = self._jet(-t)
            return q, -dq, ddq
        return self._jet(t)

    def q(self, t):
        return self.eval_jet(t)[0]

    def complex_eval(self, t, strict: bool = True):
        """Analytic continuation of ``q``; see :func:`eval_complex`."""
        t = np.asarray(t, dtype=complex)
        if strict and np.any(np.abs(t.imag) >= self.strip_halfwidth):
            raise OutOfStrip(
                f"|Im t| = {np.max(np.abs(t.imag)):.6g} outside strip of half-width "
                f"{self.strip_halfwidth:.6g} for {self.label}"
            )
        val = self._qz(-t if self.flipped else t)
        return val[()] if val.ndim == 0 else val

    def signed_area(self, n: int = 1024) -> float:
        t = -np.pi + 2 * np.pi * np.arange(n) / n
        q, dq, _ = self.eval_jet(t)
        return 0.5 * float(np.sum(np.imag(np.conj(q) * dq))) * 2 * np.pi / n


def eval_complex(curve: Curve, t: complex, strict: bool = True) -> complex:
    """Evaluate the analytic continuation ``q(t)`` for complex ``t``.

    Raises :class:`OutOfStrip` when ``|Im t| >= curve.strip_halfwidth``.
    ``strict=False`` is for meromorphic kinds whose formula stays valid past
    the strip away from isolated poles.
    """
    return complex(curve.complex_eval(t, strict=strict))


# per-kind formulas -----------------------------------------------------------


def _circle(r):
    def jet(t):
        z = np.exp(1j * t)
        return r * z, 1j * r * z, -r * z

    return jet, lambda t: r * np.exp(1j * t), math.inf


def _ellipse(a, b):
    def jet(t):
        c, s = np.cos(t), np.sin(t)
        return a * c + 1j * b * s, -a * s + 1j * b * c, -a * c - 1j * b * s

    cp, cm = (a + b) / 2, (a - b) / 2
    return jet, lambda t: cp * np.exp(1j * t) + cm * np.exp(-1j * t), math.inf


def _limacon_naive(A):
    def jet(t):
        z = np.exp(1j * t)
        return z + A * z**2, 1j * z + 2j * A * z**2, -z - 4 * A * z**2

    return jet, lambda t: np.exp(1j * t) + A * np.exp(2j * t), math.inf


def _limacon_optimal(A):
    # Focal ellipse g followed by the Moebius map w -> 1/w - e/2, then the
    # rigid motion w -> -(w + e) so the trace coincides with z + A z^2.
    e = 2 * A
    a = 1 / (1 - e * e)
    b = a * math.sqrt(1 - e * e)
    cp, cm, c0 = (a + b) / 2, (a - b) / 2, a * e

    def jet(t):
        z = np.exp(1j * t)
        g = cp * z + cm / z + c0
        dg = 1j * (cp * z - cm / z)
        ddg = -(cp * z + cm / z)
        return -e / 2 - 1 / g, dg / g**2, ddg / g**2 - 2 * dg**2 / g**3

    def qz(t):
        z = np.exp(1j * t)
        return -e / 2 - 1 / (cp * z + cm / z + c0)

    r = math.sqrt(1 - 4 * A * A)
    # double pole of the map where g vanishes, at |z| = 2A/(1+r)
    pole = math.log((1 + r) / (2 * A))
    return jet, qz, pole - _STRIP_MARGIN


def _exp_curve(A):
    def jet(t):
        z = np.exp(1j * t)
        q = np.exp(A * z)
        u = 1j * A * z
        return q, q * u, q * (u * u - A * z)

    return jet, lambda t: np.exp(A * np.exp(1j * t)), math.inf


def _fourier(coeffs):
    ks = np.array([k for k, _ in coeffs], dtype=float)
    cs = np.array([c for _, c in coeffs], dtype=complex)

    def jet(t):
        t = np.asarray(t, dtype=float)
        E = np.exp(1j * np.multiply.outer(t, ks))
        return E @ cs, E @ (1j * ks * cs), E @ (-(ks**2) * cs)

    def qz(t):
        t = np.asarray(t, dtype=complex)
        return np.exp(1j * np.multiply.outer(t, ks)) @ cs

    return jet, qz


def make_curve(spec: CurveSpec) -> Curve:
    """Build a counterclockwise :class:`Curve` from ``spec``.

    Raises :class:`DegenerateCurve` when ``q'`` vanishes on a 1024-point grid.
    """
    p = spec.params
    kind = spec.kind
    if kind == "circle":
        jet, qz, strip = _circle(float(p.get("r", 1.0)))
    elif kind == "ellipse":
        jet, qz, strip = _ellipse(float(p["a"]), float(p["b"]))
    elif kind == "limacon_naive":
        jet, qz, strip = _limacon_naive(float(p["A"]))
    elif kind == "limacon_optimal":
        jet, qz, strip = _limacon_optimal(float(p["A"]))
    elif kind == "exp_curve":
        jet, qz, strip = _exp_curve(_as_complex(p["A"]))
    else:
        jet, qz = _fourier(p["coeffs"])
        strip = _fourier_strip(p["coeffs"])

    curve = Curve(spec, jet, qz, strip)
    t = -np.pi + 2 * np.pi * np.arange(1024) / 1024
    q, dq, _ = curve.eval_jet(t)
    speed = np.abs(dq)
    scale = max(float(np.max(np.abs(q - q.mean()))), 1e-300)
    if not np.all(np.isfinite(speed)) or speed.min() <= 1e-10 * scale:
        raise DegenerateCurve(
            f"q' vanishes (min |q'| = {speed.min():.3g}) on the sample grid for {spec.label}"
        )
    area = curve.signed_area()
    if area < 0:
        curve = Curve(spec, jet, qz, strip, flipped=True)
    return curve


def _fourier_strip(coeffs) -> float:
    from .errors import InsufficientDecay
    from .grauert import strip_radius_upper

    try:
        est = strip_radius_upper(coeffs)
    except InsufficientDecay:
        # a finite trigonometric polynomial is entire
        return math.inf
    return 0.9 * est.value


def fourier_coeffs_of_q(curve: Curve, M: int) -> list[tuple[int, complex]]:
    """FFT coefficients of ``q`` from ``M`` uniform samples of ``[-pi, pi)``.

    Returns ``(k, c_k)`` for ``-M/2 <= k < M/2`` so that
    ``q(t) ~ sum_k c_k exp(i k t)``.
    """
    if M < 16 or M & (M - 1):
        raise DomainError(f"M must be a power of two >= 16, got {M}")
    t = -np.pi + 2 * np.pi * np.arange(M) / M
    c = np.fft.fft(curve.q(t)) / M
    ks = np.fft.fftfreq(M, 1.0 / M).astype(int)
    # samples start at -pi, so shift phases by exp(i k pi)
    c = c * np.where(ks % 2 == 0, 1.0, -1.0)
    order = np.argsort(ks)
    return [(int(ks[i]), complex(c[i])) for i in order]


def builtin_specs() -> dict[str, CurveSpec]:
    """The example curves used throughout the verification suite."""
    return {
        "circle": CurveSpec.circle(1.0),
        "ellipse": CurveSpec.ellipse(2.0, 1.0),
        "limacon_naive": CurveSpec.limacon(0.4, "naive"),
        "limacon_optimal": CurveSpec.limacon(0.4, "optimal"),
        "exp": CurveSpec.exp_curve(1j),
    }


def spec_from_any(value: Any) -> CurveSpec:
    if isinstance(value, CurveSpec):
        return value
    return CurveSpec.from_json(value)


__all__ = [
    "CurveSpec",
    "Curve",
    "make_curve",
    "eval_complex",
    "fourier_coeffs_of_q",
    "builtin_specs",
]
