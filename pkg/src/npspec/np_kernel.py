"""Parametrized Neumann-Poincare kernel and its Nystrom discretization.

For a curve ``q`` the kernel is

    K(t, s) = 1/(4 pi i) [ q'(t)/(q(t) - q(s)) - conj(q'(t))/(conj(q(t)) - conj(q(s))) ]

which equals ``Im(q'(t)/(q(t) - q(s))) / (2 pi)`` and extends smoothly to
``s = t`` with value ``Im(conj(q'(t)) q''(t)) / (4 pi |q'(t)|^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import Curve, eval_complex
from .errors import CoincidentPoints, DomainError, OutOfStrip, PoleEncountered

_TWO_PI = 2 * math.pi


def grid(N: int) -> np.ndarray:
    """Uniform nodes ``t_i = -pi + 2 pi i / N``."""
    return -math.pi + _TWO_PI * np.arange(N) / N


def _check_size(N: int) -> None:
    if N < 16 or N % 2:
        raise DomainError(f"grid size N must be even and >= 16, got N={N}")


@dataclass(frozen=True)
class DiscreteOperator:
    """A dense Nystrom matrix on the uniform periodic grid.

    ``speed`` holds ``|q'(t_i)|``; it is kept so that the single-layer and NP
    matrices can be moved between density conventions without re-evaluating
    the curve.
    """

    matrix: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    curve_ref: str
    speed: np.ndarray
    imag_residual: float = 0.0

    @property
    def n_nodes(self) -> int:
        return self.matrix.shape[0]


def _wrap(d: float) -> float:
    return abs((d + math.pi) % _TWO_PI - math.pi)


def kernel_value(curve: Curve, t: float, s: float) -> float:
    """Off-diagonal kernel value ``K(t, s)`` for real ``t != s``."""
    if _wrap(t - s) < 1e-12:
        raise CoincidentPoints(f"t={t} and s={s} coincide mod 2pi; use kernel_diag")
    qt, dqt, _ = curve.eval_jet(t)
    qs = curve.eval_jet(s)[0]
    z = (dqt / (qt - qs) - np.conj(dqt) / (np.conj(qt) - np.conj(qs))) / (4j * math.pi)
    if abs(z.imag) > 1e-12 * max(1.0, abs(z.real)):
        raise ArithmeticError(f"kernel value not real: imaginary part {z.imag:.3g}")
    return float(z.real)


def kernel_diag(curve: Curve, t: float) -> float:
    """Removable-singularity limit ``K(t, t)``."""
    _, dq, ddq = curve.eval_jet(t)
    return float(np.imag(np.conj(dq) * ddq) / (4 * math.pi * abs(dq) ** 2))


def kernel_analytic(curve: Curve, t: float, s: complex) -> complex:
    """Continuation of ``K(t, .)`` to complex ``s`` inside the curve's strip.

    Uses ``q*(s) = conj(q(conj(s)))`` in place of ``conj(q(s))``. Raises
    :class:`PoleEncountered` when either denominator falls below 1e-13.
    """
    s = complex(s)
    if abs(s.imag) >= curve.strip_halfwidth:
        raise OutOfStrip(f"|Im s| = {abs(s.imag):.6g} >= strip half-width {curve.strip_halfwidth:.6g}")
    qt, dqt, _ = curve.eval_jet(t)
    qt, dqt = complex(qt), complex(dqt)
    qs = eval_complex(curve, s)
    qstar = eval_complex(curve, s.conjugate()).conjugate()
    d1 = qt - qs
    d2 = qt.conjugate() - qstar
    if abs(d1) < 1e-13 or abs(d2) < 1e-13:
        raise PoleEncountered(
            f"collision q(s) = q(t) at t={t}, s={s} (|denominators| = {abs(d1):.3g}, {abs(d2):.3g})"
        )
    return (dqt / d1 - dqt.conjugate() / d2) / (4j * math.pi)


def kernel_matrix(curve: Curve, t: np.ndarray, s: np.ndarray, diag: bool = False):
    """Vectorized ``K(t_i, s_j)`` and the largest imaginary residual.

    With ``diag=True`` the square grid's diagonal is filled with the limit
    value.
    """
    qt, dqt, ddqt = curve.eval_jet(t)
    qs = curve.eval_jet(s)[0]
    d = qt[:, None] - qs[None, :]
    if diag:
        np.fill_diagonal(d, 1.0)
    x = dqt[:, None] / d
    # literal bracket; the two terms are exact conjugates in floating point
    z = (x - np.conj(dqt)[:, None] / np.conj(d)) / (4j * math.pi)
    K = z.real.copy()
    if diag:
        np.fill_diagonal(K, np.imag(np.conj(dqt) * ddqt) / (4 * math.pi * np.abs(dqt) ** 2))
    return K, float(np.max(np.abs(z.imag))) if z.size else 0.0


def nystrom_matrix(curve: Curve, N: int) -> DiscreteOperator:
    """Trapezoidal Nystrom matrix ``M[i, j] = (2 pi / N) K(t_i, t_j)``."""
    _check_size(N)
    t = grid(N)
    K, resid = kernel_matrix(curve, t, t, diag=True)
    if not np.all(np.isfinite(K)):
        raise ArithmeticError(f"non-finite NP kernel entries for {curve.label} at N={N}")
    w = np.full(N, _TWO_PI / N)
    speed = np.abs(curve.eval_jet(t)[1])
    return DiscreteOperator(K * w[None, :], t, w, "np", curve.label, speed, resid)


def write_csv(op: DiscreteOperator, path) -> None:
    """Row-major CSV with 17 significant digits."""
    np.savetxt(path, op.matrix, delimiter=",", fmt="%.17g")
