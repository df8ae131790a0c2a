"""Single layer potential, the H* inner product, and the Plemelj check.

The logarithmic singularity is split as

    ln|q(t) - q(s)| = 1/2 ln(4 sin^2((t-s)/2)) + 1/2 ln(|q(t)-q(s)|^2 / (4 sin^2((t-s)/2)))

with the first part integrated by the periodic log-quadrature weights and the
smooth remainder by the trapezoid rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import Curve
from .errors import DimensionMismatch, NotMeanZero
from .np_kernel import DiscreteOperator, _check_size, grid, nystrom_matrix

MEAN_ZERO_RTOL = 1e-8


def log_weights(N: int) -> np.ndarray:
    """Weights ``R[i, j]`` with ``sum_j R[i, j] f(t_j)`` approximating
    ``int ln(4 sin^2((t_i - s)/2)) f(s) ds`` for trigonometric ``f``."""
    n = N // 2
    t = grid(N)
    tau = t[:, None] - t[None, :]
    m = np.arange(1, n)
    # circulant: only the first row is needed
    row = -(2 * math.pi / n) * (np.cos(np.outer(tau[0], m)) @ (1.0 / m)) \
        - (math.pi / n**2) * np.cos(n * tau[0])
    idx = (np.arange(N)[None, :] - np.arange(N)[:, None]) % N
    return row[idx]


def _symmetric_log_matrix(curve: Curve, N: int) -> np.ndarray:
    t = grid(N)
    q, dq, _ = curve.eval_jet(t)
    diff = q[:, None] - q[None, :]
    np.fill_diagonal(diff, 1.0)
    sin2 = 4 * np.sin((t[:, None] - t[None, :]) / 2) ** 2
    np.fill_diagonal(sin2, 1.0)
    smooth = np.log(np.abs(diff) ** 2 / sin2)
    np.fill_diagonal(smooth, np.log(np.abs(dq) ** 2))
    return (0.5 * log_weights(N) + 0.5 * (2 * math.pi / N) * smooth) / (2 * math.pi)


def single_layer_matrix(curve: Curve, N: int) -> DiscreteOperator:
    """Nystrom matrix of ``S[phi](x) = 1/(2 pi) int ln|x - y| phi(y) dsigma(y)``
    acting on samples ``phi(q(t_j))``; the arclength factor is included."""
    _check_size(N)
    t = grid(N)
    speed = np.abs(curve.eval_jet(t)[1])
    L = _symmetric_log_matrix(curve, N)
    return DiscreteOperator(L * speed[None, :], t, np.full(N, 2 * math.pi / N),
                            "single_layer", curve.label, speed)


def weighted_single_layer(sl: DiscreteOperator) -> np.ndarray:
    """The symmetric single-layer matrix ``S_w`` with arclength factors
    stripped; it satisfies ``S_w M = M^T S_w`` for the NP matrix ``M``."""
    return sl.matrix / sl.speed[None, :]


@dataclass(frozen=True)
class InnerProductForm:
    """Discrete ``<phi, psi>_{H*} = -<phi, S psi>`` on density samples."""

    sl_matrix: DiscreteOperator
    weights: np.ndarray
    gram: np.ndarray

    @property
    def measure(self) -> np.ndarray:
        """Arclength quadrature weights ``w_i |q'(t_i)|``."""
        return self.weights * self.sl_matrix.speed


def hstar_form(curve: Curve, N: int) -> InnerProductForm:
    sl = single_layer_matrix(curve, N)
    meas = sl.weights * sl.speed
    gram = -meas[:, None] * sl.matrix
    gram = 0.5 * (gram + gram.T)
    return InnerProductForm(sl, sl.weights, gram)


def _check_mean_zero(form: InnerProductForm, f: np.ndarray) -> None:
    m = float(form.measure @ f)
    if abs(m) >= MEAN_ZERO_RTOL * max(np.linalg.norm(f), 1e-300):
        raise NotMeanZero(f"density is not mean-zero in arclength: sum w|q'|f = {m:.3g}")


def hstar_inner(form: InnerProductForm, f, g) -> float:
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != form.weights.shape or g.shape != form.weights.shape:
        raise DimensionMismatch(f"expected vectors of length {form.weights.size}")
    _check_mean_zero(form, f)
    _check_mean_zero(form, g)
    return float(f @ form.gram @ g)


def plemelj_residual(np_op: DiscreteOperator, sl: DiscreteOperator) -> float:
    """``||S M - M^T S||_F / (||S||_F ||M||_F)`` with ``S`` the symmetric
    weighted single layer and ``M`` the NP Nystrom matrix.

    The normalization uses the factor norms because ``S M`` itself vanishes
    on curves of unit capacity (the unit circle).
    """
    if np_op.kind != "np" or sl.kind != "single_layer":
        raise DimensionMismatch("expected an NP operator and a single-layer operator")
    if np_op.matrix.shape != sl.matrix.shape or np_op.curve_ref != sl.curve_ref:
        raise DimensionMismatch(
            f"operators differ: {np_op.curve_ref} N={np_op.n_nodes} vs {sl.curve_ref} N={sl.n_nodes}"
        )
    S = weighted_single_layer(sl)
    M = np_op.matrix
    scale = np.linalg.norm(S) * np.linalg.norm(M)
    return float(np.linalg.norm(S @ M - M.T @ S) / scale)


def plemelj_for(curve: Curve, N: int) -> float:
    return plemelj_residual(nystrom_matrix(curve, N), single_layer_matrix(curve, N))
