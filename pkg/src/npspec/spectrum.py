"""NP eigenvalues on the mean-zero space.

The plain path solves the dense nonsymmetric eigenproblem of the Nystrom
matrix and removes the trivial eigenvalue 1/2. The symmetrized path solves a
symmetric-definite generalized problem in the discrete H* inner product and is
used as a cross-check.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import IndefiniteForm, NonRealSpectrum, TrivialEigNotFound
from .np_kernel import DiscreteOperator
from .single_layer import InnerProductForm

log = logging.getLogger(__name__)

NOISE_FLOOR = 1e-13


@dataclass
class Spectrum:
    """Eigenvalues sorted by descending magnitude; ``lambdas[0]`` is lambda_1."""

    lambdas: np.ndarray
    dropped_half: float | None
    imag_residual_max: float
    pairing: list = field(default_factory=list)
    curve_ref: str = ""
    N: int = 0
    method: str = "plain"

    def magnitude(self, index: int) -> float:
        """``|lambda_index|`` with 1-based indexing as in the enumeration."""
        return float(abs(self.lambdas[index - 1]))

    def even_magnitudes(self) -> np.ndarray:
        """``|lambda_2n|`` for n = 1, 2, ..."""
        return np.abs(self.lambdas[1::2])

    def to_json(self) -> dict:
        return {
            "curve": self.curve_ref,
            "N": self.N,
            "lambdas": [float(x) for x in self.lambdas],
            "dropped_half": self.dropped_half,
            "imag_residual_max": self.imag_residual_max,
        }


def _pair_tol(lam: float) -> float:
    return max(1e-10, 1e-6 * abs(lam))


def pair_eigenvalues(lambdas: np.ndarray, floor: float = NOISE_FLOOR) -> list[tuple[int, int, float]]:
    """Greedy magnitude pairing of +/- partners.

    Walks the magnitude-sorted list and pairs each unpaired entry with the
    first later unpaired entry whose sum vanishes to tolerance. Entries below
    ``floor`` are skipped. Indices are 1-based.
    """
    order = np.argsort(-np.abs(lambdas), kind="stable")
    lam = np.asarray(lambdas)[order]
    used = np.zeros(lam.size, dtype=bool)
    pairs = []
    for i in range(lam.size):
        if used[i] or abs(lam[i]) < floor:
            continue
        tol = _pair_tol(lam[i])
        for j in range(i + 1, lam.size):
            if abs(lam[j]) < abs(lam[i]) - 2 * tol:
                break
            if not used[j] and abs(lam[i] + lam[j]) <= tol:
                used[i] = used[j] = True
                pairs.append((int(order[i]) + 1, int(order[j]) + 1, float(abs(lam[i] + lam[j]))))
                break
    return pairs


def _sorted_spectrum(values: np.ndarray) -> np.ndarray:
    vals = np.asarray(values, dtype=float)
    vals = vals[np.argsort(-np.abs(vals), kind="stable")]
    # inside a +/- pair put the positive member first
    i = 0
    while i + 1 < vals.size:
        a, b = vals[i], vals[i + 1]
        if abs(a + b) <= _pair_tol(a) and abs(a) >= NOISE_FLOOR:
            if a < b:
                vals[i], vals[i + 1] = b, a
            i += 2
        else:
            i += 1
    return vals


def np_spectrum(op: DiscreteOperator) -> Spectrum:
    """Eigenvalues of the NP matrix with the trivial eigenvalue 1/2 removed."""
    if op.kind != "np":
        raise ValueError(f"np_spectrum needs an NP operator, got kind={op.kind!r}")
    ev = sla.eigvals(op.matrix, check_finite=True)
    imag_max = float(np.max(np.abs(ev.imag)))
    if imag_max > 1e-6:
        raise NonRealSpectrum(f"max |Im lambda| = {imag_max:.3g} for {op.curve_ref} at N={op.n_nodes}")
    re = ev.real
    k = int(np.argmin(np.abs(re - 0.5)))
    dist = float(abs(re[k] - 0.5))
    if dist > 1e-6:
        raise TrivialEigNotFound(
            f"no eigenvalue within 1e-6 of 1/2 (closest at distance {dist:.3g}); "
            f"increase N for {op.curve_ref}"
        )
    if dist > 1e-8:
        log.warning("trivial eigenvalue is %.3g away from 1/2 for %s at N=%d", dist, op.curve_ref, op.n_nodes)
    lam = _sorted_spectrum(np.delete(re, k))
    return Spectrum(lam, float(re[k]), imag_max, pair_eigenvalues(lam),
                    op.curve_ref, op.n_nodes, "plain")


def symmetrized_spectrum(np_op: DiscreteOperator, form: InnerProductForm) -> Spectrum:
    """Eigenvalues from ``A x = lambda B x`` on the mean-zero subspace.

    ``B`` is the H* Gram matrix and ``A = B T`` where ``T`` is the NP matrix
    moved to density samples, ``T = D^{-1} M D`` with ``D = diag|q'|``.
    """
    N = np_op.n_nodes
    if form.gram.shape != (N, N):
        raise ValueError("NP operator and inner-product form have different sizes")
    d = np_op.speed
    T = np_op.matrix * (d[None, :] / d[:, None])
    B = form.gram
    A = B @ T
    A = 0.5 * (A + A.T)
    Q = sla.null_space(form.measure[None, :])
    Br = Q.T @ B @ Q
    Ar = Q.T @ A @ Q
    try:
        ev = sla.eigh(Ar, 0.5 * (Br + Br.T), eigvals_only=True)
    except np.linalg.LinAlgError as exc:
        raise IndefiniteForm(f"H* Gram matrix is not positive definite on mean-zero densities: {exc}") from exc
    lam = _sorted_spectrum(ev)
    return Spectrum(lam, None, 0.0, pair_eigenvalues(lam), np_op.curve_ref, N, "symmetrized")


def spectrum_agreement(s1: Spectrum, s2: Spectrum, floor: float) -> float:
    """Largest deviation between matched eigenvalues with ``|lambda| > floor``.

    Each eigenvalue of ``s1`` above the floor is matched to the nearest unused
    eigenvalue of ``s2``. The deviation is absolute, which is relative to the
    unit scale of the NP spectrum (it lies in (-1/2, 1/2)).
    """
    a = s1.lambdas[np.abs(s1.lambdas) > floor]
    b = np.array(s2.lambdas, dtype=float)
    used = np.zeros(b.size, dtype=bool)
    worst = 0.0
    for x in a:
        dist = np.where(used, math.inf, np.abs(b - x))
        j = int(np.argmin(dist))
        if not math.isfinite(dist[j]):
            return math.inf
        used[j] = True
        worst = max(worst, float(dist[j]))
    return worst
