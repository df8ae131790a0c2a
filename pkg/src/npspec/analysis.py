"""Quantitative checks of the decay mechanism.

* Fourier coefficients ``a_k(t)`` of the kernel in ``s`` and their decay rate.
* The discrete H^{-1/2} norm ``sum_{k != 0} |f_k|^2 / |k|``.
* Norms of ``K - S_n`` where ``S_n`` keeps the modes ``|k| <= n - 1``, and the
  Weyl-Courant comparison against ``|lambda_2n|``.
* Exponential fits of ``|lambda_2n|`` against ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curves import Curve
from .errors import InsufficientRange, NotMeanZero, TooFewPairs
from .np_kernel import grid, kernel_matrix
from .spectrum import Spectrum

RESOLVED_FLOOR = 1e-13
FIT_CEILING = 0.4


def _phase(N: int) -> tuple[np.ndarray, np.ndarray]:
    # nodes start at -pi, so DFT output picks up exp(i k pi) = (-1)^k
    ks = np.fft.fftfreq(N, 1.0 / N).astype(int)
    return ks, np.where(ks % 2 == 0, 1.0, -1.0)


@dataclass(frozen=True)
class KernelFourierTable:
    """``a[i, j]`` is ``a_k(t_i)`` for ``k = ks[j]``, ``ks = -N/2 .. N/2 - 1``."""

    N: int
    a: np.ndarray
    ks: np.ndarray

    @classmethod
    def from_samples(cls, K: np.ndarray) -> "KernelFourierTable":
        N = K.shape[0]
        ks, sign = _phase(N)
        a = np.fft.fft(K, axis=1) / N * sign[None, :]
        order = np.argsort(ks)
        return cls(N, a[:, order], ks[order])

    def column(self, k: int) -> np.ndarray:
        return self.a[:, int(k) + self.N // 2]

    def max_abs(self) -> tuple[np.ndarray, np.ndarray]:
        """``(k, max_i max(|a_k(t_i)|, |a_-k(t_i)|))`` for ``k = 0 .. N/2 - 1``."""
        half = self.N // 2
        absa = np.abs(self.a).max(axis=0)
        ks = np.arange(half)
        pos = absa[half + ks]
        neg = absa[half - ks]
        return ks, np.maximum(pos, neg)

    def reconstruct(self, i: int, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return np.exp(1j * np.multiply.outer(s, self.ks)) @ self.a[i]


def kernel_fourier_coeffs(curve: Curve, N: int) -> KernelFourierTable:
    """FFT in ``s`` of ``K(t_i, s)`` for every grid node ``t_i``."""
    if N < 32 or N & (N - 1):
        raise ValueError(f"N must be a power of two >= 32, got {N}")
    t = grid(N)
    K, _ = kernel_matrix(curve, t, t, diag=True)
    return KernelFourierTable.from_samples(K)


def coeff_decay_rate(table: KernelFourierTable, lo: float = 1e-12, hi: float = 1e-2) -> float:
    """Fitted ``eps`` in ``max_t |a_k(t)| ~ C exp(-eps |k|)``."""
    ks, m = table.max_abs()
    ks, m = ks[1:], m[1:]
    if m.min() > RESOLVED_FLOOR:
        raise InsufficientRange(
            f"coefficients not resolved at N={table.N} (smallest {m.min():.3g} > {RESOLVED_FLOOR:g})"
        )
    # contiguous run of usable coefficients before the round-off floor
    below = np.nonzero(m < lo)[0]
    stop = below[0] if below.size else m.size
    sel = np.nonzero(m[:stop] <= hi)[0]
    if sel.size < 8:
        raise InsufficientRange(f"only {sel.size} coefficients inside [{lo:g}, {hi:g}]")
    slope, _ = np.polyfit(ks[sel], -np.log(m[sel]), 1)
    return float(slope)


def weighted_coeff_sup(table: KernelFourierTable, eps: float, floor: float = RESOLVED_FLOOR) -> float:
    """``sup_k max_t |a_k(t)| exp(eps |k|)`` over resolved ``k``."""
    ks, m = table.max_abs()
    keep = m > floor
    return float(np.max(m[keep] * np.exp(eps * ks[keep])))


def hminushalf_norm(f) -> float:
    """Discrete ``||f||_{-1/2} = sqrt(sum_{k != 0} |f_k|^2 / |k|)``."""
    f = np.asarray(f)
    N = f.size
    ks, sign = _phase(N)
    fh = np.fft.fft(f) / N * sign
    rms = math.sqrt(float(np.mean(np.abs(f) ** 2)))
    if abs(fh[0]) >= 1e-10 * max(rms, 1e-300):
        raise NotMeanZero(f"f_0 = {abs(fh[0]):.3g} is not zero")
    nz = ks != 0
    return math.sqrt(float(np.sum(np.abs(fh[nz]) ** 2 / np.abs(ks[nz]))))


def _weighted_bifourier(table: KernelFourierTable) -> tuple[np.ndarray, np.ndarray]:
    """Matrix of ``K`` from input modes ``l`` to output modes ``m`` in the
    H^{-1/2}-normalized Fourier basis, both restricted to ``0 < |k| < N/2``."""
    N = table.N
    ks_t, sign = _phase(N)
    # ahat[m, j]: Fourier coefficient in t of a_{ks[j]}(t)
    ahat = np.fft.fft(table.a, axis=0) / N * sign[:, None]
    modes = np.concatenate([np.arange(-N // 2 + 1, 0), np.arange(1, N // 2)])
    rows = modes % N
    # input mode l pairs with a_{-l}
    cols = -modes + N // 2
    T = 2 * math.pi * ahat[np.ix_(rows, cols)]
    w = np.abs(modes).astype(float)
    return T * np.sqrt(w)[None, :] / np.sqrt(w)[:, None], modes


def truncation_norms(table: KernelFourierTable, n_max: int) -> np.ndarray:
    """``||K - S_n||`` in the discrete H^{-1/2} norm for ``n = 1 .. n_max``."""
    if n_max > table.N // 4:
        raise ValueError(f"n_max must be <= N/4 = {table.N // 4}, got {n_max}")
    W, modes = _weighted_bifourier(table)
    out = np.empty(n_max)
    for n in range(1, n_max + 1):
        block = W[:, np.abs(modes) >= n]
        out[n - 1] = np.linalg.norm(block, 2)
    return out


@dataclass
class WeylCourantReport:
    rows: list = field(default_factory=list)
    passed: bool = True
    floor: float = 1e-12

    def to_rows(self) -> list[tuple]:
        return [(n, norm, lam) for n, norm, lam, _ in self.rows]


def weyl_courant_check(norms, spec: Spectrum, floor: float = 1e-12, slack: float = 1e-12) -> WeylCourantReport:
    """Check ``||K - S_n|| >= |lambda_2n|`` wherever ``|lambda_2n| > floor``."""
    lam2n = spec.even_magnitudes()
    report = WeylCourantReport(floor=floor)
    for n, norm in enumerate(norms, start=1):
        if n > lam2n.size:
            break
        lam = float(lam2n[n - 1])
        if lam <= floor:
            continue
        ok = bool(norm >= lam - slack)
        report.rows.append((n, float(norm), lam, ok))
        report.passed &= ok
    return report


@dataclass
class DecayFit:
    rate: float
    prefactor: float
    window: tuple[int, int]
    residual: float
    floor: float
    n: np.ndarray = field(repr=False, default=None)
    values: np.ndarray = field(repr=False, default=None)

    def to_json(self) -> dict:
        return {"rate": self.rate, "prefactor": self.prefactor, "window": list(self.window),
                "residual": self.residual, "floor": self.floor}


def fit_window(spec: Spectrum, floor: float) -> tuple[np.ndarray, np.ndarray]:
    """Contiguous ``n`` with ``floor < |lambda_2n| < 0.4``."""
    lam2n = spec.even_magnitudes()
    n_all = np.arange(1, lam2n.size + 1)
    below = np.nonzero(lam2n <= floor)[0]
    stop = below[0] if below.size else lam2n.size
    keep = lam2n[:stop] < FIT_CEILING
    return n_all[:stop][keep], lam2n[:stop][keep]


def decay_fit(spec: Spectrum, floor: float = 1e-12) -> DecayFit:
    """Least-squares fit ``ln|lambda_2n| = ln C - n * rate`` over the window."""
    n, vals = fit_window(spec, floor)
    if n.size < 5:
        raise TooFewPairs(f"only {n.size} eigenvalue pairs above floor {floor:g}")
    slope, intercept = np.polyfit(n, np.log(vals), 1)
    resid = float(np.max(np.abs(np.log(vals) - (intercept + slope * n))))
    return DecayFit(float(-slope), float(math.exp(intercept)), (int(n[0]), int(n[-1])),
                    resid, floor, n, vals)


def scaled_products(spec: Spectrum, eps: float, floor: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """``|lambda_2n| exp(n eps)`` over the fit window."""
    n, vals = fit_window(spec, floor)
    return n, vals * np.exp(n * eps)
