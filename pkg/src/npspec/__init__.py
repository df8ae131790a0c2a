"""Neumann-Poincare eigenvalues on analytic planar curves.

Nystrom discretization of the NP operator, its H*-symmetrization through the
single layer potential, Grauert-radius estimates for parametrizations, and
checks of the exponential decay of the eigenvalues.
"""

from .analysis import (
    DecayFit,
    KernelFourierTable,
    coeff_decay_rate,
    decay_fit,
    hminushalf_norm,
    kernel_fourier_coeffs,
    truncation_norms,
    weyl_courant_check,
)
from .curves import Curve, CurveSpec, builtin_specs, eval_complex, fourier_coeffs_of_q, make_curve
from .grauert import (
    GrauertEstimate,
    chebyshev_rate,
    closed_form_radius,
    modified_radius,
    strip_radius_upper,
    trigpoly_radius,
)
from .np_kernel import DiscreteOperator, kernel_analytic, kernel_matrix, kernel_value, nystrom_matrix
from .single_layer import InnerProductForm, hstar_form, plemelj_residual, single_layer_matrix
from .spectrum import Spectrum, np_spectrum, spectrum_agreement, symmetrized_spectrum

__version__ = "0.1.0"
