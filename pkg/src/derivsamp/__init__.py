"""Derivative sampling and reconstruction in shift-invariant spline spaces.

Configuration kappa = (Q_m, a, rho) fixes the spline order, the sample-set
shift, and the number of derivative channels.  The package certifies when
derivative sampling on (a + rho Z)/W determines every element of the spline
space, builds the reconstruction kernels, applies the sampling operator to
arbitrary signals, and measures approximation rates against averaged moduli
of smoothness.
"""

from .bspline import (
    eval_q,
    eval_q_deriv,
    fourier_q,
    fourier_q_deriv,
    krein_favard,
    riesz_lower_bound,
)
from .kernel import (
    KernelTable,
    inv_symbol_coeffs,
    moment_check_fourier,
    moment_check_time,
    reproducing_order,
    theta_eval,
    theta_support,
)
from .laurent import CircleCertificate, LaurentPoly, laurent_det, roots_unit_circle
from .sampler import (
    BoundsReport,
    SampleGrid,
    SplineElement,
    apply_sw,
    discrete_norm,
    frame_bounds,
    grid_for_window,
    required_l_range,
    sw_boundedness_probe,
    sw_spline_coeffs,
    take_samples,
    verify_sampling_inequality,
)
from .signals import SignalSpec, catalog, channel, get_signal, random_spline
from .smoothness import (
    TauEstimate,
    finite_diff,
    fit_order,
    local_modulus,
    tau_modulus,
    tau_scaling_check,
)
from .symbol import (
    CisReport,
    Kappa,
    SymbolMatrix,
    build_symbol,
    check_cis,
    det_symbol,
    pascal_det_check,
    predicted_cis_shift,
    scan_assumption1,
    table_polynomial,
)

__version__ = "1.0.0"

__all__ = [
    "eval_q",
    "eval_q_deriv",
    "fourier_q",
    "fourier_q_deriv",
    "krein_favard",
    "riesz_lower_bound",
    "LaurentPoly",
    "CircleCertificate",
    "laurent_det",
    "roots_unit_circle",
    "Kappa",
    "SymbolMatrix",
    "CisReport",
    "build_symbol",
    "det_symbol",
    "check_cis",
    "table_polynomial",
    "predicted_cis_shift",
    "scan_assumption1",
    "pascal_det_check",
    "KernelTable",
    "inv_symbol_coeffs",
    "theta_eval",
    "theta_support",
    "reproducing_order",
    "moment_check_time",
    "moment_check_fourier",
    "SplineElement",
    "SampleGrid",
    "BoundsReport",
    "required_l_range",
    "grid_for_window",
    "take_samples",
    "sw_spline_coeffs",
    "apply_sw",
    "discrete_norm",
    "frame_bounds",
    "verify_sampling_inequality",
    "sw_boundedness_probe",
    "SignalSpec",
    "catalog",
    "channel",
    "get_signal",
    "random_spline",
    "TauEstimate",
    "finite_diff",
    "local_modulus",
    "tau_modulus",
    "fit_order",
    "tau_scaling_check",
]
