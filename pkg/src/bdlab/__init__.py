"""Numerical laboratory for the Baez-Duarte reformulation of RH.

The library computes every desk-scale object in that circle of ideas: the
distance d_N from the indicator of [1, inf) to the span of dilated
fractional parts in L^2((0, inf), dt/t^2), the Mobius-weighted
approximations nu_{N,eps}, the critical-line integrals I/J/K/L with their
residue oracle, V-typical ordinates of zeta zeros, and the deformed-contour
Perron evaluation of Mobius partial sums.
"""

from .special_functions import (EvaluationAccuracy, DEFAULT_ACCURACY,
                                EULER_GAMMA, LOG_2PI, zeta, zeta_derivative,
                                zeta_many, zeta_on_line, xi_completed,
                                rs_theta, zero_count_estimate)
from .arithmetic import (MobiusTable, VonMangoldtTable, SandwichReport,
                         mobius_table, von_mangoldt_table,
                         dirichlet_partial_sum, dirichlet_partial_sum_grid,
                         chebyshev_sandwich, chebyshev_constant,
                         save_mertens_prefix, load_mertens_prefix)
from .quadrature import QuadratureResult
from .hilbert import (GramSystem, DistanceResult, inner_e, inner_chi_e,
                      mellin_e, mellin_chi, gram_system, distance_dn,
                      nu, dn_sweep, write_dn_sweep_csv)
from .integrals import (beta_exponent, kappa_exponent, jkl_integrals,
                        JklResult, i_n_eps, quotient_monitor,
                        mean_value_monitor)
from .reports import MonitorRecord, MonitorReport
from .zeros import (ZeroTable, TypicalityReport, TypicalVResult,
                    load_zero_table, zero_count, criterion_i_sum,
                    is_v_typical, min_typical_v, gg_monitor)
from .contour import (Segment, ContourPath, build_contour, straight_path,
                      b_n_integral, perron_check, tail_identity_check,
                      mn_bound_monitors, contour_to_json)

__version__ = "1.0.0"

__all__ = [
    "EvaluationAccuracy", "DEFAULT_ACCURACY", "EULER_GAMMA", "LOG_2PI",
    "zeta", "zeta_derivative", "zeta_many", "zeta_on_line", "xi_completed",
    "rs_theta", "zero_count_estimate",
    "MobiusTable", "VonMangoldtTable", "SandwichReport", "mobius_table",
    "von_mangoldt_table", "dirichlet_partial_sum", "dirichlet_partial_sum_grid",
    "chebyshev_sandwich", "chebyshev_constant", "save_mertens_prefix",
    "load_mertens_prefix",
    "QuadratureResult",
    "GramSystem", "DistanceResult", "inner_e", "inner_chi_e", "mellin_e",
    "mellin_chi", "gram_system", "distance_dn", "nu", "dn_sweep",
    "write_dn_sweep_csv",
    "beta_exponent", "kappa_exponent", "jkl_integrals", "JklResult",
    "i_n_eps", "quotient_monitor", "mean_value_monitor",
    "MonitorRecord", "MonitorReport",
    "ZeroTable", "TypicalityReport", "TypicalVResult", "load_zero_table",
    "zero_count", "criterion_i_sum", "is_v_typical", "min_typical_v",
    "gg_monitor",
    "Segment", "ContourPath", "build_contour", "straight_path",
    "b_n_integral", "perron_check", "tail_identity_check",
    "mn_bound_monitors", "contour_to_json",
]
