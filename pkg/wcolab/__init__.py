__version__ = "0.1.0"

from wcolab.series import SpaceSpec, PowerSeries, RationalPower
from wcolab.series import evaluate_series, inner_product, kernel_series, kernel_norm, rational_power_series

from wcolab.symbols import Polynomial, ScaledKernel, RationalPowerSymbol, Product, Sum

from wcolab.moebius import LftMap, MapKind, classify, compose, invert, iterate, fixed_points
from wcolab.moebius import parabolic_from, hyperbolic_from, automorphism, adjoint_symbols, orbit

from wcolab.wco import WcoSpec, truncate_operator, apply, kernel_adjoint_residual

from wcolab.diagnostics import hyponormality_verdict, kernel_defect_scan, normaloid_verdict
from wcolab.diagnostics import spectral_radius_closed, spectral_radius_gelfand, spectral_radius_orbit, defect_report
from wcolab.diagnostics import boundary_weight_profile, normal_symbol_for, normal_identity_residual
from wcolab.diagnostics import zero_count, bounded_below_probe
