"""Inequality checks, log-concavity scans and counterexample search."""
from logbm.verify.checks import (
    check_dual_log_bm,
    check_dual_quermass,
    check_dual_quermass_dim,
    check_gaussian_dilates,
    check_isotropy_derivative,
    check_log_bm,
    check_moment_gap,
    check_section_containment,
    check_simplex_lower_bound,
    check_triangle_logbm,
    check_variance_bound,
)
from logbm.verify.hunt import HuntResult, hunt
from logbm.verify.reports import CheckReport, ScanReport
from logbm.verify.scans import check_strip_b, scan_b, scan_dual_b, scan_dual_family

__all__ = [
    "CheckReport", "HuntResult", "ScanReport", "check_dual_log_bm", "check_dual_quermass",
    "check_dual_quermass_dim", "check_gaussian_dilates", "check_isotropy_derivative",
    "check_log_bm", "check_moment_gap", "check_section_containment",
    "check_simplex_lower_bound", "check_strip_b", "check_triangle_logbm",
    "check_variance_bound", "hunt", "scan_b", "scan_dual_b", "scan_dual_family",
]
