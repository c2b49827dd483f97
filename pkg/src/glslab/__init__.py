"""Trigonometric approximation laboratory for grand Lebesgue spaces."""

from .config import ExperimentConfig, load_config
from .orlicz_bridge import (
    luxemburg_norm,
    make_orlicz,
    orlicz_compare,
    orlicz_from_psi,
    psi_from_orlicz,
    thm41_diagnostic,
)
from .periodic_field import (
    CATALOG,
    PeriodicFunction,
    PeriodicGrid,
    TrigPolynomial,
    lp_norm,
    lp_norms,
    sample_catalog,
    translate,
)
from .psi_space import PGrid, PsiFunction, gls_norm, go_membership, make_psi
from .sobolev_gls import gw_norm, sobolev_norm, thm31_check
from .trig_approx import best_approx_gls, best_approx_lp, kernel_build, modulus, ta_diagnostic

__version__ = "0.1.0"

__all__ = [
    "CATALOG",
    "ExperimentConfig",
    "PGrid",
    "PeriodicFunction",
    "PeriodicGrid",
    "PsiFunction",
    "TrigPolynomial",
    "best_approx_gls",
    "best_approx_lp",
    "gls_norm",
    "go_membership",
    "gw_norm",
    "kernel_build",
    "load_config",
    "lp_norm",
    "lp_norms",
    "luxemburg_norm",
    "make_orlicz",
    "make_psi",
    "modulus",
    "orlicz_compare",
    "orlicz_from_psi",
    "psi_from_orlicz",
    "sample_catalog",
    "sobolev_norm",
    "ta_diagnostic",
    "thm31_check",
    "translate",
]
