"""Sobolev and Sobolev grand Lebesgue norms, θ_n norms, and the smoothness bound.

For ``r >= 1`` the Sobolev norm is ``(|f|_p^p + |f^(r)|_p^p)^(1/p)`` with the
spectral derivative; for ``r = 0`` it is the plain ``|f|_p``. The Sobolev
grand Lebesgue norm takes the supremum of ``||f||_{W^r_p} / ψ(p)`` over the
exponent grid.

The θ_n family measures the Jackson residual ``Δ_n f = f - J_n∗f`` by

    ||g||_{θ_n} = sup_{s1 < q < s2} |g|_q n^(1/q),

and :func:`thm31_check` compares it with ``n^{-r} ||f||_{GW} / φ(1/n)`` where
``φ`` is the fundamental function of ``G(ψ)`` at a set of measure ``1/n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_int, check_real
from .periodic_field import TWO_PI, PeriodicFunction, convolve, derivative, lp_norms
from .psi_space import GlsNormReport, PGrid, PsiFunction, fundamental_function, report_from_profile
from .trig_approx import kernel_build

__all__ = [
    "MAX_ORDER",
    "SobolevParams",
    "ThetaFamily",
    "sobolev_norm",
    "sobolev_norms",
    "gw_norm",
    "theta_norm",
    "jackson_residual",
    "Thm31Report",
    "thm31_check",
    "IntermediateReport",
    "intermediate_check",
]

MAX_ORDER = 8


@dataclass(frozen=True)
class SobolevParams:
    r: int
    p: float

    def __post_init__(self):
        object.__setattr__(self, "r", check_int(self.r, "r", minimum=0, maximum=MAX_ORDER))
        object.__setattr__(self, "p", check_real(self.p, "p", lower=1.0))


def sobolev_norms(f: PeriodicFunction, r: int, ps) -> np.ndarray:
    """``||f||_{W^r_p}`` for every ``p`` in ``ps``."""
    r = check_int(r, "r", minimum=0, maximum=MAX_ORDER)
    ps = np.atleast_1d(np.asarray(ps, dtype=float))
    base = lp_norms(f, ps)
    if r == 0:
        return base
    deriv = lp_norms(derivative(f, r), ps)
    top = np.maximum(base, deriv)
    safe = np.where(top > 0, top, 1.0)
    with np.errstate(divide="ignore"):
        combined = safe * np.exp(np.logaddexp(ps * np.log(base / safe), ps * np.log(deriv / safe)) / ps)
    return np.where(top > 0, combined, 0.0)


def sobolev_norm(f: PeriodicFunction, r: int, p: float) -> float:
    """Sobolev norm of order ``r`` (``0 <= r <= 8``) and exponent ``p``.

    Examples
    --------
    >>> from glslab.periodic_field import sample_catalog
    >>> round(sobolev_norm(sample_catalog("cosk"), 1, 2.0), 12)
    1.0
    """
    params = SobolevParams(r, p)
    return float(sobolev_norms(f, params.r, [params.p])[0])


def gw_norm(f: PeriodicFunction, r: int, psi: PsiFunction, grid: PGrid | None = None) -> GlsNormReport:
    """Sobolev grand Lebesgue norm ``max_p ||f||_{W^r_p} / ψ(p)``."""
    grid = PGrid.for_psi(psi) if grid is None else grid
    if grid.b != psi.b:
        raise ValueError("p-grid does not match the support of psi")
    ratios = sobolev_norms(f, r, grid.points) * np.exp(-psi.log(grid.points))
    return report_from_profile(grid.points, ratios, grid, f.p_reliable, psi.label)


@dataclass(frozen=True)
class ThetaFamily:
    """Weights ``θ_n(q) = n^{-1/q}`` on ``q`` in ``(s1, s2)``.

    ``s2 = inf`` is truncated at ``s_max``. The q-grid has ``count`` log-spaced
    points in ``[s1 (1 + 1e-3), min(s2, s_max)]``.
    """

    n: int
    s1: float
    s2: float = math.inf
    s_max: float = 64.0
    count: int = 32

    def __post_init__(self):
        object.__setattr__(self, "n", check_int(self.n, "n", minimum=1))
        s1 = check_real(self.s1, "s1", lower=1.0, lower_open=True)
        s2 = check_real(self.s2, "s2", lower=s1, lower_open=True, allow_inf=True)
        s_max = check_real(self.s_max, "s_max", lower=s1 * (1 + 1e-3), lower_open=True)
        object.__setattr__(self, "s1", s1)
        object.__setattr__(self, "s2", s2)
        object.__setattr__(self, "s_max", s_max)
        object.__setattr__(self, "count", check_int(self.count, "count", minimum=2))

    @property
    def upper(self) -> float:
        return min(self.s2, self.s_max)

    @property
    def truncated(self) -> bool:
        return self.s2 > self.s_max

    def qgrid(self) -> np.ndarray:
        return np.geomspace(self.s1 * (1 + 1e-3), self.upper, self.count)

    def weights(self, q) -> np.ndarray:
        return self.n ** (-1.0 / np.asarray(q, dtype=float))

    def with_n(self, n: int) -> "ThetaFamily":
        return ThetaFamily(n, self.s1, self.s2, self.s_max, self.count)


def theta_norm(g: PeriodicFunction, fam: ThetaFamily, qgrid=None) -> float:
    """``max_q |g|_q n^(1/q)`` over the family's q-grid (or ``qgrid``)."""
    q = fam.qgrid() if qgrid is None else np.asarray(qgrid, dtype=float)
    if np.any(q <= fam.s1) or np.any(q > fam.upper):
        raise ValueError("q-grid must lie inside (s1, min(s2, s_max)]")
    return float(np.max(lp_norms(g, q) * fam.n ** (1.0 / q)))


def jackson_residual(f: PeriodicFunction, n: int) -> PeriodicFunction:
    """``Δ_n f = f - J_n∗f``."""
    return f - convolve(f, kernel_build("jackson", n))


@dataclass(frozen=True)
class Thm31Report:
    f_name: str
    r: int
    n: int
    s1: float
    s2: float
    lhs: float
    rhs_core: float
    empirical_c3: float
    gw: float
    phi: float
    regime_relaxed: bool
    degenerate: bool

    HEADER = ("f", "r", "n", "s1", "s2", "lhs", "rhs_core", "empirical_C3")

    def to_row(self) -> tuple:
        return (self.f_name, self.r, self.n, self.s1, self.s2, self.lhs, self.rhs_core, self.empirical_c3)


def thm31_check(
    f: PeriodicFunction,
    r: int,
    psi: PsiFunction,
    n: int,
    fam: ThetaFamily | None = None,
    grid: PGrid | None = None,
    s1: float = 4.0,
) -> Thm31Report:
    """Compare ``||Δ_n f||_{θ_n}`` with ``n^{-r} ||f||_{GW^r} / φ(1/n)``.

    Parameters
    ----------
    f : PeriodicFunction
        Should have ``r`` derivatives; band-limited inputs are safest.
    r : int
    psi : PsiFunction
    n : int
        Even degree of the Jackson residual.
    fam : ThetaFamily, optional
        Defaults to ``ThetaFamily(n, s1)``; its ``n`` must equal ``n``.
    grid : PGrid, optional
    s1 : float
        Lower end of the q-range when ``fam`` is omitted.

    Notes
    -----
    The exponent ranges should satisfy ``p < b < s1``. For ``b = inf`` no
    finite ``s1`` does, so the report sets ``regime_relaxed`` and keeps the
    computation. A vanishing right side sets ``degenerate`` and an infinite
    (or zero, when the left side also vanishes) ratio.
    """
    n = check_int(n, "n", minimum=2)
    if n % 2:
        raise ValueError(f"n must be even, got {n}")
    fam = ThetaFamily(n, s1) if fam is None else fam
    if fam.n != n:
        raise ValueError("theta family degree does not match n")
    if math.isfinite(psi.b) and fam.s1 <= psi.b:
        raise ValueError(f"s1={fam.s1} must exceed the support endpoint b={psi.b}")
    lhs = theta_norm(jackson_residual(f, n), fam)
    gw = gw_norm(f, r, psi, grid).value
    phi = fundamental_function(psi, TWO_PI / n, grid)
    rhs = n ** (-r) * gw / phi
    degenerate = rhs <= 1e-300
    if degenerate:
        ratio = 0.0 if lhs <= 1e-12 else math.inf
    else:
        ratio = lhs / rhs
    return Thm31Report(f.name, r, n, fam.s1, fam.s2, lhs, rhs, ratio, gw, phi, math.isinf(psi.b), degenerate)


@dataclass(frozen=True)
class IntermediateReport:
    f_name: str
    r: int
    n: int
    p: float
    q: float
    lhs: float
    rhs: float
    ratio: float


def intermediate_check(f: PeriodicFunction, r: int, n: int, p: float = 2.0, q: float = 8.0) -> IntermediateReport:
    """Both sides of ``|Δ_n f|_q <= C n^{-r} n^{1/p - 1/q} ||f||_{W^r_p}`` for ``p < q``."""
    n = check_int(n, "n", minimum=1)
    p = check_real(p, "p", lower=1.0)
    q = check_real(q, "q", lower=p, lower_open=True, allow_inf=True)
    lhs = float(lp_norms(jackson_residual(f, n), [q])[0])
    rhs = n ** (-r) * n ** (1.0 / p - 1.0 / q) * sobolev_norm(f, r, p)
    ratio = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf)
    return IntermediateReport(f.name, r, n, p, q, lhs, rhs, ratio)
