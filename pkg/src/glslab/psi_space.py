"""Generating functions ψ, grand Lebesgue norms and the vanishing-tail subspace.

The grand Lebesgue norm of ``f`` with generator ``ψ`` on ``[1, b)`` is

    ||f||_ψ = sup_{1 <= p < b} |f|_p / ψ(p).

The supremum runs over a finite :class:`PGrid`; for ``b = inf`` the grid
stops at ``pmax`` and that truncation travels with every report. Members
whose ratio ``|f|_p / ψ(p)`` tends to zero as ``p -> b`` form the subspace
called G° here; limits cannot be computed from finitely many exponents, so
:func:`go_membership` reads the trend of the ratio over the last decile of
the grid instead.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from ._validation import check_int, check_real
from .periodic_field import TWO_PI, PeriodicFunction, lp_norms

__all__ = [
    "PsiFunction",
    "PGrid",
    "GlsNormReport",
    "GoVerdict",
    "Membership",
    "Ordering",
    "TrendThresholds",
    "make_psi",
    "gls_norm",
    "natural_psi",
    "fundamental_function",
    "fundamental_function_asymptotic",
    "compare_psi",
    "go_membership",
    "tail_trend",
    "report_from_profile",
]


class Membership(str, Enum):
    IN_GO = "in-Go"
    BOUNDARY = "boundary"
    NOT_IN_GO = "not-in-Go"


class Ordering(str, Enum):
    MUCH_LESS = "much-less"
    NOT_COMPARABLE = "not-comparable-or-equal"


@dataclass(frozen=True)
class TrendThresholds:
    """Thresholds used to turn a finite ratio profile into a limit verdict.

    Attributes
    ----------
    vanish_fraction : float
        Tail values below this fraction of the peak count as vanished.
    persist_fraction : float
        Tail values at or above this fraction of the peak count as persistent.
    decay_slope : float
        A fitted tail slope at or below this value (in log-ratio against
        ``log p``) counts as decay towards zero.
    flat_slope : float
        A fitted tail slope above this value counts as no decay.
    tail_fraction : float
        Share of grid points forming the tail (at least 3 points).
    much_less_drop : float
        Drop factor for the ordering verdicts.
    """

    vanish_fraction: float = 0.1
    persist_fraction: float = 0.5
    decay_slope: float = -0.1
    flat_slope: float = -0.05
    tail_fraction: float = 0.1
    much_less_drop: float = 1e-3


@dataclass(frozen=True, eq=False)
class PsiFunction:
    """A generating function ``ψ: [1, b) -> (0, inf)``.

    ``log_evaluator`` returns ``ln ψ(p)``; working with logarithms keeps
    rapidly growing families such as ``exp(C p^β)`` finite on the grid.

    Attributes
    ----------
    log_evaluator : callable
        Vectorized ``p ↦ ln ψ(p)``.
    b : float
        Support endpoint in ``(1, inf]``.
    tag : str
        Family identifier, e.g. ``"psi_m"`` or ``"natural"``.
    params : dict
        Family parameters, for reports.
    info : dict
        Construction diagnostics (flags raised while building ψ).
    """

    log_evaluator: Callable[[np.ndarray], np.ndarray]
    b: float = math.inf
    tag: str = "custom"
    params: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        b = check_real(self.b, "b", lower=1.0, lower_open=True, allow_inf=True)
        object.__setattr__(self, "b", b)

    def log(self, p) -> np.ndarray:
        return np.asarray(self.log_evaluator(np.asarray(p, dtype=float)), dtype=float)

    def __call__(self, p) -> np.ndarray:
        return np.exp(self.log(p))

    @property
    def label(self) -> str:
        if not self.params:
            return self.tag
        inner = ",".join(f"{k}={v:g}" if isinstance(v, (int, float)) else f"{k}={v}" for k, v in self.params.items())
        return f"{self.tag}({inner})"

    def check(self, grid: "PGrid", jump_tol: float = 0.5) -> dict:
        """Probe positivity, continuity and blow-up on ``grid``.

        The continuity probe compares ``ln ψ`` at each grid point with its
        value a relative step of ``1e-6`` further right; a jump larger than
        ``jump_tol`` is flagged. Nothing is enforced, only reported.
        """
        p = grid.points
        logs = self.log(p)
        nudged = np.minimum(p * (1 + 1e-6), np.nextafter(self.b, 1.0) if math.isfinite(self.b) else np.inf)
        jumps = np.abs(self.log(nudged) - logs)
        return {
            "positive": bool(np.all(np.isfinite(logs))),
            "continuous": bool(np.all(jumps <= jump_tol)),
            "blows_up": bool(logs[-1] > logs.max() - 1e-12 and logs[-1] > logs[0]),
            "inf_psi": float(np.exp(logs.min())),
        }


def make_psi(tag: str, **params) -> PsiFunction:
    """Build a named generating function.

    Parameters
    ----------
    tag : {"psi_m", "power", "psi_beta", "constant"}
        ``psi_m`` with ``m > 0`` gives ``p^(1/m)``. ``power`` with ``exponent > 0``
        gives ``p^exponent``. ``psi_beta`` with ``beta > 0`` and ``C3 > 0`` gives
        ``exp(C3 p^beta)``. ``constant`` with ``value > 0`` is a flat probe.

    Raises
    ------
    ValueError
        Unknown tag or invalid parameters.

    Examples
    --------
    >>> float(make_psi("psi_m", m=2)(4.0))
    2.0
    """
    required = {"psi_m": "m", "power": "exponent"}.get(tag)
    if required is not None and required not in params:
        raise ValueError(f"{tag} needs the parameter {required!r}")
    if tag == "psi_m":
        m = check_real(params.pop("m"), "m", lower=0.0, lower_open=True)
        _reject_extra(params)
        return PsiFunction(lambda p: np.log(p) / m, math.inf, "psi_m", {"m": m})
    if tag == "power":
        a = check_real(params.pop("exponent"), "exponent", lower=0.0, lower_open=True)
        _reject_extra(params)
        return PsiFunction(lambda p: a * np.log(p), math.inf, "power", {"exponent": a})
    if tag == "psi_beta":
        beta = check_real(params.pop("beta", 1.0), "beta", lower=0.0, lower_open=True)
        c3 = check_real(params.pop("C3", 1.0), "C3", lower=0.0, lower_open=True)
        _reject_extra(params)
        return PsiFunction(lambda p: c3 * np.power(p, beta), math.inf, "psi_beta", {"beta": beta, "C3": c3})
    if tag == "constant":
        value = check_real(params.pop("value", math.e), "value", lower=0.0, lower_open=True)
        _reject_extra(params)
        return PsiFunction(lambda p: np.full(np.shape(p), math.log(value)), math.inf, "constant", {"value": value})
    raise ValueError(f"unknown psi family {tag!r}")


def _reject_extra(params: dict) -> None:
    if params:
        raise ValueError(f"unexpected parameters {sorted(params)}")


@dataclass(frozen=True, eq=False)
class PGrid:
    """Finite exponent grid standing in for ``[1, b)``.

    Use :meth:`for_support` rather than the constructor: it applies the
    default policy (log-spaced up to ``pmax`` when ``b = inf``, geometric
    accumulation towards ``b`` down to ``b - 1e-4`` otherwise).
    """

    points: np.ndarray
    b: float = math.inf
    policy: str = "custom"

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim != 1 or pts.size == 0:
            raise ValueError("points must be a nonempty vector")
        if pts[0] != 1.0:
            raise ValueError("the first grid point must be 1")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("points must be strictly increasing")
        if math.isfinite(self.b) and pts[-1] >= self.b:
            raise ValueError("points must lie below the support endpoint b")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def for_support(cls, b: float = math.inf, count: int = 64, pmax: float = 256.0, gap: float = 1e-4) -> "PGrid":
        count = check_int(count, "count", minimum=2)
        b = check_real(b, "b", lower=1.0, lower_open=True, allow_inf=True)
        if math.isinf(b):
            pmax = check_real(pmax, "pmax", lower=1.0, lower_open=True)
            return cls(np.geomspace(1.0, pmax, count), b, f"log-spaced[1,{pmax:g}]x{count}")
        gap = min(gap, 0.5 * (b - 1.0))
        pts = b - np.geomspace(b - 1.0, gap, count)
        pts[0] = 1.0
        return cls(pts, b, f"accumulating(b={b:g},gap={gap:g})x{count}")

    @classmethod
    def for_psi(cls, psi: PsiFunction, count: int = 64, pmax: float = 256.0) -> "PGrid":
        return cls.for_support(psi.b, count, pmax)

    @property
    def pmax(self) -> float:
        return float(self.points[-1])

    def __len__(self) -> int:
        return self.points.size

    def clipped(self, pmax: float) -> "PGrid":
        """Grid restricted to points ``<= pmax`` (the point 1 is always kept)."""
        keep = self.points[self.points <= pmax]
        if keep.size == 0:
            keep = self.points[:1]
        return PGrid(keep, self.b, f"{self.policy}|clip<={pmax:g}")

    def refined(self, factor: int = 4) -> "PGrid":
        """Grid with ``factor`` times as many points under the same policy span."""
        factor = check_int(factor, "factor", minimum=1)
        if math.isinf(self.b):
            return PGrid(np.geomspace(1.0, self.pmax, factor * (self.points.size - 1) + 1), self.b, self.policy + f"|x{factor}")
        gaps = np.geomspace(self.b - 1.0, self.b - self.pmax, factor * (self.points.size - 1) + 1)
        pts = self.b - gaps
        pts[0] = 1.0
        return PGrid(pts, self.b, self.policy + f"|x{factor}")

    def tail_indices(self, fraction: float = 0.1) -> np.ndarray:
        """Indices of the last ``fraction`` of points (at least three)."""
        count = max(3, int(math.ceil(fraction * self.points.size)))
        count = min(count, self.points.size)
        return np.arange(self.points.size - count, self.points.size)

    def abscissa(self) -> np.ndarray:
        """Coordinate in which tail slopes are fitted: ``ln p`` or ``-ln(b - p)``."""
        if math.isinf(self.b):
            return np.log(self.points)
        return -np.log(self.b - self.points)


@dataclass(frozen=True)
class GlsNormReport:
    """Outcome of a grand Lebesgue norm evaluation.

    ``value`` is the maximum of ``ratios``; ``go_limit_estimate`` the maximum
    over the tail decile of the grid, so it never exceeds ``value``.
    """

    value: float
    argmax_p: float
    ps: np.ndarray
    ratios: np.ndarray
    go_limit_estimate: float
    truncation_pmax: float
    p_reliable: float = math.inf
    overflow: bool = False
    psi_label: str = ""

    @property
    def ratio_profile(self) -> list[tuple[float, float]]:
        return [(float(p), float(r)) for p, r in zip(self.ps, self.ratios)]

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "argmax_p": self.argmax_p,
            "ratio_profile": self.ratio_profile,
            "go_limit_estimate": self.go_limit_estimate,
            "truncation_pmax": self.truncation_pmax,
            "p_reliable": None if math.isinf(self.p_reliable) else self.p_reliable,
            "overflow": self.overflow,
            "psi": self.psi_label,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def report_from_profile(ps, ratios, grid: PGrid, p_reliable: float = math.inf, psi_label: str = "", tail_fraction: float = 0.1) -> GlsNormReport:
    """Assemble a :class:`GlsNormReport` from a ratio profile on ``grid``."""
    finite = np.isfinite(ratios)
    overflow = not bool(np.all(finite))
    safe = np.where(finite, ratios, np.inf)
    idx = int(np.argmax(safe))
    tail = grid.tail_indices(tail_fraction)
    return GlsNormReport(
        value=float(safe[idx]),
        argmax_p=float(ps[idx]),
        ps=np.asarray(ps, dtype=float),
        ratios=np.asarray(ratios, dtype=float),
        go_limit_estimate=float(np.max(safe[tail])),
        truncation_pmax=grid.pmax,
        p_reliable=p_reliable,
        overflow=overflow,
        psi_label=psi_label,
    )


def _check_compatible(psi: PsiFunction, grid: PGrid) -> None:
    if grid.b != psi.b:
        raise ValueError(f"p-grid support b={grid.b} does not match psi support b={psi.b}")


def gls_norm(f: PeriodicFunction, psi: PsiFunction, grid: PGrid | None = None) -> GlsNormReport:
    """Grand Lebesgue norm ``max_p |f|_p / ψ(p)`` over ``grid``.

    Parameters
    ----------
    f : PeriodicFunction
    psi : PsiFunction
    grid : PGrid, optional
        Defaults to ``PGrid.for_psi(psi)``.

    Returns
    -------
    GlsNormReport
        Non-finite ratios set ``overflow`` instead of raising.
    """
    grid = PGrid.for_psi(psi) if grid is None else grid
    _check_compatible(psi, grid)
    with np.errstate(over="ignore", invalid="ignore"):
        ratios = lp_norms(f, grid.points) * np.exp(-psi.log(grid.points))
    return report_from_profile(grid.points, ratios, grid, f.p_reliable, psi.label)


def natural_psi(family: Sequence[PeriodicFunction], grid: PGrid) -> PsiFunction:
    """Natural generating function ``p ↦ max_α |h_α|_p`` of a family.

    ``ln ψ`` is interpolated linearly in ``ln p`` between grid points and
    held constant beyond the grid ends.

    Raises
    ------
    ValueError
        Empty family, or a member whose norms vanish or diverge on the grid.
    """
    family = list(family)
    if not family:
        raise ValueError("family must be nonempty")
    values = np.max(np.vstack([lp_norms(h, grid.points) for h in family]), axis=0)
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise ValueError("family norms must be positive and finite on the grid")
    log_p = np.log(grid.points)
    log_v = np.log(values)

    def log_eval(p):
        return np.interp(np.log(p), log_p, log_v)

    names = ",".join(h.name for h in family)
    return PsiFunction(log_eval, grid.b, "natural", {"family": names}, {"grid_points": grid.points.size})


def fundamental_function(psi: PsiFunction, delta: float, grid: PGrid | None = None) -> float:
    """Fundamental function of the space at a set of length ``delta``.

    An arc of length ``delta`` has normalized measure ``s = delta/2π`` and
    ``|1_A|_p = s^(1/p)``; rearrangement invariance reduces the supremum over
    sets to ``max_p s^(1/p) / ψ(p)``, evaluated in logarithms.
    """
    delta = check_real(delta, "delta", lower=0.0, upper=TWO_PI, lower_open=True)
    grid = PGrid.for_psi(psi) if grid is None else grid
    _check_compatible(psi, grid)
    s = delta / TWO_PI
    logs = math.log(s) / grid.points - psi.log(grid.points)
    return float(np.exp(np.max(logs)))


def fundamental_function_asymptotic(m: float, s: float) -> float:
    """Closed-form ``sup_{p>=1} s^(1/p) p^(-1/m)`` for ``s <= exp(-1/m)``.

    The maximizer of ``ln(s)/p - ln(p)/m`` is ``p* = m ln(1/s)``, giving
    ``exp(-1/m) (m ln(1/s))^(-1/m)``.
    """
    m = check_real(m, "m", lower=0.0, lower_open=True)
    s = check_real(s, "s", lower=0.0, upper=1.0, lower_open=True, upper_open=True)
    return math.exp(-1.0 / m) * (m * math.log(1.0 / s)) ** (-1.0 / m)


def tail_trend(grid: PGrid, values: np.ndarray, tail_fraction: float = 0.1) -> tuple[float, bool]:
    """Fit the log-slope of ``values`` over the grid tail.

    Returns
    -------
    slope : float
        Least-squares slope of ``ln values`` against :meth:`PGrid.abscissa`.
    decreasing : bool
        Whether the tail values are nonincreasing (relative slack ``1e-12``).
    """
    idx = grid.tail_indices(tail_fraction)
    v = np.asarray(values, dtype=float)[idx]
    if np.any(v <= 0) or not np.all(np.isfinite(v)):
        return (-math.inf if np.all(v == 0) else math.nan), bool(np.all(np.diff(v) <= 0))
    x = grid.abscissa()[idx]
    slope = float(np.polyfit(x, np.log(v), 1)[0])
    decreasing = bool(np.all(np.diff(v) <= 1e-12 * np.abs(v[:-1])))
    return slope, decreasing


def compare_psi(nu: PsiFunction, psi: PsiFunction, grid: PGrid | None = None, thresholds: TrendThresholds = TrendThresholds()) -> Ordering:
    """Decide whether ``ψ(p)/ν(p) -> 0`` as ``p -> b``.

    The ratio over the grid tail must be decreasing and either drop by the
    factor ``much_less_drop`` across the whole grid or fit a tail slope at or
    below ``decay_slope``. A slope test is needed because polynomially
    separated generators such as ``√p`` and ``p`` only separate by a factor
    16 on ``[1, 256]``.
    """
    if nu.b != psi.b:
        raise ValueError("generators must share the support endpoint")
    grid = PGrid.for_psi(psi) if grid is None else grid
    log_ratio = psi.log(grid.points) - nu.log(grid.points)
    ratio = np.exp(log_ratio - log_ratio[0])
    slope, decreasing = tail_trend(grid, ratio, thresholds.tail_fraction)
    dropped = ratio[-1] < thresholds.much_less_drop
    if decreasing and (dropped or slope <= thresholds.decay_slope):
        return Ordering.MUCH_LESS
    return Ordering.NOT_COMPARABLE


@dataclass(frozen=True)
class GoVerdict:
    verdict: Membership
    value: float
    go_limit_estimate: float
    tail_slope: float
    tail_decreasing: bool
    pmax_used: float
    report: GlsNormReport

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "value": self.value,
            "go_limit_estimate": self.go_limit_estimate,
            "tail_slope": self.tail_slope,
            "tail_decreasing": self.tail_decreasing,
            "pmax_used": self.pmax_used,
        }


def go_membership(
    f: PeriodicFunction,
    psi: PsiFunction,
    grid: PGrid | None = None,
    thresholds: TrendThresholds = TrendThresholds(),
    min_points: int = 8,
) -> GoVerdict:
    """Classify ``f`` as inside G°, outside it, or undecided.

    The grid is first clipped to ``f.p_reliable`` so that quadrature error at
    exponents the grid cannot resolve does not fake a decay. On the clipped
    grid, with ``v`` the norm and ``t`` the tail maximum:

    * in-Go when the tail decreases and either ``t < vanish_fraction * v``
      or the tail slope is at most ``decay_slope``;
    * not-in-Go when ``t >= persist_fraction * v`` and the slope exceeds
      ``flat_slope``;
    * boundary otherwise.
    """
    grid = PGrid.for_psi(psi) if grid is None else grid
    _check_compatible(psi, grid)
    if math.isfinite(f.p_reliable) and f.p_reliable < grid.pmax:
        clipped = grid.clipped(f.p_reliable)
        if len(clipped) < min_points:
            warnings.warn(f"only {len(clipped)} reliable exponents for {f.name}; verdict is weak", RuntimeWarning, stacklevel=2)
        grid = clipped if len(clipped) >= 3 else grid
    report = gls_norm(f, psi, grid)
    if report.value == 0.0:
        return GoVerdict(Membership.IN_GO, 0.0, 0.0, -math.inf, True, grid.pmax, report)
    slope, decreasing = tail_trend(grid, report.ratios, thresholds.tail_fraction)
    vanished = report.go_limit_estimate < thresholds.vanish_fraction * report.value
    if decreasing and (vanished or slope <= thresholds.decay_slope):
        verdict = Membership.IN_GO
    elif report.go_limit_estimate >= thresholds.persist_fraction * report.value and slope > thresholds.flat_slope:
        verdict = Membership.NOT_IN_GO
    else:
        verdict = Membership.BOUNDARY
    return GoVerdict(verdict, report.value, report.go_limit_estimate, slope, decreasing, grid.pmax, report)
