"""Exponential Orlicz spaces and their dictionary with grand Lebesgue spaces.

For a generator ``ψ`` with ``b = inf`` put ``ν(p) = p ln ψ(p)``. The
Young–Fenchel conjugate ``ν*(z) = sup_p (pz - ν(p))`` controls the tail of
every ``f`` with ``||f||_ψ = K``:

    μ(|f| > y) <= exp(-ν*(ln(y/K)))      for y > eK,

and defines the Orlicz generator ``M(u) = exp(ν*(ln u))`` for ``u > e``,
continued by ``exp(Cu^2) - 1`` below ``e``. In the other direction
``θ(z) = ln M(e^z)`` gives back ``ψ_M(p) = exp(θ*(p)/p)``.

All conjugates are discrete: maxima of affine functions over samples,
which are exact for the sampled function and carry boundary-attainment
flags when a maximizer sits on the edge of the sample range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ._validation import check_increasing, check_real, check_vector
from .periodic_field import PeriodicFunction
from .psi_space import GoVerdict, Membership, Ordering, PGrid, PsiFunction, TrendThresholds, gls_norm, go_membership

__all__ = [
    "ConvexSamples",
    "lower_convex_envelope",
    "legendre",
    "interpolation_tolerance",
    "TailFunction",
    "tail_function",
    "nu_of_psi",
    "nu_star",
    "TailBoundReport",
    "tail_bound_check",
    "tail_norm_bound",
    "OrliczGenerator",
    "make_orlicz",
    "orlicz_from_psi",
    "NonConvexGeneratorError",
    "DegenerateGeneratorError",
    "NotInSpaceError",
    "psi_from_orlicz",
    "luxemburg_norm",
    "EquivalenceScan",
    "equivalence_scan",
    "orlicz_compare",
    "Thm41Report",
    "thm41_diagnostic",
]


class NonConvexGeneratorError(ValueError):
    """``ln M(e^z)`` is too far from convex to define ``ψ_M``."""


class DegenerateGeneratorError(ValueError):
    """Every conjugate maximizer sits on the sample boundary (no exponential growth)."""


class NotInSpaceError(ValueError):
    """No dilation ``λ`` makes the Orlicz modular finite."""


# ---------------------------------------------------------------------------
# convex samples and conjugation


def lower_convex_envelope(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Values at ``xs`` of the largest convex function below the samples."""
    hull: list[int] = []
    for i in range(xs.size):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            # drop b when it lies on or above the chord from a to i
            if (ys[b] - ys[a]) * (xs[i] - xs[a]) >= (ys[i] - ys[a]) * (xs[b] - xs[a]):
                hull.pop()
            else:
                break
        hull.append(i)
    return np.interp(xs, xs[hull], ys[hull])


@dataclass(frozen=True, eq=False)
class ConvexSamples:
    """Samples ``ys = f(xs)`` of a function on an increasing grid.

    ``boundary`` (optional) marks samples produced by a conjugation whose
    maximizer was an endpoint of the source grid.
    """

    xs: np.ndarray
    ys: np.ndarray
    boundary: np.ndarray | None = None

    def __post_init__(self):
        xs = check_increasing(self.xs, "xs")
        ys = check_vector(self.ys, "ys", length=xs.size)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        if self.boundary is not None:
            object.__setattr__(self, "boundary", np.asarray(self.boundary, dtype=bool))

    def __call__(self, x) -> np.ndarray:
        """Piecewise-linear interpolation (no extrapolation)."""
        return np.interp(x, self.xs, self.ys)

    def slopes(self) -> np.ndarray:
        return np.diff(self.ys) / np.diff(self.xs)

    def second_differences(self) -> np.ndarray:
        """Slope increments, the discrete analogue of ``f''`` times a step."""
        return np.diff(self.slopes())

    def is_convex(self, tol: float = 1e-9) -> bool:
        return bool(np.all(self.second_differences() >= -tol))

    def convexified(self) -> "ConvexSamples":
        return ConvexSamples(self.xs, lower_convex_envelope(self.xs, self.ys), self.boundary)

    def convexity_defect(self) -> float:
        """``max(f - conv f)`` over the samples; zero for convex samples."""
        return float(np.max(self.ys - lower_convex_envelope(self.xs, self.ys)))


def _conjugate_values(xs: np.ndarray, ys: np.ndarray, y: np.ndarray, chunk: int = 512) -> tuple[np.ndarray, np.ndarray]:
    values = np.empty(y.size)
    argmax = np.empty(y.size, dtype=int)
    for start in range(0, y.size, chunk):
        block = np.multiply.outer(y[start : start + chunk], xs) - ys[None, :]
        argmax[start : start + chunk] = np.argmax(block, axis=1)
        values[start : start + chunk] = block[np.arange(block.shape[0]), argmax[start : start + chunk]]
    return values, argmax


def legendre(f: ConvexSamples, ygrid) -> ConvexSamples:
    """Discrete Young–Fenchel conjugate ``f*(y) = max_i (x_i y - f(x_i))``.

    The result is convexified (a no-op up to rounding, as a maximum of affine
    functions is convex) and marks in ``boundary`` every ``y`` whose
    maximizer is the first or last sample, where the true supremum may lie
    outside the sampled range.

    Examples
    --------
    >>> xs = np.linspace(-8, 8, 1601)
    >>> g = legendre(ConvexSamples(xs, xs**2 / 2), np.array([1.0, 2.0]))
    >>> bool(np.allclose(g.ys, [0.5, 2.0]))
    True
    """
    y = check_increasing(ygrid, "ygrid")
    values, argmax = _conjugate_values(f.xs, f.ys, y)
    boundary = (argmax == 0) | (argmax == f.xs.size - 1)
    if y.size >= 3:
        values = lower_convex_envelope(y, values)
    return ConvexSamples(y, values, boundary)


def interpolation_tolerance(f: ConvexSamples) -> float:
    """Largest linear-interpolation error ``h^2 |f''| / 8`` estimated on the samples."""
    h = np.diff(f.xs)
    if h.size < 2:
        return 0.0
    curvature = np.abs(np.diff(f.slopes())) / (0.5 * (h[:-1] + h[1:]))
    steps = np.maximum(h[:-1], h[1:])
    return float(np.max(steps**2 * curvature) / 8.0)


# ---------------------------------------------------------------------------
# tails


@dataclass(frozen=True)
class TailFunction:
    """Tail ``T(y) = max(μ(f > y), μ(f < -y))`` at increasing levels."""

    ys: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if np.any(self.values < 0) or np.any(self.values > 1):
            raise ValueError("tail values must lie in [0, 1]")
        if np.any(np.diff(self.values) > 0):
            raise ValueError("tail values must be nonincreasing")


def tail_function(f: PeriodicFunction, levels) -> TailFunction:
    """Empirical tail of ``f``; each sample carries measure ``1/N``."""
    levels = np.asarray(levels, dtype=float)
    if levels.ndim != 1 or np.any(levels < 0) or np.any(np.diff(levels) <= 0):
        raise ValueError("levels must be nonnegative and strictly increasing")
    s = f.samples
    upper = np.sort(s)
    lower = np.sort(-s)
    n = s.size
    above = (n - np.searchsorted(upper, levels, side="right")) / n
    below = (n - np.searchsorted(lower, levels, side="right")) / n
    return TailFunction(levels, np.maximum(above, below))


# ---------------------------------------------------------------------------
# ν and its conjugate


def _require_infinite_support(psi: PsiFunction) -> None:
    if math.isfinite(psi.b):
        raise ValueError("the Orlicz dictionary needs a generator with b = inf")


def nu_of_psi(psi: PsiFunction, grid: PGrid | None = None) -> ConvexSamples:
    """Samples of ``ν(p) = p ln ψ(p)`` on the exponent grid."""
    _require_infinite_support(psi)
    grid = PGrid.for_psi(psi) if grid is None else grid
    p = grid.points
    return ConvexSamples(p, p * psi.log(p))


def nu_star(nu: ConvexSamples, z) -> tuple[np.ndarray, np.ndarray]:
    """Exact conjugate of the sampled ``ν`` at arbitrary ``z``.

    Returns the values and a mask of arguments whose maximizer is the last
    exponent of the grid (beyond it the conjugate only grows linearly, which
    understates the true conjugate).
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    values, argmax = _conjugate_values(nu.xs, nu.ys, z)
    return values, argmax == nu.xs.size - 1


@dataclass(frozen=True)
class TailBoundReport:
    """Margins ``exp(-ν*(ln(y/K))) - T(y)`` at levels ``y > eK``."""

    norm: float
    threshold: float
    levels: np.ndarray
    bounds: np.ndarray
    tails: np.ndarray
    margins: np.ndarray
    tolerance: float
    empty: bool

    @property
    def min_margin(self) -> float:
        return float(np.min(self.margins)) if self.margins.size else math.inf

    @property
    def holds(self) -> bool:
        return self.min_margin >= -self.tolerance


def tail_bound_check(f: PeriodicFunction, psi: PsiFunction, levels, grid: PGrid | None = None) -> TailBoundReport:
    """Tail inequality for ``f`` under ``ψ`` at the levels above ``e ||f||_ψ``.

    The tolerance band is ``2/N``, the resolution of the empirical measure.
    Levels at or below the threshold are dropped; if none remain the report
    is flagged ``empty``.
    """
    _require_infinite_support(psi)
    grid = PGrid.for_psi(psi) if grid is None else grid
    K = gls_norm(f, psi, grid).value
    threshold = math.e * K
    levels = np.asarray(levels, dtype=float)
    kept = levels[levels > threshold] if K > 0 else np.array([])
    tol = 2.0 / f.grid.size
    if kept.size == 0:
        empty = np.array([])
        return TailBoundReport(K, threshold, empty, empty, empty, empty, tol, True)
    nu = nu_of_psi(psi, grid)
    conj, _ = nu_star(nu, np.log(kept / K))
    bounds = np.exp(-conj)
    tails = tail_function(f, kept).values
    return TailBoundReport(K, threshold, kept, bounds, tails, bounds - tails, tol, False)


def tail_norm_bound(psi: PsiFunction, K: float = 1.0, grid: PGrid | None = None, points: int = 4001) -> float:
    """Largest ``||g||_ψ`` compatible with the tail bound at scale ``K``.

    For any ``g`` with ``T_g(y) <= 1`` and ``T_g(y) <= exp(-ν*(ln(y/K)))``
    above ``eK``, the layer-cake formula gives

        |g|_p^p <= (eK)^p + p K^p ∫_1^∞ exp(pz - ν*(z)) dz,

    and the returned value is the maximum over the grid of the ``p``-th root
    divided by ``ψ(p)``. The ratio to ``K`` is the reconstruction constant.
    """
    _require_infinite_support(psi)
    grid = PGrid.for_psi(psi) if grid is None else grid
    nu = nu_of_psi(psi, grid)
    # ν* grows at least like (pmax)z; the integrand is negligible once
    # pz - ν*(z) has fallen 60 units below its peak for every grid exponent.
    z = np.linspace(1.0, 1.0 + 80.0, points)
    conj, _ = nu_star(nu, z)
    dz = z[1] - z[0]
    best = 0.0
    for p, log_psi in zip(grid.points, psi.log(grid.points)):
        expo = p * z - conj
        peak = float(np.max(expo))
        weights = np.exp(expo - peak)
        integral_log = peak + math.log(np.trapezoid(weights, dx=dz)) + math.log(p)
        total_log = np.logaddexp(p * 1.0, integral_log)
        best = max(best, math.exp(total_log / p - log_psi))
    return K * best


# ---------------------------------------------------------------------------
# Orlicz generators


@dataclass(frozen=True, eq=False)
class OrliczGenerator:
    """Young–Orlicz function ``N(u)`` given through ``ln N(u)``.

    ``log_evaluator`` must accept arrays, return ``-inf`` at ``u = 0`` and
    stay finite where ``N`` itself would overflow.
    """

    log_evaluator: Callable[[np.ndarray], np.ndarray]
    tag: str = "custom"
    params: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    def log(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if np.any(u < 0):
            raise ValueError("generators are evaluated at u >= 0")
        with np.errstate(divide="ignore"):
            return np.asarray(self.log_evaluator(u), dtype=float)

    def __call__(self, u) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log(u))

    @property
    def label(self) -> str:
        if not self.params:
            return self.tag
        inner = ",".join(f"{k}={v:g}" if isinstance(v, (int, float)) else f"{k}={v}" for k, v in self.params.items())
        return f"{self.tag}({inner})"

    def probe(self, u_max: float = 8.0, points: int = 64) -> dict:
        """Check ``N(0) = 0``, monotonicity, convexity and quadratic behaviour near 0.

        Convexity is tested on slopes of ``N`` over a uniform probe grid with
        a relative tolerance of ``1e-9``. The quadratic probe reports
        ``N(u)/u^2`` on ``[0.1, 1]`` both as is and relative to ``N(1)``.
        """
        u = np.linspace(0.0, u_max, points)
        values = self(u)
        slopes = np.diff(values) / np.diff(u)
        scale = np.maximum(np.abs(slopes[1:]), 1.0)
        small = np.linspace(0.1, 1.0, 10)
        quad = self(small) / small**2
        n1 = float(self(np.array([1.0]))[0])
        return {
            "zero_at_origin": bool(values[0] == 0.0),
            "nondecreasing": bool(np.all(np.diff(values) >= -1e-12 * np.abs(values[1:]))),
            "convex": bool(np.all(np.diff(slopes) >= -1e-9 * scale)),
            "quadratic_ratio_range": (float(quad.min()), float(quad.max())),
            "quadratic_relative_range": (float(quad.min() / n1), float(quad.max() / n1)),
        }


def _log_expm1(x: np.ndarray) -> np.ndarray:
    """``ln(exp(x) - 1)`` without overflow, ``-inf`` at 0."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    big = x > 30.0
    out[big] = x[big] + np.log1p(-np.exp(-x[big]))
    with np.errstate(divide="ignore"):
        out[~big] = np.log(np.expm1(x[~big]))
    return out


def _quadratic_branch(c: float):
    return lambda u: _log_expm1(c * np.asarray(u, dtype=float) ** 2)


def _glue(c: float, upper: Callable[[np.ndarray], np.ndarray], knot: float = math.e):
    lower = _quadratic_branch(c)

    def log_eval(u):
        u = np.asarray(u, dtype=float)
        out = np.empty_like(u)
        low = u <= knot
        out[low] = lower(u[low])
        if np.any(~low):
            out[~low] = upper(u[~low])
        return out

    return log_eval


def _bridge_convex(log_eval, knot: float = math.e, low: float = -6.0, span: float = 3.0, points: int = 40001):
    """Replace a concave kink of ``θ(z) = ln N(e^z)`` near ``ln knot`` by a common tangent.

    Working with ``θ`` rather than ``N`` keeps ``θ`` convex, and since every
    slope involved is at least 1 the generator ``N`` stays convex as well.
    Returns ``(new_log_eval, (a, b), defect)`` where ``[a, b]`` is the bridged
    ``u``-interval (``None`` when nothing was changed) and ``defect`` the
    largest gap ``θ - conv θ`` on the sampled window.
    """
    z = np.linspace(low, math.log(knot) + span, points)
    theta = np.asarray(log_eval(np.exp(z)), dtype=float)
    gap = theta - lower_convex_envelope(z, theta)
    defect = float(np.max(gap))
    lifted = np.flatnonzero(gap > 1e-12 * np.maximum(np.abs(theta), 1.0))
    if lifted.size == 0:
        return log_eval, None, 0.0
    i, j = max(lifted[0] - 1, 0), min(lifted[-1] + 1, z.size - 1)
    za, zb = float(z[i]), float(z[j])
    ta, tb = float(theta[i]), float(theta[j])
    slope = (tb - ta) / (zb - za)

    def bridged(u):
        u = np.asarray(u, dtype=float)
        out = np.asarray(log_eval(u), dtype=float).copy()
        with np.errstate(divide="ignore"):
            lu = np.log(u)
        inside = (lu > za) & (lu < zb)
        out[inside] = ta + slope * (lu[inside] - za)
        return out

    return bridged, (math.exp(za), math.exp(zb)), defect


def make_orlicz(tag: str, **params) -> OrliczGenerator:
    """Named generator families.

    ``power`` (``p >= 1``): ``u^p``.
    ``exp_power`` (``m > 0``, ``r >= 0``, ``C > 0``): ``exp(C u^m ln(u)^(-mr))`` for
    ``u > e``, continued by ``exp(c u^2) - 1`` with ``c`` fixed by continuity.
    ``exp_log`` (``beta > 0``, ``C > 0``): ``exp(C ln(1+u)^(1+1/beta))`` for
    ``u > e``, continued the same way.
    ``exp_square``: ``exp(u^2) - 1``.
    ``exp_linear``: ``exp(u) - 1 - u``.
    """
    if tag == "power":
        p = check_real(params.pop("p", 2.0), "p", lower=1.0)
        _no_extra(params)
        return OrliczGenerator(lambda u: p * np.log(u), "power", {"p": p})
    if tag == "exp_square":
        _no_extra(params)
        return OrliczGenerator(lambda u: _log_expm1(np.asarray(u) ** 2), "exp_square")
    if tag == "exp_linear":
        _no_extra(params)

        def log_eval(u):
            u = np.asarray(u, dtype=float)
            out = np.empty_like(u)
            big = u > 30.0
            out[big] = u[big] + np.log1p(-(1.0 + u[big]) * np.exp(-u[big]))
            small = ~big
            with np.errstate(divide="ignore"):
                # expm1(u) - u is u^2/2 + ..., computed without cancellation for small u
                tiny = small & (u < 1e-3)
                safe = np.where(small & ~tiny, u, 0.0)
                val = np.where(tiny, u**2 / 2 + u**3 / 6 + u**4 / 24, np.expm1(safe) - safe)
                out[small] = np.log(val[small])
            return out

        return OrliczGenerator(log_eval, "exp_linear")
    if tag == "exp_power":
        m = check_real(params.pop("m", 2.0), "m", lower=0.0, lower_open=True)
        r = check_real(params.pop("r", 0.0), "r", lower=0.0)
        c = check_real(params.pop("C", 1.0), "C", lower=0.0, lower_open=True)
        _no_extra(params)

        def upper(u):
            return c * u**m * np.log(u) ** (-m * r)

        return _glued_generator(upper, "exp_power", {"m": m, "r": r, "C": c})
    if tag == "exp_log":
        beta = check_real(params.pop("beta", 1.0), "beta", lower=0.0, lower_open=True)
        c = check_real(params.pop("C", 1.0), "C", lower=0.0, lower_open=True)
        _no_extra(params)

        def upper(u):
            return c * np.log1p(u) ** (1.0 + 1.0 / beta)

        return _glued_generator(upper, "exp_log", {"beta": beta, "C": c})
    raise ValueError(f"unknown generator family {tag!r}")


def _no_extra(params: dict) -> None:
    if params:
        raise ValueError(f"unexpected parameters {sorted(params)}")


def _glued_generator(upper, tag: str, params: dict, info: dict | None = None) -> OrliczGenerator:
    log_at_knot = float(upper(np.array([math.e]))[0])
    c = math.log1p(math.exp(log_at_knot)) / math.e**2
    raw = _glue(c, upper)
    log_eval, bridge, defect = _bridge_convex(raw)
    info = dict(info or {})
    info.update(
        {
            "quadratic_constant": c,
            "branch_gap_at_e": abs(float(_quadratic_branch(c)(np.array([math.e]))[0]) - log_at_knot),
            "convexified": bridge is not None,
            "bridge": bridge,
            "convexity_defect": defect,
        }
    )
    return OrliczGenerator(log_eval, tag, params, info)


def orlicz_from_psi(psi: PsiFunction, grid: PGrid | None = None) -> OrliczGenerator:
    """Generator ``M_ψ`` with ``ln M(u) = ν*(ln u)`` for ``u > e``.

    Below ``e`` the generator is ``exp(Cu^2) - 1`` with ``C`` fixed by
    continuity at ``e``. If ``ν`` is not convex on the grid it is convexified
    first, and a concave kink of ``M`` at ``e`` is replaced by the common
    tangent of the two branches; both events are recorded in ``info``.

    ``info["boundary_u"]`` is the level above which the discrete conjugate
    is attained at the largest grid exponent.
    """
    _require_infinite_support(psi)
    grid = PGrid.for_psi(psi) if grid is None else grid
    nu = nu_of_psi(psi, grid)
    nu_convexified = not nu.is_convex(1e-9 * max(1.0, float(np.max(np.abs(nu.ys)))))
    if nu_convexified:
        nu = nu.convexified()
    slopes = nu.slopes()
    boundary_u = math.exp(float(slopes[-1])) if slopes.size else math.inf

    def upper(u):
        return nu_star(nu, np.log(u))[0]

    info = {"nu_convexified": nu_convexified, "boundary_u": boundary_u, "pmax": grid.pmax}
    return _glued_generator(upper, "from_psi", {"psi": psi.label}, info)


def psi_from_orlicz(
    M: OrliczGenerator,
    zgrid=None,
    pgrid: PGrid | None = None,
    convexity_tol: float = 1.0,
) -> PsiFunction:
    """Recover ``ψ_M(p) = exp(θ*(p)/p)`` from ``θ(z) = ln M(e^z)``.

    Parameters
    ----------
    M : OrliczGenerator
    zgrid : array_like, optional
        Samples of ``z``; default 16001 points on ``[-10, 300]``.
    pgrid : PGrid, optional
        Exponents at which ``θ*`` is evaluated.
    convexity_tol : float
        Largest accepted gap ``θ - conv θ`` (in log units). Smaller gaps are
        convexified and flagged; the conjugate is unchanged by this because
        conjugation only sees the convex envelope.

    Raises
    ------
    NonConvexGeneratorError
        Convexity defect above ``convexity_tol``.
    DegenerateGeneratorError
        Every exponent attains its conjugate on the ``z`` boundary, as for
        power generators.
    """
    z = np.linspace(-10.0, 300.0, 16001) if zgrid is None else check_increasing(zgrid, "zgrid")
    pgrid = PGrid.for_support(math.inf) if pgrid is None else pgrid
    theta = ConvexSamples(z, M.log(np.exp(z)))
    defect = theta.convexity_defect()
    if defect > convexity_tol:
        raise NonConvexGeneratorError(f"ln M(e^z) has convexity defect {defect:.3g} > {convexity_tol}")
    conj = legendre(theta, pgrid.points)
    boundary = conj.boundary
    if np.all(boundary):
        raise DegenerateGeneratorError("every conjugate maximizer lies on the z-sample boundary")
    log_psi = conj.ys / pgrid.points
    log_p = np.log(pgrid.points)
    interior = np.flatnonzero(~boundary)

    def log_eval(p):
        return np.interp(np.log(p), log_p, log_psi)

    info = {
        "convexity_defect": defect,
        "convexified": defect > 0.0,
        "boundary": boundary,
        "interior_range": (float(pgrid.points[interior[0]]), float(pgrid.points[interior[-1]])),
    }
    return PsiFunction(log_eval, math.inf, "from_orlicz", {"M": M.label}, info)


# ---------------------------------------------------------------------------
# Luxemburg norm and comparisons


def _log_modular(f: PeriodicFunction, N: OrliczGenerator, lam: float) -> float:
    logs = N.log(np.abs(f.samples) / lam)
    top = float(np.max(logs))
    if top == -math.inf:
        return -math.inf
    return top + math.log(float(np.mean(np.exp(logs - top))))


def luxemburg_norm(f: PeriodicFunction, N: OrliczGenerator, rel_width: float = 1e-8) -> float:
    """``inf{λ > 0 : ∫ N(|f|/λ) dμ <= 1}`` by bisection on ``ln λ``.

    The modular is evaluated in log space. The returned ``λ`` is the upper
    end of the final bracket, so the modular there is at most one.

    Raises
    ------
    NotInSpaceError
        If no ``λ`` up to ``1e300`` brings the modular to one.
    """
    peak = float(np.max(np.abs(f.samples)))
    if peak == 0.0:
        return 0.0
    hi = peak
    while _log_modular(f, N, hi) > 0.0:
        hi *= 2.0
        if hi > 1e300:
            raise NotInSpaceError(f"{f.name} is not in the Orlicz space of {N.label}")
    lo = hi
    while _log_modular(f, N, lo) <= 0.0:
        lo /= 2.0
        if lo < 1e-300:
            return 0.0
    while hi / lo - 1.0 > rel_width:
        mid = math.sqrt(lo * hi)
        if _log_modular(f, N, mid) <= 0.0:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class EquivalenceScan:
    """Ratios ``||f||_ψ / ||f||_{L(M_ψ)}`` over a set of functions."""

    ratios: dict
    minimum: float
    maximum: float

    @property
    def spread(self) -> float:
        return self.maximum / self.minimum if self.minimum > 0 else math.inf


def equivalence_scan(functions: Sequence[PeriodicFunction], psi: PsiFunction, grid: PGrid | None = None, generator: OrliczGenerator | None = None) -> EquivalenceScan:
    """Two-sided comparison of the grand Lebesgue and Luxemburg norms.

    The zero function contributes the ratio 1 by convention.
    """
    grid = PGrid.for_psi(psi) if grid is None else grid
    M = orlicz_from_psi(psi, grid) if generator is None else generator
    ratios = {}
    for f in functions:
        g = gls_norm(f, psi, grid).value
        lux = luxemburg_norm(f, M)
        ratios[f.name] = 1.0 if g == 0.0 and lux == 0.0 else g / lux
    values = np.array(list(ratios.values()))
    return EquivalenceScan(ratios, float(values.min()), float(values.max()))


def orlicz_compare(
    K: OrliczGenerator,
    N: OrliczGenerator,
    lambdas: Sequence[float] = (0.5, 1.0, 2.0, 8.0),
    ugrid=None,
    tail_fraction: float = 0.1,
    drop: float = 1e-3,
) -> Ordering:
    """Decide ``K(λu)/N(u) -> 0`` for every probed ``λ``.

    For each ``λ`` the log-ratio over the top decile of ``ugrid`` must
    decrease, and its last value must sit ``ln(1/drop)`` below its first
    value in that decile. The default ``ugrid`` has 400 log-spaced points
    from ``e`` up to ``e^8``, capped where a sampled generator stops being
    exact (``info["boundary_u"]``, divided by the largest ``λ`` for ``K``).
    """
    if ugrid is None:
        top = math.e**8
        top = min(top, N.info.get("boundary_u", math.inf))
        top = min(top, K.info.get("boundary_u", math.inf) / max(lambdas))
        if top <= 2 * math.e:
            raise ValueError("generators are exact only below 2e; pass a ugrid explicitly")
        u = np.geomspace(math.e, top, 400)
    else:
        u = check_increasing(ugrid, "ugrid")
    count = max(3, int(math.ceil(tail_fraction * u.size)))
    tail = u[-count:]
    for lam in lambdas:
        lam = check_real(lam, "lambda", lower=0.0, lower_open=True)
        log_ratio = K.log(lam * tail) - N.log(tail)
        if not np.all(np.isfinite(log_ratio)):
            return Ordering.NOT_COMPARABLE
        if np.any(np.diff(log_ratio) > 0):
            return Ordering.NOT_COMPARABLE
        if log_ratio[-1] - log_ratio[0] >= math.log(drop):
            return Ordering.NOT_COMPARABLE
    return Ordering.MUCH_LESS


@dataclass(frozen=True)
class Thm41Report:
    verdict: str
    membership: GoVerdict
    psi_m: PsiFunction

    def to_dict(self) -> dict:
        return {**self.membership.to_dict(), "membership": self.membership.verdict.value, "verdict": self.verdict}


def thm41_diagnostic(
    f: PeriodicFunction,
    M: OrliczGenerator,
    grid: PGrid | None = None,
    thresholds: TrendThresholds = TrendThresholds(),
) -> Thm41Report:
    """Approximability of ``f`` in ``L(M)`` read off the G° verdict under ``ψ_M``.

    ``TA`` for in-Go, ``not-TA`` for not-in-Go, ``undecided`` for boundary.
    """
    grid = PGrid.for_support(math.inf) if grid is None else grid
    psi_m = psi_from_orlicz(M, pgrid=grid)
    verdict = go_membership(f, psi_m, grid, thresholds)
    label = {Membership.IN_GO: "TA", Membership.NOT_IN_GO: "not-TA"}.get(verdict.verdict, "undecided")
    return Thm41Report(label, verdict, psi_m)
