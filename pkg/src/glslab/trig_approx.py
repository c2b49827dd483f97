"""Summation kernels, moduli of continuity and best trigonometric approximation.

Kernels are trigonometric polynomials acting by convolution, i.e. by
multiplying Fourier coefficients:

* Fejér ``F_n``: weights ``1 - |k|/(n+1)``;
* Dirichlet ``D_n`` (and the partial-sum operator ``S_n``): weights 1 on ``|k| <= n``;
* Jackson ``J_n``: the normalized square of ``F_m`` with ``m = floor(n/2)``,
  so its degree ``2m`` never exceeds ``n``;
* Vallée Poussin ``V_n = 2 F_{2n-1} - F_{n-1}``: weights 1 on ``|k| <= n``,
  degree ``2n - 1``.

Best approximation errors carry a two-sided bracket: the value reached by
the solver is an upper bound, and a Hölder certificate built from the
residual gives a lower bound (see :mod:`glslab._solvers`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import _solvers
from ._validation import check_int, check_real
from .periodic_field import (
    TWO_PI,
    PeriodicFunction,
    TrigPolynomial,
    convolve,
    fourier_coefficients,
    lp_norm,
)
from .psi_space import (
    Membership,
    PGrid,
    PsiFunction,
    TrendThresholds,
    gls_norm,
    go_membership,
)

__all__ = [
    "Kernel",
    "KERNEL_KINDS",
    "kernel_build",
    "NormSpec",
    "ModulusProfile",
    "modulus",
    "modulus_profile",
    "ApproxError",
    "best_approx_lp",
    "best_approx_gls",
    "supinf_lower_bound",
    "RatioReport",
    "EstimateError",
    "jackson_direct",
    "gls_direct",
    "InverseReport",
    "inverse_estimate",
    "vp_bound",
    "TADiagnostic",
    "DecayThresholds",
    "ta_diagnostic",
    "is_trig_polynomial",
]

KERNEL_KINDS = ("fejer", "dirichlet", "jackson", "vallee_poussin", "fourier")


class EstimateError(RuntimeError):
    """Raised when an estimate is internally inconsistent (zero right side, nonzero left side)."""


@dataclass(frozen=True, eq=False)
class Kernel(TrigPolynomial):
    """A summation kernel: a :class:`TrigPolynomial` with a kind and nominal index."""

    kind: str = "custom"
    index: int = 0

    @property
    def label(self) -> str:
        return f"{self.kind}[{self.index}]"

    def weights(self) -> np.ndarray:
        """Real coefficient weights ``c_0..c_degree``."""
        return self.coefficients[self.degree :].real.copy()


def _fejer_weights(n: int) -> np.ndarray:
    return 1.0 - np.arange(n + 1) / (n + 1.0)


def _symmetric(half: np.ndarray) -> np.ndarray:
    return np.concatenate([half[:0:-1], half])


def kernel_build(kind: str, n: int) -> Kernel:
    """Build a summation kernel.

    Parameters
    ----------
    kind : {"fejer", "dirichlet", "jackson", "vallee_poussin", "fourier"}
    n : int
        Kernel index. ``n >= 0`` for Fejér, Dirichlet and Fourier; ``n >= 1``
        for Jackson and Vallée Poussin.

    Returns
    -------
    Kernel

    Raises
    ------
    ValueError
        Unknown kind or invalid index.

    Examples
    --------
    >>> k = kernel_build("dirichlet", 1)
    >>> k.coefficients.real.tolist(), float(k(0.0))
    ([1.0, 1.0, 1.0], 3.0)
    """
    if kind not in KERNEL_KINDS:
        raise ValueError(f"unknown kernel kind {kind!r}; choose from {KERNEL_KINDS}")
    minimum = 1 if kind in ("jackson", "vallee_poussin") else 0
    n = check_int(n, "n", minimum=minimum)
    if kind == "fejer":
        half = _fejer_weights(n)
    elif kind in ("dirichlet", "fourier"):
        half = np.ones(n + 1)
    elif kind == "jackson":
        full = _symmetric(_fejer_weights(n // 2))
        square = np.convolve(full, full)
        half = square[square.size // 2 :] / square[square.size // 2]
    else:
        big = np.zeros(2 * n)
        big[: 2 * n] = 2.0 * _fejer_weights(2 * n - 1)
        big[:n] -= _fejer_weights(n - 1)
        half = big
    return Kernel(_symmetric(half).astype(complex), kind=kind, index=n)


# ---------------------------------------------------------------------------
# norms used by moduli and estimates


@dataclass(frozen=True, eq=False)
class NormSpec:
    """Either an ``L_p`` norm (``p`` in ``[1, inf]``) or a grand Lebesgue norm.

    Build with :meth:`lp` or :meth:`gls`.
    """

    p: float | None = 2.0
    psi: PsiFunction | None = None
    grid: PGrid | None = None

    @classmethod
    def lp(cls, p: float) -> "NormSpec":
        return cls(p=check_real(p, "p", lower=1.0, allow_inf=True))

    @classmethod
    def gls(cls, psi: PsiFunction, grid: PGrid | None = None) -> "NormSpec":
        return cls(p=None, psi=psi, grid=PGrid.for_psi(psi) if grid is None else grid)

    @classmethod
    def coerce(cls, norm) -> "NormSpec":
        if isinstance(norm, NormSpec):
            return norm
        if isinstance(norm, PsiFunction):
            return cls.gls(norm)
        return cls.lp(norm)

    @property
    def label(self) -> str:
        if self.psi is not None:
            return f"G[{self.psi.label}]"
        return "Linf" if math.isinf(self.p) else f"L{self.p:g}"

    def evaluate_rows(self, rows: np.ndarray, chunk: int = 16) -> np.ndarray:
        """Norm of every row of a 2-D sample array."""
        rows = np.atleast_2d(rows)
        peaks = np.max(np.abs(rows), axis=1)
        safe = np.where(peaks > 0, peaks, 1.0)
        with np.errstate(divide="ignore"):
            logs = np.log(np.abs(rows) / safe[:, None])
        if self.psi is None:
            if math.isinf(self.p):
                return peaks
            moments = np.mean(np.exp(self.p * logs), axis=1)
            return peaks * moments ** (1.0 / self.p)
        ps = self.grid.points
        inv_psi = np.exp(-self.psi.log(ps))
        out = np.empty(rows.shape[0])
        for start in range(0, rows.shape[0], chunk):
            block = logs[start : start + chunk]
            moments = np.mean(np.exp(ps[None, :, None] * block[:, None, :]), axis=2)
            norms = safe[start : start + chunk, None] * moments ** (1.0 / ps)[None, :]
            out[start : start + chunk] = np.max(norms * inv_psi, axis=1)
        return np.where(peaks > 0, out, 0.0)

    def __call__(self, f: PeriodicFunction) -> float:
        return float(self.evaluate_rows(f.samples[None, :])[0])


# ---------------------------------------------------------------------------
# modulus of continuity


def _shift_set(delta: float, step: float, count: int) -> np.ndarray:
    # ||U_h f - f|| = ||U_{-h} f - f||, so negative shifts repeat positive ones.
    regular = np.abs(np.linspace(-delta, delta, count))
    aligned = step * np.arange(0, int(math.floor(delta / step + 1e-9)) + 1)
    return np.unique(np.concatenate([regular, aligned]))


def _shift_differences(f: PeriodicFunction, shifts: np.ndarray) -> np.ndarray:
    N = f.grid.size
    cells = shifts / f.grid.step
    whole = np.round(cells)
    aligned = np.abs(cells - whole) <= 1e-9
    out = np.empty((shifts.size, N))
    if np.any(aligned):
        idx = (np.arange(N)[None, :] - whole[aligned].astype(int)[:, None]) % N
        out[aligned] = f.samples[idx]
    if np.any(~aligned):
        spec = np.fft.fft(f.samples)
        phase = np.exp(-1j * np.multiply.outer(shifts[~aligned], f.grid.wavenumbers))
        out[~aligned] = np.real(np.fft.ifft(spec[None, :] * phase, axis=1))
    return out - f.samples[None, :]


def _modulus_raw(f: PeriodicFunction, delta: float, norm: NormSpec, count: int) -> tuple[float, float]:
    if delta == 0.0:
        return 0.0, 0.0
    shifts = _shift_set(delta, f.grid.step, count)
    values = norm.evaluate_rows(_shift_differences(f, shifts))
    band = float(np.max(np.abs(np.diff(values)))) if values.size > 1 else 0.0
    return float(np.max(values)), band


def modulus(f: PeriodicFunction, delta: float, norm=2.0, count: int = 128) -> float:
    """Modulus of continuity ``sup_{|h| <= delta} ||f(· - h) - f||``.

    The supremum runs over ``count`` equispaced shifts in ``[-delta, delta]``
    together with every grid-aligned shift in that range.

    Parameters
    ----------
    f : PeriodicFunction
    delta : float
        In ``[0, 2π]``.
    norm : NormSpec, float or PsiFunction
        A number selects ``L_p`` (``inf`` for the sup norm); a
        :class:`PsiFunction` selects the grand Lebesgue norm on its default grid.
    """
    delta = check_real(delta, "delta", lower=0.0, upper=TWO_PI)
    return _modulus_raw(f, delta, NormSpec.coerce(norm), count)[0]


@dataclass(frozen=True)
class ModulusProfile:
    """Moduli at increasing ``deltas``.

    ``values`` is the running maximum of the raw sampled suprema, so it is
    nondecreasing by construction. ``bands`` bounds the discretization error
    by the largest jump between neighbouring shifts.
    """

    deltas: np.ndarray
    values: np.ndarray
    raw: np.ndarray
    bands: np.ndarray
    norm_label: str


def modulus_profile(f: PeriodicFunction, deltas: Sequence[float], norm=2.0, count: int = 128) -> ModulusProfile:
    deltas = np.asarray(deltas, dtype=float)
    if deltas.ndim != 1 or np.any(np.diff(deltas) <= 0):
        raise ValueError("deltas must be strictly increasing")
    if deltas.size and (deltas[0] < 0 or deltas[-1] > TWO_PI):
        raise ValueError("deltas must lie in [0, 2π]")
    spec = NormSpec.coerce(norm)
    pairs = [_modulus_raw(f, float(d), spec, count) for d in deltas]
    raw = np.array([v for v, _ in pairs])
    bands = np.array([b for _, b in pairs])
    return ModulusProfile(deltas, np.maximum.accumulate(raw), raw, bands, spec.label)


# ---------------------------------------------------------------------------
# best approximation


@dataclass(frozen=True)
class ApproxError:
    """Best approximation error ``E_n`` with its bracket.

    Attributes
    ----------
    n : int
    value : float
        Objective reached by the solver; an upper bound on ``E_n``.
    minimizer : TrigPolynomial
    status : str
        ``exact``, ``converged`` or a description of the remaining gap.
    lower : float
        Certified lower bound. For grand Lebesgue norms this is the sup-inf
        bound ``max_p E_n[f]_p / ψ(p)``.
    dual_lower : float
        For grand Lebesgue norms, a certified lower bound on the minimax value
        itself (usually much tighter than ``lower``); equals ``lower`` otherwise.
    norm_label : str
    """

    n: int
    value: float
    minimizer: TrigPolynomial
    status: str
    lower: float
    dual_lower: float
    norm_label: str

    @property
    def bracket(self) -> tuple[float, float]:
        return (self.lower, self.value)


def _check_degree(f: PeriodicFunction, n: int) -> int:
    n = check_int(n, "n", minimum=0)
    if 2 * n + 1 > f.grid.size:
        raise ValueError(f"degree {n} too large for grid of size {f.grid.size}")
    return n


def _start_parameters(start: TrigPolynomial | None, n: int) -> np.ndarray | None:
    if start is None:
        return None
    if start.degree > n:
        raise ValueError("start polynomial exceeds the target degree")
    return start.padded(n).to_parameters()


def best_approx_lp(f: PeriodicFunction, n: int, p: float, start: TrigPolynomial | None = None) -> ApproxError:
    """``E_n[f]_p = min_{t in T(n)} |f - t|_p`` for ``1 <= p < inf``.

    ``p = 2`` uses the Fourier truncation, ``p = 1`` a linear program, and
    other exponents L-BFGS on ``ln |f - t|_p`` started from the truncation
    (or ``start``). The solver result is never worse than its start.
    """
    n = _check_degree(f, n)
    p = check_real(p, "p", lower=1.0)
    phi = _solvers.design_matrix(f.grid.points, n)
    sol = _solvers.solve_lp(f.samples, phi, p, _start_parameters(start, n))
    return ApproxError(n, sol.value, TrigPolynomial.from_parameters(sol.theta), sol.status, sol.lower, sol.lower, f"L{p:g}")


def supinf_lower_bound(f: PeriodicFunction, n: int, psi: PsiFunction, grid: PGrid | None = None) -> tuple[float, np.ndarray]:
    """Certified ``max_p E_n[f]_p / ψ(p)`` and the per-exponent lower bounds.

    Each ``E_n[f]_p`` is solved on the grid (warm-started along increasing
    ``p``) and replaced by its certified lower bound before dividing by ``ψ``.
    """
    n = _check_degree(f, n)
    grid = PGrid.for_psi(psi) if grid is None else grid
    phi = _solvers.design_matrix(f.grid.points, n)
    lowers = np.empty(len(grid))
    theta = None
    for i, p in enumerate(grid.points):
        sol = _solvers.solve_lp(f.samples, phi, float(p), theta)
        theta = sol.theta
        lowers[i] = sol.lower
    ratios = lowers * np.exp(-psi.log(grid.points))
    return float(np.max(ratios)), lowers


def _seed_polynomials(f: PeriodicFunction, n: int) -> list[np.ndarray]:
    seeds = []
    for kind, index in (("jackson", n), ("vallee_poussin", (n + 1) // 2), ("fejer", n)):
        if index < 1 and kind != "fejer":
            continue
        kernel = kernel_build(kind, index)
        if kernel.degree > n:
            continue
        coef = fourier_coefficients(f, kernel.degree) * kernel.coefficients
        seeds.append(TrigPolynomial(coef).padded(n).to_parameters())
    return seeds


def best_approx_gls(
    f: PeriodicFunction,
    n: int,
    psi: PsiFunction,
    grid: PGrid | None = None,
    *,
    start: TrigPolynomial | None = None,
    method: str = "slsqp",
    lower: bool = True,
) -> ApproxError:
    """``E_n[f]`` in the grand Lebesgue norm of ``ψ``.

    Minimizes the convex function ``θ ↦ max_p |f - Φθ|_p / ψ(p)``. Starting
    points are the Fourier truncation, the Jackson, Vallée Poussin and Fejér
    means of admissible degree, and ``start``. The returned ``value`` is an
    upper bound; ``lower`` is the sup-inf bound (skipped when
    ``lower=False``) and ``dual_lower`` a certificate for the minimax value.
    """
    n = _check_degree(f, n)
    grid = PGrid.for_psi(psi) if grid is None else grid
    if grid.b != psi.b:
        raise ValueError("p-grid does not match the support of psi")
    ps = grid.points
    log_psi = psi.log(ps)
    phi = _solvers.design_matrix(f.grid.points, n)
    seeds = _seed_polynomials(f, n)
    if start is not None:
        seeds.append(_start_parameters(start, n))
    theta, value, status = _solvers.solve_gls(f.samples, phi, ps, log_psi, seeds, method=method)
    dual = min(_solvers.minimax_certificate(f.samples, phi, theta, ps, log_psi), value)
    supinf = supinf_lower_bound(f, n, psi, grid)[0] if lower else 0.0
    supinf = min(supinf, value)
    if status == "exact":
        pass
    elif value - dual <= 1e-6 * value:
        status = "converged"
    else:
        status = f"{status}|gap:{(value - dual) / value:.2e}"
    return ApproxError(n, value, TrigPolynomial.from_parameters(theta), status, supinf, dual, f"G[{psi.label}]")


# ---------------------------------------------------------------------------
# direct, inverse and Vallée Poussin estimates


@dataclass(frozen=True)
class RatioReport:
    """Both sides of an inequality ``lhs <= C rhs`` and the empirical ``C``."""

    f_name: str
    n: int
    norm_label: str
    lhs: float
    rhs: float
    ratio: float
    bracket_low: float = math.nan
    bracket_high: float = math.nan
    status: str = "ok"

    HEADER = ("f", "n", "norm", "lhs", "rhs", "ratio", "bracket_low", "bracket_high", "status")

    def to_row(self) -> tuple:
        return (self.f_name, self.n, self.norm_label, self.lhs, self.rhs, self.ratio, self.bracket_low, self.bracket_high, self.status)


def _ratio(lhs: float, rhs: float, scale: float, what: str) -> float:
    tol = 1e-12 * max(1.0, scale)
    if rhs <= tol:
        if lhs <= tol:
            return 0.0
        raise EstimateError(f"{what}: right side vanishes while left side is {lhs:.3e}")
    return lhs / rhs


def jackson_direct(f: PeriodicFunction, n: int, p: float, count: int = 128) -> RatioReport:
    """Jackson's inequality ``|f - J_n∗f|_p <= C ω(f, 2π/n)_p``.

    ``p`` may be ``inf`` for the sup norm. A constant ``f`` gives ``(0, 0, 0)``.

    Raises
    ------
    EstimateError
        When the modulus vanishes but the residual does not.
    """
    n = check_int(n, "n", minimum=1)
    p = check_real(p, "p", lower=1.0, allow_inf=True)
    residual = f - convolve(f, kernel_build("jackson", n))
    lhs = lp_norm(residual, p)
    rhs = modulus(f, TWO_PI / n, p, count)
    ratio = _ratio(lhs, rhs, float(np.max(np.abs(f.samples))), "jackson_direct")
    label = "Linf" if math.isinf(p) else f"L{p:g}"
    return RatioReport(f.name, n, label, lhs, rhs, ratio)


def gls_direct(f: PeriodicFunction, n: int, psi: PsiFunction, grid: PGrid | None = None, count: int = 128) -> RatioReport:
    """Direct estimate in ``G(ψ)``: ``||f - J_n∗f|| <= C ω_G(f, 2π/n)``.

    The left side bounds ``E_n[f]`` from above, since ``J_n∗f`` has degree at most ``n``.
    """
    n = check_int(n, "n", minimum=1)
    grid = PGrid.for_psi(psi) if grid is None else grid
    residual = f - convolve(f, kernel_build("jackson", n))
    lhs = gls_norm(residual, psi, grid).value
    rhs = modulus(f, TWO_PI / n, NormSpec.gls(psi, grid), count)
    ratio = _ratio(lhs, rhs, float(np.max(np.abs(f.samples))), "gls_direct")
    return RatioReport(f.name, n, f"G[{psi.label}]", lhs, rhs, ratio)


def is_trig_polynomial(f: PeriodicFunction, n: int, rtol: float = 1e-10) -> bool:
    """Whether the grid spectrum of ``f`` vanishes above degree ``n``."""
    spec = np.abs(f.spectrum())
    k = np.abs(f.grid.wavenumbers)
    scale = float(np.max(spec)) if spec.size else 0.0
    if scale == 0.0:
        return True
    return bool(np.max(spec[k > n], initial=0.0) <= rtol * scale)


@dataclass(frozen=True)
class InverseReport:
    """Inverse estimate ``ω_G(f, 2π/n) <= C n^{-1} Σ_{k<=n} E_k[f]``.

    ``rhs_lower`` averages certified lower bounds on ``E_k`` so a large
    ``ratio_lower`` is a meaningful violation signal; ``rhs_upper`` averages
    solver values. For trigonometric polynomials the right side vanishes and
    the violation check is suppressed (``polynomial=True``).
    """

    f_name: str
    n: int
    lhs: float
    rhs_lower: float
    rhs_upper: float
    ratio_lower: float
    ratio_upper: float
    polynomial: bool
    lower_bounds: np.ndarray = field(repr=False)

    def to_row(self) -> tuple:
        return (self.f_name, self.n, self.lhs, self.rhs_lower, self.rhs_upper, self.ratio_lower, self.ratio_upper, self.polynomial)


def inverse_estimate(
    f: PeriodicFunction,
    n: int,
    psi: PsiFunction,
    grid: PGrid | None = None,
    *,
    with_upper: bool = False,
    lower_bounds: Mapping[int, float] | None = None,
    upper_values: Mapping[int, float] | None = None,
) -> InverseReport:
    """Both sides of the inverse estimate for ``1 <= n <= 32``.

    ``lower_bounds`` / ``upper_values`` may supply already computed
    ``E_k`` brackets (keyed by ``k``) to share work across a sweep of ``n``.
    """
    n = check_int(n, "n", minimum=1, maximum=32)
    grid = PGrid.for_psi(psi) if grid is None else grid
    lhs = modulus(f, TWO_PI / n, NormSpec.gls(psi, grid))
    lows = dict(lower_bounds or {})
    ups = dict(upper_values or {})
    prev = None
    for k in range(1, n + 1):
        if k not in lows:
            lows[k] = supinf_lower_bound(f, k, psi, grid)[0]
        if with_upper and k not in ups:
            sol = best_approx_gls(f, k, psi, grid, start=prev, lower=False)
            prev = sol.minimizer
            ups[k] = sol.value
    lower_arr = np.array([lows[k] for k in range(1, n + 1)])
    rhs_lower = float(np.mean(lower_arr))
    rhs_upper = float(np.mean([ups[k] for k in range(1, n + 1)])) if with_upper else math.nan
    polynomial = is_trig_polynomial(f, n)
    ratio_lower = lhs / rhs_lower if rhs_lower > 0 else math.inf
    ratio_upper = lhs / rhs_upper if with_upper and rhs_upper > 0 else math.nan
    return InverseReport(f.name, n, lhs, rhs_lower, rhs_upper, ratio_lower, ratio_upper, polynomial, lower_arr)


def vp_bound(f: PeriodicFunction, n: int, psi: PsiFunction, grid: PGrid | None = None) -> RatioReport:
    """Vallée Poussin bound ``||f - V_n∗f|| <= C E_{n/2}[f]`` in ``G(ψ)``, ``n`` even.

    The report's bracket holds the certified range of ``E_{n/2}``; ``rhs`` is
    the solver value.
    """
    n = check_int(n, "n", minimum=2)
    if n % 2:
        raise ValueError(f"n must be even, got {n}")
    grid = PGrid.for_psi(psi) if grid is None else grid
    lhs = gls_norm(f - convolve(f, kernel_build("vallee_poussin", n)), psi, grid).value
    best = best_approx_gls(f, n // 2, psi, grid)
    scale = float(np.max(np.abs(f.samples)))
    ratio = _ratio(lhs, best.value, scale, "vp_bound") if best.value > 1e-12 * max(1.0, scale) or lhs > 1e-9 else 0.0
    return RatioReport(f.name, n, f"G[{psi.label}]", lhs, best.value, ratio, best.lower, best.value, best.status)


# ---------------------------------------------------------------------------
# approximability diagnostic


@dataclass(frozen=True)
class TADiagnostic:
    """Outcome of :func:`ta_diagnostic`.

    ``decay`` is ``"decay"``, ``"plateau"`` or ``"undetermined"``;
    ``verdict`` is ``"TA"``, ``"not-TA"`` or ``"inconclusive"``;
    ``disagreement`` marks decisive but contradictory signals.
    """

    verdict: str
    decay: str
    membership: Membership
    ns: np.ndarray
    errors: np.ndarray
    lowers: np.ndarray
    tail_slope: float
    disagreement: bool
    pmax_used: float

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "decay": self.decay,
            "membership": self.membership.value,
            "ns": self.ns.tolist(),
            "errors": self.errors.tolist(),
            "lowers": self.lowers.tolist(),
            "tail_slope": self.tail_slope,
            "disagreement": self.disagreement,
            "pmax_used": self.pmax_used,
        }


@dataclass(frozen=True)
class DecayThresholds:
    """Thresholds on ``E_n / E_1`` and on the log-log slope of ``E_n``.

    ``decay_fraction`` and ``plateau_fraction`` compare the last error with
    the first. Over a finite range of ``n`` slowly decaying sequences are
    also judged by the slope of ``ln E_n`` against ``ln n`` over the last
    ``slope_points`` degrees.
    """

    decay_fraction: float = 0.05
    plateau_fraction: float = 0.5
    decay_slope: float = -0.25
    flat_slope: float = -0.1
    slope_points: int = 3


def ta_diagnostic(
    f: PeriodicFunction,
    psi: PsiFunction,
    grid: PGrid | None = None,
    n_max: int = 64,
    thresholds: TrendThresholds = TrendThresholds(),
    decay: DecayThresholds = DecayThresholds(),
) -> TADiagnostic:
    """Cross-check approximability against G° membership.

    ``E_n[f]`` is computed for ``n = 1, 2, 4, ..., n_max`` on the same
    exponent grid that :func:`go_membership` uses (clipped to
    ``f.p_reliable``). The decay signal reads ``decay`` when the last error is
    below ``decay_fraction`` of the first or the tail slope is at most
    ``decay_slope``; ``plateau`` when it stays above ``plateau_fraction`` and
    the slope exceeds ``flat_slope``. ``TA`` needs decay and in-Go, ``not-TA``
    needs a plateau and not-in-Go; anything else is inconclusive.
    """
    grid = PGrid.for_psi(psi) if grid is None else grid
    n_max = check_int(n_max, "n_max", minimum=1, maximum=f.grid.size // 4)
    membership = go_membership(f, psi, grid, thresholds)
    ns = [1]
    while ns[-1] * 2 <= n_max:
        ns.append(ns[-1] * 2)
    errors, lowers = [], []
    prev = None
    for n in ns:
        sol = best_approx_gls(f, n, psi, grid, start=prev, lower=False)
        prev = sol.minimizer
        errors.append(sol.value)
        lowers.append(sol.dual_lower)
    errors = np.array(errors)
    lowers = np.array(lowers)
    ns_arr = np.array(ns)
    first, last = errors[0], errors[-1]
    if first == 0.0:
        signal, slope = "decay", -math.inf
    else:
        k = min(decay.slope_points, len(ns))
        tail = errors[-k:]
        if np.any(tail <= 0):
            slope = -math.inf
        elif k >= 2:
            slope = float(np.polyfit(np.log(ns_arr[-k:]), np.log(tail), 1)[0])
        else:
            slope = 0.0
        if last < decay.decay_fraction * first or slope <= decay.decay_slope:
            signal = "decay"
        elif last >= decay.plateau_fraction * first and slope > decay.flat_slope:
            signal = "plateau"
        else:
            signal = "undetermined"
    if signal == "decay" and membership.verdict is Membership.IN_GO:
        verdict = "TA"
    elif signal == "plateau" and membership.verdict is Membership.NOT_IN_GO:
        verdict = "not-TA"
    else:
        verdict = "inconclusive"
    disagreement = (signal == "decay" and membership.verdict is Membership.NOT_IN_GO) or (
        signal == "plateau" and membership.verdict is Membership.IN_GO
    )
    return TADiagnostic(verdict, signal, membership.verdict, ns_arr, errors, lowers, slope, disagreement, grid.pmax)
