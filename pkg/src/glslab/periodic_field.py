"""Sampled 2π-periodic functions on a uniform grid.

Integrals use the normalized measure ``dμ = dx / 2π`` and the periodic
trapezoid rule, so every grid point carries weight ``1/N``. Fourier
coefficients follow the same normalization,

    c_k = ∫ f(x) exp(-ikx) dμ(x),

and are obtained from the FFT with a phase correction for the grid offset.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from ._validation import check_int, check_real, check_vector, is_power_of_two

TWO_PI = 2.0 * math.pi

__all__ = [
    "PeriodicGrid",
    "PeriodicFunction",
    "TrigPolynomial",
    "CATALOG",
    "sample_catalog",
    "parse_catalog_entry",
    "holder_coefficients",
    "quadrature_reliable_p",
    "lp_norm",
    "lp_norms",
    "sup_norm",
    "translate",
    "derivative",
    "fourier_truncate",
    "fourier_coefficients",
    "convolve",
    "arc_indicator",
]


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform grid ``x_j = offset + 2πj/N`` on one period.

    Parameters
    ----------
    size : int
        Number of points ``N``; a power of two, at least 8.
    offset : float
        Shift of the first point, in ``[0, 2π/N)``.
    """

    size: int = 1024
    offset: float = 0.0

    def __post_init__(self):
        size = check_int(self.size, "size", minimum=8)
        if not is_power_of_two(size):
            raise ValueError(f"size must be a power of two, got {size}")
        offset = check_real(self.offset, "offset", lower=0.0, upper=TWO_PI / size, upper_open=True)
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "offset", offset)

    @classmethod
    def midpoint(cls, size: int = 1024) -> "PeriodicGrid":
        """Grid shifted by half a cell, so no point lands on ``x = 0``."""
        return cls(size, math.pi / size)

    @property
    def step(self) -> float:
        return TWO_PI / self.size

    @property
    def points(self) -> np.ndarray:
        return self.offset + self.step * np.arange(self.size)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Integer wavenumbers in FFT order (``0, 1, ..., -1``)."""
        return np.fft.fftfreq(self.size, 1.0 / self.size)

    def max_degree(self) -> int:
        """Largest ``n`` with ``2n + 1 <= N``."""
        return (self.size - 1) // 2


@dataclass(frozen=True, eq=False)
class PeriodicFunction:
    """Samples of a real 2π-periodic function on a :class:`PeriodicGrid`.

    Attributes
    ----------
    grid : PeriodicGrid
    samples : ndarray
        Real, finite, length ``grid.size``. The array is made read-only.
    name : str
        Label used in reports.
    p_reliable : float
        Largest exponent for which grid quadrature of ``|f|^p`` is trusted.
        ``inf`` for bounded functions; finite for catalog members with an
        integrable singularity.
    """

    grid: PeriodicGrid
    samples: np.ndarray
    name: str = "f"
    p_reliable: float = math.inf

    def __post_init__(self):
        if not isinstance(self.grid, PeriodicGrid):
            raise TypeError("grid must be a PeriodicGrid")
        samples = check_vector(self.samples, "samples", length=self.grid.size)
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "p_reliable", float(self.p_reliable))

    def __len__(self) -> int:
        return self.grid.size

    def with_name(self, name: str) -> "PeriodicFunction":
        return PeriodicFunction(self.grid, self.samples, name, self.p_reliable)

    def _combine(self, other, op, symbol):
        if isinstance(other, PeriodicFunction):
            if other.grid != self.grid:
                raise ValueError("functions live on different grids")
            rel = min(self.p_reliable, other.p_reliable)
            return PeriodicFunction(self.grid, op(self.samples, other.samples), f"({self.name}{symbol}{other.name})", rel)
        value = check_real(other, "scalar")
        return PeriodicFunction(self.grid, op(self.samples, value), f"({self.name}{symbol}{value:g})", self.p_reliable)

    def __add__(self, other):
        return self._combine(other, np.add, "+")

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, np.subtract, "-")

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PeriodicFunction):
            raise TypeError("pointwise products of sampled functions are not supported")
        value = check_real(other, "scalar")
        return PeriodicFunction(self.grid, self.samples * value, f"{value:g}*{self.name}", self.p_reliable)

    __rmul__ = __mul__

    def __truediv__(self, other):
        value = check_real(other, "scalar")
        if value == 0:
            raise ZeroDivisionError("division of a function by zero")
        return self * (1.0 / value)

    def __neg__(self):
        return PeriodicFunction(self.grid, -self.samples, f"-{self.name}", self.p_reliable)

    def spectrum(self) -> np.ndarray:
        """Fourier coefficients ``c_k`` in FFT order (aliased onto ``|k| <= N/2``)."""
        k = self.grid.wavenumbers
        return np.fft.fft(self.samples) / self.grid.size * np.exp(-1j * k * self.grid.offset)

    def mean(self) -> float:
        return float(np.mean(self.samples))


@dataclass(frozen=True, eq=False)
class TrigPolynomial:
    """Real trigonometric polynomial ``Σ_{|k|<=n} c_k exp(ikx)``.

    Parameters
    ----------
    coefficients : array_like of complex, length ``2n + 1``
        Entry ``j`` holds ``c_{j-n}``. Conjugate symmetry ``c_{-k} = conj(c_k)``
        is checked to a relative tolerance of ``1e-10`` and then enforced
        exactly, so evaluation is real.
    """

    coefficients: np.ndarray

    def __post_init__(self):
        coef = np.array(self.coefficients, dtype=complex, copy=True)
        if coef.ndim != 1 or coef.size % 2 == 0:
            raise ValueError("coefficients must be a 1-D vector of odd length 2n+1")
        if not np.all(np.isfinite(coef)):
            raise ValueError("coefficients must be finite")
        mirrored = np.conj(coef[::-1])
        scale = max(1.0, float(np.max(np.abs(coef))))
        if np.max(np.abs(coef - mirrored)) > 1e-10 * scale:
            raise ValueError("coefficients are not conjugate-symmetric; the polynomial would not be real")
        coef = 0.5 * (coef + mirrored)
        coef.setflags(write=False)
        object.__setattr__(self, "coefficients", coef)

    @property
    def degree(self) -> int:
        return (self.coefficients.size - 1) // 2

    @classmethod
    def zero(cls, n: int = 0) -> "TrigPolynomial":
        return cls(np.zeros(2 * check_int(n, "n", minimum=0) + 1, dtype=complex))

    @classmethod
    def from_real(cls, a0: float, a=(), b=()) -> "TrigPolynomial":
        """Build ``a0 + Σ a_k cos(kx) + b_k sin(kx)``."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if a.shape != b.shape or a.ndim != 1:
            raise ValueError("cosine and sine coefficient vectors must have equal 1-D shapes")
        positive = 0.5 * (a - 1j * b)
        return cls(np.concatenate([np.conj(positive[::-1]), [complex(a0)], positive]))

    @classmethod
    def from_parameters(cls, theta: np.ndarray) -> "TrigPolynomial":
        """Inverse of :meth:`to_parameters`."""
        theta = np.asarray(theta, dtype=float)
        n = (theta.size - 1) // 2
        return cls.from_real(theta[0], theta[1 : n + 1], theta[n + 1 :])

    def to_real(self) -> tuple[float, np.ndarray, np.ndarray]:
        """Return ``(a0, a, b)`` with ``a_k = 2 Re c_k`` and ``b_k = -2 Im c_k``."""
        n = self.degree
        positive = self.coefficients[n + 1 :]
        return float(self.coefficients[n].real), 2.0 * positive.real, -2.0 * positive.imag

    def to_parameters(self) -> np.ndarray:
        """Real parameter vector ``[a0, a_1..a_n, b_1..b_n]``."""
        a0, a, b = self.to_real()
        return np.concatenate([[a0], a, b])

    def coefficient(self, k: int) -> complex:
        n = self.degree
        return complex(self.coefficients[k + n]) if abs(k) <= n else 0j

    def padded(self, n: int) -> "TrigPolynomial":
        """Same polynomial written with degree ``n >= self.degree``."""
        extra = check_int(n, "n", minimum=self.degree) - self.degree
        return TrigPolynomial(np.pad(self.coefficients, extra))

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        n = self.degree
        k = np.arange(1, n + 1)
        positive = self.coefficients[n + 1 :]
        phases = np.exp(1j * np.multiply.outer(x, k))
        return self.coefficients[n].real + 2.0 * np.real(phases @ positive)

    def multiplier(self, grid: PeriodicGrid) -> np.ndarray:
        """Coefficients laid out in FFT order on ``grid`` (zero outside the band)."""
        n = self.degree
        if 2 * n + 1 > grid.size:
            raise ValueError(f"degree {n} is not representable on a grid of size {grid.size}")
        out = np.zeros(grid.size, dtype=complex)
        ks = np.arange(-n, n + 1)
        out[ks % grid.size] = self.coefficients
        return out

    def sample(self, grid: PeriodicGrid, name: str = "T") -> PeriodicFunction:
        spec = self.multiplier(grid) * np.exp(1j * grid.wavenumbers * grid.offset)
        return PeriodicFunction(grid, np.real(np.fft.ifft(spec)) * grid.size, name)

    def __add__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        n = max(self.degree, other.degree)
        return TrigPolynomial(self.padded(n).coefficients + other.padded(n).coefficients)

    def __sub__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        n = max(self.degree, other.degree)
        return TrigPolynomial(self.padded(n).coefficients - other.padded(n).coefficients)

    def __mul__(self, scalar: float) -> "TrigPolynomial":
        return TrigPolynomial(self.coefficients * check_real(scalar, "scalar"))

    __rmul__ = __mul__


# ---------------------------------------------------------------------------
# catalog


def holder_coefficients(alpha: float, n: int) -> np.ndarray:
    """Exact Fourier coefficients ``c_0..c_n`` of ``|sin(x/2)|^alpha``.

    Uses ``c_0 = Γ(α+1) / (2^α Γ(1+α/2)^2)`` and the ratio
    ``c_k / c_{k-1} = (k - 1 - α/2) / (k + α/2)``.
    """
    alpha = check_real(alpha, "alpha", lower=0.0, lower_open=True)
    n = check_int(n, "n", minimum=0)
    c0 = math.exp(gammaln(alpha + 1.0) - alpha * math.log(2.0) - 2.0 * gammaln(1.0 + alpha / 2.0))
    k = np.arange(1, n + 1, dtype=float)
    ratios = (k - 1.0 - alpha / 2.0) / (k + alpha / 2.0)
    return c0 * np.concatenate([[1.0], np.cumprod(ratios)])


def quadrature_reliable_p(name: str, params: dict, size: int) -> float:
    """Largest exponent for which grid quadrature of a catalog member is trusted.

    ``singular(gamma)`` is integrable only for ``p < 1/gamma``; the bound
    ``0.9/gamma`` keeps a margin. For ``logsing(s)`` the midpoint grid misses
    the logarithmic peak, and the relative error of ``|f|_p`` stays at the
    percent level up to ``p ≈ (ln(N/2π) - 2)/s``.
    """
    if name == "singular":
        return 0.9 / params["gamma"]
    if name == "logsing":
        return max(1.0, (math.log(size / TWO_PI) - 2.0) / params["s"])
    return math.inf


def _arc_mask(grid: PeriodicGrid, delta: float, start: float) -> np.ndarray:
    # Distance from the arc start measured in grid cells; a tiny slack keeps
    # lengths that are exact multiples of the step from gaining a point.
    cells = np.mod(grid.points - start, TWO_PI) / grid.step
    return cells < delta / grid.step - 1e-9


def arc_indicator(grid: PeriodicGrid, delta: float, start: float = 0.0) -> PeriodicFunction:
    """Indicator of the arc ``[start, start + delta)`` resolved to grid cells."""
    delta = check_real(delta, "delta", lower=0.0, upper=TWO_PI)
    start = check_real(start, "start")
    return PeriodicFunction(grid, _arc_mask(grid, delta, start).astype(float), f"arc({delta:g})")


def _holder_smooth(grid: PeriodicGrid, alpha: float, degree: int) -> np.ndarray:
    if 2 * degree + 1 > grid.size:
        raise ValueError(f"degree {degree} is too large for a grid of size {grid.size}")
    c = holder_coefficients(alpha, degree) * (1.0 - np.arange(degree + 1) / (degree + 1.0))
    return TrigPolynomial(np.concatenate([c[:0:-1], c])).sample(grid).samples


def _log_singularity(x: np.ndarray, s: float) -> np.ndarray:
    base = -np.log(np.abs(2.0 * np.sin(x / 2.0)))
    return np.maximum(base, 0.0) ** s


# name -> (parameter names with defaults, validator, sampler, growth note)
CATALOG: dict[str, dict] = {
    "constant": {
        "params": {"c": 1.0},
        "growth": "constant: |f|_p = |c| for every p",
    },
    "cosk": {
        "params": {"k": 1},
        "growth": "cosk(k): cos(kx), bounded, |f|_p -> 1 as p -> inf",
    },
    "holder": {
        "params": {"alpha": 1.0},
        "growth": "holder(alpha): |sin(x/2)|^alpha, bounded, Hoelder of order alpha",
    },
    "holder_smooth": {
        "params": {"alpha": 1.0, "degree": 32},
        "growth": "holder_smooth(alpha, degree): Fejer mean of holder(alpha), a trig polynomial",
    },
    "singular": {
        "params": {"gamma": 0.5},
        "growth": "singular(gamma): |2 sin(x/2)|^-gamma, support endpoint b = 1/gamma",
    },
    "logsing": {
        "params": {"s": 0.5},
        "growth": "logsing(s): |f|_p ≍ c·p^s",
    },
    "step": {
        "params": {"delta": math.pi, "start": 0.0},
        "growth": "step(delta): arc indicator, |f|_p = (delta/2π)^(1/p)",
    },
}

_SINGULAR = {"singular", "logsing"}


def _resolve_params(name: str, params: dict | None) -> dict:
    if name not in CATALOG:
        raise ValueError(f"unknown catalog function {name!r}; choose from {sorted(CATALOG)}")
    defaults = CATALOG[name]["params"]
    params = dict(params or {})
    unknown = set(params) - set(defaults)
    if unknown:
        raise ValueError(f"unknown parameters {sorted(unknown)} for {name}")
    merged = {**defaults, **params}
    if name == "constant":
        merged["c"] = check_real(merged["c"], "c")
    elif name == "cosk":
        merged["k"] = check_int(merged["k"], "k", minimum=0)
    elif name in ("holder", "holder_smooth"):
        merged["alpha"] = check_real(merged["alpha"], "alpha", lower=0.0, upper=1.0, lower_open=True)
        if name == "holder_smooth":
            merged["degree"] = check_int(merged["degree"], "degree", minimum=0)
    elif name == "singular":
        merged["gamma"] = check_real(merged["gamma"], "gamma", lower=0.0, upper=1.0, lower_open=True, upper_open=True)
    elif name == "logsing":
        merged["s"] = check_real(merged["s"], "s", lower=0.0, lower_open=True)
    elif name == "step":
        merged["delta"] = check_real(merged["delta"], "delta", lower=0.0, upper=TWO_PI)
        merged["start"] = check_real(merged["start"], "start")
    return merged


def _label(name: str, params: dict) -> str:
    inner = ",".join(f"{v:g}" if isinstance(v, float) else str(v) for v in params.values())
    return f"{name}({inner})"


def sample_catalog(name: str, params: dict | None = None, grid: PeriodicGrid | None = None) -> PeriodicFunction:
    """Sample a named catalog function.

    Parameters
    ----------
    name : str
        One of ``constant``, ``cosk``, ``holder``, ``holder_smooth``,
        ``singular``, ``logsing``, ``step``.
    params : dict, optional
        Parameter overrides; see ``CATALOG[name]["params"]`` for names and defaults.
    grid : PeriodicGrid, optional
        Defaults to ``N = 1024``. Members with a point singularity at ``x = 0``
        get the midpoint grid automatically when ``grid`` is omitted.

    Returns
    -------
    PeriodicFunction

    Raises
    ------
    ValueError
        Unknown name, parameter out of range, or a singular member requested
        on a grid whose offset is 0.

    Examples
    --------
    >>> f = sample_catalog("cosk", {"k": 1}, PeriodicGrid(8))
    >>> bool(np.allclose(f.samples, np.cos(2 * np.pi * np.arange(8) / 8)))
    True
    """
    params = _resolve_params(name, params)
    if grid is None:
        grid = PeriodicGrid.midpoint() if name in _SINGULAR else PeriodicGrid()
    if name in _SINGULAR and grid.offset == 0.0:
        raise ValueError(f"{name} is singular at x=0; use a grid with positive offset (PeriodicGrid.midpoint)")
    x = grid.points
    if name == "constant":
        samples = np.full(grid.size, params["c"])
    elif name == "cosk":
        samples = np.cos(params["k"] * x)
    elif name == "holder":
        samples = np.abs(np.sin(x / 2.0)) ** params["alpha"]
    elif name == "holder_smooth":
        samples = _holder_smooth(grid, params["alpha"], params["degree"])
    elif name == "singular":
        samples = np.abs(2.0 * np.sin(x / 2.0)) ** (-params["gamma"])
    elif name == "logsing":
        samples = _log_singularity(x, params["s"])
    else:
        samples = _arc_mask(grid, params["delta"], params["start"]).astype(float)
    return PeriodicFunction(grid, samples, _label(name, params), quadrature_reliable_p(name, params, grid.size))


_ENTRY = re.compile(r"^\s*([a-z_]+)\s*(?:\((.*)\))?\s*$")


def parse_catalog_entry(text: str) -> tuple[str, dict]:
    """Parse ``"name(v1, key=v2)"`` into ``(name, params)``.

    Positional values fill parameters in catalog order.

    >>> parse_catalog_entry("logsing(0.5)")
    ('logsing', {'s': 0.5})
    """
    match = _ENTRY.match(text)
    if match is None:
        raise ValueError(f"cannot parse catalog entry {text!r}")
    name, inner = match.group(1), match.group(2)
    if name not in CATALOG:
        raise ValueError(f"unknown catalog function {name!r}")
    names = list(CATALOG[name]["params"])
    params: dict = {}
    if inner and inner.strip():
        for pos, item in enumerate(part.strip() for part in inner.split(",")):
            key, sep, raw = item.partition("=")
            if sep:
                key, raw = key.strip(), raw.strip()
            else:
                if pos >= len(names):
                    raise ValueError(f"too many parameters in {text!r}")
                key, raw = names[pos], item
            default = CATALOG[name]["params"].get(key)
            params[key] = int(raw) if isinstance(default, int) and not isinstance(default, bool) else float(raw)
    return name, _resolve_params(name, params) if params else {}


# ---------------------------------------------------------------------------
# norms and spectral operations


def lp_norms(f: PeriodicFunction, ps) -> np.ndarray:
    """``|f|_p`` for every exponent in ``ps`` (``inf`` gives the sup norm).

    Computed as ``M (mean((|f|/M)^p))^(1/p)`` with ``M = max|f|`` so large
    exponents do not overflow.
    """
    ps = np.atleast_1d(np.asarray(ps, dtype=float))
    if np.any(np.isnan(ps)) or np.any(ps < 1.0):
        raise ValueError("exponents must satisfy p >= 1")
    peak = float(np.max(np.abs(f.samples)))
    if peak == 0.0:
        return np.zeros(ps.shape)
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(f.samples) / peak)
    out = np.full(ps.shape, peak)
    finite = np.isfinite(ps)
    if np.any(finite):
        p = ps[finite]
        powered = np.exp(np.multiply.outer(p, logs))
        out[finite] = peak * np.mean(powered, axis=-1) ** (1.0 / p)
    return out


def lp_norm(f: PeriodicFunction, p: float) -> float:
    """``(∫|f|^p dμ)^(1/p)`` by the periodic trapezoid rule.

    Raises
    ------
    ValueError
        If ``p < 1``.
    """
    p = check_real(p, "p", lower=1.0, allow_inf=True)
    return float(lp_norms(f, [p])[0])


def sup_norm(f: PeriodicFunction) -> float:
    return float(np.max(np.abs(f.samples)))


def translate(f: PeriodicFunction, t: float) -> PeriodicFunction:
    """Return ``x ↦ f(x - t)``.

    Shifts by whole grid cells are exact index rolls; other shifts multiply
    the spectrum by ``exp(-ikt)``, which is exact for band-limited ``f``.
    ``t = 0`` returns ``f`` itself.
    """
    t = check_real(t, "t")
    if t == 0.0:
        return f
    cells = t / f.grid.step
    whole = round(cells)
    if abs(cells - whole) <= 1e-12 * max(1.0, abs(cells)):
        samples = np.roll(f.samples, int(whole) % f.grid.size)
    else:
        phase = np.exp(-1j * f.grid.wavenumbers * t)
        samples = np.real(np.fft.ifft(np.fft.fft(f.samples) * phase))
    return PeriodicFunction(f.grid, samples, f.name, f.p_reliable)


def derivative(f: PeriodicFunction, r: int) -> PeriodicFunction:
    """Spectral derivative of order ``r``: ``c_k ↦ (ik)^r c_k``.

    For odd ``r`` the Nyquist coefficient is dropped, since its derivative is
    not real.
    """
    r = check_int(r, "r", minimum=0)
    if r == 0:
        return f
    k = f.grid.wavenumbers
    factor = (1j * k) ** r
    if r % 2 == 1:
        factor[f.grid.size // 2] = 0.0
    samples = np.real(np.fft.ifft(np.fft.fft(f.samples) * factor))
    return PeriodicFunction(f.grid, samples, f"D{r}{f.name}", f.p_reliable)


def fourier_coefficients(f: PeriodicFunction, n: int) -> np.ndarray:
    """Coefficients ``c_{-n}..c_n`` of ``f`` (aliased grid values)."""
    n = check_int(n, "n", minimum=0)
    if 2 * n + 1 > f.grid.size:
        raise ValueError(f"degree {n} too large for grid of size {f.grid.size} (need 2n+1 <= N)")
    spec = f.spectrum()
    return spec[np.arange(-n, n + 1) % f.grid.size]


def fourier_truncate(f: PeriodicFunction, n: int) -> TrigPolynomial:
    """Partial Fourier sum ``S_n f`` as a :class:`TrigPolynomial`."""
    return TrigPolynomial(fourier_coefficients(f, n))


def convolve(f: PeriodicFunction, kernel: TrigPolynomial) -> PeriodicFunction:
    """``(k ∗ f)(x) = ∫ f(x - t) k(t) dμ(t)``, computed coefficient-wise."""
    weights = kernel.multiplier(f.grid)
    samples = np.real(np.fft.ifft(np.fft.fft(f.samples) * weights))
    label = getattr(kernel, "label", "K")
    return PeriodicFunction(f.grid, samples, f"{label}*{f.name}")
