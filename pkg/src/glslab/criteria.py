"""Acceptance criteria as executable checks.

Each ``criterion_*`` function runs one numbered check on the settings of an
:class:`~glslab.config.ExperimentConfig` and returns a
:class:`CriterionResult` carrying the measured quantities, the verdict and
the tables behind it. Runtime budgets are part of each verdict.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .config import ExperimentConfig
from .orlicz_bridge import (
    ConvexSamples,
    equivalence_scan,
    interpolation_tolerance,
    legendre,
    orlicz_from_psi,
    psi_from_orlicz,
    tail_bound_check,
)
from .periodic_field import (
    CATALOG,
    TWO_PI,
    PeriodicGrid,
    arc_indicator,
    convolve,
    sample_catalog,
    translate,
)
from .psi_space import (
    Membership,
    PGrid,
    fundamental_function,
    fundamental_function_asymptotic,
    gls_norm,
    go_membership,
    make_psi,
    natural_psi,
)
from .sobolev_gls import intermediate_check, thm31_check
from .trig_approx import (
    NormSpec,
    best_approx_gls,
    best_approx_lp,
    inverse_estimate,
    jackson_direct,
    kernel_build,
    modulus,
    supinf_lower_bound,
    ta_diagnostic,
)

__all__ = ["Table", "CriterionResult", "CRITERIA", "run_criterion", "run_criteria"]


@dataclass(frozen=True)
class Table:
    """Rows of one CSV table; ``key`` columns define the row order."""

    name: str
    header: tuple
    rows: list
    key: tuple = (0,)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    measured: dict
    threshold: str
    runtime: float = 0.0
    budget: float = math.inf
    detail: str = ""
    tables: list = field(default_factory=list)

    @property
    def within_budget(self) -> bool:
        return self.runtime < self.budget

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        values = ", ".join(f"{k}={_short(v)}" for k, v in self.measured.items())
        return f"[{status}] criterion {self.number:02d} {self.name}: {values} (need {self.threshold}; {self.runtime:.1f}s of {self.budget:g}s)"

    def to_dict(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.passed,
            "measured": {k: _jsonable(v) for k, v in self.measured.items()},
            "threshold": self.threshold,
            "runtime_s": round(self.runtime, 3),
            "budget_s": self.budget,
            "detail": self.detail,
            "tables": [t.name for t in self.tables],
        }


def _short(v) -> str:
    if isinstance(v, float):
        return f"{v:.4g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_short(x) for x in v) + "]"
    return str(v)


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def _psi2():
    return make_psi("psi_m", m=2)


def _pgrid(cfg: ExperimentConfig, psi) -> PGrid:
    return PGrid.for_psi(psi, count=cfg.p_count, pmax=cfg.p_max)


def _grid_for(name: str, size: int) -> PeriodicGrid:
    return PeriodicGrid.midpoint(size) if name in ("singular", "logsing") else PeriodicGrid(size)


def _discrete_fourier_tail(samples: np.ndarray, n: int) -> float:
    """``(Σ_{|k|>n} |c_k|^2)^(1/2)`` over the FFT bins of the samples."""
    c = np.fft.fft(samples) / samples.size
    k = np.abs(np.fft.fftfreq(samples.size, 1.0 / samples.size))
    return float(np.sqrt(np.sum(np.abs(c[k > n]) ** 2)))


# ---------------------------------------------------------------------------


def criterion_1(cfg: ExperimentConfig) -> CriterionResult:
    tol = cfg.tolerance("parseval_abs")
    grid = PeriodicGrid(cfg.grid_size)
    members = [("cosk", {"k": 1}), ("holder", {"alpha": 1.0}), ("holder_smooth", {"alpha": 1.0, "degree": 32})]
    rows, worst = [], 0.0
    for name, params in members:
        f = sample_catalog(name, params, grid)
        for n in (2, 4, 8, 16, 32):
            value = best_approx_lp(f, n, 2.0).value
            oracle = _discrete_fourier_tail(f.samples, n)
            err = abs(value - oracle)
            worst = max(worst, err)
            rows.append((f.name, n, value, oracle, err))
    return CriterionResult(
        1,
        "L2 best approximation equals the Fourier tail",
        worst <= tol,
        {"max_abs_error": worst},
        f"max_abs_error <= {tol:g}",
        budget=5.0,
        tables=[Table("parseval", ("f", "n", "E_n_L2", "fourier_tail", "abs_error"), rows, (0, 1))],
    )


def criterion_2(cfg: ExperimentConfig) -> CriterionResult:
    spread_tol, sup_tol = cfg.tolerance("jackson_spread"), cfg.tolerance("jackson_sup")
    f = sample_catalog("holder", {"alpha": 1.0}, PeriodicGrid(cfg.grid_size))
    rows, finite, sup_rows = [], [], []
    for p in (1.0, 2.0, 4.0, 8.0, 16.0, math.inf):
        for n in range(4, 65):
            rep = jackson_direct(f, n, p)
            rows.append((rep.norm_label, n, rep.lhs, rep.rhs, rep.ratio))
            (sup_rows if math.isinf(p) else finite).append(rep.ratio)
    finite = np.array(finite)
    spread = float(finite.max() / finite.min())
    sup_max = float(max(sup_rows))
    return CriterionResult(
        2,
        "Jackson direct estimate for holder(1)",
        spread < spread_tol and sup_max <= sup_tol,
        {"ratio_spread_p<=16": spread, "sup_ratio_max": sup_max},
        f"spread < {spread_tol:g} and sup ratio <= {sup_tol:g}",
        budget=30.0,
        tables=[Table("jackson_direct", ("norm", "n", "lhs", "rhs", "ratio"), rows, (0, 1))],
    )


def criterion_3(cfg: ExperimentConfig) -> CriterionResult:
    psi2 = _psi2()
    p75 = make_psi("power", exponent=0.75)
    cases = [
        ("holder", {"alpha": 1.0}, psi2, "TA"),
        ("logsing", {"s": 0.5}, psi2, "not-TA"),
        ("logsing", {"s": 0.5}, p75, "TA"),
    ]
    rows, outcomes, ok = [], [], True
    for name, params, psi, expected in cases:
        f = sample_catalog(name, params, _grid_for(name, cfg.grid_size))
        diag = ta_diagnostic(f, psi, _pgrid(cfg, psi), n_max=min(64, cfg.grid_size // 4))
        ok &= diag.verdict == expected
        outcomes.append(f"{f.name}/{psi.label}:{diag.verdict}")
        for n, e, lo in zip(diag.ns, diag.errors, diag.lowers):
            rows.append((f.name, psi.label, int(n), e, lo, diag.decay, diag.membership.value, diag.verdict, expected))
    return CriterionResult(
        3,
        "approximability agrees with G° membership",
        ok,
        {"verdicts": outcomes},
        "TA, not-TA, TA with no inconclusive case",
        budget=180.0,
        tables=[Table("ta_diagnostic", ("f", "psi", "n", "E_n", "dual_lower", "decay", "membership", "verdict", "expected"), rows, (0, 1, 2))],
    )


def criterion_4(cfg: ExperimentConfig) -> CriterionResult:
    tol = cfg.tolerance("inverse_spread")
    psi = _psi2()
    grid = _pgrid(cfg, psi)
    f = sample_catalog("holder", {"alpha": 1.0}, PeriodicGrid(cfg.grid_size))
    lows: dict = {}
    rows, ratios = [], []
    for n in (4, 8, 16, 32):
        rep = inverse_estimate(f, n, psi, grid, lower_bounds=lows)
        lows.update({k + 1: v for k, v in enumerate(rep.lower_bounds)})
        rows.append((n, rep.lhs, rep.rhs_lower, rep.ratio_lower))
        ratios.append(rep.ratio_lower)
    ratios = np.array(ratios)
    finite = bool(np.all(np.isfinite(ratios)) and np.all(ratios > 0))
    spread = float(ratios.max() / ratios.min()) if finite else math.inf
    return CriterionResult(
        4,
        "inverse estimate for holder(1)",
        finite and spread <= tol,
        {"ratios": ratios.tolist(), "spread": spread},
        f"finite ratios with spread <= {tol:g}",
        budget=180.0,
        tables=[Table("inverse_estimate", ("n", "modulus", "mean_lower_E_k", "ratio"), rows)],
    )


def criterion_5(cfg: ExperimentConfig) -> CriterionResult:
    abs_tol, rel_tol = cfg.tolerance("fundamental_abs"), cfg.tolerance("fundamental_rel")
    psi = _psi2()
    grid = _pgrid(cfg, psi)
    fine = PeriodicGrid(8192)
    rows, worst = [], 0.0
    for s in (1 / 8, 1 / 64, 1 / 512):
        closed = fundamental_function(psi, TWO_PI * s, grid)
        literal = gls_norm(arc_indicator(fine, TWO_PI * s), psi, grid).value
        worst = max(worst, abs(closed - literal))
        rows.append((s, closed, literal, abs(closed - literal)))
    s = 1e-6
    closed = fundamental_function(psi, TWO_PI * s, grid)
    asym = fundamental_function_asymptotic(2.0, s)
    rel = abs(closed - asym) / asym
    rows.append((s, closed, asym, abs(closed - asym)))
    return CriterionResult(
        5,
        "fundamental function",
        worst <= abs_tol and rel <= rel_tol,
        {"max_abs_diff": worst, "asymptotic_rel_diff": rel},
        f"abs diff <= {abs_tol:g}, asymptotic rel diff <= {rel_tol:g}",
        budget=10.0,
        tables=[Table("fundamental_function", ("s", "closed_form", "reference", "abs_diff"), rows)],
    )


def criterion_6(cfg: ExperimentConfig) -> CriterionResult:
    tol = cfg.tolerance("c3_spread")
    psi = _psi2()
    grid = _pgrid(cfg, psi)
    g = PeriodicGrid(cfg.grid_size)
    rows, spreads, inter_spreads = [], {}, {}
    for r in (0, 1, 2):
        c3, c36 = [], []
        for n in (4, 8, 16, 32, 64):
            f = sample_catalog("holder_smooth", {"alpha": 0.25, "degree": 2 * n}, g)
            rep = thm31_check(f, r, psi, n, grid=grid, s1=4.0)
            inter = intermediate_check(f, r, n, 2.0, 8.0)
            c3.append(rep.empirical_c3)
            c36.append(inter.ratio)
            rows.append((r, n, f.name, rep.lhs, rep.rhs_core, rep.empirical_c3, inter.lhs, inter.rhs, inter.ratio))
        spreads[r] = max(c3) / min(c3)
        inter_spreads[r] = max(c36) / min(c36)
    ok = all(v < tol for v in spreads.values()) and all(v < tol for v in inter_spreads.values())
    return CriterionResult(
        6,
        "smoothness bound through θ_n norms",
        ok,
        {"c3_spread": [spreads[r] for r in (0, 1, 2)], "intermediate_spread": [inter_spreads[r] for r in (0, 1, 2)]},
        f"every spread < {tol:g}",
        budget=120.0,
        tables=[
            Table(
                "theorem31",
                ("r", "n", "f", "lhs", "rhs_core", "empirical_C3", "lhs_2_8", "rhs_2_8", "ratio_2_8"),
                rows,
                (0, 1),
            )
        ],
    )


def _biconjugate_error(xs, fx, ys, region):
    f = ConvexSamples(xs, fx)
    g = legendre(f, ys)
    ff = legendre(g, xs)
    sub = ConvexSamples(xs[region], fx[region])
    tol = 2.0 * max(interpolation_tolerance(sub), interpolation_tolerance(g))
    return float(np.max(np.abs(ff.ys - fx)[region])), tol, g


def criterion_7(cfg: ExperimentConfig) -> CriterionResult:
    xs = np.linspace(-8.0, 8.0, 1601)
    ys = np.linspace(-4.0, 4.0, 801)
    err_q, tol_q, g = _biconjugate_error(xs, xs**2 / 2, ys, np.abs(xs) <= 4.0)
    conj_err = float(np.max(np.abs(g.ys - ys**2 / 2)))
    xe = np.linspace(-10.0, 10.0, 2001)
    ye = np.linspace(0.5, 20.0, 1951)
    err_e, tol_e, _ = _biconjugate_error(xe, np.exp(xe), ye, (xe >= math.log(0.5)) & (xe <= math.log(20.0)))
    rows = [("x^2/2", err_q, tol_q), ("exp", err_e, tol_e), ("conjugate x^2/2 vs y^2/2", conj_err, 1e-3)]
    return CriterionResult(
        7,
        "Fenchel–Moreau idempotence",
        err_q <= tol_q and err_e <= tol_e and conj_err <= 1e-3,
        {"biconj_err_quadratic": err_q, "tol_quadratic": tol_q, "biconj_err_exp": err_e, "tol_exp": tol_e, "conj_err": conj_err},
        "biconjugate errors within 2 interpolation tolerances, conjugate within 1e-3",
        budget=1.0,
        tables=[Table("fenchel_moreau", ("case", "error", "tolerance"), rows)],
    )


def _orlicz_members(size: int):
    return [
        sample_catalog("cosk", {"k": 1}, PeriodicGrid(size)),
        sample_catalog("holder", {"alpha": 1.0}, PeriodicGrid(size)),
        sample_catalog("logsing", {"s": 0.5}, PeriodicGrid.midpoint(size)),
        sample_catalog("logsing", {"s": 1.0}, PeriodicGrid.midpoint(size)),
    ]


def criterion_8(cfg: ExperimentConfig) -> CriterionResult:
    tol = cfg.tolerance("equivalence_spread")
    psi = _psi2()
    grid = _pgrid(cfg, psi)
    scan = equivalence_scan(_orlicz_members(cfg.grid_size), psi, grid)
    rows = [(name, r) for name, r in scan.ratios.items()]
    ok = scan.minimum >= 1e-2 and scan.maximum <= 1e2 and scan.spread <= tol
    return CriterionResult(
        8,
        "grand Lebesgue and Luxemburg norms are equivalent",
        ok,
        {"min_ratio": scan.minimum, "max_ratio": scan.maximum, "spread": scan.spread},
        f"ratios in [1e-2, 1e2], spread <= {tol:g}",
        budget=60.0,
        tables=[Table("orlicz_equivalence", ("f", "gls_over_luxemburg"), rows)],
    )


def criterion_9(cfg: ExperimentConfig) -> CriterionResult:
    f = sample_catalog("logsing", {"s": 0.5}, PeriodicGrid.midpoint(cfg.grid_size))
    grid = PGrid.for_support(math.inf, count=cfg.p_count, pmax=cfg.p_max)
    psi = natural_psi([f], grid)
    K = gls_norm(f, psi, grid).value
    levels = np.linspace(math.e * K, 10.0 * K, 2001)[1:]
    rep = tail_bound_check(f, psi, levels, grid)
    rows = list(zip(rep.levels, rep.tails, rep.bounds, rep.margins))
    return CriterionResult(
        9,
        "tail bound for self-normalized logsing(0.5)",
        (not rep.empty) and rep.holds,
        {"norm": K, "min_margin": rep.min_margin, "tolerance": rep.tolerance, "levels": int(rep.levels.size)},
        "every margin >= -2/N",
        budget=10.0,
        tables=[Table("tail_bound", ("level", "tail", "bound", "margin"), rows)],
    )


def criterion_10(cfg: ExperimentConfig) -> CriterionResult:
    tol = cfg.tolerance("roundtrip")
    psi = _psi2()
    grid = _pgrid(cfg, psi)
    back = psi_from_orlicz(orlicz_from_psi(psi, grid), pgrid=grid)
    p = grid.points
    diff = back.log(p) - psi.log(p)
    sel = (p >= 2.0) & (p <= 64.0)
    worst = float(np.max(np.abs(diff[sel])))
    where = float(p[sel][int(np.argmax(np.abs(diff[sel])))])
    rows = list(zip(p, psi.log(p), back.log(p), diff))
    return CriterionResult(
        10,
        "ψ → Orlicz generator → ψ roundtrip",
        worst <= tol,
        {"max_log_diff": worst, "at_p": where},
        f"max |Δ ln ψ| on [2, 64] <= {tol:g}",
        budget=5.0,
        tables=[Table("roundtrip", ("p", "ln_psi", "ln_psi_roundtrip", "diff"), rows)],
    )


def criterion_11(cfg: ExperimentConfig) -> CriterionResult:
    iso_tol, frac_tol = cfg.tolerance("isometry"), cfg.tolerance("modulus_fraction")
    psi = _psi2()
    grid = _pgrid(cfg, psi)
    g = PeriodicGrid(cfg.grid_size)
    # the translation group of the discrete measure: 100 distinct grid shifts
    shifts = TWO_PI * np.unique(np.round(np.arange(1, 101) * cfg.grid_size / 101.0)) / cfg.grid_size
    off_grid = np.mod(np.arange(1, 11) * TWO_PI * (math.sqrt(5.0) - 1.0) / 2.0, TWO_PI)
    iso_rows, worst_iso, worst_off = [], 0.0, 0.0
    for name in ("constant", "cosk", "holder_smooth"):
        f = sample_catalog(name, grid=g)
        base = gls_norm(f, psi, grid).value
        moved = np.array([gls_norm(translate(f, t), psi, grid).value for t in shifts])
        err = float(np.max(np.abs(moved - base)))
        off = float(np.max(np.abs([gls_norm(translate(f, t), psi, grid).value - base for t in off_grid])))
        worst_iso = max(worst_iso, err / max(base, 1.0))
        worst_off = max(worst_off, off / max(base, 1.0))
        iso_rows.append((f.name, base, err, off))
    spec = NormSpec.gls(psi, grid)
    mod_rows, fractions, decreasing = [], {}, {}
    lipschitz = {"constant", "cosk", "holder_smooth"}
    for name in CATALOG:
        if name == "singular":
            continue  # |f|_p is infinite beyond p = 1/gamma: not in G(psi) for b = inf
        f = sample_catalog(name, grid=_grid_for(name, cfg.grid_size))
        if go_membership(f, psi, grid).verdict is not Membership.IN_GO:
            continue
        w_pi = modulus(f, math.pi, spec)
        ws = []
        for n in (8, 32, 128):
            ws.append(modulus(f, TWO_PI / n, spec))
            mod_rows.append((f.name, n, ws[-1], w_pi))
        decreasing[f.name] = w_pi == 0.0 or bool(np.all(np.diff(ws) < 0))
        is_lipschitz = name in lipschitz or (name == "holder" and CATALOG[name]["params"]["alpha"] == 1.0)
        if is_lipschitz:
            fractions[f.name] = 0.0 if w_pi == 0.0 else ws[-1] / w_pi
    ok = worst_iso <= iso_tol and all(decreasing.values()) and all(v < frac_tol for v in fractions.values())
    return CriterionResult(
        11,
        "translation isometry and vanishing modulus",
        ok,
        {"isometry_error": worst_iso, "shifts": int(shifts.size), "modulus_decreasing": decreasing, "lipschitz_fraction_n128": fractions},
        f"isometry error <= {iso_tol:g}; ω(2π/n) decreasing for in-Go members, below {frac_tol:g}·ω(π) at n = 128 for Lipschitz members",
        budget=30.0,
        detail=f"off-grid shifts (informational, limited by quadrature of |f|^p): {worst_off:.2e}",
        tables=[
            Table("isometry", ("f", "gls_norm", "max_abs_change", "max_abs_change_off_grid"), iso_rows),
            Table("modulus_decay", ("f", "n", "modulus", "modulus_at_pi"), mod_rows, (0, 1)),
        ],
    )


def criterion_12(cfg: ExperimentConfig) -> CriterionResult:
    tol = cfg.tolerance("bracket")
    psi = _psi2()
    grid = _pgrid(cfg, psi)
    rows, lower_ok, upper_ok, feasible_ok = [], True, True, True
    violations = []
    for name in CATALOG:
        f = sample_catalog(name, grid=_grid_for(name, cfg.grid_size))
        scale = max(1.0, gls_norm(f, psi, grid).value)
        for n in (4, 8, 16):
            best = best_approx_gls(f, n, psi, grid)
            supinf = supinf_lower_bound(f, n, psi, grid)[0]
            upper = gls_norm(f - convolve(f, kernel_build("vallee_poussin", 2 * n)), psi, grid).value
            m = (n + 1) // 2
            feasible = gls_norm(f - convolve(f, kernel_build("vallee_poussin", m)), psi, grid).value
            lo = supinf <= best.value + tol * scale
            up = best.value <= upper + tol * scale
            fe = best.value <= feasible + tol * scale
            lower_ok &= lo
            upper_ok &= up
            feasible_ok &= fe
            if not (lo and up):
                violations.append(f"{f.name}@{n}")
            rows.append((f.name, n, supinf, best.dual_lower, best.value, upper, feasible, best.status))
    return CriterionResult(
        12,
        "minimax sandwich",
        lower_ok and upper_ok,
        {"lower_side": lower_ok, "upper_side": upper_ok, "violations": violations, "feasible_vp_upper_side": feasible_ok},
        f"supinf <= E_n <= ||f - V_2n f|| within {tol:g}",
        budget=180.0,
        detail="feasible_vp_upper_side uses V_m with 2m-1 <= n, which lies in the approximating class",
        tables=[
            Table(
                "minimax_sandwich",
                ("f", "n", "supinf_lower", "dual_lower", "E_n", "vp_2n_upper", "vp_feasible_upper", "status"),
                rows,
                (0, 1),
            )
        ],
    )


CRITERIA: dict[int, Callable[[ExperimentConfig], CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
    12: criterion_12,
}


def run_criterion(number: int, cfg: ExperimentConfig | None = None) -> CriterionResult:
    """Run one criterion and fold its runtime budget into the verdict."""
    cfg = ExperimentConfig() if cfg is None else cfg
    start = time.perf_counter()
    result = CRITERIA[number](cfg)
    result.runtime = time.perf_counter() - start
    if not result.within_budget:
        result.passed = False
        result.detail = (result.detail + "; " if result.detail else "") + "runtime budget exceeded"
    return result


def run_criteria(numbers, cfg: ExperimentConfig | None = None) -> list[CriterionResult]:
    return [run_criterion(k, cfg) for k in numbers]
