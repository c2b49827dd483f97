"""Suites: acceptance criteria plus plot-ready tables, written to disk."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import platform
import time
from dataclasses import dataclass, field
from importlib import metadata

import numpy as np
import scipy

from .config import ExperimentConfig
from .criteria import CriterionResult, Table, run_criterion
from .orlicz_bridge import orlicz_from_psi, psi_from_orlicz
from .periodic_field import CATALOG, PeriodicGrid, lp_norms, parse_catalog_entry, sample_catalog
from .psi_space import PGrid, gls_norm, make_psi
from .sobolev_gls import thm31_check
from .trig_approx import NormSpec, gls_direct, modulus

__all__ = ["SUITES", "ReportBundle", "run_suite", "list_catalog", "format_table"]

SUITES = {
    "norms": (1, 5),
    "modulus": (2, 11),
    "theorem21": (3, 4, 12),
    "theorem31": (6,),
    "orlicz": (7, 8, 9, 10),
}
SUITES["all"] = tuple(sorted(k for v in SUITES.values() for k in v))


@dataclass
class ReportBundle:
    """Everything a suite run produced."""

    suite: str
    config: ExperimentConfig
    criteria: list
    tables: list
    out_dir: str
    files: list = field(default_factory=list)

    @property
    def required_failures(self) -> list[int]:
        return [c.number for c in self.criteria if not c.passed and c.number in self.config.required]

    @property
    def exit_code(self) -> int:
        return 1 if self.required_failures else 0


# ---------------------------------------------------------------------------
# formatting


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.12g}"
    return str(v)


def _sort_key(row, key):
    out = []
    for i in key:
        v = row[i]
        out.append((0, float(v), "") if isinstance(v, (int, float, np.integer, np.floating)) else (1, 0.0, str(v)))
    return tuple(out)


def format_table(table: Table, config_hash: str) -> str:
    """CSV text: header row, rows ordered by the key columns, hash column last."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(table.header) + ["config_hash"])
    for row in sorted(table.rows, key=lambda r: _sort_key(r, table.key)):
        writer.writerow([_cell(v) for v in row] + [config_hash])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# generic tables


def _catalog_functions(cfg: ExperimentConfig):
    for entry in cfg.catalog:
        name, params = parse_catalog_entry(entry)
        grid = PeriodicGrid.midpoint(cfg.grid_size) if name in ("singular", "logsing") else PeriodicGrid(cfg.grid_size)
        yield sample_catalog(name, params, grid)


def _guarded(rows: list, fn, prefix: tuple, width: int):
    """Append ``prefix + fn()`` or a row recording the failure."""
    try:
        rows.append(prefix + tuple(fn()) + ("ok",))
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        rows.append(prefix + (math.nan,) * width + (f"error: {type(exc).__name__}",))


def _norm_tables(cfg: ExperimentConfig) -> list[Table]:
    psi = make_psi("psi_m", m=2)
    pgrid = PGrid.for_psi(psi, count=cfg.p_count, pmax=cfg.p_max)
    norms, gls = [], []
    for f in _catalog_functions(cfg):
        for p, v in zip(cfg.norm_ps, lp_norms(f, cfg.norm_ps)):
            norms.append((f.name, p, v))
        _guarded(gls, lambda: (lambda r: (r.value, r.argmax_p))(gls_norm(f, psi, pgrid)), (f.name, psi.label), 2)
    return [
        Table("norms", ("f", "p", "lp_norm"), norms, (0, 1)),
        Table("gls_norms", ("f", "psi", "gls_norm", "argmax_p", "status"), gls, (0,)),
    ]


def _modulus_tables(cfg: ExperimentConfig) -> list[Table]:
    psi = make_psi("psi_m", m=2)
    spec = NormSpec.gls(psi, PGrid.for_psi(psi, count=cfg.p_count, pmax=cfg.p_max))
    rows = []
    for f in _catalog_functions(cfg):
        for d in cfg.deltas:
            _guarded(rows, lambda: (modulus(f, d, 2.0), modulus(f, d, spec)), (f.name, d), 2)
    return [Table("modulus", ("f", "delta", "modulus_L2", "modulus_G", "status"), rows, (0, 1))]


def _theorem21_tables(cfg: ExperimentConfig) -> list[Table]:
    psi = make_psi("psi_m", m=2)
    pgrid = PGrid.for_psi(psi, count=cfg.p_count, pmax=cfg.p_max)
    rows = []
    for f in _catalog_functions(cfg):
        for n in cfg.n_values:

            def direct():
                rep = gls_direct(f, n, psi, pgrid)
                return rep.lhs, rep.rhs, rep.ratio

            _guarded(rows, direct, (f.name, n), 3)
    return [Table("direct_estimate", ("f", "n", "lhs", "rhs", "ratio", "status"), rows, (0, 1))]


def _theorem31_tables(cfg: ExperimentConfig) -> list[Table]:
    psi = make_psi("psi_m", m=2)
    pgrid = PGrid.for_psi(psi, count=cfg.p_count, pmax=cfg.p_max)
    rows = []
    for f in _catalog_functions(cfg):
        for r in cfg.r_values:
            for n in cfg.n_values:
                if n % 2:
                    continue

                def check():
                    rep = thm31_check(f, r, psi, n, grid=pgrid)
                    return rep.lhs, rep.rhs_core, rep.empirical_c3

                _guarded(rows, check, (f.name, r, n), 3)
    return [Table("smoothness_bound", ("f", "r", "n", "lhs", "rhs_core", "empirical_C3", "status"), rows, (0, 1, 2))]


def _orlicz_tables(cfg: ExperimentConfig) -> list[Table]:
    psi = make_psi("psi_m", m=2)
    pgrid = PGrid.for_psi(psi, count=cfg.p_count, pmax=cfg.p_max)
    M = orlicz_from_psi(psi, pgrid)
    u = np.concatenate([np.linspace(0.0, math.e, 33), np.geomspace(math.e, M.info["boundary_u"], 65)[1:]])
    gen = [(float(x), float(v)) for x, v in zip(u, M.log(u))]
    back = psi_from_orlicz(M, pgrid=pgrid)
    p = pgrid.points
    psi_rows = list(zip(p, back.log(p), back.info["boundary"]))
    return [
        Table("orlicz_generator", ("u", "log_M"), gen),
        Table("psi_from_generator", ("p", "log_psi", "boundary_attained"), psi_rows),
    ]


_TABLES = {
    "norms": _norm_tables,
    "modulus": _modulus_tables,
    "theorem21": _theorem21_tables,
    "theorem31": _theorem31_tables,
    "orlicz": _orlicz_tables,
}


# ---------------------------------------------------------------------------


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:  # pragma: no cover - source checkout
        return "unknown"


def run_suite(cfg: ExperimentConfig, suite: str = "all", out_dir: str | None = None, log=None) -> ReportBundle:
    """Run a suite, write its CSV tables and ``summary.json``.

    Parameters
    ----------
    cfg : ExperimentConfig
        Validated settings.
    suite : str
        ``norms``, ``modulus``, ``theorem21``, ``theorem31``, ``orlicz`` or ``all``.
    out_dir : str, optional
        Overrides ``cfg.out_dir``.
    log : callable, optional
        Receives one line per finished criterion.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    cfg.validate()
    out_dir = cfg.out_dir if out_dir is None else out_dir
    parts = [s for s in _TABLES if s != "all"] if suite == "all" else [suite]
    results: list[CriterionResult] = []
    for number in SUITES[suite]:
        res = run_criterion(number, cfg)
        results.append(res)
        if log is not None:
            log(res.line())
    tables = [t for r in results for t in r.tables]
    for part in parts:
        tables.extend(_TABLES[part](cfg))
    bundle = ReportBundle(suite, cfg, results, tables, out_dir)
    _write(bundle)
    return bundle


def _write(bundle: ReportBundle) -> None:
    os.makedirs(bundle.out_dir, exist_ok=True)
    h = bundle.config.config_hash()
    names = [t.name for t in bundle.tables]
    if len(set(names)) != len(names):
        raise RuntimeError("duplicate table names")
    for table in bundle.tables:
        path = os.path.join(bundle.out_dir, f"{table.name}.csv")
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(format_table(table, h))
        bundle.files.append(os.path.basename(path))
    summary = {
        "suite": bundle.suite,
        "passed": not any(not c.passed for c in bundle.criteria),
        "required_failures": bundle.required_failures,
        "criteria": [c.to_dict() for c in bundle.criteria],
        "tables": sorted(bundle.files),
        "provenance": {
            "config_hash": h,
            "version": _version(),
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "config": bundle.config.to_ini(),
        },
        "generated_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    with open(os.path.join(bundle.out_dir, "summary.json"), "w", encoding="utf-8") as handle:
        json.dump(summary, handle, indent=2, sort_keys=True)
        handle.write("\n")


def list_catalog() -> str:
    """One line per catalog function: growth rate and default parameters."""
    lines = []
    for name, entry in CATALOG.items():
        defaults = ", ".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}" for k, v in entry["params"].items())
        lines.append(f"{entry['growth']}    [defaults: {defaults}]")
    return "\n".join(lines)
