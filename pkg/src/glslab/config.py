"""Experiment configuration stored as a small INI file.

Every value is written with ``repr`` for floats, so reading a written file
gives back an equal :class:`ExperimentConfig`.
"""

from __future__ import annotations

import configparser
import hashlib
import io
import math
from dataclasses import dataclass, field, fields, replace

from ._validation import check_int, check_real, is_power_of_two
from .periodic_field import parse_catalog_entry, sample_catalog, PeriodicGrid

__all__ = ["DEFAULT_TOLERANCES", "ExperimentConfig", "ConfigError", "load_config"]


class ConfigError(ValueError):
    """Invalid or unreadable configuration."""


DEFAULT_TOLERANCES = {
    "parseval_abs": 1e-10,
    "jackson_spread": 10.0,
    "jackson_sup": 3.5,
    "inverse_spread": 10.0,
    "fundamental_abs": 1e-3,
    "fundamental_rel": 0.05,
    "c3_spread": 10.0,
    "equivalence_spread": 50.0,
    "roundtrip": 0.2,
    "isometry": 1e-10,
    "modulus_fraction": 0.1,
    "bracket": 1e-6,
}

_DEFAULT_CATALOG = ("constant", "cosk(1)", "holder(1)", "holder_smooth(1, 32)", "logsing(0.5)", "step")


def _fmt_float(x: float) -> str:
    return "inf" if math.isinf(x) else repr(float(x))


def _fmt_list(values) -> str:
    return ", ".join(_fmt_float(v) if isinstance(v, float) else str(v) for v in values)


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings shared by every suite.

    Attributes
    ----------
    grid_size : int
        Points of the periodic grid (power of two, at least 256).
    p_count, p_max : int, float
        Size and upper end of the exponent grid.
    catalog : tuple of str
        Catalog entries such as ``"holder(1)"`` used by the generic tables.
    n_values, r_values : tuple of int
        Degree and smoothness sweeps for the generic tables.
    deltas : tuple of float
        Step sizes for modulus tables.
    norm_ps : tuple of float
        Exponents of the norm table (``inf`` allowed).
    out_dir : str
    tolerances : dict
        Overrides for the acceptance thresholds (keys of ``DEFAULT_TOLERANCES``).
    required : tuple of int
        Criteria whose failure makes the run exit nonzero.
    """

    grid_size: int = 1024
    p_count: int = 64
    p_max: float = 256.0
    catalog: tuple = _DEFAULT_CATALOG
    n_values: tuple = (4, 8, 16, 32, 64)
    r_values: tuple = (0, 1, 2)
    deltas: tuple = (math.pi / 2, math.pi / 8, math.pi / 32, math.pi / 128)
    norm_ps: tuple = (1.0, 2.0, 4.0, 8.0, 16.0, math.inf)
    out_dir: str = "gls-lab-out"
    tolerances: dict = field(default_factory=dict)
    required: tuple = tuple(range(1, 13))

    def __post_init__(self):
        object.__setattr__(self, "catalog", tuple(self.catalog))
        object.__setattr__(self, "n_values", tuple(int(v) for v in self.n_values))
        object.__setattr__(self, "r_values", tuple(int(v) for v in self.r_values))
        object.__setattr__(self, "deltas", tuple(float(v) for v in self.deltas))
        object.__setattr__(self, "norm_ps", tuple(float(v) for v in self.norm_ps))
        object.__setattr__(self, "required", tuple(sorted(int(v) for v in self.required)))
        object.__setattr__(self, "tolerances", {k: float(v) for k, v in sorted(self.tolerances.items())})

    # -- validation ---------------------------------------------------------

    def validate(self) -> "ExperimentConfig":
        """Check every field against the preconditions of the modules using it."""
        try:
            check_int(self.grid_size, "grid_size", minimum=256)
            if not is_power_of_two(self.grid_size):
                raise ValueError(f"grid_size must be a power of two, got {self.grid_size}")
            check_int(self.p_count, "p_count", minimum=8)
            check_real(self.p_max, "p_max", lower=2.0)
            grid = PeriodicGrid(self.grid_size)
            for entry in self.catalog:
                name, params = parse_catalog_entry(entry)
                sample_catalog(name, params, PeriodicGrid.midpoint(self.grid_size) if name in ("singular", "logsing") else grid)
            for n in self.n_values:
                check_int(n, "n", minimum=1, maximum=self.grid_size // 4)
            for r in self.r_values:
                check_int(r, "r", minimum=0, maximum=8)
            for d in self.deltas:
                check_real(d, "delta", lower=0.0, upper=math.pi, lower_open=True)
            for p in self.norm_ps:
                check_real(p, "p", lower=1.0, allow_inf=True)
            unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
            if unknown:
                raise ValueError(f"unknown tolerance keys {sorted(unknown)}")
            for key, value in self.tolerances.items():
                check_real(value, key, lower=0.0, lower_open=True)
            for c in self.required:
                check_int(c, "required criterion", minimum=1, maximum=12)
            if not self.out_dir:
                raise ValueError("out_dir must be nonempty")
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        return self

    def tolerance(self, key: str) -> float:
        return self.tolerances.get(key, DEFAULT_TOLERANCES[key])

    def with_overrides(self, **changes) -> "ExperimentConfig":
        changes = {k: v for k, v in changes.items() if v is not None}
        return replace(self, **changes)

    # -- serialization ------------------------------------------------------

    def to_ini(self) -> str:
        parser = configparser.ConfigParser(interpolation=None)
        parser["grid"] = {"size": str(self.grid_size)}
        parser["pgrid"] = {"count": str(self.p_count), "pmax": _fmt_float(self.p_max)}
        parser["catalog"] = {"entries": "\n" + "\n".join(self.catalog)}
        parser["sweeps"] = {
            "n": _fmt_list(self.n_values),
            "r": _fmt_list(self.r_values),
            "deltas": _fmt_list(self.deltas),
            "norm_ps": _fmt_list(self.norm_ps),
        }
        parser["output"] = {"dir": self.out_dir}
        parser["tolerances"] = {k: _fmt_float(v) for k, v in self.tolerances.items()}
        parser["criteria"] = {"required": _fmt_list(self.required)}
        buf = io.StringIO()
        parser.write(buf)
        return buf.getvalue()

    @classmethod
    def from_ini(cls, text: str) -> "ExperimentConfig":
        parser = configparser.ConfigParser(interpolation=None)
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(f"unreadable config: {exc}") from exc
        known = {"grid", "pgrid", "catalog", "sweeps", "output", "tolerances", "criteria"}
        unknown = set(parser.sections()) - known
        if unknown:
            raise ConfigError(f"unknown sections {sorted(unknown)}")
        kwargs: dict = {}
        try:
            if parser.has_option("grid", "size"):
                kwargs["grid_size"] = parser.getint("grid", "size")
            if parser.has_option("pgrid", "count"):
                kwargs["p_count"] = parser.getint("pgrid", "count")
            if parser.has_option("pgrid", "pmax"):
                kwargs["p_max"] = float(parser.get("pgrid", "pmax"))
            if parser.has_option("catalog", "entries"):
                kwargs["catalog"] = tuple(line.strip() for line in parser.get("catalog", "entries").splitlines() if line.strip())
            sweeps = {"n": ("n_values", int), "r": ("r_values", int), "deltas": ("deltas", float), "norm_ps": ("norm_ps", float)}
            for key, (attr, kind) in sweeps.items():
                if parser.has_option("sweeps", key):
                    kwargs[attr] = tuple(kind(v) for v in _split(parser.get("sweeps", key)))
            if parser.has_option("output", "dir"):
                kwargs["out_dir"] = parser.get("output", "dir")
            if parser.has_section("tolerances"):
                kwargs["tolerances"] = {k: float(v) for k, v in parser.items("tolerances")}
            if parser.has_option("criteria", "required"):
                kwargs["required"] = tuple(int(v) for v in _split(parser.get("criteria", "required")))
        except ValueError as exc:
            raise ConfigError(f"bad value: {exc}") from exc
        return cls(**kwargs)

    def config_hash(self) -> str:
        """Short SHA-256 digest of the canonical INI text."""
        return hashlib.sha256(self.to_ini().encode("utf-8")).hexdigest()[:16]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExperimentConfig):
            return NotImplemented
        return all(getattr(self, f.name) == getattr(other, f.name) for f in fields(self))

    __hash__ = None


def _split(text: str) -> list[str]:
    return [item.strip() for item in text.replace("\n", ",").split(",") if item.strip()]


def load_config(path: str | None) -> ExperimentConfig:
    """Read and validate a config file; ``None`` gives the validated default."""
    if path is None:
        return ExperimentConfig().validate()
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return ExperimentConfig.from_ini(text).validate()
