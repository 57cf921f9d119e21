"""Declarative experiment configuration: parsing, validation, scenarios.

Config files are flat ``key = value`` text; lists are comma-separated.  CLI
flags override file values.  Validation failures raise :class:`ConfigError`
whose message names the offending field.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Optional

from ..distributions import SkewNormal, MomentSpec, parse_distribution, standardize
from ..kernels import get_kernel
from ..regression import get_family

__all__ = ["ConfigError", "ExperimentConfig", "Scenario", "parse_config_text", "load_config_file", "build_config"]

STUDIES = ("approx", "symmetry", "gof")


class ConfigError(ValueError):
    """Invalid experiment configuration; the message carries the field path."""


@dataclass(frozen=True)
class Scenario:
    """One scenario column of a study: a label, an error law, truth curvature."""

    label: str
    error: object
    a: float = 0.0


@dataclass(frozen=True)
class ExperimentConfig:
    study: str
    n: tuple = (100,)
    alphas: tuple = (0.05,)
    n_sims: int = 500
    n_boot: int = 500
    schemes: tuple = ("nonsmooth", "smooth")
    stats: Optional[tuple] = None  # default depends on the study
    kernel: str = "biweight"
    smooth_kernel: str = "gaussian"
    h: Optional[float] = None  # None = sd(x) * n^-0.3
    s: Optional[float] = None  # None = 0.5 * n^-0.25
    seed: int = 0
    workers: int = 1
    couple: bool = True
    center_boot: bool = False
    slope: float = 2.0
    sd: float = 0.25
    error: str = "normal"
    family: str = "skewnormal"  # symmetry scenario family: skewnormal | tmix
    d: tuple = (0.0, 2.0, 4.0)
    p: tuple = (1.0, 0.75, 0.5)
    a: tuple = (0.0, 0.25, 0.5)
    gof_family: str = "linear_no_intercept"
    checkpoint: Optional[str] = None
    out: Optional[str] = None
    format: str = "csv"
    flush_every: int = 50

    def resolved_stats(self):
        if self.stats is not None:
            return self.stats
        return ("ls", "mad") if self.study == "approx" else ("ks", "cm")

    def scenarios(self):
        """The scenario list of this study, labels formatted like the tables."""
        if self.study == "approx":
            return (Scenario("-", self._base_error()),)
        if self.study == "gof":
            err = self._base_error()
            return tuple(Scenario(f"a={v:g}", err, a=v) for v in self.a)
        if self.family == "skewnormal":
            spec = MomentSpec(0.0, self.sd)
            return tuple(
                Scenario(f"d={v:g}", standardize(SkewNormal(v), spec)) for v in self.d
            )
        return tuple(
            Scenario(f"p={v:g}", parse_distribution(f"mix(p={v},t3,gumbel,sd={self.sd})"))
            for v in self.p
        )

    def _base_error(self):
        name = self.error.strip()
        if "(" not in name:
            name = f"{name}(sd={self.sd})"
        return parse_distribution(name)


_LIST_INT = {"n"}
_LIST_FLOAT = {"alphas", "d", "p", "a"}
_INT = {"n_sims", "n_boot", "seed", "workers", "flush_every"}
_FLOAT = {"slope", "sd"}
_AUTO_FLOAT = {"h", "s"}
_BOOL = {"couple", "center_boot"}
_LIST_STR = {"schemes", "stats"}

# accepted aliases in config files / CLI
_ALIASES = {
    "sims": "n_sims",
    "boot": "n_boot",
    "alpha": "alphas",
    "scheme": "schemes",
    "stat": "stats",
}


def _coerce(key, raw):
    raw = raw.strip()
    try:
        if key in _LIST_INT:
            return tuple(int(v) for v in raw.split(","))
        if key in _LIST_FLOAT:
            return tuple(float(v) for v in raw.split(","))
        if key in _INT:
            return int(raw)
        if key in _FLOAT:
            return float(raw)
        if key in _AUTO_FLOAT:
            return None if raw.lower() in ("auto", "none") else float(raw)
        if key in _BOOL:
            if raw.lower() in ("true", "1", "yes", "on"):
                return True
            if raw.lower() in ("false", "0", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        if key in _LIST_STR:
            vals = tuple(v.strip().lower() for v in raw.split(","))
            if vals == ("both",):
                return ("nonsmooth", "smooth") if key == "schemes" else ("ks", "cm")
            return vals
        return raw
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(f"{key}: {e}") from None


def parse_config_text(text):
    """Parse flat ``key = value`` lines; '#' starts a comment."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line.strip()!r}")
        key, val = stripped.split("=", 1)
        key = _ALIASES.get(key.strip().lower(), key.strip().lower())
        out[key] = _coerce(key, val)
    return out


def load_config_file(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def build_config(study, file_values=None, overrides=None):
    """Assemble and validate an ExperimentConfig from file values and overrides."""
    values = {"study": study}
    for source in (file_values or {}), (overrides or {}):
        for key, val in source.items():
            if val is None:
                continue
            key = _ALIASES.get(key, key)
            values[key] = val
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config field(s): {', '.join(sorted(unknown))}")
    cfg = ExperimentConfig(**values)
    validate_config(cfg)
    return cfg


def validate_config(cfg):
    if cfg.study not in STUDIES:
        raise ConfigError(f"study: must be one of {STUDIES}, got {cfg.study!r}")
    if not cfg.n or any(int(v) < 2 for v in cfg.n):
        raise ConfigError(f"n: sample sizes must all be >= 2, got {cfg.n}")
    if not cfg.alphas or any(not 0.0 < float(v) < 1.0 for v in cfg.alphas):
        raise ConfigError(f"alphas: levels must lie in (0, 1), got {cfg.alphas}")
    if cfg.n_sims < 1:
        raise ConfigError(f"n_sims: must be >= 1, got {cfg.n_sims}")
    if cfg.n_boot < 1:
        raise ConfigError(f"n_boot: must be >= 1, got {cfg.n_boot}")
    if not cfg.schemes or any(s not in ("nonsmooth", "smooth") for s in cfg.schemes):
        raise ConfigError(f"schemes: must be a subset of (nonsmooth, smooth), got {cfg.schemes}")
    allowed_stats = ("ls", "mad") if cfg.study == "approx" else ("ks", "cm")
    if any(s not in allowed_stats for s in cfg.resolved_stats()):
        raise ConfigError(f"stats: must be a subset of {allowed_stats} for {cfg.study}, got {cfg.stats}")
    if cfg.workers < 1:
        raise ConfigError(f"workers: must be >= 1, got {cfg.workers}")
    if cfg.format not in ("csv", "markdown"):
        raise ConfigError(f"format: must be csv or markdown, got {cfg.format!r}")
    if cfg.h is not None and not cfg.h > 0:
        raise ConfigError(f"h: must be positive or auto, got {cfg.h}")
    if cfg.s is not None and not cfg.s > 0:
        raise ConfigError(f"s: must be positive or auto, got {cfg.s}")
    if not cfg.sd > 0:
        raise ConfigError(f"sd: must be positive, got {cfg.sd}")
    if cfg.study == "symmetry" and cfg.family not in ("skewnormal", "tmix"):
        raise ConfigError(f"family: must be skewnormal or tmix, got {cfg.family!r}")
    if cfg.flush_every < 1:
        raise ConfigError(f"flush_every: must be >= 1, got {cfg.flush_every}")
    try:
        get_kernel(cfg.kernel)
        get_kernel(cfg.smooth_kernel)
    except ValueError as e:
        raise ConfigError(f"kernel: {e}") from None
    if cfg.study == "gof":
        try:
            get_family(cfg.gof_family)
        except ValueError as e:
            raise ConfigError(f"gof_family: {e}") from None
    try:
        cfg.scenarios()
    except (ValueError, KeyError) as e:
        raise ConfigError(f"error/scenarios: {e}") from None
