"""Scan configuration: defaults, flat key/value files and command-line overrides.

A config file is INI-style text with a single ``[scan]`` section (the header
may be omitted)::

    N_list = 7, 8
    eps_list = 0.1, 0.3, 1, inf
    potential = huber:0.1
    n = 2000

``eps_list`` also accepts ``logspace:<lo>:<hi>:<count>``.  Precedence is
command-line flag > file > default.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .exceptions import ConfigurationError, InputError
from .potential import parse_potential
from .radial import MIN_NODES

__all__ = ["ScanConfig", "load_config", "parse_eps_list", "parse_int_list", "format_float", "format_eps"]

SECTION = "scan"


def format_float(x: float) -> str:
    """Round-trip float text: 17 significant digits, ``inf`` for infinity."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def format_eps(eps: float) -> str:
    return format_float(eps)


def parse_eps_list(text) -> list[float]:
    """Parse ``0.1, 1, inf`` or ``logspace:0.05:5:7`` into positive floats."""
    if isinstance(text, (list, tuple)):
        values = [float(v) for v in text]
    else:
        s = str(text).strip()
        if s.startswith("logspace:"):
            try:
                _, lo, hi, count = s.split(":")
                # 12 significant digits keep grid points such as 0.5 exact
                values = [float(f"{v:.12g}") for v in np.geomspace(float(lo), float(hi), int(count))]
            except ValueError:
                raise ConfigurationError(f"bad logspace spec {s!r}") from None
        else:
            try:
                values = [float(tok) for tok in s.replace(";", ",").split(",") if tok.strip()]
            except ValueError:
                raise ConfigurationError(f"bad eps list {s!r}") from None
    values = [float(v) for v in values]
    if any(not (v > 0) for v in values):
        raise ConfigurationError("eps values must be positive")
    return values


def parse_int_list(text) -> list[int]:
    """Parse ``7, 8`` or a range ``2..6``."""
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    s = str(text).strip()
    try:
        if ".." in s:
            lo, hi = s.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(tok) for tok in s.replace(";", ",").split(",") if tok.strip()]
    except ValueError:
        raise ConfigurationError(f"bad integer list {s!r}") from None


@dataclass
class ScanConfig:
    """Resolved parameters of a scan or verification run."""

    N_list: list = field(default_factory=lambda: [7])
    eps_list: list = field(default_factory=lambda: [0.5])
    potential: str = "quadratic"
    n: int = 2000
    grading: float = 2.0
    ell_max: int = 10
    seed: int = 0
    step2_seeds: int = 20
    step1_seeds: int = 50
    tol_solve: float = 1e-7
    tol_identity: float = 1e-8
    tol_chain: float = 1e-7
    tol_inequality: float = 1e-10
    tol_hardy: float = 5e-3
    tol_exactness: float = 1e-9
    output_dir: str = "glvortex_out"
    workers: int = 1

    def validate(self) -> "ScanConfig":
        if not self.N_list or not self.eps_list:
            raise ConfigurationError("N_list and eps_list must be nonempty")
        if any(int(N) < 2 for N in self.N_list):
            raise ConfigurationError("every N must be >= 2")
        if any(not (e > 0) for e in self.eps_list):
            raise ConfigurationError("eps values must be positive")
        if self.n < MIN_NODES:
            raise ConfigurationError(f"mesh size n must be >= {MIN_NODES}, got {self.n}")
        if not self.grading >= 1.0:
            raise ConfigurationError("grading must be >= 1")
        if self.ell_max < 2:
            raise ConfigurationError("ell_max must be >= 2")
        for name in ("step2_seeds", "step1_seeds", "workers"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be >= 1")
        for f in fields(self):
            if f.name.startswith("tol_") and not getattr(self, f.name) > 0:
                raise ConfigurationError(f"{f.name} must be positive")
        try:
            parse_potential(self.potential)
        except InputError as exc:
            raise ConfigurationError(str(exc)) from exc
        self.N_list = sorted({int(N) for N in self.N_list})
        self.eps_list = sorted({float(e) for e in self.eps_list})
        return self

    def resolved(self) -> dict:
        """Plain dict for embedding in outputs; floats as round-trip strings."""
        out = {}
        for key, value in sorted(asdict(self).items()):
            if key in ("workers", "output_dir"):
                continue  # execution details; outputs must not depend on them
            if key == "eps_list":
                value = [format_eps(e) for e in value]
            elif isinstance(value, float):
                value = format_float(value)
            out[key] = value
        return out


_CONVERTERS = {
    "N_list": parse_int_list,
    "eps_list": parse_eps_list,
    "potential": str,
    "output_dir": str,
}


def _convert(key: str, raw):
    types = {f.name: f.type for f in fields(ScanConfig)}
    if key not in types:
        raise ConfigurationError(f"unknown config key {key!r}")
    if key in _CONVERTERS:
        return _CONVERTERS[key](raw)
    kind = types[key]
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
    except ValueError:
        raise ConfigurationError(f"bad value for {key}: {raw!r}") from None
    return raw


def read_config_file(path) -> dict:
    """Read a flat key/value file into converted values."""
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"config file {path} not found")
    text = path.read_text()
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keys are case sensitive (N_list)
    try:
        if not text.lstrip().startswith("["):
            text = f"[{SECTION}]\n" + text
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc
    if parser.sections() != [SECTION]:
        raise ConfigurationError(f"{path}: expected a single [{SECTION}] section")
    return {key: _convert(key, raw) for key, raw in parser.items(SECTION)}


def load_config(path=None, overrides: dict | None = None, base: ScanConfig | None = None) -> ScanConfig:
    """Defaults (or ``base``), then the file, then non-None overrides."""
    values = asdict(base) if base is not None else asdict(ScanConfig())
    if path is not None:
        values.update(read_config_file(path))
    for key, raw in (overrides or {}).items():
        if raw is not None:
            values[key] = _convert(key, raw)
    return ScanConfig(**values).validate()
