"""Flat ``key = value`` run configuration.

Lines starting with ``#`` and blank lines are ignored. Lists are
comma-separated. Unknown keys and unparsable values raise
:class:`ConfigError` naming the key.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ChiralXXZError

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config_text", "KEY_DOCS"]


class ConfigError(ChiralXXZError):
    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"config key {key!r}: {message}")


def _floats(s: str) -> tuple[float, ...]:
    return tuple(float(v) for v in s.split(",") if v.strip())


def _ints(s: str) -> tuple[int, ...]:
    return tuple(int(v) for v in s.split(",") if v.strip())


def _bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _opt_float(s: str) -> float | None:
    return None if s.strip().lower() in ("", "none") else float(s)


@dataclass
class RunConfig:
    # molecule (d_c is a magnitude; its sign follows the handedness)
    A: float = 8572.05
    B: float = 3640.11
    C: float = 2790.97
    d_a: float = 1.201
    d_b: float = 1.916
    d_c: float = 0.365
    pair: str = "RL"
    j_max: int = 8
    max_step: float = 0.05
    # field grid
    x_min: float = 0.0
    x_max: float = 20.0
    x_steps: int = 401
    m_list: tuple[int, ...] = (0, 1)
    r_list: tuple[float, ...] = (1.0, 1.5, 2.0)
    # phase diagram
    r_min: float = 0.8
    r_max: float = 3.0
    r_steps: int = 45
    criterion: str = "jtilde"
    crossing_tol: float = 1e-3
    # chain
    chain_N: int = 10
    chain_method: str = "ed"
    chain_x: float | None = None
    chain_r: float | None = None
    chain_jxy: float = 1.0
    chain_d: float = 0.0
    chain_jz: float = 0.0
    chain_h: float = 0.0
    chain_spacing: float = 1.7
    # droplet noise
    noise_mu: float = 2.5
    noise_r: float = 1.7
    noise_R: float = 500.0
    noise_q: float = 1.0
    # run
    out_dir: str = "out"
    workers: int = 1
    plot: bool = False

    def validate(self) -> "RunConfig":
        if self.j_max < 2:
            raise ConfigError("j_max", f"must be >= 2, got {self.j_max}")
        if self.x_steps < 1:
            raise ConfigError("x_steps", "must be >= 1")
        if self.x_min < 0 or self.x_max < self.x_min:
            raise ConfigError("x_max", "field grid must satisfy 0 <= x_min <= x_max")
        if not self.r_list or any(r <= 0 for r in self.r_list):
            raise ConfigError("r_list", "needs positive separations")
        if list(self.r_list) != sorted(self.r_list):
            raise ConfigError("r_list", "must be ascending")
        if self.r_steps < 2 or self.r_min <= 0 or self.r_max <= self.r_min:
            raise ConfigError("r_steps", "phase grid needs r_steps >= 2 and 0 < r_min < r_max")
        if self.pair.upper() not in ("LL", "LR", "RL", "RR"):
            raise ConfigError("pair", f"must be LL, LR, RL or RR, got {self.pair!r}")
        if self.criterion not in ("jtilde", "magnon"):
            raise ConfigError("criterion", "must be 'jtilde' or 'magnon'")
        if self.chain_method not in ("ed", "free_fermion"):
            raise ConfigError("chain_method", "must be 'ed' or 'free_fermion'")
        if (self.chain_x is None) != (self.chain_r is None):
            raise ConfigError("chain_x", "chain_x and chain_r must be given together")
        if self.chain_N < 2:
            raise ConfigError("chain_N", "must be >= 2")
        if self.workers < 1:
            raise ConfigError("workers", "must be >= 1")
        if self.max_step <= 0:
            raise ConfigError("max_step", "must be positive")
        return self

    def x_grid(self) -> list[float]:
        if self.x_steps == 1:
            return [self.x_min]
        h = (self.x_max - self.x_min) / (self.x_steps - 1)
        return [self.x_min + i * h for i in range(self.x_steps)]


_PARSERS = {
    "m_list": _ints,
    "r_list": _floats,
    "plot": _bool,
    "chain_x": _opt_float,
    "chain_r": _opt_float,
}

KEY_DOCS = {f.name: f.type for f in fields(RunConfig)}


def _parse_value(key: str, raw: str, default):
    if key in _PARSERS:
        return _PARSERS[key](raw)
    if isinstance(default, bool):
        return _bool(raw)
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    return raw.strip()


def apply_overrides(cfg: RunConfig, items: dict[str, str]) -> RunConfig:
    defaults = RunConfig()
    for key, raw in items.items():
        if key not in KEY_DOCS:
            raise ConfigError(key, "unknown key")
        try:
            setattr(cfg, key, _parse_value(key, raw, getattr(defaults, key)))
        except ValueError as exc:
            raise ConfigError(key, f"cannot parse {raw!r} ({exc})") from None
    return cfg


def parse_config_text(text: str) -> dict[str, str]:
    items: dict[str, str] = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(line, f"line {n} is not of the form key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError("", f"line {n} has an empty key")
        items[key] = value
    return items


def load_config(path: str | Path | None, overrides: dict[str, str] | None = None) -> RunConfig:
    """Defaults, then the file at ``path``, then ``overrides``; validated."""
    cfg = RunConfig()
    if path is not None:
        apply_overrides(cfg, parse_config_text(Path(path).read_text()))
    if overrides:
        apply_overrides(cfg, overrides)
    return cfg.validate()
