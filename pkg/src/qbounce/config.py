"""Flat `key = value` scenario configuration with dotted section
prefixes, e.g. ``packet.alpha = 1.0``.  Zero-dependency and diff-friendly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from .core import Grid, PacketSpec, PhysicalParams, ValidationError


class ConfigError(ValueError):
    """A scenario config is missing a key or violates an invariant."""


@dataclass(frozen=True)
class ScenarioConfig:
    packet: PacketSpec
    params: PhysicalParams
    method: str
    t_start: float
    t_stop: float
    t_step: float
    snapshots: tuple
    x_grid: Grid
    p_grid: Grid
    p_window: Optional[float]      # None = auto
    n_nodes: Optional[int]         # None = auto
    rule: str
    closed_form: Optional[bool]    # None = auto (Gaussian only)
    output_dir: str
    output_format: str

    def series_times(self) -> List[float]:
        n = int(math.floor((self.t_stop - self.t_start) / self.t_step + 0.5)) + 1
        return [self.t_start + i * self.t_step for i in range(n)]


def _parse_pairs(text: str, source: str) -> Dict[str, str]:
    pairs: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        pairs[key] = value
    return pairs


def _get_float(pairs, key, default=None):
    if key not in pairs:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    try:
        return float(pairs.pop(key))
    except ValueError as exc:
        raise ConfigError(f"{key}: not a number: {exc}") from None


def _get_int(pairs, key, default):
    if key not in pairs:
        return default
    try:
        return int(pairs.pop(key))
    except ValueError as exc:
        raise ConfigError(f"{key}: not an integer: {exc}") from None


def _get_str(pairs, key, default, choices=None):
    value = pairs.pop(key, default)
    if choices and value not in choices:
        raise ConfigError(f"{key}: expected one of {sorted(choices)}, got {value!r}")
    return value


def parse_config(text: str, source: str = "<config>") -> ScenarioConfig:
    pairs = _parse_pairs(text, source)

    kind = _get_str(pairs, "packet.kind", "gaussian",
                    {"gaussian", "lorentzian", "tabulated"})
    try:
        packet = PacketSpec(kind=kind,
                            alpha=_get_float(pairs, "packet.alpha", 1.0),
                            x0=_get_float(pairs, "packet.x0", -10.0),
                            p0=_get_float(pairs, "packet.p0", 10.0))
        params = PhysicalParams(hbar=_get_float(pairs, "params.hbar", 1.0),
                                mass=_get_float(pairs, "params.mass", 1.0))
    except ValidationError as exc:
        raise ConfigError(str(exc)) from None

    method = _get_str(pairs, "method", "wall-mirror",
                      {"free", "wall-sine", "wall-mirror"})

    t_start = _get_float(pairs, "times.start", 0.0)
    t_stop = _get_float(pairs, "times.stop", 2.0)
    t_step = _get_float(pairs, "times.step", 0.01)
    if t_step <= 0.0:
        raise ConfigError(f"times.step must be positive, got {t_step}")
    if t_stop <= t_start:
        raise ConfigError(f"times.stop must exceed times.start, got "
                          f"[{t_start}, {t_stop}]")
    snap_raw = pairs.pop("times.snapshots", "")
    try:
        snapshots = tuple(float(s) for s in snap_raw.split(",") if s.strip())
    except ValueError as exc:
        raise ConfigError(f"times.snapshots: {exc}") from None

    wall = method != "free"
    x_default_min, x_default_max = (-30.0, 0.0) if wall else (-30.0, 30.0)
    try:
        x_grid = Grid(_get_float(pairs, "grid.position.min", x_default_min),
                      _get_float(pairs, "grid.position.max", x_default_max),
                      _get_int(pairs, "grid.position.n", 4096))
        p_grid = Grid(_get_float(pairs, "grid.momentum.min", -20.0),
                      _get_float(pairs, "grid.momentum.max", 20.0),
                      _get_int(pairs, "grid.momentum.n", 4096))
    except ValidationError as exc:
        raise ConfigError(str(exc)) from None
    if wall and x_grid.max > 0.0:
        raise ConfigError(f"wall methods need grid.position.max <= 0, got {x_grid.max}")

    window_raw = _get_str(pairs, "quadrature.p_window", "auto")
    p_window = None if window_raw == "auto" else float(window_raw)
    nodes_raw = _get_str(pairs, "quadrature.n_nodes", "auto")
    n_nodes = None if nodes_raw == "auto" else int(nodes_raw)
    rule = _get_str(pairs, "quadrature.rule", "trapezoid",
                    {"trapezoid", "gauss-legendre-composite"})
    cf_raw = _get_str(pairs, "quadrature.closed_form", "auto",
                      {"auto", "true", "false"})
    closed_form = None if cf_raw == "auto" else cf_raw == "true"

    output_dir = _get_str(pairs, "output.dir", "out")
    output_format = _get_str(pairs, "output.format", "csv", {"csv", "jsonl"})

    if pairs:
        raise ConfigError(f"unknown keys: {sorted(pairs)}")
    return ScenarioConfig(packet=packet, params=params, method=method,
                          t_start=t_start, t_stop=t_stop, t_step=t_step,
                          snapshots=snapshots, x_grid=x_grid, p_grid=p_grid,
                          p_window=p_window, n_nodes=n_nodes, rule=rule,
                          closed_form=closed_form, output_dir=output_dir,
                          output_format=output_format)


def load_config(path: Path) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return parse_config(text, source=str(path))
