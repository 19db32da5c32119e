"""Scenario execution: runs a configured simulation and persists
plot-ready series, snapshot and summary files.

All numeric output uses 17 significant digits and LF line endings, and
files are written atomically (temp file, then rename), so repeated runs
of the same config are bit-identical.
"""

from __future__ import annotations

import json
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import analysis, closed_form
from .config import ScenarioConfig
from .core import Grid, SampledField, validate
from .propagator import QuadratureSettings, auto_settings, default_p_window, \
    sample_position_field


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _rows_text(header: Sequence[str], rows: Sequence[Sequence[float]],
               fmt: str) -> str:
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
    else:
        lines = [json.dumps({k: float(_fmt(v)) for k, v in zip(header, row)},
                            separators=(",", ":"))
                 for row in rows]
    return "\n".join(lines) + "\n"


def _settings(config: ScenarioConfig, t_max: float,
              use_cf: bool) -> Optional[QuadratureSettings]:
    spec, params = config.packet, config.params
    if use_cf and spec.kind == "gaussian" and config.method != "wall-sine" \
            and config.p_window is None and config.n_nodes is None:
        return None
    x_abs = max(abs(config.x_grid.min), abs(config.x_grid.max))
    base = auto_settings(spec, params, x_abs, t_max, rule=config.rule)
    window = config.p_window if config.p_window is not None else base.p_window
    nodes = config.n_nodes if config.n_nodes is not None else base.n_nodes
    return QuadratureSettings(p_window=window, n_nodes=nodes, rule=config.rule)


def run_scenario(config: ScenarioConfig, output_dir: Optional[str] = None,
                 threads: int = 1) -> Dict[str, object]:
    """Execute one scenario; returns the summary dict (also persisted).

    Writes series.<fmt>, snapshot_x_<t>.<fmt> / snapshot_p_<t>.<fmt> per
    snapshot time, and summary.json into the output directory.
    """
    spec, params = config.packet, config.params
    wall = config.method != "free"
    scales = validate(spec, params, wall=wall)
    use_cf = config.closed_form
    if use_cf is None:
        use_cf = spec.kind == "gaussian"

    out = Path(output_dir if output_dir is not None else config.output_dir)
    root = os.environ.get("QBOUNCE_OUTPUT_ROOT")
    if root and not out.is_absolute():
        out = Path(root) / out
    out.mkdir(parents=True, exist_ok=True)
    fmt = config.output_format
    ext = "csv" if fmt == "csv" else "jsonl"

    t_max = max(abs(config.t_stop), abs(config.t_start),
                max((abs(t) for t in config.snapshots), default=0.0))
    q = _settings(config, t_max, use_cf)

    times = config.series_times()
    series = analysis.compute_time_series(
        spec, times, config.method, config.x_grid, config.p_grid,
        q=q, params=params, closed_form=use_cf)
    header = ["t", "norm", "mean_x", "dx", "mean_p", "dp", "product"]
    rows = [[r.t, r.norm, r.mean_x, r.dx, r.mean_p, r.dp, r.product]
            for r in series.rows]
    _atomic_write(out / f"series.{ext}", _rows_text(header, rows, fmt))

    def write_snapshot(t: float) -> None:
        field = sample_position_field(spec, config.x_grid, t, config.method,
                                      q, params, closed_form=use_cf)
        phi = analysis.fourier_to_momentum(field, config.p_grid, params)
        for tag, fld in (("x", field), ("p", phi)):
            coords = fld.grid.points()
            data = [[c, v.real, v.imag, abs(v) ** 2]
                    for c, v in zip(coords, fld.values)]
            _atomic_write(out / f"snapshot_{tag}_{t:.3f}.{ext}",
                          _rows_text([tag, "re", "im", "abs2"], data, fmt))

    snaps = list(config.snapshots)
    if threads > 1 and len(snaps) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(write_snapshot, snaps))
    else:
        for t in snaps:
            write_snapshot(t)

    norms = series.column("norm")
    summary: Dict[str, object] = {
        "method": config.method,
        "packet_kind": spec.kind,
        "norm_drift": float(np.max(np.abs(norms - norms[0]))),
        "empirical_compression_time": analysis.empirical_compression_time(series),
        "classical_collision_time": None,
        "compression_ratio": None,
        "p_mean_at_collision": None,
    }
    if wall and scales.classical_collision_time is not None:
        tc = scales.classical_collision_time
        summary["classical_collision_time"] = tc
        field_tc = sample_position_field(spec, config.x_grid, tc, config.method,
                                         q, params, closed_form=use_cf)
        dx_wall = analysis.position_moments(field_tc).spread
        if spec.kind == "gaussian":
            cf = closed_form.GaussianClosedForm(spec, params)
            dx_free = closed_form.gaussian_moments(cf, tc)[1]
        else:
            span = 3.0 * max(abs(config.x_grid.min), abs(config.x_grid.max))
            free_grid = Grid(-span, span, 2 * config.x_grid.n)
            qf = auto_settings(spec, params, span, tc, rule=config.rule)
            free_tc = sample_position_field(spec, free_grid, tc, "free", qf, params)
            dx_free = analysis.position_moments(free_tc).spread
        summary["compression_ratio"] = dx_wall / dx_free
        summary["p_mean_at_collision"] = analysis.symmetrized_momentum_mean(
            field_tc, params)
    _atomic_write(out / "summary.json",
                  json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary
