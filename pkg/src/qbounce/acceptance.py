"""Acceptance suite: every exit criterion of the build, each with its
pinned tolerance, runnable from the CLI (``qbounce accept``) or from the
test suite.

Each check returns a CriterionResult with the measured value, the
expected value and the tolerance actually applied; nothing here is
recalibrated at run time.
"""

from __future__ import annotations

import math
import tempfile
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List

import numpy as np

from . import analysis, closed_form
from .config import parse_config
from .core import FarFromWallWarning, Grid, PacketSpec, PhysicalParams, validate
from .propagator import auto_settings, initial_spectrum, sample_position_field

STD = PacketSpec(kind="gaussian", alpha=1.0, x0=-10.0, p0=10.0)
PARAMS = PhysicalParams()

WALL_GRID = Grid(-30.0, 0.0, 8192)
FREE_GRID = Grid(-30.0, 30.0, 8192)
P_GRID = Grid(-20.0, 20.0, 4096)

ALPHAS_RATIO = (1.0 / 3.0, 0.5, 1.0, 2.0, 3.0)
ALPHAS_PMEAN = (0.5, 1.0, 2.0)


@dataclass
class CriterionResult:
    name: str
    measured: float
    expected: float
    tol: float
    passed: bool
    detail: str = ""


def _result(name, measured, expected, tol, detail="") -> CriterionResult:
    return CriterionResult(name=name, measured=float(measured),
                           expected=float(expected), tol=float(tol),
                           passed=bool(abs(measured - expected) <= tol),
                           detail=detail)


def _bound(name, measured, bound, kind, detail="") -> CriterionResult:
    """kind "max": pass iff measured <= bound; "min": measured >= bound."""
    ok = measured <= bound if kind == "max" else measured >= bound
    return CriterionResult(name=name, measured=float(measured),
                           expected=float(bound), tol=0.0, passed=bool(ok),
                           detail=detail or ("<=" if kind == "max" else ">="))


def _gaussian_spec(alpha: float) -> PacketSpec:
    return PacketSpec(kind="gaussian", alpha=alpha, x0=-10.0, p0=10.0)


def _wall_field(spec: PacketSpec, t: float, grid: Grid = WALL_GRID):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FarFromWallWarning)
        return sample_position_field(spec, grid, t, "wall-mirror",
                                     None, PARAMS, closed_form=True)


def check_compression_ratio(oracle_width_scale: float = 1.0) -> List[CriterionResult]:
    """dx_wall(Tc) / dx_free(Tc) = sqrt((pi-2)/pi) within 0.005 for every
    alpha in the standard sweep.  oracle_width_scale perturbs the
    closed-form collision width (sensitivity hook; 1.0 is physical)."""
    out = []
    for alpha in ALPHAS_RATIO:
        spec = _gaussian_spec(alpha)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", FarFromWallWarning)
            tc = validate(spec, PARAMS).classical_collision_time
        dx_wall = analysis.position_moments(_wall_field(spec, tc)).spread
        free = sample_position_field(spec, FREE_GRID, tc, "free", None,
                                     PARAMS, closed_form=True)
        dx_free = analysis.position_moments(free).spread
        cf = closed_form.GaussianClosedForm(spec, PARAMS)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", FarFromWallWarning)
            expected = (closed_form.collision_x_moments(cf, oracle_width_scale)[1]
                        / closed_form.gaussian_moments(cf, tc)[1])
        out.append(_result(f"compression-ratio[alpha={alpha:.4g}]",
                           dx_wall / dx_free, expected, 0.005))
    return out


def check_collision_momentum() -> List[CriterionResult]:
    """Symmetrized <p> at Tc matches the closed-form collision value
    within 1 percent for alpha in {0.5, 1, 2}."""
    out = []
    for alpha in ALPHAS_PMEAN:
        spec = _gaussian_spec(alpha)
        tc = validate(spec, PARAMS).classical_collision_time
        measured = analysis.symmetrized_momentum_mean(_wall_field(spec, tc), PARAMS)
        cf = closed_form.GaussianClosedForm(spec, PARAMS)
        expected = closed_form.collision_p_mean(cf)
        out.append(_result(f"collision-momentum[alpha={alpha:.4g}]",
                           measured, expected, 0.01 * abs(expected)))
    return out


def check_oracle_equivalence() -> List[CriterionResult]:
    """Quadrature free propagation vs the closed form, max-abs 1e-8 on a
    2048-point grid at t in {0, 1, 2}."""
    grid = Grid(-30.0, 30.0, 2048)
    cf = closed_form.GaussianClosedForm(STD, PARAMS)
    out = []
    for t in (0.0, 1.0, 2.0):
        f = sample_position_field(STD, grid, t, "free", None, PARAMS)
        ref = closed_form.gaussian_psi(cf, grid.points(), t)
        out.append(_bound(f"oracle-equivalence[t={t:g}]",
                          np.max(np.abs(f.values - ref)), 1e-8, "max"))
    return out


def check_route_equivalence() -> List[CriterionResult]:
    """Wall-sine vs wall-mirror amplitudes, max-abs 1e-6 over the wall
    grid at t in {0.5, 1, 1.5}."""
    grid = Grid(-30.0, 0.0, 2048)
    out = []
    for t in (0.5, 1.0, 1.5):
        q = auto_settings(STD, PARAMS, 30.0, t)
        sine = sample_position_field(STD, grid, t, "wall-sine", q, PARAMS)
        mirror = sample_position_field(STD, grid, t, "wall-mirror", q, PARAMS)
        out.append(_bound(f"route-equivalence[t={t:g}]",
                          np.max(np.abs(sine.values - mirror.values)), 1e-6, "max"))
    return out


def check_momentum_reversal() -> CriterionResult:
    """Momentum density long after the bounce mirrors the initial one:
    max_p |P(p, 2) - P_initial(-p)| < 1e-4."""
    phi = analysis.fourier_to_momentum(_wall_field(STD, 2.0), P_GRID, PARAMS)
    p = P_GRID.points()
    init = np.abs(initial_spectrum(STD, PARAMS, -p)) ** 2
    return _bound("momentum-reversal", np.max(np.abs(phi.density() - init)),
                  1e-4, "max")


def _standard_series(cache: Dict) -> analysis.TimeSeries:
    if "series" not in cache:
        times = [round(0.01 * i, 10) for i in range(201)]
        cache["series"] = analysis.compute_time_series(
            STD, times, "wall-mirror", Grid(-30.0, 0.0, 4096), P_GRID,
            params=PARAMS, closed_form=True)
    return cache["series"]


def check_uncertainty(cache: Dict) -> List[CriterionResult]:
    """Every row of the standard wall series has dx*dp >= hbar/2 - 1e-3,
    and the t = 0 row saturates hbar/2 within 1e-6."""
    series = _standard_series(cache)
    product = series.column("product")
    return [
        _bound("uncertainty-floor", float(product.min()), 0.5 - 1e-3, "min"),
        _result("uncertainty-initial-saturation", float(product[0]), 0.5, 1e-6),
    ]


def check_ehrenfest() -> List[CriterionResult]:
    """Free residual < 1e-6 at dt = 0.01; wall residual drops by >= 3.5x
    when dt is halved (quadratic convergence of the centered difference)."""
    times = [round(0.01 * i, 10) for i in range(201)]
    free = analysis.compute_time_series(STD, times, "free", FREE_GRID, P_GRID,
                                        params=PARAMS, closed_form=True)
    res_free = analysis.ehrenfest_residual(free, PARAMS.mass)
    out = [_bound("ehrenfest-free", res_free, 1e-6, "max")]

    residuals = []
    # The half-line state has a derivative kink at the wall, so |phi(p)|^2
    # carries 1/p^4 tails; the momentum window must be wide enough that
    # the truncation bias in <p> stays below the time-differencing error.
    p_wide = Grid(-80.0, 80.0, 4096)
    for dt in (0.01, 0.005):
        n = int(round(1.0 / dt))
        times = [round(0.5 + dt * i, 10) for i in range(n + 1)]
        wall = analysis.compute_time_series(
            STD, times, "wall-mirror", Grid(-30.0, 0.0, 4096), p_wide,
            params=PARAMS, closed_form=True)
        residuals.append(analysis.ehrenfest_residual(wall, PARAMS.mass))
    out.append(_bound("ehrenfest-wall-convergence",
                      residuals[0] / residuals[1], 3.5, "min",
                      detail=f"residuals {residuals[0]:.3e} -> {residuals[1]:.3e}"))
    return out


def check_norm_conservation(cache: Dict) -> CriterionResult:
    """Wall-mirror norm drift < 1e-7 over t in [0, 2]."""
    norms = _standard_series(cache).column("norm")
    return _bound("norm-conservation", float(np.max(np.abs(norms - norms[0]))),
                  1e-7, "max")


def check_collision_density_shape() -> CriterionResult:
    """Quadrature-built collision density matches the sin^2-modulated
    Gaussian within 2 percent wherever the density exceeds 1 percent of
    its peak."""
    grid = Grid(-30.0, 0.0, 2048)
    tc = validate(STD, PARAMS).classical_collision_time
    q = auto_settings(STD, PARAMS, 30.0, tc)
    f = sample_position_field(STD, grid, tc, "wall-mirror", q, PARAMS)
    dens = f.density()
    cf = closed_form.GaussianClosedForm(STD, PARAMS)
    ref = closed_form.collision_density_approx(cf, grid.points())
    mask = ref > 0.01 * ref.max()
    rel = np.max(np.abs(dens[mask] - ref[mask]) / ref[mask])
    return _bound("collision-density-shape", rel, 0.02, "max")


LORENTZ = PacketSpec(kind="lorentzian", alpha=1.0, x0=-10.0, p0=10.0)
LORENTZ_GRID = Grid(-60.0, 0.0, 8192)
LORENTZ_P_GRID = Grid(-40.0, 40.0, 4096)


def check_lorentzian_initial() -> CriterionResult:
    """Quadrature-propagated Lorentzian packet at t = 0 matches the
    normalized double-exponential form to 1e-6."""
    grid = Grid(-30.0, 10.0, 2048)
    q = auto_settings(LORENTZ, PARAMS, 30.0, 0.0)
    f = sample_position_field(LORENTZ, grid, 0.0, "free", q, PARAMS)
    ref = closed_form.lorentzian_psi0(LORENTZ, PARAMS, grid.points())
    return _bound("lorentzian-initial", np.max(np.abs(f.values - ref)),
                  1e-6, "max")


def _lorentzian_late_field(cache: Dict):
    if "lorentz_t2" not in cache:
        q = auto_settings(LORENTZ, PARAMS, 60.0, 2.0)
        cache["lorentz_t2"] = sample_position_field(
            LORENTZ, LORENTZ_GRID, 2.0, "wall-mirror", q, PARAMS)
    return cache["lorentz_t2"]


def check_lorentzian_reversal(cache: Dict) -> CriterionResult:
    """Post-bounce Lorentzian momentum density vs the mirrored initial
    density, max-abs 1e-3 at t = 2."""
    phi = analysis.fourier_to_momentum(_lorentzian_late_field(cache),
                                       LORENTZ_P_GRID, PARAMS)
    p = LORENTZ_P_GRID.points()
    init = np.abs(initial_spectrum(LORENTZ, PARAMS, -p)) ** 2
    return _bound("lorentzian-reversal", np.max(np.abs(phi.density() - init)),
                  1e-3, "max")


def _gaussian_overlap(field) -> float:
    """Bhattacharyya overlap of a field's density with the Gaussian of
    the same norm, mean and spread."""
    dens = field.density()
    x = field.grid.points()
    m = analysis.position_moments(field)
    gauss = m.norm * np.exp(-((x - m.mean) ** 2) / (2.0 * m.spread ** 2)) \
        / (m.spread * math.sqrt(2.0 * math.pi))
    return float(np.trapezoid(np.sqrt(dens * gauss), dx=field.grid.spacing)) / m.norm


def check_lorentzian_gaussianization(cache: Dict) -> CriterionResult:
    """The evolved Lorentzian packet is closer to Gaussian at t = 2 than
    at t = 0 (soft shape check via Bhattacharyya overlap)."""
    from .core import SampledField
    x0_grid = Grid(-30.0, 0.0, 8192)
    init = SampledField(grid=x0_grid,
                        values=closed_form.lorentzian_psi0(LORENTZ, PARAMS,
                                                           x0_grid.points()),
                        space="position", time=0.0)
    before = _gaussian_overlap(init)
    after = _gaussian_overlap(_lorentzian_late_field(cache))
    return CriterionResult(name="lorentzian-gaussianization",
                           measured=after, expected=before, tol=0.0,
                           passed=bool(after > before),
                           detail="overlap(t=2) > overlap(t=0)")


def check_figure_data() -> List[CriterionResult]:
    """Figure configs produce snapshot files with conserved norms and
    pre-collision peaks within one grid spacing of x0 + p0 t / m."""
    from .runner import run_scenario
    cfg_text = """
packet.kind = gaussian
method = wall-mirror
times.start = 0.0
times.stop = 1.0
times.step = 0.5
times.snapshots = 0.0, 0.5
grid.position.n = 4096
quadrature.closed_form = true
output.dir = unused
"""
    out = []
    with tempfile.TemporaryDirectory() as tmp:
        config = parse_config(cfg_text, "<acceptance>")
        run_scenario(config, output_dir=tmp)
        base = Path(tmp)
        files = sorted(f.name for f in base.iterdir())
        expected_files = {"series.csv", "summary.json",
                          "snapshot_x_0.000.csv", "snapshot_p_0.000.csv",
                          "snapshot_x_0.500.csv", "snapshot_p_0.500.csv"}
        missing = expected_files - set(files)
        out.append(CriterionResult(
            name="figure-data-files", measured=float(len(missing)),
            expected=0.0, tol=0.0, passed=not missing,
            detail=f"missing: {sorted(missing)}" if missing else "all present"))
        for t in (0.0, 0.5):
            data = np.loadtxt(base / f"snapshot_x_{t:.3f}.csv",
                              delimiter=",", skiprows=1)
            x, abs2 = data[:, 0], data[:, 3]
            norm = np.trapezoid(abs2, x)
            out.append(_result(f"figure-data-norm[t={t:g}]", norm, 1.0, 1e-8))
            peak = x[int(np.argmax(abs2))]
            dx = x[1] - x[0]
            out.append(_result(f"figure-data-peak[t={t:g}]", peak,
                               STD.x0 + STD.p0 * t / PARAMS.mass, dx))
    return out


def run_all(fast: bool = False,
            oracle_width_scale: float = 1.0) -> List[CriterionResult]:
    """Run every acceptance criterion; fast=True skips the slow
    Lorentzian bounce checks."""
    cache: Dict = {}
    results: List[CriterionResult] = []
    results += check_compression_ratio(oracle_width_scale)
    results += check_collision_momentum()
    results += check_oracle_equivalence()
    results += check_route_equivalence()
    results.append(check_momentum_reversal())
    results += check_uncertainty(cache)
    results += check_ehrenfest()
    results.append(check_norm_conservation(cache))
    results.append(check_collision_density_shape())
    results.append(check_lorentzian_initial())
    if not fast:
        results.append(check_lorentzian_reversal(cache))
        results.append(check_lorentzian_gaussianization(cache))
    results += check_figure_data()
    return results


def print_report(fast: bool = False) -> int:
    results = run_all(fast=fast)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name:<{width}}  measured={r.measured:.6g}  "
              f"expected={r.expected:.6g}  tol={r.tol:.1e}  {r.detail}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} criteria passed")
    return 0 if failed == 0 else 1
