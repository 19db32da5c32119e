"""Transforms, moments and time-series diagnostics."""

import numpy as np
import pytest

from qbounce import analysis
from qbounce.closed_form import GaussianClosedForm, gaussian_moments, gaussian_psi
from qbounce.core import (Grid, PacketSpec, PhysicalParams, ResolutionError,
                          SampledField, ValidationError)
from qbounce.propagator import initial_spectrum, sample_position_field

STD = PacketSpec(kind="gaussian", alpha=1.0, x0=-10.0, p0=10.0)
PARAMS = PhysicalParams()
X_GRID = Grid(-30.0, 10.0, 2048)
P_GRID = Grid(-5.0, 25.0, 1024)


def _initial_field():
    cf = GaussianClosedForm(STD, PARAMS)
    return SampledField(grid=X_GRID, values=gaussian_psi(cf, X_GRID.points(), 0.0),
                        space="position", time=0.0)


def test_fourier_to_momentum_recovers_initial_spectrum():
    phi = analysis.fourier_to_momentum(_initial_field(), P_GRID, PARAMS)
    ref = initial_spectrum(STD, PARAMS, P_GRID.points())
    np.testing.assert_allclose(phi.values, ref, atol=1e-10, rtol=0.0)


def test_fourier_round_trip():
    field = _initial_field()
    phi = analysis.fourier_to_momentum(field, Grid(-10.0, 30.0, 4096), PARAMS)
    back = analysis.fourier_to_position(phi, X_GRID, PARAMS)
    np.testing.assert_allclose(back.values, field.values, atol=1e-8, rtol=0.0)


def test_transform_guards_against_aliasing():
    coarse = SampledField(grid=Grid(-30.0, 10.0, 32),
                          values=np.zeros(32), space="position", time=0.0)
    with pytest.raises(ResolutionError):
        analysis.fourier_to_momentum(coarse, Grid(-40.0, 40.0, 64), PARAMS)
    with pytest.raises(ValidationError):
        analysis.fourier_to_momentum(
            analysis.fourier_to_momentum(_initial_field(), P_GRID, PARAMS),
            P_GRID, PARAMS)


def test_position_moments_match_closed_form():
    m = analysis.position_moments(_initial_field())
    mean_x, dx, _, _ = gaussian_moments(GaussianClosedForm(STD, PARAMS), 0.0)
    assert m.norm == pytest.approx(1.0, abs=1e-12)
    assert m.mean == pytest.approx(mean_x, abs=1e-10)
    assert m.spread == pytest.approx(dx, abs=1e-10)


def test_momentum_moments_match_closed_form():
    phi = analysis.fourier_to_momentum(_initial_field(), P_GRID, PARAMS)
    m = analysis.momentum_moments(phi)
    assert m.mean == pytest.approx(10.0, abs=1e-8)
    assert m.spread == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-8)


def test_symmetrized_momentum_mean_on_free_packet():
    # the centered difference biases <p> by about (p0 dx)^2/6 relative
    mean_p = analysis.symmetrized_momentum_mean(_initial_field(), PARAMS)
    assert mean_p == pytest.approx(10.0, rel=1e-2)


def test_symmetrized_momentum_mean_rejects_under_resolved_field():
    grid = Grid(-30.0, 10.0, 256)  # ~ 6.4 rad of phase per step at p0 = 10
    cf = GaussianClosedForm(STD, PARAMS)
    field = SampledField(grid=grid, values=gaussian_psi(cf, grid.points(), 0.0),
                         space="position", time=0.0)
    with pytest.raises(ResolutionError):
        analysis.symmetrized_momentum_mean(field, PARAMS)


def test_classical_collision_time():
    assert analysis.classical_collision_time(STD, PARAMS) == pytest.approx(1.0)
    slow = PacketSpec(kind="gaussian", x0=-6.0, p0=3.0)
    assert analysis.classical_collision_time(slow, PARAMS) == pytest.approx(2.0)
    with pytest.raises(ValidationError):
        analysis.classical_collision_time(
            PacketSpec(kind="gaussian", x0=-6.0, p0=-3.0), PARAMS)


def test_time_series_free_packet_columns():
    times = [0.0, 0.25, 0.5, 0.75, 1.0]
    series = analysis.compute_time_series(STD, times, "free", X_GRID, P_GRID,
                                          params=PARAMS)
    assert len(series) == len(times)
    np.testing.assert_allclose(series.column("mean_x"),
                               -10.0 + 10.0 * np.asarray(times), atol=1e-8)
    np.testing.assert_allclose(series.column("norm"), 1.0, atol=1e-10)
    assert series.rows[0].product == pytest.approx(0.5, abs=1e-8)
    assert np.all(series.column("product") >= 0.5 - 1e-9)


def test_time_series_requires_increasing_times():
    with pytest.raises(ValidationError):
        analysis.compute_time_series(STD, [0.0, 0.5, 0.5], "free",
                                     X_GRID, P_GRID, params=PARAMS)


def test_ehrenfest_residual_free_is_time_step_limited():
    times = [0.1 * i for i in range(11)]
    series = analysis.compute_time_series(STD, times, "free", X_GRID, P_GRID,
                                          params=PARAMS)
    assert analysis.ehrenfest_residual(series, PARAMS.mass) < 1e-6


def test_ehrenfest_residual_input_validation():
    times = [0.0, 0.3, 0.9]
    series = analysis.compute_time_series(STD, times, "free", X_GRID, P_GRID,
                                          params=PARAMS)
    with pytest.raises(ValidationError):
        analysis.ehrenfest_residual(series, PARAMS.mass)
    short = analysis.compute_time_series(STD, [0.0, 0.1], "free", X_GRID,
                                         P_GRID, params=PARAMS)
    with pytest.raises(ValidationError):
        analysis.ehrenfest_residual(short, PARAMS.mass)


def test_empirical_compression_time_near_classical_value():
    times = [0.05 * i for i in range(41)]
    series = analysis.compute_time_series(STD, times, "wall-mirror",
                                          Grid(-30.0, 0.0, 2048), P_GRID,
                                          params=PARAMS, closed_form=True)
    tc = analysis.classical_collision_time(STD, PARAMS)
    assert analysis.empirical_compression_time(series) == pytest.approx(tc, abs=0.05)
