"""Quadrature propagation: the free route against the closed form, and
the two wall routes against each other."""

import numpy as np
import pytest

from qbounce.closed_form import GaussianClosedForm, gaussian_psi, lorentzian_psi0
from qbounce.core import (Grid, PacketSpec, PhysicalParams, ResolutionError,
                          ValidationError)
from qbounce.propagator import (QuadratureSettings, auto_settings,
                                default_p_window, initial_spectrum,
                                sample_position_field, spectrum_at)

STD = PacketSpec(kind="gaussian", alpha=1.0, x0=-10.0, p0=10.0)
LOR = PacketSpec(kind="lorentzian", alpha=1.0, x0=-10.0, p0=10.0)
PARAMS = PhysicalParams()


def test_settings_invariants():
    with pytest.raises(ValidationError):
        QuadratureSettings(p_window=0.0)
    with pytest.raises(ValidationError):
        QuadratureSettings(p_window=10.0, n_nodes=32)
    with pytest.raises(ValidationError):
        QuadratureSettings(p_window=10.0, rule="simpson")


def test_default_window_scales_with_alpha():
    assert default_p_window(STD) == pytest.approx(10.0)
    assert default_p_window(PacketSpec(kind="gaussian", alpha=2.0)) == \
        pytest.approx(5.0)
    assert default_p_window(LOR) == pytest.approx(60.0)


def test_auto_settings_raise_node_count_with_time():
    q0 = auto_settings(STD, PARAMS, 30.0, 0.0)
    q2 = auto_settings(STD, PARAMS, 30.0, 20.0)
    assert q2.n_nodes > q0.n_nodes >= 4096


def test_initial_spectrum_is_normalized():
    p = np.linspace(-40.0, 60.0, 400001)
    for spec in (STD, LOR):
        # the Lorentzian density tail beyond the window carries O(1/W^3) mass
        phi = initial_spectrum(spec, PARAMS, p)
        assert np.trapezoid(np.abs(phi) ** 2, p) == pytest.approx(1.0, abs=1e-5)


def test_spectrum_time_dependence_is_pure_phase():
    p = np.linspace(-10.0, 30.0, 101)
    np.testing.assert_allclose(np.abs(spectrum_at(STD, PARAMS, p, 1.7)),
                               np.abs(initial_spectrum(STD, PARAMS, p)),
                               rtol=1e-14)


@pytest.mark.parametrize("rule", ["trapezoid", "gauss-legendre-composite"])
@pytest.mark.parametrize("t", [0.0, 0.8, 2.0])
def test_free_quadrature_matches_closed_form(rule, t):
    grid = Grid(-25.0, 15.0, 257)
    q = auto_settings(STD, PARAMS, 25.0, t, rule=rule)
    field = sample_position_field(STD, grid, t, "free", q, PARAMS)
    ref = gaussian_psi(GaussianClosedForm(STD, PARAMS), grid.points(), t)
    np.testing.assert_allclose(field.values, ref, atol=1e-10, rtol=0.0)


@pytest.mark.parametrize("t", [0.5, 1.0, 1.5])
def test_sine_and_mirror_routes_agree(t):
    grid = Grid(-20.0, 0.0, 129)
    q = auto_settings(STD, PARAMS, 20.0, t)
    sine = sample_position_field(STD, grid, t, "wall-sine", q, PARAMS)
    mirror = sample_position_field(STD, grid, t, "wall-mirror", q, PARAMS)
    np.testing.assert_allclose(sine.values, mirror.values, atol=1e-12, rtol=0.0)


def test_mirror_quadrature_matches_closed_form_superposition():
    grid = Grid(-20.0, 0.0, 129)
    t = 1.0
    numeric = sample_position_field(STD, grid, t, "wall-mirror", None, PARAMS)
    exact = sample_position_field(STD, grid, t, "wall-mirror", None, PARAMS,
                                  closed_form=True)
    np.testing.assert_allclose(numeric.values, exact.values, atol=1e-10, rtol=0.0)


def test_wall_amplitude_vanishes_at_the_wall():
    grid = Grid(-16.0, 0.0, 65)
    for method in ("wall-sine", "wall-mirror"):
        field = sample_position_field(STD, grid, 1.0, method, None, PARAMS)
        assert abs(field.values[-1]) < 1e-12


def test_wall_methods_reject_grids_beyond_the_wall():
    with pytest.raises(ValidationError):
        sample_position_field(STD, Grid(-10.0, 1.0, 65), 1.0, "wall-mirror",
                              None, PARAMS)
    with pytest.raises(ValidationError):
        sample_position_field(STD, Grid(-10.0, 0.0, 65), 1.0, "reflect",
                              None, PARAMS)


def test_under_resolved_quadrature_raises():
    q = QuadratureSettings(p_window=10.0, n_nodes=64)
    with pytest.raises(ResolutionError):
        sample_position_field(STD, Grid(-30.0, 0.0, 65), 2.0, "wall-sine",
                              q, PARAMS)


def test_lorentzian_initial_state_by_quadrature():
    grid = Grid(-25.0, 5.0, 301)
    q = auto_settings(LOR, PARAMS, 25.0, 0.0)
    field = sample_position_field(LOR, grid, 0.0, "free", q, PARAMS)
    ref = lorentzian_psi0(LOR, PARAMS, grid.points())
    np.testing.assert_allclose(field.values, ref, atol=1e-6, rtol=0.0)


def test_tabulated_packet_reproduces_its_gaussian_source():
    # a Gaussian sampled onto a table must propagate like the analytic one
    p = np.linspace(0.0, 20.0, 1601)
    env = (1.0 / np.pi ** 0.25) * np.exp(-((p - 10.0) ** 2) / 2.0)
    table = tuple((float(pi), complex(ei)) for pi, ei in zip(p, env))
    tab = PacketSpec(kind="tabulated", x0=-10.0, p0=10.0, table=table)
    grid = Grid(-18.0, -2.0, 65)
    t = 0.5
    q = QuadratureSettings(p_window=default_p_window(tab), n_nodes=4096)
    field = sample_position_field(tab, grid, t, "free", q, PARAMS)
    ref = gaussian_psi(GaussianClosedForm(STD, PARAMS), grid.points(), t)
    np.testing.assert_allclose(field.values, ref, atol=5e-4, rtol=0.0)
