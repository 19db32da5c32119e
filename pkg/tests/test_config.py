"""Scenario config parsing."""

import pytest

from qbounce.config import ConfigError, parse_config

MINIMAL = """
packet.kind = gaussian
method = wall-mirror
"""


def test_defaults_fill_in():
    config = parse_config(MINIMAL)
    assert config.packet.alpha == 1.0
    assert config.packet.x0 == -10.0
    assert config.packet.p0 == 10.0
    assert config.params.hbar == 1.0
    assert (config.t_start, config.t_stop, config.t_step) == (0.0, 2.0, 0.01)
    assert config.x_grid.min == -30.0 and config.x_grid.max == 0.0
    assert config.p_window is None and config.n_nodes is None
    assert config.closed_form is None
    assert config.output_format == "csv"


def test_free_method_gets_symmetric_default_grid():
    config = parse_config("method = free")
    assert config.x_grid.min == -30.0 and config.x_grid.max == 30.0


def test_comments_and_blank_lines_ignored():
    config = parse_config("""
# a scenario
packet.alpha = 2.0   # inline comment
method = free
""")
    assert config.packet.alpha == 2.0


def test_series_times_are_inclusive():
    config = parse_config("times.start = 0.0\ntimes.stop = 1.0\ntimes.step = 0.25")
    assert config.series_times() == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])


def test_snapshot_list_parsing():
    config = parse_config("times.snapshots = 0.0, 0.5,1.5")
    assert config.snapshots == (0.0, 0.5, 1.5)


@pytest.mark.parametrize("text", [
    "packet.kind = airy",
    "method = reflect",
    "times.step = -0.1",
    "times.start = 1.0\ntimes.stop = 0.5",
    "grid.position.max = 2.0",          # wall grid must end at x <= 0
    "quadrature.rule = simpson",
    "output.format = xml",
    "no_equals_sign_here",
    "unknown.key = 1",
    "packet.alpha = abc",
])
def test_invalid_configs_rejected(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_explicit_quadrature_settings():
    config = parse_config("""
quadrature.p_window = 12.5
quadrature.n_nodes = 2048
quadrature.rule = gauss-legendre-composite
quadrature.closed_form = false
""")
    assert config.p_window == 12.5
    assert config.n_nodes == 2048
    assert config.rule == "gauss-legendre-composite"
    assert config.closed_form is False
