"""Numerical engine for one-dimensional wave packets bouncing off an
infinite wall: spectral propagation, mirror-method cross-checks,
momentum-space analysis and closed-form collision results."""

from .core import (DerivedScales, FarFromWallWarning, Grid, MomentSet,
                   PacketSpec, PhysicalParams, ResolutionError, SampledField,
                   ValidationError, validate)
from .propagator import (QuadratureSettings, auto_settings, default_p_window,
                         free_position_amplitude, initial_spectrum,
                         sample_position_field, spectrum_at,
                         wall_position_amplitude_mirror,
                         wall_position_amplitude_sine)
from .analysis import (SeriesRow, TimeSeries, classical_collision_time,
                       compute_time_series, ehrenfest_residual,
                       empirical_compression_time, fourier_to_momentum,
                       fourier_to_position, momentum_moments,
                       position_moments, symmetrized_momentum_mean)
from .closed_form import (GaussianClosedForm, collision_compression_ratio,
                          collision_density_approx, collision_p_mean,
                          collision_x_moments, gaussian_density,
                          gaussian_moments, gaussian_psi, lorentzian_psi0)

__version__ = "0.1.0"
