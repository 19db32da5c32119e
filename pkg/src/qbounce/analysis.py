"""Momentum-space transforms, expectation values and time series.

The Fourier transform to momentum space and all moments are evaluated by
trapezoid quadrature on the sampled grids, so every number here is an
independent numerical route that can be checked against the closed
forms in :mod:`qbounce.closed_form`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import (Grid, MomentSet, PacketSpec, PhysicalParams,
                   ResolutionError, SampledField, ValidationError, validate)
from .propagator import QuadratureSettings, auto_settings, sample_position_field


@dataclass(frozen=True)
class SeriesRow:
    t: float
    norm: float
    mean_x: float
    dx: float
    mean_p: float
    dp: float
    product: float  # dx * dp in units of hbar


@dataclass(frozen=True)
class TimeSeries:
    """Ordered records of (t, norm, <x>, dx, <p>, dp, dx*dp/hbar)."""

    rows: Tuple[SeriesRow, ...]

    def __post_init__(self) -> None:
        t = np.array([r.t for r in self.rows])
        if t.size > 1 and not np.all(np.diff(t) > 0.0):
            raise ValidationError("time series rows must be strictly increasing in t")

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    def __len__(self) -> int:
        return len(self.rows)


@lru_cache(maxsize=4)
def _transform_kernel(x_min: float, x_max: float, nx: int,
                      p_min: float, p_max: float, np_: int,
                      hbar: float, sign: float) -> np.ndarray:
    """Dense trapezoid-weighted kernel exp(sign * i p x / hbar) for
    repeated transforms between a fixed pair of grids."""
    x = np.linspace(x_min, x_max, nx)
    p = np.linspace(p_min, p_max, np_)
    dx = x[1] - x[0]
    w = np.full(nx, dx)
    w[0] = w[-1] = dx / 2.0
    kernel = np.exp(sign * 1j * np.outer(p, x) / hbar)
    kernel *= w / math.sqrt(2.0 * math.pi * hbar)
    return kernel


def fourier_to_momentum(field: SampledField, p_grid: Grid,
                        params: PhysicalParams = PhysicalParams()) -> SampledField:
    """Transform a position-space field to momentum space:

        phi(p, t) = (2 pi hbar)**(-1/2) * integral exp(-i p x / hbar) psi(x, t) dx
    """
    if field.space != "position":
        raise ValidationError("fourier_to_momentum needs a position-space field")
    p_abs_max = max(abs(p_grid.min), abs(p_grid.max))
    if field.grid.spacing > math.pi * params.hbar / p_abs_max:
        raise ResolutionError(
            f"position spacing {field.grid.spacing:.3e} exceeds the aliasing "
            f"limit pi*hbar/|p|max = {math.pi * params.hbar / p_abs_max:.3e}")
    kernel = _transform_kernel(field.grid.min, field.grid.max, field.grid.n,
                               p_grid.min, p_grid.max, p_grid.n,
                               params.hbar, -1.0)
    return SampledField(grid=p_grid, values=kernel @ field.values,
                        space="momentum", time=field.time)


def fourier_to_position(field: SampledField, x_grid: Grid,
                        params: PhysicalParams = PhysicalParams()) -> SampledField:
    """Inverse transform, with the conjugate kernel exp(+i p x / hbar)."""
    if field.space != "momentum":
        raise ValidationError("fourier_to_position needs a momentum-space field")
    x_abs_max = max(abs(x_grid.min), abs(x_grid.max))
    if field.grid.spacing > math.pi * params.hbar / x_abs_max:
        raise ResolutionError(
            f"momentum spacing {field.grid.spacing:.3e} exceeds the aliasing "
            f"limit pi*hbar/|x|max = {math.pi * params.hbar / x_abs_max:.3e}")
    kernel = _transform_kernel(field.grid.min, field.grid.max, field.grid.n,
                               x_grid.min, x_grid.max, x_grid.n,
                               params.hbar, +1.0)
    return SampledField(grid=x_grid, values=kernel @ field.values,
                        space="position", time=field.time)


def _moments(field: SampledField) -> MomentSet:
    coord = field.grid.points()
    dens = field.density()
    dx = field.grid.spacing
    norm = float(np.trapezoid(dens, dx=dx))
    mean = float(np.trapezoid(coord * dens, dx=dx)) / norm
    second = float(np.trapezoid(coord ** 2 * dens, dx=dx)) / norm
    return MomentSet(norm=norm, mean=mean,
                     spread=math.sqrt(max(second - mean ** 2, 0.0)))


def position_moments(field: SampledField) -> MomentSet:
    """Norm, <x> and dx of a position-space field (norm-divided)."""
    if field.space != "position":
        raise ValidationError("position_moments needs a position-space field")
    return _moments(field)


def momentum_moments(field: SampledField) -> MomentSet:
    """Norm, <p> and dp of a momentum-space field (norm-divided)."""
    if field.space != "momentum":
        raise ValidationError("momentum_moments needs a momentum-space field")
    return _moments(field)


def symmetrized_momentum_mean(field: SampledField,
                              params: PhysicalParams = PhysicalParams(),
                              imag_tol: float = 1e-8) -> float:
    """<p> from the Hermitian-symmetric combination of psi* (p psi) and
    (p psi)* psi, with the momentum operator as a centered difference.

    The symmetrized integrand is real up to boundary terms; the residual
    imaginary part is required to stay below imag_tol.
    """
    if field.space != "position":
        raise ValidationError("symmetrized_momentum_mean needs a position-space field")
    psi = field.values
    dx = field.grid.spacing
    power = np.abs(np.fft.fft(psi * np.hanning(psi.size))) ** 2
    k = 2.0 * math.pi * np.fft.fftfreq(psi.size, d=dx)
    tail = float(power[np.abs(k) * dx > 0.75].sum())
    if tail > 1e-3 * float(power.sum()):
        raise ResolutionError(
            "significant spectral power at wavenumbers with k*dx > 0.75; the "
            "centered difference under-resolves the oscillation")
    dpsi = np.gradient(psi, dx)
    p_psi = -1j * params.hbar * dpsi
    integrand = 0.5 * (np.conj(p_psi) * psi + np.conj(psi) * p_psi)
    norm = float(np.trapezoid(np.abs(psi) ** 2, dx=dx))
    value = complex(np.trapezoid(integrand, dx=dx)) / norm
    if abs(value.imag) > imag_tol:
        raise ValidationError(
            f"imaginary residue {value.imag:.3e} of the symmetrized <p> "
            f"exceeds {imag_tol:.1e}")
    return value.real


def classical_collision_time(spec: PacketSpec,
                             params: PhysicalParams = PhysicalParams()) -> float:
    """Arrival time m |x0| / p0 of the packet center at the wall."""
    if spec.p0 <= 0.0:
        raise ValidationError(f"no collision for p0 = {spec.p0} <= 0")
    if spec.x0 >= 0.0:
        raise ValidationError(f"no collision for x0 = {spec.x0} >= 0")
    return params.mass * abs(spec.x0) / spec.p0


def compute_time_series(spec: PacketSpec, times: Sequence[float], method: str,
                        x_grid: Grid, p_grid: Grid,
                        q: Optional[QuadratureSettings] = None,
                        params: PhysicalParams = PhysicalParams(),
                        closed_form: Optional[bool] = None) -> TimeSeries:
    """One SeriesRow per time via field sampling, transform and moments.

    closed_form=None selects the fast exact Gaussian evaluation when the
    spec allows it; pass False to force quadrature everywhere.
    """
    times = np.asarray(times, dtype=float)
    if times.size and not np.all(np.diff(times) > 0.0):
        raise ValidationError("times must be strictly increasing")
    if closed_form is None:
        closed_form = spec.kind == "gaussian"
    if q is None and not (closed_form and spec.kind == "gaussian"):
        x_abs = max(abs(x_grid.min), abs(x_grid.max))
        q = auto_settings(spec, params, x_abs, float(np.max(np.abs(times))))
    rows: List[SeriesRow] = []
    for t in times:
        field = sample_position_field(spec, x_grid, float(t), method, q,
                                      params, closed_form=closed_form)
        xm = position_moments(field)
        pm = momentum_moments(fourier_to_momentum(field, p_grid, params))
        rows.append(SeriesRow(
            t=float(t), norm=xm.norm, mean_x=xm.mean, dx=xm.spread,
            mean_p=pm.mean, dp=pm.spread,
            product=xm.spread * pm.spread / params.hbar))
    return TimeSeries(rows=tuple(rows))


def ehrenfest_residual(series: TimeSeries,
                       mass: float = 1.0) -> float:
    """max |<p>_t - m d<x>/dt| with a centered difference in t.

    Requires at least 3 rows on a uniform time step.
    """
    if len(series) < 3:
        raise ValidationError("ehrenfest_residual needs at least 3 rows")
    t = series.column("t")
    dt = np.diff(t)
    if not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
        raise ValidationError("ehrenfest_residual needs a uniform time step")
    x = series.column("mean_x")
    p = series.column("mean_p")
    dxdt = (x[2:] - x[:-2]) / (2.0 * dt[0])
    return float(np.max(np.abs(p[1:-1] - mass * dxdt)))


def empirical_compression_time(series: TimeSeries) -> float:
    """Time of minimum dx over the series; ties break toward earliest t."""
    if len(series) == 0:
        raise ValidationError("empty time series")
    dx = series.column("dx")
    return float(series.column("t")[int(np.argmin(dx))])
