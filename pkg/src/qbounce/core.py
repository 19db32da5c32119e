"""Shared domain types: physical parameters, packet descriptions, grids,
sampled fields and moment records.

All quantities are dimensionless doubles with hbar = m = 1 by default.
Every type here is an immutable value object and safe to share between
threads.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

PacketKind = str  # "gaussian" | "lorentzian" | "tabulated"

FAR_FROM_WALL_FACTOR = 5.0


class ValidationError(ValueError):
    """A packet spec or parameter set violates one of its invariants."""


class ResolutionError(RuntimeError):
    """A grid or quadrature rule is too coarse to resolve the requested
    phase oscillations."""


class FarFromWallWarning(UserWarning):
    """The packet starts close enough to the wall that its tail beyond
    x = 0 is not negligible."""


@dataclass(frozen=True)
class PhysicalParams:
    """Fundamental constants of the model: hbar and the particle mass."""

    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self) -> None:
        if not (self.hbar > 0.0):
            raise ValidationError(f"hbar must be positive, got {self.hbar}")
        if not (self.mass > 0.0):
            raise ValidationError(f"mass must be positive, got {self.mass}")


@dataclass(frozen=True)
class PacketSpec:
    """Declarative description of an initial momentum-space amplitude.

    Parameters
    ----------
    kind : str
        One of "gaussian", "lorentzian" or "tabulated".
    alpha : float
        Inverse-momentum width (the Gaussian alpha, or the Lorentzian
        width parameter).  Must be positive for the analytic kinds.
    x0 : float
        Initial center position.  Negative for wall scenarios.
    p0 : float
        Central momentum.
    table : tuple of (p, amplitude), optional
        Uniform momentum samples of the envelope for kind="tabulated".
        The translation phase exp(-i p x0 / hbar) is applied on top of
        the tabulated values; amplitudes between samples are linearly
        interpolated.
    """

    kind: PacketKind
    alpha: float = 1.0
    x0: float = -10.0
    p0: float = 10.0
    table: Optional[Tuple[Tuple[float, complex], ...]] = None

    def __post_init__(self) -> None:
        if self.kind not in ("gaussian", "lorentzian", "tabulated"):
            raise ValidationError(f"unknown packet kind {self.kind!r}")
        if self.kind in ("gaussian", "lorentzian") and not (self.alpha > 0.0):
            raise ValidationError(f"alpha must be positive, got {self.alpha}")
        if self.kind == "tabulated":
            if not self.table or len(self.table) < 2:
                raise ValidationError("tabulated packets need at least 2 samples")
            p = np.array([row[0] for row in self.table], dtype=float)
            dp = np.diff(p)
            if np.any(dp <= 0.0):
                raise ValidationError("tabulated p samples must be strictly increasing")
            if not np.allclose(dp, dp[0], rtol=1e-9, atol=0.0):
                raise ValidationError("tabulated packets must use a uniform p grid")


@dataclass(frozen=True)
class DerivedScales:
    """Kinematic scales derived from a packet spec.

    t0 is the spreading time mass * hbar * alpha**2; beta(t) is the
    width scale alpha * hbar * sqrt(1 + (t/t0)**2).
    """

    t0: float
    alpha_hbar: float
    classical_collision_time: Optional[float] = None

    def beta(self, t: float) -> float:
        return self.alpha_hbar * math.sqrt(1.0 + (t / self.t0) ** 2)


def validate(spec: PacketSpec, params: PhysicalParams,
             wall: bool = True) -> DerivedScales:
    """Check a packet spec against physical parameters and derive scales.

    Emits a FarFromWallWarning when |x0| < 5 * alpha * hbar, and for
    wall scenarios rejects x0 >= 0 and p0 <= 0.
    """
    if spec.kind == "tabulated":
        # width scale not defined by a single alpha; use the table extent
        p = np.array([row[0] for row in spec.table], dtype=float)
        alpha_eff = 1.0 / max(p[-1] - p[0], np.finfo(float).tiny)
    else:
        alpha_eff = spec.alpha

    t0 = params.mass * params.hbar * alpha_eff ** 2
    alpha_hbar = alpha_eff * params.hbar

    tc: Optional[float] = None
    if wall:
        if spec.x0 >= 0.0:
            raise ValidationError(
                f"wall scenarios need x0 < 0, got x0 = {spec.x0}")
        if spec.p0 <= 0.0:
            raise ValidationError(
                f"wall scenarios need p0 > 0, got p0 = {spec.p0}")
        tc = params.mass * abs(spec.x0) / spec.p0
        if abs(spec.x0) < FAR_FROM_WALL_FACTOR * alpha_hbar:
            warnings.warn(
                f"|x0| = {abs(spec.x0)} < {FAR_FROM_WALL_FACTOR} * alpha * hbar"
                f" = {FAR_FROM_WALL_FACTOR * alpha_hbar}; the tail beyond the"
                " wall is not negligible", FarFromWallWarning, stacklevel=2)
    return DerivedScales(t0=t0, alpha_hbar=alpha_hbar,
                         classical_collision_time=tc)


@dataclass(frozen=True)
class Grid:
    """Uniform 1-D grid with n samples on [min, max]."""

    min: float
    max: float
    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValidationError(f"grid needs n >= 2, got {self.n}")
        if not (self.max > self.min):
            raise ValidationError(
                f"grid needs max > min, got [{self.min}, {self.max}]")

    @property
    def spacing(self) -> float:
        return (self.max - self.min) / (self.n - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.n)


@dataclass(frozen=True)
class SampledField:
    """A complex-valued function sampled on a uniform grid.

    space is "position" or "momentum"; time records when the field was
    evaluated.
    """

    grid: Grid
    values: np.ndarray
    space: str
    time: float

    def __post_init__(self) -> None:
        if self.space not in ("position", "momentum"):
            raise ValidationError(f"unknown space {self.space!r}")
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.n,):
            raise ValidationError(
                f"values shape {values.shape} does not match grid n = {self.grid.n}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if not np.isfinite(self.norm_squared()):
            raise ValidationError("field norm is not finite")

    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def norm_squared(self) -> float:
        return float(np.trapezoid(self.density(), dx=self.grid.spacing))


@dataclass(frozen=True)
class MomentSet:
    """Norm, mean and standard deviation of a sampled density."""

    norm: float
    mean: float
    spread: float

    def __post_init__(self) -> None:
        if self.norm < 0.0:
            raise ValidationError(f"norm must be >= 0, got {self.norm}")
        if self.spread < 0.0:
            raise ValidationError(f"spread must be >= 0, got {self.spread}")
