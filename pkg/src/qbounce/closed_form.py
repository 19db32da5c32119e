"""Closed-form reference results for Gaussian packets and the analytic
collision-time approximations, used as ground truth by the test suite.

The Gaussian free packet evolves as

    psi(x,t) = (alpha hbar F sqrt(pi))**(-1/2)
               * exp(i [p0 (x - x0) - p0^2 t / 2m] / hbar)
               * exp(-(x - x0 - p0 t / m)^2 / (2 alpha^2 hbar^2 F))

with F = 1 + i t/t0 and t0 = m hbar alpha^2.  At the classical collision
time the bouncing packet's density reduces exactly to a sin^2-modulated
Gaussian, which makes the collision moments tractable in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .core import DerivedScales, PacketSpec, PhysicalParams, ValidationError, validate

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class GaussianClosedForm:
    """Exact evolution of a Gaussian packet, plus wall-collision
    approximations evaluated at the classical collision time."""

    spec: PacketSpec
    params: PhysicalParams

    def __post_init__(self) -> None:
        if self.spec.kind != "gaussian":
            raise ValidationError(
                f"closed form needs a gaussian spec, got {self.spec.kind!r}")

    @property
    def scales(self) -> DerivedScales:
        return validate(self.spec, self.params, wall=False)

    def complex_width_factor(self, t: float) -> complex:
        """F = 1 + i t / t0; |F|^2 = 1 + (t/t0)^2."""
        return 1.0 + 1j * t / self.scales.t0


def gaussian_psi(cf: GaussianClosedForm, x: ArrayLike, t: float) -> np.ndarray:
    """Exact free-particle wavefunction of the Gaussian packet."""
    spec, params = cf.spec, cf.params
    hbar, m = params.hbar, params.mass
    a = spec.alpha
    F = cf.complex_width_factor(t)
    x = np.asarray(x, dtype=float)
    xc = spec.x0 + spec.p0 * t / m
    pref = 1.0 / np.sqrt(a * hbar * F * math.sqrt(math.pi))
    phase = np.exp(1j * (spec.p0 * (x - spec.x0) - spec.p0 ** 2 * t / (2 * m)) / hbar)
    envelope = np.exp(-((x - xc) ** 2) / (2 * a ** 2 * hbar ** 2 * F))
    return pref * phase * envelope


def gaussian_density(cf: GaussianClosedForm, x: ArrayLike, t: float) -> np.ndarray:
    """Free-particle probability density 1/(beta sqrt(pi)) * exp(-(x-xc)^2/beta^2)."""
    spec, params = cf.spec, cf.params
    beta = cf.scales.beta(t)
    x = np.asarray(x, dtype=float)
    xc = spec.x0 + spec.p0 * t / params.mass
    return np.exp(-((x - xc) ** 2) / beta ** 2) / (beta * math.sqrt(math.pi))


def gaussian_moments(cf: GaussianClosedForm, t: float) -> Tuple[float, float, float, float]:
    """(mean_x, dx, mean_p, dp) of the free Gaussian packet at time t.

    dx = (alpha hbar / sqrt(2)) * sqrt(1 + (t/t0)^2), so the t = 0
    uncertainty product is exactly hbar / 2.
    """
    spec, params = cf.spec, cf.params
    mean_x = spec.x0 + spec.p0 * t / params.mass
    dx = cf.scales.beta(t) / math.sqrt(2.0)
    dp = 1.0 / (math.sqrt(2.0) * spec.alpha)
    return mean_x, dx, spec.p0, dp


def _collision_beta(cf: GaussianClosedForm) -> float:
    scales = validate(cf.spec, cf.params, wall=True)
    return scales.beta(scales.classical_collision_time)


def collision_density_approx(cf: GaussianClosedForm, x: ArrayLike,
                             width_scale: float = 1.0) -> np.ndarray:
    """Bouncing-packet density at the classical collision time:

        (4 / (beta sqrt(pi))) * sin^2(p0 x / hbar) * exp(-x^2 / beta^2)

    for x <= 0 (zero beyond the wall).  width_scale is a test hook that
    perturbs beta; leave at 1.0 for physical results.
    """
    beta = _collision_beta(cf) * width_scale
    x = np.asarray(x, dtype=float)
    dens = (4.0 / (beta * math.sqrt(math.pi))
            * np.sin(cf.spec.p0 * x / cf.params.hbar) ** 2
            * np.exp(-(x ** 2) / beta ** 2))
    return np.where(x <= 0.0, dens, 0.0)


def collision_x_moments(cf: GaussianClosedForm,
                        width_scale: float = 1.0) -> Tuple[float, float]:
    """(mean_x, dx) of the bouncing packet at the collision time.

    Obtained from the sin^2 -> 1/2 average of the collision density:
    mean_x = -beta/sqrt(pi), dx = beta * sqrt(1/2 - 1/pi).  The ratio
    dx_wall/dx_free = sqrt((pi-2)/pi) ~ 0.603 is independent of alpha.
    """
    beta = _collision_beta(cf) * width_scale
    mean_x = -beta / math.sqrt(math.pi)
    dx = beta * math.sqrt(0.5 - 1.0 / math.pi)
    return mean_x, dx


def collision_compression_ratio() -> float:
    """dx_wall / dx_free at the collision time, sqrt((pi-2)/pi)."""
    return math.sqrt((math.pi - 2.0) / math.pi)


def collision_p_mean(cf: GaussianClosedForm) -> float:
    """Symmetrized momentum expectation of the bouncing packet at the
    collision time:

        -(1 / (alpha sqrt(pi))) * (Tc/t0) / sqrt(1 + (Tc/t0)^2)
    """
    scales = validate(cf.spec, cf.params, wall=True)
    r = scales.classical_collision_time / scales.t0
    return -(1.0 / (cf.spec.alpha * math.sqrt(math.pi))) * r / math.sqrt(1.0 + r * r)


def lorentzian_psi0(spec: PacketSpec, params: PhysicalParams,
                    x: ArrayLike) -> np.ndarray:
    """Initial position-space wavefunction of the Lorentzian packet:

        (alpha hbar)**(-1/2) * exp(-|x - x0| / (alpha hbar))
                             * exp(i p0 (x - x0) / hbar)

    The plane-wave phase is forced by the p0-centered spectrum; the
    prefactor is fixed by unit normalization.
    """
    if spec.kind != "lorentzian":
        raise ValidationError(
            f"lorentzian_psi0 needs a lorentzian spec, got {spec.kind!r}")
    hbar = params.hbar
    x = np.asarray(x, dtype=float)
    u = x - spec.x0
    return (np.exp(-np.abs(u) / (spec.alpha * hbar))
            * np.exp(1j * spec.p0 * u / hbar)
            / math.sqrt(spec.alpha * hbar))
