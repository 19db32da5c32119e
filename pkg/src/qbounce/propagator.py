"""Momentum-space construction and propagation of wave packets.

Three independent routes to the bouncing packet are provided:

* ``free``        -- direct oscillatory quadrature of the momentum
                     integral with the plane-wave kernel exp(i p x / hbar),
* ``wall-sine``   -- the same integral with the kernel replaced by the
                     odd combination exp(i p x / hbar) - exp(-i p x / hbar),
                     restricted to p >= 0 with the antisymmetrized spectrum,
* ``wall-mirror`` -- psi(x,t) - psi(-x,t) built from two free evaluations
                     (or from the Gaussian closed form, selectable).

All integrals use composite trapezoid or composite Gauss-Legendre rules.
The momentum window is finite; for the Lorentzian spectrum, whose tails
decay only like 1/p^2, the truncated tails are restored analytically
(exactly at t = 0 via the exponential integral, and by a first-order
stationary-phase-free boundary term otherwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.special import exp1

from .core import (Grid, PacketSpec, PhysicalParams, ResolutionError,
                   SampledField, ValidationError)
from . import closed_form as cf_mod

ArrayLike = Union[float, np.ndarray]

#: minimum number of quadrature nodes per local phase period
NODES_PER_PERIOD = 8

_GL_ORDER = 16

_CHUNK_ELEMS = 8_000_000


@dataclass(frozen=True)
class QuadratureSettings:
    """Discretization of the momentum integral.

    p_window is the half-width of the integration window around p0;
    rule is "trapezoid" or "gauss-legendre-composite".
    """

    p_window: float
    n_nodes: int = 4096
    rule: str = "trapezoid"

    def __post_init__(self) -> None:
        if not (self.p_window > 0.0):
            raise ValidationError(f"p_window must be positive, got {self.p_window}")
        if self.n_nodes < 64:
            raise ValidationError(f"n_nodes must be >= 64, got {self.n_nodes}")
        if self.rule not in ("trapezoid", "gauss-legendre-composite"):
            raise ValidationError(f"unknown quadrature rule {self.rule!r}")


def default_p_window(spec: PacketSpec) -> float:
    """Half-width of the momentum window for a packet family.

    Gaussian: 10/alpha leaves a tail mass below e^-100.  Lorentzian:
    60/alpha; the residual tail is handled analytically, so the window
    only has to keep the quadrature band-limited.  Tabulated packets
    integrate over their full table.
    """
    if spec.kind == "gaussian":
        return 10.0 / spec.alpha
    if spec.kind == "lorentzian":
        return 60.0 / spec.alpha
    p = np.array([row[0] for row in spec.table], dtype=float)
    return max(spec.p0 - p[0], p[-1] - spec.p0)


def _max_phase_rate(spec: PacketSpec, params: PhysicalParams,
                    x_abs_max: float, t: float, p_lo: float, p_hi: float) -> float:
    """Largest |d(phase)/dp| of the integrand over the window, in rad
    per unit momentum.  Phase = p(x - x0)/hbar - p^2 t/(2 m hbar)."""
    hbar, m = params.hbar, params.mass
    u_max = (x_abs_max + abs(spec.x0)) / hbar
    chirp = abs(t) * max(abs(p_lo), abs(p_hi)) / (m * hbar)
    return u_max + chirp


def auto_settings(spec: PacketSpec, params: PhysicalParams,
                  x_abs_max: float, t_max: float,
                  rule: str = "trapezoid", n_floor: int = 4096) -> QuadratureSettings:
    """Pick a window and node count resolving every phase oscillation
    for evaluation points with |x| <= x_abs_max and |t| <= t_max."""
    w = default_p_window(spec)
    p_lo, p_hi = spec.p0 - w, spec.p0 + w
    rate = _max_phase_rate(spec, params, x_abs_max, t_max, p_lo, p_hi)
    h_req = 2.0 * math.pi / (NODES_PER_PERIOD * max(rate, 1e-12))
    n = max(n_floor, int(math.ceil((p_hi - p_lo) / h_req)) + 1)
    return QuadratureSettings(p_window=w, n_nodes=n, rule=rule)


def initial_spectrum(spec: PacketSpec, params: PhysicalParams,
                     p: ArrayLike) -> np.ndarray:
    """phi(p, 0) including the exp(-i p x0 / hbar) translation phase."""
    p = np.asarray(p, dtype=float)
    phase = np.exp(-1j * p * spec.x0 / params.hbar)
    if spec.kind == "gaussian":
        a = spec.alpha
        env = math.sqrt(a / math.sqrt(math.pi)) * np.exp(-a ** 2 * (p - spec.p0) ** 2 / 2.0)
    elif spec.kind == "lorentzian":
        a = spec.alpha
        env = math.sqrt(2.0 * a / math.pi) / (a ** 2 * (p - spec.p0) ** 2 + 1.0)
    else:
        pt = np.array([row[0] for row in spec.table], dtype=float)
        vals = np.array([row[1] for row in spec.table], dtype=complex)
        env = (np.interp(p, pt, vals.real, left=0.0, right=0.0)
               + 1j * np.interp(p, pt, vals.imag, left=0.0, right=0.0))
    return env * phase


def spectrum_at(spec: PacketSpec, params: PhysicalParams,
                p: ArrayLike, t: float) -> np.ndarray:
    """phi(p, t) = phi(p, 0) * exp(-i p^2 t / (2 m hbar))."""
    p = np.asarray(p, dtype=float)
    return initial_spectrum(spec, params, p) * np.exp(
        -1j * p ** 2 * t / (2.0 * params.mass * params.hbar))


def _nodes_weights(lo: float, hi: float, q: QuadratureSettings):
    if q.rule == "trapezoid":
        p = np.linspace(lo, hi, q.n_nodes)
        h = p[1] - p[0]
        w = np.full(q.n_nodes, h)
        w[0] = w[-1] = h / 2.0
        return p, w
    panels = max(1, -(-q.n_nodes // _GL_ORDER))
    xg, wg = np.polynomial.legendre.leggauss(_GL_ORDER)
    edges = np.linspace(lo, hi, panels + 1)
    half = np.diff(edges) / 2.0
    mid = (edges[:-1] + edges[1:]) / 2.0
    p = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    w = (half[:, None] * wg[None, :]).ravel()
    return p, w


def _check_resolution(spec: PacketSpec, params: PhysicalParams,
                      x_abs_max: float, t: float,
                      p_lo: float, p_hi: float, n_nodes: int) -> None:
    rate = _max_phase_rate(spec, params, x_abs_max, t, p_lo, p_hi)
    h = (p_hi - p_lo) / max(n_nodes - 1, 1)
    h_max = 2.0 * math.pi / (NODES_PER_PERIOD * max(rate, 1e-300))
    if h > h_max:
        raise ResolutionError(
            f"node spacing {h:.3e} exceeds {h_max:.3e} required for "
            f"{NODES_PER_PERIOD} nodes per phase period at |x| <= {x_abs_max}, "
            f"t = {t} (oscillation-resolution invariant)")


def _lorentzian_tail(spec: PacketSpec, params: PhysicalParams,
                     x: np.ndarray, t: float, p_lo: float, p_hi: float) -> np.ndarray:
    """Analytic correction for the truncated 1/p^2 spectral tails.

    At t = 0 the tail integrals reduce to exponential integrals of the
    rational spectrum and are restored exactly.  For t != 0 a single
    integration-by-parts boundary term is used; it is skipped (the tail
    is then genuinely oscillation-suppressed or irrecoverably aliased)
    when the stationary momentum m(x - x0)/t falls inside a tail.
    """
    hbar, m, a = params.hbar, params.mass, spec.alpha
    c = math.sqrt(2.0 * a / math.pi) / math.sqrt(2.0 * math.pi * hbar)
    u = (x - spec.x0) / hbar
    w_half = (p_hi - p_lo) / 2.0  # window is centered on p0

    if t == 0.0:
        au = np.abs(u)
        re_i = np.empty_like(au)
        small = au * w_half < 1e-9
        re_i[small] = (math.pi / 2.0 - math.atan(a * w_half)) / a
        ub = au[~small]
        big = ub / a > 250.0  # exp overflow guard; tail is ~r(W)/u there
        rw = 1.0 / (a ** 2 * w_half ** 2 + 1.0)
        vals = np.empty_like(ub)
        if np.any(~big):
            us = ub[~big]
            e_minus = np.exp(-us / a) * exp1(-1j * us * (w_half - 1j / a))
            e_plus = np.exp(us / a) * exp1(-1j * us * (w_half + 1j / a))
            vals[~big] = np.real((e_minus - e_plus) / (2j * a))
        if np.any(big):
            vals[big] = -rw * np.sin(w_half * ub[big]) / ub[big]
        re_i[~small] = vals
        return 2.0 * c * re_i * np.exp(1j * spec.p0 * u)

    # t != 0: boundary terms of one integration by parts at both edges
    def rational(p):
        return 1.0 / (a ** 2 * (p - spec.p0) ** 2 + 1.0)

    def omega(p):
        return p * u - p ** 2 * t / (2.0 * m * hbar)

    def omega_prime(p):
        return u - p * t / (m * hbar)

    p_star = m * hbar * u / t  # stationary momentum of the phase
    out = np.zeros(x.shape, dtype=complex)
    for p_edge, sign in ((p_hi, -1.0), (p_lo, +1.0)):
        dph = omega_prime(p_edge)
        in_tail = (p_star >= p_hi) if sign < 0 else (p_star <= p_lo)
        ok = (~in_tail) & (np.abs(dph) > 1e-6)
        term = np.zeros(x.shape, dtype=complex)
        term[ok] = sign * rational(p_edge) * np.exp(1j * omega(p_edge)[ok]) / (1j * dph[ok])
        out += term
    return c * out


def _endpoint_correction(spec: PacketSpec, params: PhysicalParams,
                         x: np.ndarray, t: float,
                         p_lo: float, p_hi: float, h: float) -> np.ndarray:
    """Euler-Maclaurin boundary term -h^2/12 * (f'(p_hi) - f'(p_lo)) of
    the trapezoid rule, which dominates the discretization error when
    the spectrum is still non-negligible at the window edges."""
    hbar, m, a = params.hbar, params.mass, spec.alpha
    u = (x - spec.x0) / hbar
    out = np.zeros(x.shape, dtype=complex)
    for p_edge, sign in ((p_hi, -1.0), (p_lo, +1.0)):
        dq = p_edge - spec.p0
        if spec.kind == "gaussian":
            env = math.sqrt(a / math.sqrt(math.pi)) * math.exp(-a ** 2 * dq ** 2 / 2.0)
            denv = -a ** 2 * dq * env
        else:
            env = math.sqrt(2.0 * a / math.pi) / (a ** 2 * dq ** 2 + 1.0)
            denv = -2.0 * a ** 2 * dq * env / (a ** 2 * dq ** 2 + 1.0)
        omega = p_edge * u - p_edge ** 2 * t / (2.0 * m * hbar)
        dom = u - p_edge * t / (m * hbar)
        out += sign * np.exp(1j * omega) * (denv + 1j * dom * env)
    return out * h ** 2 / (12.0 * math.sqrt(2.0 * math.pi * hbar))


def _quadrature_amplitude(spec: PacketSpec, params: PhysicalParams,
                          x: np.ndarray, t: float, q: QuadratureSettings,
                          odd_kernel: bool) -> np.ndarray:
    hbar, m = params.hbar, params.mass
    if odd_kernel:
        p_lo, p_hi = 0.0, spec.p0 + q.p_window
    else:
        p_lo, p_hi = spec.p0 - q.p_window, spec.p0 + q.p_window
    _check_resolution(spec, params, float(np.max(np.abs(x)) if x.size else 0.0),
                      t, p_lo, p_hi, q.n_nodes)
    p, w = _nodes_weights(p_lo, p_hi, q)
    phi = initial_spectrum(spec, params, p)
    if odd_kernel:
        phi = phi - initial_spectrum(spec, params, -p)
    weight = w * phi * np.exp(-1j * p ** 2 * t / (2.0 * m * hbar))

    out = np.empty(x.shape, dtype=complex)
    block = max(1, _CHUNK_ELEMS // p.size)
    for i in range(0, x.size, block):
        xs = x[i:i + block]
        kernel = np.exp(1j * np.outer(xs, p) / hbar)
        if odd_kernel:
            kernel = kernel - np.exp(-1j * np.outer(xs, p) / hbar)
        out[i:i + block] = kernel @ weight
    out /= math.sqrt(2.0 * math.pi * hbar)

    if not odd_kernel and q.rule == "trapezoid" and spec.kind != "tabulated":
        out += _endpoint_correction(spec, params, x, t, p_lo, p_hi,
                                    (p_hi - p_lo) / (q.n_nodes - 1))
    if spec.kind == "lorentzian" and not odd_kernel:
        out += _lorentzian_tail(spec, params, x, t, p_lo, p_hi)
    return out


def _as_array(x: ArrayLike):
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    return arr, np.isscalar(x) or np.ndim(x) == 0


def free_position_amplitude(spec: PacketSpec, x: ArrayLike, t: float,
                            q: QuadratureSettings,
                            params: PhysicalParams = PhysicalParams()) -> ArrayLike:
    """psi(x, t) of the free packet by momentum-space quadrature."""
    arr, scalar = _as_array(x)
    out = _quadrature_amplitude(spec, params, arr, t, q, odd_kernel=False)
    return out[0] if scalar else out


def wall_position_amplitude_sine(spec: PacketSpec, x: ArrayLike, t: float,
                                 q: QuadratureSettings,
                                 params: PhysicalParams = PhysicalParams()) -> ArrayLike:
    """Bouncing-packet psi(x, t) from the sine-basis expansion.

    Integrates the odd kernel against the antisymmetrized spectrum
    phi(p) - phi(-p) over p in [0, p0 + p_window], which reproduces the
    mirror construction identically.  Zero for x > 0 by contract.
    """
    arr, scalar = _as_array(x)
    out = np.zeros(arr.shape, dtype=complex)
    inside = arr <= 0.0
    if np.any(inside):
        out[inside] = _quadrature_amplitude(spec, params, arr[inside], t, q,
                                            odd_kernel=True)
    return out[0] if scalar else out


def wall_position_amplitude_mirror(spec: PacketSpec, x: ArrayLike, t: float,
                                   q: Optional[QuadratureSettings],
                                   params: PhysicalParams = PhysicalParams(),
                                   closed_form: bool = False) -> ArrayLike:
    """Bouncing-packet psi(x, t) = psi_free(x, t) - psi_free(-x, t).

    With closed_form=True (Gaussian specs only) the two free amplitudes
    come from the exact Gaussian solution instead of quadrature.
    """
    arr, scalar = _as_array(x)
    out = np.zeros(arr.shape, dtype=complex)
    inside = arr <= 0.0
    xi = arr[inside]
    if xi.size:
        if closed_form:
            cf = cf_mod.GaussianClosedForm(spec, params)
            out[inside] = cf_mod.gaussian_psi(cf, xi, t) - cf_mod.gaussian_psi(cf, -xi, t)
        else:
            if q is None:
                raise ValidationError("quadrature settings required unless closed_form")
            both = _quadrature_amplitude(spec, params, np.concatenate([xi, -xi]),
                                         t, q, odd_kernel=False)
            out[inside] = both[:xi.size] - both[xi.size:]
    return out[0] if scalar else out


def sample_position_field(spec: PacketSpec, grid: Grid, t: float,
                          method: str, q: Optional[QuadratureSettings] = None,
                          params: PhysicalParams = PhysicalParams(),
                          closed_form: bool = False) -> SampledField:
    """Evaluate one propagation route on a grid and wrap it as a field.

    method is "free", "wall-sine" or "wall-mirror"; wall methods require
    grid.max <= 0.  With q=None, settings are chosen automatically for
    this grid and time.
    """
    if method not in ("free", "wall-sine", "wall-mirror"):
        raise ValidationError(f"unknown method {method!r}")
    if method != "free" and grid.max > 0.0:
        raise ValidationError(
            f"wall methods need grid.max <= 0, got {grid.max}")
    x = grid.points()
    use_cf = closed_form and spec.kind == "gaussian" and method != "wall-sine"
    if q is None and not use_cf:
        q = auto_settings(spec, params, float(np.max(np.abs(x))), t)
    if method == "free":
        if use_cf:
            cf = cf_mod.GaussianClosedForm(spec, params)
            values = cf_mod.gaussian_psi(cf, x, t)
        else:
            values = free_position_amplitude(spec, x, t, q, params)
    elif method == "wall-sine":
        values = wall_position_amplitude_sine(spec, x, t, q, params)
    else:
        values = wall_position_amplitude_mirror(spec, x, t, q, params,
                                                closed_form=use_cf)
    return SampledField(grid=grid, values=np.asarray(values, dtype=complex),
                        space="position", time=t)
