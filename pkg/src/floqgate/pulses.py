"""Rabi amplitude envelopes: square pulse and the two-lobe Gaussian.

The Gaussian envelope consists of two congruent truncated-Gaussian lobes of
width ``t_g`` centered at 2*t_g and 6*t_g, each offset so the amplitude
vanishes at the lobe edges (t = 0, 4*t_g, 8*t_g).  The nominal total
duration is 8*t_g.

Times are in microseconds, angular frequencies in rad/us throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import OutOfWindow, ZeroEffectiveCoupling

#: Relative offset exp(-(2 t_g)^2 / t_g^2) making each lobe vanish at its edges.
LOBE_EDGE_OFFSET = math.exp(-4.0)

_TIME_EPS = 1e-12


@dataclass(frozen=True)
class PulseShape:
    """Amplitude law Omega(t).

    kind is "square" (constant ``omega_peak`` over ``duration``) or
    "gaussian" (two-lobe envelope with lobe width ``t_g``).  ``duration``
    normally equals 8*t_g for Gaussian shapes; timing-disorder studies may
    stretch or truncate it via :func:`stretched` while the internal lobe
    geometry stays frozen.
    """

    kind: str
    omega_peak: float
    duration: float
    t_g: float = 0.0

    def __post_init__(self):
        if self.kind not in ("square", "gaussian"):
            raise ValueError(f"unknown pulse kind {self.kind!r}")
        # omega_peak == 0 is allowed for square shapes (idle drive)
        if self.omega_peak < 0 or self.duration <= 0:
            raise ValueError("omega_peak must be non-negative, duration positive")
        if self.kind == "gaussian" and (self.t_g <= 0 or self.omega_peak == 0):
            raise ValueError("gaussian shape needs positive t_g and omega_peak")


def square_pulse(omega_peak: float, duration: float) -> PulseShape:
    return PulseShape(kind="square", omega_peak=omega_peak, duration=duration)


def gaussian_pulse(omega_peak: float, t_g: float) -> PulseShape:
    return PulseShape(kind="gaussian", omega_peak=omega_peak, duration=8.0 * t_g, t_g=t_g)


def stretched(shape: PulseShape, factor: float) -> PulseShape:
    """Copy with duration scaled by ``factor``; the amplitude law is unchanged.

    For Gaussian shapes the lobes stay anchored at 2*t_g and 6*t_g, so a
    stretched window truncates or extends the pulse tails rather than
    rescaling the envelope.
    """
    if factor <= 0:
        raise ValueError("stretch factor must be positive")
    return replace(shape, duration=shape.duration * factor)


def amplitude_at(shape: PulseShape, t: float) -> float:
    """Omega(t) in rad/us; raises OutOfWindow outside [0, duration]."""
    if t < -_TIME_EPS or t > shape.duration + _TIME_EPS:
        raise OutOfWindow(f"t={t} outside [0, {shape.duration}]")
    if shape.kind == "square":
        return shape.omega_peak
    tg = shape.t_g
    a = LOBE_EDGE_OFFSET
    center = 2.0 * tg if t <= 4.0 * tg else 6.0 * tg
    u = (t - center) / tg
    return shape.omega_peak * (math.exp(-u * u) - a) / (1.0 - a)


def gaussian_width_for_area(omega_g: float, j0_alpha: float) -> float:
    """Lobe width t_g making each effective lobe a pi pulse.

    Solves integral(Omega_g(t) dt, one lobe) * |J0(alpha)| = pi exactly for
    the truncated-Gaussian lobe, i.e. with the erf(2) tail correction kept.
    """
    if j0_alpha == 0.0:
        raise ZeroEffectiveCoupling("J0(alpha) = 0 freezes the effective drive")
    if omega_g <= 0:
        raise ValueError("omega_g must be positive")
    a = LOBE_EDGE_OFFSET
    lobe_factor = (math.sqrt(math.pi) * math.erf(2.0) - 4.0 * a) / (1.0 - a)
    return math.pi / (abs(omega_g * j0_alpha) * lobe_factor)


def gaussian_width_tail_approx(omega_g: float, j0_alpha: float) -> float:
    """Closed-form width treating each lobe as an untruncated Gaussian.

    Uses erf(2) ~ 1, which overestimates the lobe area by about 0.5%
    relative to :func:`gaussian_width_for_area`.
    """
    if j0_alpha == 0.0:
        raise ZeroEffectiveCoupling("J0(alpha) = 0 freezes the effective drive")
    a = LOBE_EDGE_OFFSET
    return (1.0 - a) * math.pi / (abs(omega_g * j0_alpha) * (math.sqrt(math.pi) - 4.0 * a))
