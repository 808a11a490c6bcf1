"""Complex frequency-response functions.

Fourier convention throughout the package: g~(w) = integral dt exp(-i w t) g(t).
All four closed forms below follow that single convention.
"""

from __future__ import annotations

import math

import numpy as np

from .params import ForcePulse, ModelParams, Scheme

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def chi_free(omega, gamma: float):
    """Mechanical susceptibility with the feedback loop open.

    Accepts real or complex frequency arguments (complex is used for the
    finite-measurement-time shift).
    """
    omega = np.asarray(omega)
    return 1.0 / (1.0 - omega**2 + 1j * omega * gamma)


def chi_mf(omega, params: ModelParams):
    """Susceptibility under momentum feedback.

    Besides the damping increase, this scheme renormalizes the resonance
    frequency by g*gamma^2.
    """
    g, gamma = params.gain, params.gamma
    omega = np.asarray(omega)
    return 1.0 / (1.0 + g * gamma**2 - omega**2 + 1j * omega * gamma * (1.0 + g))


def chi_cd(omega, params: ModelParams):
    """Susceptibility under cold damping (pure damping increase)."""
    g, gamma = params.gain, params.gamma
    omega = np.asarray(omega)
    return 1.0 / (1.0 - omega**2 + 1j * omega * gamma * (1.0 + g))


def susceptibility(omega, params: ModelParams):
    """Scheme-appropriate susceptibility."""
    if params.scheme is Scheme.MOMENTUM_FEEDBACK:
        return chi_mf(omega, params)
    if params.scheme is Scheme.COLD_DAMPING:
        return chi_cd(omega, params)
    return chi_free(omega, params.gamma)


def chi0_shifted(omega, t_meas: float, params: ModelParams):
    """No-feedback susceptibility at the complex argument omega - i/2T.

    The imaginary shift is what a measurement of finite duration T does to
    the effective mechanical response.
    """
    omega = np.asarray(omega, dtype=complex)
    return chi_free(omega - 0.5j / t_meas, params.gamma)


def filter_transform(omega, t_meas: float):
    """Transform of the one-sided exponential window exp(-t/2T), t >= 0."""
    omega = np.asarray(omega)
    return 1.0 / (1j * omega + 0.5 / t_meas)


def force_transform(omega, pulse: ForcePulse):
    """Closed-form transform of the Gaussian-enveloped cosine pulse.

    Two Gaussian lobes centered at +-carrier, each carrying the arrival-time
    phase.  Closed form rather than FFT so it stays accurate when the pulse
    duration and the measurement time differ by many decades.
    """
    omega = np.asarray(omega)
    f0, sig, t1, wf = (pulse.amplitude, pulse.duration,
                       pulse.arrival_time, pulse.carrier)
    lobe_p = np.exp(-0.5 * (sig * (omega - wf))**2 - 1j * (omega - wf) * t1)
    lobe_m = np.exp(-0.5 * (sig * (omega + wf))**2 - 1j * (omega + wf) * t1)
    return 0.5 * f0 * sig * _SQRT_2PI * (lobe_p + lobe_m)
