"""Signal, noise and signal-to-noise ratio of the spectral force measurement.

SNR values are reported per unit force amplitude when the pulse amplitude is
one; everything scales linearly in the amplitude.  A `pulse=None` argument
means an ideal impulsive force with a flat unit transform.

Convention anchor: the nonstationary signal is the windowed convolution of
susceptibility, force transform and window transform, normalized so that in
the long-measurement limit it reduces exactly to |chi0 * f~|.  For the
one-sided exponential window the raw 1/2pi convolution converges to half of
that (the window is discontinuous at t=0 and its transform integrates to
pi, not 2pi), so the normalization divides by the window gain 1/2.  The
stationary SNR identity test pins this choice.
"""

from __future__ import annotations

import warnings

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate

from .errors import QuadratureNotConverged, WindowTooShort
from .params import (ForcePulse, MeasurementWindow, ModelParams, Scheme,
                     without_feedback)
from .response import (chi_free, filter_transform, force_transform,
                       susceptibility)
from .spectra import (StationaryState, brownian_weight, nonstationary_spectrum,
                      stationary_variances)

_T1_QUAD_ORDER = 32


def _force_modulus(omega, pulse: ForcePulse | None):
    if pulse is None:
        return np.ones_like(np.asarray(omega, dtype=float))
    return np.abs(force_transform(omega, pulse))


def stationary_snr(omega, pulse: ForcePulse | None, t_meas: float,
                   params: ModelParams):
    """Stationary spectral SNR.

    Feedback lowers this at every frequency except, for cold damping, at
    zero frequency where the gain drops out.
    """
    omega = np.asarray(omega, dtype=float)
    gamma = params.gamma
    chi2 = np.abs(susceptibility(omega, params))**2
    g = params.gain
    renorm = gamma**2 if params.scheme is Scheme.MOMENTUM_FEEDBACK else 0.0
    fb = g**2 * (omega**2 + renorm)
    inv_pow = 1.0 / (4.0 * params.detection_efficiency * params.input_power)
    bracket = (brownian_weight(omega, params.temperature)
               + params.input_power / 4.0
               + inv_pow * (fb + 1.0 / (gamma**2 * chi2)))
    return _force_modulus(omega, pulse) / np.sqrt(gamma * t_meas * bracket)


def _convolution(omega: float, pulse: ForcePulse, t_meas: float,
                 gamma: float) -> complex:
    """(1/2pi) integral of chi0(w') f~(w') F~(omega - w') dw'.

    The integrand concentrates in the two Gaussian force lobes, the two
    mechanical resonance peaks (width gamma) and the window peak at omega
    (width 1/2T); all of them become quadrature breakpoints.
    """
    wf, sig = pulse.carrier, pulse.duration
    lobe = 12.0 / sig
    s = 0.5 / t_meas
    lo = min(-wf - lobe, -1.2, omega - max(50.0 * s, 0.5))
    hi = max(wf + lobe, 1.2, omega + max(50.0 * s, 0.5))
    pts = [-wf, wf, omega,
           wf - 1.0 / sig, wf + 1.0 / sig, -wf - 1.0 / sig, -wf + 1.0 / sig]
    # graded guides into the window peak (width ~ 1/2T) and the mechanical
    # resonance peaks (width ~ gamma): both can be many decades narrower
    # than the integration domain
    for k in (1.0, 2.0, 5.0, 10.0, 25.0, 50.0):
        pts += [omega - k * s, omega + k * s]
    for center in (-1.0, 1.0):
        pts.append(center)
        for k in (1.0, 3.0, 10.0, 30.0):
            pts += [center - k * gamma, center + k * gamma]

    def integrand(w):
        return (chi_free(w, gamma) * force_transform(w, pulse)
                * filter_transform(omega - w, t_meas))

    kwargs = dict(points=sorted(p for p in set(pts) if lo < p < hi),
                  limit=800, epsabs=1e-300, epsrel=1e-8)
    with warnings.catch_warnings():
        # roundoff chatter is expected for near-singular peaks; the error
        # estimate is checked explicitly below instead
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        re, re_err = integrate.quad(lambda w: integrand(w).real, lo, hi,
                                    **kwargs)
        im, im_err = integrate.quad(lambda w: integrand(w).imag, lo, hi,
                                    **kwargs)
    val = complex(re, im)
    err = np.hypot(re_err, im_err)
    if not np.isfinite(val) or err > 1e-6 * abs(val) + 1e-300:
        raise QuadratureNotConverged(
            f"signal convolution at omega={omega}: error {err:.3e} "
            f"for value {abs(val):.6e}")
    return val / (2.0 * np.pi)


def nonstationary_signal(omega, pulse: ForcePulse, t_meas: float,
                         params: ModelParams):
    """Windowed signal of the feedback-off measurement, in position units.

    For long measurements this tends to |chi(omega) f~(omega)| without any
    extra window factor: the driven response is causal, so the one-sided
    exponential window passes it in full as T grows.
    """
    if pulse.amplitude == 0.0:
        return np.zeros_like(np.asarray(omega, dtype=float))
    gamma = params.gamma
    omega_arr = np.atleast_1d(np.asarray(omega, dtype=float))
    vals = np.array([abs(_convolution(w, pulse, t_meas, gamma))
                     for w in omega_arr])
    return vals if np.ndim(omega) else float(vals[0])


def nonstationary_noise(omega, t_meas: float, params: ModelParams,
                        initial: StationaryState | None = None):
    """Windowed noise, sqrt(T * nonstationary spectrum).

    `initial` defaults to the feedback-on stationary moments of `params`;
    the measurement itself always runs with the loop open.
    """
    if initial is None:
        initial = stationary_variances(params)
    spec = nonstationary_spectrum(omega, t_meas, initial, without_feedback(params))
    return np.sqrt(t_meas * spec)


def nonstationary_snr(omega, pulse: ForcePulse, t_meas: float,
                      params: ModelParams,
                      initial: StationaryState | None = None):
    """Cool-and-measure SNR: cooled initial state, loop open while measuring."""
    sig = nonstationary_signal(omega, pulse, t_meas, params)
    return sig / nonstationary_noise(omega, t_meas, params, initial)


def averaged_snr(omega, pulse: ForcePulse, window: MeasurementWindow,
                 params: ModelParams,
                 initial: StationaryState | None = None):
    """Time-averaged SNR of the cyclic cooling-and-measuring strategy.

    The arrival time is uniform over the measurement interval; the SNR
    accumulated during the (short) cooling stage is neglected, so the
    cooling time enters only through the duty-cycle denominator.  A
    no-feedback baseline is the same call with gain 0 and cooling_time 0.
    """
    t_meas = window.duration
    if pulse.duration > t_meas / 10.0:
        raise WindowTooShort(
            f"pulse duration {pulse.duration} exceeds a tenth of the "
            f"measurement window {t_meas}")
    nodes, weights = leggauss(_T1_QUAD_ORDER)
    t1 = 0.5 * t_meas * (nodes + 1.0)
    w = 0.5 * t_meas * weights
    noise = nonstationary_noise(omega, t_meas, params, initial)
    omega_arr = np.atleast_1d(np.asarray(omega, dtype=float))
    total = np.zeros_like(omega_arr)
    for ti, wi in zip(t1, w):
        shifted = ForcePulse(amplitude=pulse.amplitude, duration=pulse.duration,
                             arrival_time=ti, carrier=pulse.carrier)
        total += wi * nonstationary_signal(omega_arr, shifted, t_meas, params)
    avg = total / ((t_meas + window.cooling_time) * np.atleast_1d(noise))
    return avg if np.ndim(omega) else float(avg[0])
