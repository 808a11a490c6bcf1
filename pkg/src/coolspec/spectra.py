"""Position-noise spectra and the stationary second moments.

Two families of quantities live here:

* the detected stationary spectrum (position fluctuations as seen through
  the homodyne record, shot-noise floor included), and
* the nonstationary detected spectrum for a measurement of duration T made
  with the feedback loop suddenly opened, seeded by the feedback-cooled
  stationary second moments.

The stationary variances are obtained by quadrature of the bare (shot-free)
position-fluctuation spectra over the reservoir band [-cutoff, cutoff]; the
shot term is excluded there because it is frequency-flat and would diverge.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import QuadratureNotConverged
from .params import ModelParams, Scheme, effective_damping
from .response import chi0_shifted, susceptibility

QUAD_RTOL = 1e-6
QUAD_ABS_FLOOR = 1e-30


@dataclass(frozen=True)
class Spectrum:
    """Sampled spectrum: strictly increasing grid, nonnegative values."""

    grid: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class StationaryState:
    """Stationary second moments of the mirror mode.

    qp_sym is the symmetrized position-momentum cross moment; it vanishes
    for cold damping and without feedback, but not for momentum feedback,
    where the feedback noise enters the position equation directly.
    """

    q_var: float
    p_var: float
    qp_sym: float = 0.0


def brownian_weight(omega, temperature: float):
    """Thermal spectral factor (omega/2)*coth(omega/2T), dimensionless units.

    The omega -> 0 limit is T (removable singularity); small arguments use
    the Laurent expansion of coth to avoid 0/0, large arguments saturate to
    |omega|/2 through tanh.  temperature = 0 gives the zero-point value.
    """
    omega = np.asarray(omega, dtype=float)
    if temperature == 0.0:
        return np.abs(omega) / 2.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        x = omega / (2.0 * temperature)
        small = np.abs(x) < 1e-4
        exact = (omega / 2.0) / np.tanh(np.where(small, 1.0, x))
        series = temperature + omega**2 / (12.0 * temperature)
    return np.where(small, series, exact)


def _shot_floor(params: ModelParams) -> float:
    return 1.0 / (4.0 * params.detection_efficiency * params.input_power * params.gamma)


def _feedback_noise_density(omega, params: ModelParams):
    """In-band feedback-induced force-noise factor g^2 |G~|^2 / (4 eta zeta).

    The loop transfer function is 1 for momentum feedback (plus the gamma^2
    frequency-renormalization companion) and i*omega for cold damping.
    """
    g = params.gain
    pref = g**2 / (4.0 * params.detection_efficiency * params.input_power)
    if params.scheme is Scheme.MOMENTUM_FEEDBACK:
        return pref * (np.asarray(omega)**2 + params.gamma**2)
    if params.scheme is Scheme.COLD_DAMPING:
        return pref * np.asarray(omega)**2
    return np.zeros_like(np.asarray(omega, dtype=float))


def stationary_spectrum(omega, params: ModelParams):
    """Detected stationary position-noise spectrum (shot floor included)."""
    omega = np.asarray(omega, dtype=float)
    gamma = params.gamma
    chi2 = np.abs(susceptibility(omega, params))**2
    bracket = (params.input_power / 4.0
               + _feedback_noise_density(omega, params)
               + brownian_weight(omega, params.temperature))
    return gamma * chi2 * bracket + _shot_floor(params)


def position_spectrum(omega, params: ModelParams):
    """Bare position-fluctuation spectrum (no shot noise).

    This is the density integrated in the stationary-variance quadratures.
    """
    omega = np.asarray(omega, dtype=float)
    gamma = params.gamma
    chi2 = np.abs(susceptibility(omega, params))**2
    bracket = (params.input_power / 4.0
               + _feedback_noise_density(omega, params)
               + brownian_weight(omega, params.temperature))
    return gamma * chi2 * bracket


def _quad(func, lo, hi, breakpoints) -> float:
    pts = sorted({p for p in breakpoints if lo < p < hi})
    with warnings.catch_warnings():
        # the error estimate is checked explicitly below
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(func, lo, hi, points=pts or None,
                                  limit=400, epsabs=QUAD_ABS_FLOOR,
                                  epsrel=1e-9)
    if not np.isfinite(val) or err > QUAD_RTOL * abs(val) + QUAD_ABS_FLOOR:
        raise QuadratureNotConverged(
            f"integral error {err:.3e} exceeds tolerance for value {val:.6e}")
    return val


def _momentum_feedback_densities(params: ModelParams):
    """Frequency densities of Q^2, P^2 and (QP+PQ)/2 for momentum feedback.

    With feedback driving the position equation, momentum is no longer the
    plain time derivative of position, so the P density picks up the direct
    feedback-noise term and a cross term with the position response:

        Q~ = chi * [n_P + (i w + gamma) n_Q]
        P~ = (i w + g gamma) Q~ - n_Q

    where S_nQ = gamma g^2 / (4 eta zeta) and S_nP is back-action plus the
    thermal weight.  The derivation is spelled out in docs/derivations.md.
    """
    gamma, g = params.gamma, params.gain
    s_nq = gamma * g**2 / (4.0 * params.detection_efficiency * params.input_power)

    def densities(omega):
        omega = np.asarray(omega, dtype=float)
        chi = susceptibility(omega, params)
        s_np = gamma * (params.input_power / 4.0
                        + brownian_weight(omega, params.temperature))
        s_q = np.abs(chi)**2 * (s_np + (omega**2 + gamma**2) * s_nq)
        a = 1j * omega + g * gamma
        b = 1j * omega + gamma
        s_p = ((omega**2 + (g * gamma)**2) * s_q + s_nq
               - 2.0 * np.real(a * b * chi) * s_nq)
        s_qp = np.real(np.conj(a) * s_q - b * chi * s_nq)
        return s_q, s_p, s_qp

    return densities


def stationary_variances(params: ModelParams) -> StationaryState:
    """Stationary second moments by adaptive quadrature over the band.

    All integrals run over [-cutoff, cutoff]; the reservoir gate and the
    feedback-noise band limit are enforced through the domain itself.
    """
    cut = params.cutoff
    # guide the adaptive scheme into the resonance peaks, whose half width
    # gamma*(1+g)/2 can be ten decades below the integration domain
    half_width = 0.5 * effective_damping(params)
    bps = [0.0]
    for sign in (-1.0, 1.0):
        bps.append(sign)
        for k in (2.0, 10.0, 100.0, 1000.0):
            bps += [sign - k * half_width, sign + k * half_width]
    two_pi = 2.0 * np.pi
    if params.scheme is Scheme.MOMENTUM_FEEDBACK and params.gain > 0:
        dens = _momentum_feedback_densities(params)
        q_var = _quad(lambda w: dens(w)[0], -cut, cut, bps) / two_pi
        p_var = _quad(lambda w: dens(w)[1], -cut, cut, bps) / two_pi
        qp_sym = _quad(lambda w: dens(w)[2], -cut, cut, bps) / two_pi
        return StationaryState(q_var=q_var, p_var=p_var, qp_sym=qp_sym)
    q_var = _quad(lambda w: position_spectrum(w, params), -cut, cut, bps) / two_pi
    p_var = _quad(lambda w: w**2 * position_spectrum(w, params),
                  -cut, cut, bps) / two_pi
    return StationaryState(q_var=q_var, p_var=p_var, qp_sym=0.0)


def nonstationary_spectrum(omega, t_meas: float, initial: StationaryState,
                           params: ModelParams):
    """Detected noise spectrum of a feedback-off measurement of duration T.

    The mirror starts from the Gaussian state `initial` (normally the
    feedback-cooled stationary moments), evolves freely, and is read through
    the exponential window.  High-temperature form of the Brownian term.
    The qp_sym cross term enters with weight 2*(1/2T + gamma), the
    coefficient the exponential window gives the mixed initial moment (see
    docs/derivations.md).
    """
    omega = np.asarray(omega, dtype=float)
    gamma = params.gamma
    s = 0.5 / t_meas
    chi2 = np.abs(chi0_shifted(omega, t_meas, params))**2
    gt = gamma * t_meas
    bracket = ((omega**2 + (s + gamma)**2) / gt * initial.q_var
               + initial.p_var / gt
               + 2.0 * (s + gamma) / gt * initial.qp_sym
               + params.input_power / 4.0 + params.temperature)
    return gamma * chi2 * bracket + _shot_floor(params)


__all__ = [
    "Spectrum", "StationaryState", "brownian_weight", "stationary_spectrum",
    "position_spectrum", "stationary_variances", "nonstationary_spectrum",
    "effective_damping",
]
