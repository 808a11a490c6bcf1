"""Time-domain stochastic oracle for the analytic spectra.

Simulates the classical (high-temperature) linearized mirror dynamics with
feedback as a linear SDE, using the exact matrix-exponential propagator per
step, so the only statistical limitation is the finite ensemble: there is
no discretization bias for this linear system.

White-noise intensity table (two-sided spectral densities, derived by
matching the Lorentzian coefficients of the analytic spectra; see
docs/derivations.md):

    thermal force on P        : gamma * temperature      (high-T limit)
    back-action force on P    : gamma * zeta / 4
    momentum-feedback noise on Q : gamma * g^2 / (4 eta zeta)
    cold-damping noise on P   : omega^2 * gamma * g^2 / (4 eta zeta),
                                realized by a first-order shaping filter
                                with corner frequency 20 (in mechanical
                                frequency units) driving a white channel
    detection shot noise (additive on the record) : 1 / (4 eta zeta gamma)

Ideal differentiated white noise carries infinite power, hence the shaping
filter; oracle-versus-analytic comparisons are therefore meaningful only
well below the corner, in practice for frequencies up to ~2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import UnstableStep
from .params import ModelParams, Scheme, without_feedback
from .spectra import StationaryState, stationary_variances

SHAPING_CORNER = 20.0
DEFAULT_SEGMENT = 1 << 16


@dataclass(frozen=True)
class OracleConfig:
    """Everything needed to reproduce a simulation bit for bit."""

    params: ModelParams
    dt: float = 0.02
    n_steps: int = 1 << 20
    n_traj: int = 256
    seed: int = 0
    omega_min: float = 0.0
    omega_max: float = 2.0
    n_bands: int = 25
    include_shot: bool = True


@dataclass(frozen=True)
class OracleRun:
    """Ensemble estimates with per-bin standard errors."""

    grid: np.ndarray
    values: np.ndarray
    errors: np.ndarray
    q_var: float
    q_var_err: float
    p_var: float
    p_var_err: float
    config: OracleConfig = field(repr=False, default=None)


def check_step(config: OracleConfig) -> None:
    """Stability bound: resolve both the oscillation and the cooled decay."""
    p = config.params
    damping = p.gamma * (1.0 + (0.0 if p.scheme is Scheme.NO_FEEDBACK else p.gain))
    if config.dt >= 0.05 or config.dt * damping >= 0.05:
        raise UnstableStep(
            f"dt={config.dt} violates dt < 0.05 and dt*gamma*(1+g) < 0.05 "
            f"(dt*gamma*(1+g) = {config.dt * damping:.3g})")
    if config.n_traj < 1:
        raise UnstableStep("ensemble_size must be >= 1")


def drift_and_noise(params: ModelParams):
    """Drift matrix A and noise input matrix B of the simulated linear SDE.

    State is (Q, P) for momentum feedback and the free mirror, and
    (Q, P, u) for cold damping, where u is the shaping state of the
    derivative-feedback noise channel.
    """
    gamma, g = params.gamma, params.gain
    eta, zeta = params.detection_efficiency, params.input_power
    d_thermal = gamma * params.temperature
    d_ba = gamma * zeta / 4.0
    d_p = np.sqrt(d_thermal + d_ba)
    if params.scheme is Scheme.MOMENTUM_FEEDBACK and g > 0:
        d_q = np.sqrt(gamma * g**2 / (4.0 * eta * zeta))
        a = np.array([[-gamma * g, 1.0], [-1.0, -gamma]])
        b = np.array([[d_q, 0.0], [0.0, d_p]])
        return a, b
    if params.scheme is Scheme.COLD_DAMPING and g > 0:
        d_fb = np.sqrt(gamma * g**2 / (4.0 * eta * zeta))
        wc = SHAPING_CORNER
        a = np.array([[0.0, 1.0, 0.0],
                      [-1.0, -gamma * (1.0 + g), -d_fb * wc],
                      [0.0, 0.0, -wc]])
        b = np.array([[0.0, 0.0],
                      [d_fb * wc, d_p],
                      [wc, 0.0]])
        return a, b
    a = np.array([[0.0, 1.0], [-1.0, -gamma]])
    b = np.array([[0.0], [d_p]])
    return a, b


def discretize(a: np.ndarray, b: np.ndarray, dt: float):
    """Exact one-step propagator and noise covariance (Van Loan blocks)."""
    n = a.shape[0]
    bbt = b @ b.T
    block = np.zeros((2 * n, 2 * n))
    block[:n, :n] = -a
    block[:n, n:] = bbt
    block[n:, n:] = a.T
    e = linalg.expm(block * dt)
    phi = e[n:, n:].T
    sigma = phi @ e[:n, n:]
    sigma = 0.5 * (sigma + sigma.T)
    return phi, _safe_cholesky(sigma)


def _safe_cholesky(sigma: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        w, v = np.linalg.eigh(sigma)
        return v @ np.diag(np.sqrt(np.clip(w, 0.0, None)))


def stationary_covariance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Continuous Lyapunov solution A S + S A^T + B B^T = 0."""
    return linalg.solve_continuous_lyapunov(a, -(b @ b.T))


def _shot_density(params: ModelParams) -> float:
    return 1.0 / (4.0 * params.detection_efficiency * params.input_power
                  * params.gamma)


def simulate(config: OracleConfig) -> OracleRun:
    """Stationary run: ensemble of trajectories, Welch-averaged periodogram.

    Trajectories start in the exact stationary Gaussian of the simulated
    system, so rectangular-window segments are unbiased apart from the
    (negligible) leakage of the resolved resonance peak.  The detected
    record adds an independent white shot channel.  Estimates are band
    averages over the raw FFT bins; the analytic reference must be averaged
    over the same bins (see `band_average`).
    """
    check_step(config)
    a, b = drift_and_noise(config.params)
    phi, chol = discretize(a, b, config.dt)
    cov0 = stationary_covariance(a, b)
    rng = np.random.default_rng(config.seed)
    n_traj, dt = config.n_traj, config.dt
    dim = a.shape[0]

    seg = min(config.n_steps, DEFAULT_SEGMENT)
    n_segments = max(1, config.n_steps // seg)
    t_seg = seg * dt
    freqs = 2.0 * np.pi * np.fft.rfftfreq(seg, d=dt)
    shot_scale = (np.sqrt(_shot_density(config.params) / dt)
                  if config.include_shot else 0.0)

    x = rng.multivariate_normal(np.zeros(dim), cov0, size=n_traj)
    psd_accum = np.zeros((n_traj, freqs.size))
    q2_sum = np.zeros(n_traj)
    p2_sum = np.zeros(n_traj)
    buf_q = np.empty((n_traj, seg))
    buf_p = np.empty((n_traj, seg))
    phi_t, chol_t = phi.T, chol.T
    for _ in range(n_segments):
        for k in range(seg):
            x = x @ phi_t + rng.standard_normal((n_traj, dim)) @ chol_t
            buf_q[:, k] = x[:, 0]
            buf_p[:, k] = x[:, 1]
        q2_sum += np.sum(buf_q**2, axis=1)
        p2_sum += np.sum(buf_p**2, axis=1)
        record = buf_q
        if shot_scale:
            record = buf_q + shot_scale * rng.standard_normal(buf_q.shape)
        spec = np.abs(np.fft.rfft(record, axis=1))**2 * dt**2 / t_seg
        psd_accum += spec
    psd = psd_accum / n_segments

    n_samples = n_segments * seg
    q_var_traj = q2_sum / n_samples
    p_var_traj = p2_sum / n_samples

    grid, values, errors = band_average(freqs, psd, config.omega_min,
                                        config.omega_max, config.n_bands)
    return OracleRun(
        grid=grid, values=values, errors=errors,
        q_var=float(np.mean(q_var_traj)),
        q_var_err=float(np.std(q_var_traj, ddof=1) / np.sqrt(n_traj)),
        p_var=float(np.mean(p_var_traj)),
        p_var_err=float(np.std(p_var_traj, ddof=1) / np.sqrt(n_traj)),
        config=config)


def band_average(freqs: np.ndarray, per_traj: np.ndarray, omega_min: float,
                 omega_max: float, n_bands: int):
    """Average per-trajectory spectra into equal-width frequency bands.

    Returns band centers, ensemble means and standard errors.  Bands with no
    FFT bin are dropped.
    """
    edges = np.linspace(omega_min, omega_max, n_bands + 1)
    centers, means, errs = [], [], []
    n_traj = per_traj.shape[0]
    for lo, hi in zip(edges[:-1], edges[1:]):
        mask = (freqs >= lo) & (freqs < hi)
        if not np.any(mask):
            continue
        per = per_traj[:, mask].mean(axis=1)
        centers.append(0.5 * (lo + hi))
        means.append(per.mean())
        errs.append(per.std(ddof=1) / np.sqrt(n_traj))
    return np.array(centers), np.array(means), np.array(errs)


def band_average_reference(freqs: np.ndarray, reference: np.ndarray,
                           omega_min: float, omega_max: float, n_bands: int):
    """Average an analytic spectrum over the same bands as `band_average`."""
    edges = np.linspace(omega_min, omega_max, n_bands + 1)
    out = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mask = (freqs >= lo) & (freqs < hi)
        if not np.any(mask):
            continue
        out.append(reference[mask].mean())
    return np.array(out)


def fft_bin_frequencies(config: OracleConfig) -> np.ndarray:
    """Raw FFT bin frequencies used by `simulate` before band averaging."""
    seg = min(config.n_steps, DEFAULT_SEGMENT)
    return 2.0 * np.pi * np.fft.rfftfreq(seg, d=config.dt)


def nonstationary_ensemble(config: OracleConfig, t_meas: float,
                           omega_grid=None,
                           initial: StationaryState | None = None):
    """Monte-Carlo counterpart of the analytic nonstationary spectrum.

    Draws (Q, P) from the feedback-on stationary Gaussian, evolves with the
    loop open, applies the exponential window and returns the ensemble mean
    and standard error of |windowed transform|^2 / T on `omega_grid`.
    """
    check_step(config)
    params = config.params
    if initial is None:
        initial = stationary_variances(params)
    cov0 = np.array([[initial.q_var, initial.qp_sym],
                     [initial.qp_sym, initial.p_var]])
    free = without_feedback(params)
    a, b = drift_and_noise(free)
    phi, chol = discretize(a, b, config.dt)
    rng = np.random.default_rng(config.seed)

    if omega_grid is None:
        omega_grid = np.linspace(config.omega_min, config.omega_max,
                                 config.n_bands)
    omega_grid = np.asarray(omega_grid, dtype=float)
    n_steps = int(np.ceil(16.0 * t_meas / config.dt))
    t = np.arange(n_steps) * config.dt
    window = np.exp(-t / (2.0 * t_meas))
    kernel = np.exp(-1j * np.outer(omega_grid, t)) * window * config.dt
    shot_scale = (np.sqrt(_shot_density(params) / config.dt)
                  if config.include_shot else 0.0)

    n_traj = config.n_traj
    x = rng.multivariate_normal(np.zeros(2), cov0, size=n_traj)
    traj = np.empty((n_traj, n_steps))
    phi_t, chol_t = phi.T, chol.T
    for k in range(n_steps):
        traj[:, k] = x[:, 0]
        x = x @ phi_t + rng.standard_normal((n_traj, 2)) @ chol_t
    if shot_scale:
        traj = traj + shot_scale * rng.standard_normal(traj.shape)
    transforms = traj @ kernel.T  # (n_traj, n_omega)
    per = np.abs(transforms)**2 / t_meas
    values = per.mean(axis=0)
    errors = per.std(axis=0, ddof=1) / np.sqrt(n_traj)
    return omega_grid, values, errors
