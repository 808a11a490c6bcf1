"""Noise spectra and impulsive-force sensitivity of a feedback-cooled
optomechanical cavity, with a time-domain stochastic cross-check."""

__version__ = "0.1.0"

from .errors import (ConfigError, CoolspecError, EmptyGrid, InconsistentGain,
                     InvalidEfficiency, MissingForce, NumericalError,
                     QuadratureNotConverged, UnknownFigure, UnstableStep,
                     ValidationError, WindowTooShort)
from .params import (ForcePulse, MeasurementWindow, ModelParams, Scheme,
                     effective_damping, validate, validate_pulse,
                     validate_window, without_feedback)
from .response import (chi0_shifted, chi_cd, chi_free, chi_mf,
                       filter_transform, force_transform, susceptibility)
from .snr import (averaged_snr, nonstationary_noise, nonstationary_signal,
                  nonstationary_snr, stationary_snr)
from .spectra import (Spectrum, StationaryState, brownian_weight,
                      nonstationary_spectrum, position_spectrum,
                      stationary_spectrum, stationary_variances)
from .oracle import OracleConfig, OracleRun, nonstationary_ensemble, simulate
