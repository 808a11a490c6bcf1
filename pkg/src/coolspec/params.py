"""Dimensionless parameterization of the feedback-cooled mirror.

Everything is expressed in units where the mechanical frequency is 1 and
time is measured in inverse mechanical frequencies.  The mechanical decay
rate is then 1/quality_factor, the temperature enters only through
k_B*T/(hbar*omega_m), and the whole model is pinned down by a handful of
dimensionless numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .errors import InconsistentGain, InvalidEfficiency, ValidationError

DEFAULT_CUTOFF = 100.0


class Scheme(Enum):
    """Which feedback loop acts on the mirror."""

    MOMENTUM_FEEDBACK = "momentum_feedback"
    COLD_DAMPING = "cold_damping"
    NO_FEEDBACK = "no_feedback"


@dataclass(frozen=True)
class ModelParams:
    """Physical and feedback parameters of the device.

    Attributes:
        quality_factor: mechanical quality factor (frequency over decay rate).
        input_power: rescaled, dimensionless laser input power.
        gain: rescaled, dimensionless feedback gain.
        scheme: which feedback loop is closed.
        detection_efficiency: homodyne detection efficiency, in (0, 1].
        temperature: bath temperature as k_B*T/(hbar*omega_m).
        cutoff: reservoir frequency cutoff in units of omega_m.
    """

    quality_factor: float
    input_power: float
    gain: float = 0.0
    scheme: Scheme = Scheme.NO_FEEDBACK
    detection_efficiency: float = 1.0
    temperature: float = 0.0
    cutoff: float = DEFAULT_CUTOFF

    @property
    def gamma(self) -> float:
        """Mechanical decay rate, 1/quality_factor."""
        return 1.0 / self.quality_factor


@dataclass(frozen=True)
class ForcePulse:
    """Gaussian-enveloped cosine force pulse.

    f(t) = amplitude * exp(-(t - arrival_time)^2 / 2 duration^2) * cos(carrier * t)
    """

    amplitude: float
    duration: float
    arrival_time: float = 0.0
    carrier: float = 1.0


@dataclass(frozen=True)
class MeasurementWindow:
    """Exponential measurement window exp(-t/2T) of duration T.

    The normalization integral of the squared window equals the duration,
    which is what makes `duration` the effective measurement time.
    cooling_time is the feedback-on interval of a cooling/measuring cycle.
    """

    duration: float
    cooling_time: float = 0.0


def _require(cond: bool, msg: str, exc=ValidationError) -> None:
    if not cond:
        raise exc(msg)


def validate(params: ModelParams) -> ModelParams:
    """Check every invariant of a ModelParams and return it unchanged."""
    _require(math.isfinite(params.quality_factor) and params.quality_factor > 0,
             f"quality_factor must be > 0, got {params.quality_factor}")
    _require(math.isfinite(params.input_power) and params.input_power > 0,
             f"input_power must be > 0, got {params.input_power}")
    _require(math.isfinite(params.gain) and params.gain >= 0,
             f"gain must be >= 0, got {params.gain}")
    _require(0.0 < params.detection_efficiency <= 1.0,
             f"detection_efficiency must be in (0, 1], got {params.detection_efficiency}",
             InvalidEfficiency)
    _require(math.isfinite(params.temperature) and params.temperature >= 0,
             f"temperature must be >= 0, got {params.temperature}")
    _require(params.cutoff > 1.0,
             f"cutoff must be > 1, got {params.cutoff}")
    if params.scheme is Scheme.NO_FEEDBACK and params.gain != 0.0:
        raise InconsistentGain(
            f"scheme=no_feedback forces gain=0, got gain={params.gain}")
    return params


def validate_pulse(pulse: ForcePulse) -> ForcePulse:
    """Check the force-pulse invariants and return it unchanged."""
    _require(pulse.duration > 0, f"pulse duration must be > 0, got {pulse.duration}")
    _require(pulse.carrier >= 0, f"pulse carrier must be >= 0, got {pulse.carrier}")
    return pulse


def validate_window(window: MeasurementWindow) -> MeasurementWindow:
    """Check the measurement-window invariants and return it unchanged."""
    _require(window.duration > 0,
             f"window duration must be > 0, got {window.duration}")
    _require(window.cooling_time >= 0,
             f"cooling_time must be >= 0, got {window.cooling_time}")
    return window


def effective_damping(params: ModelParams) -> float:
    """Feedback-broadened mechanical decay rate gamma*(1+g)."""
    if params.scheme is Scheme.NO_FEEDBACK:
        return params.gamma
    return params.gamma * (1.0 + params.gain)


def without_feedback(params: ModelParams) -> ModelParams:
    """Same device with the feedback loop open."""
    return replace(params, scheme=Scheme.NO_FEEDBACK, gain=0.0)
