"""Parameter containers and their validation rules."""

import math

import pytest
from hypothesis import given, strategies as st

from coolspec import (
    ForcePulse,
    InconsistentGain,
    InvalidEfficiency,
    MeasurementWindow,
    ModelParams,
    Scheme,
    ValidationError,
    effective_damping,
    validate,
    validate_pulse,
    validate_window,
    without_feedback,
)


def make_params(**overrides):
    base = dict(quality_factor=1e4, input_power=10.0, gain=1e3,
                scheme=Scheme.COLD_DAMPING, detection_efficiency=0.8,
                temperature=1e5)
    base.update(overrides)
    return ModelParams(**base)


def test_gamma_is_inverse_quality_factor():
    assert make_params(quality_factor=1e4).gamma == 1e-4


def test_validate_accepts_reference_parameter_sets():
    validate(make_params())
    validate(make_params(quality_factor=1e5, gain=1e4,
                         scheme=Scheme.MOMENTUM_FEEDBACK))
    validate(make_params(gain=0.0, scheme=Scheme.NO_FEEDBACK))


@pytest.mark.parametrize("bad", [
    dict(quality_factor=0.0),
    dict(quality_factor=-1.0),
    dict(quality_factor=math.inf),
    dict(input_power=0.0),
    dict(gain=-1.0),
    dict(temperature=-1.0),
    dict(cutoff=0.5),
])
def test_validate_rejects_bad_scalars(bad):
    with pytest.raises(ValidationError):
        validate(make_params(**bad))


@pytest.mark.parametrize("eta", [0.0, -0.1, 1.5])
def test_validate_rejects_bad_efficiency(eta):
    with pytest.raises(InvalidEfficiency):
        validate(make_params(detection_efficiency=eta))


def test_no_feedback_with_nonzero_gain_is_inconsistent():
    with pytest.raises(InconsistentGain):
        validate(make_params(gain=2.0, scheme=Scheme.NO_FEEDBACK))


def test_effective_damping_broadens_with_gain():
    p = make_params(gain=1e3)
    assert effective_damping(p) == pytest.approx(p.gamma * 1001.0)
    assert effective_damping(without_feedback(p)) == p.gamma


def test_without_feedback_opens_the_loop_only():
    p = make_params()
    q = without_feedback(p)
    assert q.scheme is Scheme.NO_FEEDBACK and q.gain == 0.0
    assert (q.quality_factor, q.input_power, q.temperature) == (
        p.quality_factor, p.input_power, p.temperature)


def test_pulse_and_window_validation():
    validate_pulse(ForcePulse(amplitude=1.0, duration=10.0))
    with pytest.raises(ValidationError):
        validate_pulse(ForcePulse(amplitude=1.0, duration=0.0))
    with pytest.raises(ValidationError):
        validate_pulse(ForcePulse(amplitude=1.0, duration=1.0, carrier=-1.0))
    validate_window(MeasurementWindow(duration=5.0))
    with pytest.raises(ValidationError):
        validate_window(MeasurementWindow(duration=5.0, cooling_time=-1.0))


@given(q=st.floats(1.0, 1e8), g=st.floats(0.0, 1e6))
def test_effective_damping_never_below_bare_damping(q, g):
    p = make_params(quality_factor=q, gain=g)
    assert effective_damping(p) >= p.gamma
