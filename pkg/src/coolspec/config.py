"""Config file reading and writing.

Plain key = value format with two optional sections:

    quality_factor = 1e4
    input_power = 10.0
    gain = 1e3
    scheme = "cold_damping"
    detection_efficiency = 0.8
    temperature = 1e5
    cutoff = 100.0

    [force]
    amplitude = 1.0
    duration = 10.0
    arrival_time = 30.0
    carrier = 1.0

    [window]
    duration = 10.0
    cooling_time = 0.0

'#' starts a comment.  Unknown keys or sections are errors, reported with
their line number.  Floats are written with repr so that a save/load round
trip reproduces every value bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError
from .params import (DEFAULT_CUTOFF, ForcePulse, MeasurementWindow,
                     ModelParams, Scheme, validate, validate_pulse,
                     validate_window)

_TOP_KEYS = {"quality_factor", "input_power", "gain", "scheme",
             "detection_efficiency", "temperature", "cutoff"}
_FORCE_KEYS = {"amplitude", "duration", "arrival_time", "carrier"}
_WINDOW_KEYS = {"duration", "cooling_time"}
_REQUIRED_TOP = {"quality_factor", "input_power", "scheme"}


@dataclass(frozen=True)
class RunConfig:
    """Parsed configuration: model parameters plus optional force/window."""

    params: ModelParams
    force: ForcePulse | None = None
    window: MeasurementWindow | None = None
    window_keys: frozenset = frozenset()


def _parse_scalar(raw: str, key: str, lineno: int):
    raw = raw.strip()
    if raw.startswith('"') and raw.endswith('"') and len(raw) >= 2:
        return raw[1:-1]
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(
            f"line {lineno}: value for '{key}' is neither a number nor a "
            f"quoted string: {raw!r}") from None


def parse_config(text: str) -> RunConfig:
    """Parse config text; raises ConfigError with line/key diagnostics."""
    sections: dict[str, dict[str, object]] = {"": {}, "force": {}, "window": {}}
    allowed = {"": _TOP_KEYS, "force": _FORCE_KEYS, "window": _WINDOW_KEYS}
    current = ""
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            name = stripped[1:-1].strip()
            if name not in ("force", "window"):
                raise ConfigError(f"line {lineno}: unknown section [{name}]")
            current = name
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got "
                              f"{stripped!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in allowed[current]:
            where = f"section [{current}]" if current else "top level"
            raise ConfigError(f"line {lineno}: unknown key '{key}' at {where}")
        if key in sections[current]:
            raise ConfigError(f"line {lineno}: duplicate key '{key}'")
        sections[current][key] = _parse_scalar(raw, key, lineno)

    top = sections[""]
    missing = _REQUIRED_TOP - top.keys()
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(sorted(missing))}")
    scheme_raw = top["scheme"]
    try:
        scheme = Scheme(scheme_raw)
    except ValueError:
        names = ", ".join(s.value for s in Scheme)
        raise ConfigError(
            f"unknown scheme {scheme_raw!r}; expected one of {names}") from None
    params = validate(ModelParams(
        quality_factor=float(top["quality_factor"]),
        input_power=float(top["input_power"]),
        gain=float(top.get("gain", 0.0)),
        scheme=scheme,
        detection_efficiency=float(top.get("detection_efficiency", 1.0)),
        temperature=float(top.get("temperature", 0.0)),
        cutoff=float(top.get("cutoff", DEFAULT_CUTOFF))))

    force = None
    if sections["force"]:
        blk = sections["force"]
        missing = {"amplitude", "duration"} - blk.keys()
        if missing:
            raise ConfigError(
                f"[force] missing keys: {', '.join(sorted(missing))}")
        force = validate_pulse(ForcePulse(
            amplitude=float(blk["amplitude"]),
            duration=float(blk["duration"]),
            arrival_time=float(blk.get("arrival_time", 0.0)),
            carrier=float(blk.get("carrier", 1.0))))

    window = None
    if sections["window"]:
        blk = sections["window"]
        if "duration" not in blk:
            raise ConfigError("[window] missing key: duration")
        window = validate_window(MeasurementWindow(
            duration=float(blk["duration"]),
            cooling_time=float(blk.get("cooling_time", 0.0))))

    return RunConfig(params=params, force=force, window=window,
                     window_keys=frozenset(sections["window"].keys()))


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def format_config(config: RunConfig) -> str:
    """Serialize back to the config format (round-trips all floats)."""
    p = config.params
    lines = [
        f"quality_factor = {p.quality_factor!r}",
        f"input_power = {p.input_power!r}",
        f"gain = {p.gain!r}",
        f'scheme = "{p.scheme.value}"',
        f"detection_efficiency = {p.detection_efficiency!r}",
        f"temperature = {p.temperature!r}",
        f"cutoff = {p.cutoff!r}",
    ]
    if config.force is not None:
        f = config.force
        lines += ["", "[force]",
                  f"amplitude = {f.amplitude!r}",
                  f"duration = {f.duration!r}",
                  f"arrival_time = {f.arrival_time!r}",
                  f"carrier = {f.carrier!r}"]
    if config.window is not None:
        w = config.window
        lines += ["", "[window]",
                  f"duration = {w.duration!r}",
                  f"cooling_time = {w.cooling_time!r}"]
    return "\n".join(lines) + "\n"


def save_config(config: RunConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_config(config))
