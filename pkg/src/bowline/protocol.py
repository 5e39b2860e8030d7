"""Line-delimited text protocol shared by sensors, engine, logs, and consoles.

Every message is one UTF-8 line with space-separated fields; the first
field names the message kind:

    BOW   <t_ms> <ax> <ay> <az> <b1> <b2> <b3> <slider>
    HIT   <t_ms> <drum_id> <velocity>
    NOTE  <t_ms> <slot> <midi_pitch> <velocity> <duration_ms>
    STATE <t_ms> <mode> <density> <tempo_bpm> <palette_index>
    PULSE <t_ms> <beat_index>
    SNAP  <t_ms> <n> {<x> <y> <life>}*n {<axis> <offset> <travel> <dir>}*4
          {<x> <y> <radius> <color_index>}*3

Floats are rendered with exactly four decimal places (round-half-even on
the underlying binary value), so `parse(encode(m)) == m` holds for any
message whose floats sit on the 1e-4 grid.  Numeric fields of sensor
frames that fall outside their documented range are clamped rather than
rejected (sensor noise should never kill a session), and their analog
fields are quantized onto that grid, making the wire resolution the only
resolution the engine ever sees: a session driven by raw sensor lines
and its own recorded log replay identically.  Structural problems
(unknown kind, wrong field count, unparseable or non-finite tokens, and
out-of-range fields on engine-authored messages) raise ParseError.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class Mode(Enum):
    """Performance mode cycled by the first sensor button."""

    STACCATO = "STACCATO"
    SUSTAIN = "SUSTAIN"
    TREMOLO = "TREMOLO"

    def cycled(self) -> "Mode":
        order = (Mode.STACCATO, Mode.SUSTAIN, Mode.TREMOLO)
        return order[(order.index(self) + 1) % 3]


DENSITY_LADDER = (0.25, 0.5, 0.75, 1.0)

TEMPO_MIN = 80.0
TEMPO_MAX = 200.0

ACCEL_RANGE = 4.0  # accelerometer axes clamp to [-4, 4] g
PARTICLE_SNAPSHOT_CAP = 512


class ParseErrorKind(Enum):
    BAD_TOKEN = "BadToken"
    FIELD_COUNT = "FieldCount"
    NON_MONOTONIC_TIME = "NonMonotonicTime"


class ParseError(ValueError):
    """Raised for any line the protocol refuses.  Carries a kind tag."""

    def __init__(self, kind: ParseErrorKind, message: str):
        super().__init__(message)
        self.kind = kind


@dataclass(frozen=True)
class SensorFrame:
    """One bow sample: acceleration in g, button states, slider position.

    Instances produced by parse_sensor_line are already clamped to the
    documented ranges (axes to [-4, 4], slider to [0, 1], buttons to 0/1).
    """

    t_ms: int
    ax: float
    ay: float
    az: float
    b1: int
    b2: int
    b3: int
    slider: float


@dataclass(frozen=True)
class HitEvent:
    """One drum strike. drum_id is 1..4, velocity 1..127."""

    t_ms: int
    drum_id: int
    velocity: int

    def __post_init__(self) -> None:
        if not 1 <= self.drum_id <= 4:
            raise ValueError(f"drum_id out of range: {self.drum_id}")
        if not 1 <= self.velocity <= 127:
            raise ValueError(f"velocity out of range: {self.velocity}")


@dataclass(frozen=True)
class NoteEvent:
    """One pitched note: slot 0..7 (accompaniment 0-3, melody 4-7)."""

    t_ms: int
    slot: int
    midi_pitch: int
    velocity: int
    duration_ms: int

    def __post_init__(self) -> None:
        if not 0 <= self.slot <= 7:
            raise ValueError(f"slot out of range: {self.slot}")
        if not 0 <= self.midi_pitch <= 127:
            raise ValueError(f"midi_pitch out of range: {self.midi_pitch}")
        if not 1 <= self.velocity <= 127:
            raise ValueError(f"velocity out of range: {self.velocity}")
        if self.duration_ms <= 0:
            raise ValueError(f"duration_ms must be positive: {self.duration_ms}")


@dataclass(frozen=True)
class StateEvent:
    """Control-state announcement: mode, density step, tempo, palette."""

    t_ms: int
    mode: Mode
    density_level: float
    tempo_bpm: float
    palette_index: int

    def __post_init__(self) -> None:
        if self.density_level not in DENSITY_LADDER:
            raise ValueError(f"density off ladder: {self.density_level}")
        if not TEMPO_MIN <= self.tempo_bpm <= TEMPO_MAX:
            raise ValueError(f"tempo out of range: {self.tempo_bpm}")
        if self.palette_index < 0:
            raise ValueError(f"palette_index negative: {self.palette_index}")


@dataclass(frozen=True)
class PulseEvent:
    """Quarter-note pulse indicator, beat_index 0..3 within the bar."""

    t_ms: int
    beat_index: int

    def __post_init__(self) -> None:
        if not 0 <= self.beat_index <= 3:
            raise ValueError(f"beat_index out of range: {self.beat_index}")


EngineEvent = HitEvent | NoteEvent | StateEvent | PulseEvent


@dataclass(frozen=True)
class SnapshotMessage:
    """Serialized visual state: particle triples, 4 walker lines, 3 circles.

    particles: (x, y, life) with every component in [0, 1].
    lines:     (axis, offset, travel, direction); axis is "H" or "V",
               offset/travel in [0, 1], direction +1 or -1.
    circles:   (x, y, radius, color_index) with radius in [0.02, 0.12].
    """

    t_ms: int
    particles: tuple[tuple[float, float, float], ...]
    lines: tuple[tuple[str, float, float, int], ...]
    circles: tuple[tuple[float, float, float, int], ...]

    def __post_init__(self) -> None:
        if len(self.lines) != 4:
            raise ValueError(f"expected 4 lines, got {len(self.lines)}")
        if len(self.circles) != 3:
            raise ValueError(f"expected 3 circles, got {len(self.circles)}")


def fmt4(x: float) -> str:
    """Render a float with exactly four decimal places.

    Anything that would print as "-0.0000" (negative zero, but also tiny
    negatives like -1e-9) folds into "0.0000", making the rendering a
    fixed point under parse-then-encode: records replay to themselves
    even when a sensor feeds values below the wire resolution.
    """
    s = f"{x:.4f}"
    return "0.0000" if s == "-0.0000" else s


def clamp(v: float, lo: float, hi: float) -> float:
    return lo if v < lo else hi if v > hi else v


def _bad(tok: str, what: str) -> ParseError:
    return ParseError(ParseErrorKind.BAD_TOKEN, f"bad {what}: {tok!r}")


def _int_field(tok: str, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise _bad(tok, what) from None


def _float_field(tok: str, what: str) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise _bad(tok, what) from None
    if not math.isfinite(v):
        raise _bad(tok, what)
    return v


def _time_field(tok: str) -> int:
    t = _int_field(tok, "t_ms")
    return max(t, 0)


def _wire4(v: float) -> float:
    """Collapse an analog sensor value onto the 1e-4 wire grid.

    The grid is the real resolution of the system: anything finer cannot
    survive a record/replay cycle, so it must not influence the engine
    either.  Negative zero folds to plain zero."""
    v = round(v, 4)
    return 0.0 if v == 0.0 else v


def _expect_fields(parts: list[str], n: int, kind: str) -> None:
    if len(parts) != n:
        raise ParseError(
            ParseErrorKind.FIELD_COUNT,
            f"{kind} expects {n - 1} fields, got {len(parts) - 1}",
        )


def encode_sensor_frame(frame: SensorFrame) -> str:
    return (
        f"BOW {frame.t_ms} {fmt4(frame.ax)} {fmt4(frame.ay)} {fmt4(frame.az)}"
        f" {frame.b1} {frame.b2} {frame.b3} {fmt4(frame.slider)}"
    )


def parse_sensor_line(line: str) -> SensorFrame:
    """Parse one BOW line, clamping noisy numeric fields into range and
    quantizing analog fields to the wire grid."""
    parts = line.split()
    if not parts or parts[0] != "BOW":
        raise _bad(parts[0] if parts else "", "message kind")
    _expect_fields(parts, 9, "BOW")
    t = _time_field(parts[1])
    ax, ay, az = (
        _wire4(
            clamp(_float_field(parts[i], "acceleration"), -ACCEL_RANGE, ACCEL_RANGE)
        )
        for i in (2, 3, 4)
    )
    buttons = []
    for i in (5, 6, 7):
        b = _int_field(parts[i], "button")
        buttons.append(1 if b >= 1 else 0)
    slider = _wire4(clamp(_float_field(parts[8], "slider"), 0.0, 1.0))
    return SensorFrame(t, ax, ay, az, buttons[0], buttons[1], buttons[2], slider)


def encode_event(event: EngineEvent) -> str:
    if isinstance(event, HitEvent):
        return f"HIT {event.t_ms} {event.drum_id} {event.velocity}"
    if isinstance(event, NoteEvent):
        return (
            f"NOTE {event.t_ms} {event.slot} {event.midi_pitch}"
            f" {event.velocity} {event.duration_ms}"
        )
    if isinstance(event, StateEvent):
        return (
            f"STATE {event.t_ms} {event.mode.value} {fmt4(event.density_level)}"
            f" {fmt4(event.tempo_bpm)} {event.palette_index}"
        )
    if isinstance(event, PulseEvent):
        return f"PULSE {event.t_ms} {event.beat_index}"
    raise TypeError(f"not an engine event: {event!r}")


def _ranged_int(tok: str, lo: int, hi: int, what: str) -> int:
    v = _int_field(tok, what)
    if not lo <= v <= hi:
        raise _bad(tok, f"{what} (expected {lo}..{hi})")
    return v


def parse_event_line(line: str) -> EngineEvent:
    """Parse one engine-authored event line, validating every field."""
    parts = line.split()
    kind = parts[0] if parts else ""
    if kind == "HIT":
        _expect_fields(parts, 4, "HIT")
        return HitEvent(
            _time_field(parts[1]),
            _ranged_int(parts[2], 1, 4, "drum_id"),
            _ranged_int(parts[3], 1, 127, "velocity"),
        )
    if kind == "NOTE":
        _expect_fields(parts, 6, "NOTE")
        dur = _int_field(parts[5], "duration_ms")
        if dur <= 0:
            raise _bad(parts[5], "duration_ms")
        return NoteEvent(
            _time_field(parts[1]),
            _ranged_int(parts[2], 0, 7, "slot"),
            _ranged_int(parts[3], 0, 127, "midi_pitch"),
            _ranged_int(parts[4], 1, 127, "velocity"),
            dur,
        )
    if kind == "STATE":
        _expect_fields(parts, 6, "STATE")
        try:
            mode = Mode(parts[2])
        except ValueError:
            raise _bad(parts[2], "mode") from None
        density = _float_field(parts[3], "density")
        if density not in DENSITY_LADDER:
            raise _bad(parts[3], "density")
        tempo = _float_field(parts[4], "tempo")
        if not TEMPO_MIN <= tempo <= TEMPO_MAX:
            raise _bad(parts[4], "tempo")
        palette = _int_field(parts[5], "palette_index")
        if palette < 0:
            raise _bad(parts[5], "palette_index")
        return StateEvent(_time_field(parts[1]), mode, density, tempo, palette)
    if kind == "PULSE":
        _expect_fields(parts, 3, "PULSE")
        return PulseEvent(_time_field(parts[1]), _ranged_int(parts[2], 0, 3, "beat_index"))
    raise _bad(kind, "message kind")


def encode_snapshot(snap: SnapshotMessage) -> str:
    out = [f"SNAP {snap.t_ms} {len(snap.particles)}"]
    for x, y, life in snap.particles:
        out.append(f"{fmt4(x)} {fmt4(y)} {fmt4(life)}")
    for axis, offset, travel, direction in snap.lines:
        out.append(f"{axis} {fmt4(offset)} {fmt4(travel)} {direction}")
    for x, y, radius, color in snap.circles:
        out.append(f"{fmt4(x)} {fmt4(y)} {fmt4(radius)} {color}")
    return " ".join(out)


def _unit_float(tok: str, what: str) -> float:
    return clamp(_float_field(tok, what), 0.0, 1.0)


def parse_snapshot_line(line: str) -> SnapshotMessage:
    """Parse one SNAP line.  Positions clamp to the unit square; the
    structure (counts, axis and direction tokens) must be exact."""
    parts = line.split()
    if not parts or parts[0] != "SNAP":
        raise _bad(parts[0] if parts else "", "message kind")
    if len(parts) < 3:
        raise ParseError(ParseErrorKind.FIELD_COUNT, "SNAP header truncated")
    t = _time_field(parts[1])
    n = _int_field(parts[2], "particle count")
    if n < 0:
        raise _bad(parts[2], "particle count")
    _expect_fields(parts, 3 + 3 * n + 4 * 4 + 4 * 3, "SNAP")
    i = 3
    particles = []
    for _ in range(n):
        particles.append(
            (
                _unit_float(parts[i], "particle x"),
                _unit_float(parts[i + 1], "particle y"),
                _unit_float(parts[i + 2], "particle life"),
            )
        )
        i += 3
    lines = []
    for _ in range(4):
        axis = parts[i]
        if axis not in ("H", "V"):
            raise _bad(axis, "axis")
        direction = _int_field(parts[i + 3], "direction")
        if direction not in (1, -1):
            raise _bad(parts[i + 3], "direction")
        lines.append(
            (
                axis,
                _unit_float(parts[i + 1], "line offset"),
                _unit_float(parts[i + 2], "line travel"),
                direction,
            )
        )
        i += 4
    circles = []
    for _ in range(3):
        radius = clamp(_float_field(parts[i + 2], "radius"), 0.02, 0.12)
        color = _int_field(parts[i + 3], "color_index")
        if color < 0:
            raise _bad(parts[i + 3], "color_index")
        circles.append(
            (
                _unit_float(parts[i], "circle x"),
                _unit_float(parts[i + 1], "circle y"),
                radius,
                color,
            )
        )
        i += 4
    return SnapshotMessage(t, tuple(particles), tuple(lines), tuple(circles))


Message = SensorFrame | EngineEvent | SnapshotMessage


def parse_line(line: str) -> Message:
    """Dispatch on the kind token.  Used by log readers and tooling."""
    kind = line.split(maxsplit=1)[0] if line.split() else ""
    if kind == "BOW":
        return parse_sensor_line(line)
    if kind == "SNAP":
        return parse_snapshot_line(line)
    return parse_event_line(line)


def encode_message(message: Message) -> str:
    if isinstance(message, SensorFrame):
        return encode_sensor_frame(message)
    if isinstance(message, SnapshotMessage):
        return encode_snapshot(message)
    return encode_event(message)


class SensorStream:
    """Per-stream parser enforcing non-decreasing frame timestamps.

    A frame that steps backwards raises NonMonotonicTime and leaves the
    stream state untouched, so one bad line never poisons the rest.
    """

    def __init__(self) -> None:
        self.last_t_ms: int | None = None

    def parse(self, line: str) -> SensorFrame:
        frame = parse_sensor_line(line)
        if self.last_t_ms is not None and frame.t_ms < self.last_t_ms:
            raise ParseError(
                ParseErrorKind.NON_MONOTONIC_TIME,
                f"frame time {frame.t_ms} precedes {self.last_t_ms}",
            )
        self.last_t_ms = frame.t_ms
        return frame
