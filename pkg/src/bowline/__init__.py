"""bowline: a deterministic engine for a sensor-driven ensemble.

A violin bow instrumented with an accelerometer, three buttons, and a
slider streams frames over a line protocol.  The engine turns them into
a probabilistic rhythm grid, scale-table pitches, four drum arms with
recovery limits, and a particle/line/circle visual scene, all of it
reproducible bit-for-bit from (seed, input log, config).
"""

from bowline.protocol import (
    DENSITY_LADDER,
    EngineEvent,
    HitEvent,
    Mode,
    NoteEvent,
    ParseError,
    ParseErrorKind,
    PulseEvent,
    SensorFrame,
    SnapshotMessage,
    StateEvent,
)

__version__ = "0.1.0"

__all__ = [
    "DENSITY_LADDER",
    "EngineEvent",
    "HitEvent",
    "Mode",
    "NoteEvent",
    "ParseError",
    "ParseErrorKind",
    "PulseEvent",
    "SensorFrame",
    "SnapshotMessage",
    "StateEvent",
    "__version__",
]
