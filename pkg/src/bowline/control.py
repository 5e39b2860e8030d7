"""Maps raw bow frames onto musical control state and melody triggers.

The slider sets tempo linearly across the playable band.  Buttons act on
rising edges only: b1 cycles the performance mode, b2/b3 step density up
and down a four-rung ladder with wraparound, and any press also advances
the colour palette.  Sharp changes in the z acceleration fire melody
triggers; the z angle at the moment of the flick picks one of the four
melody slots (4..7, low to high).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace

from bowline.protocol import (
    DENSITY_LADDER,
    Mode,
    SensorFrame,
    TEMPO_MAX,
    TEMPO_MIN,
    clamp,
)

# Melody trigger tuning: a flick is a z-axis delta above this threshold
# (in g) across the comparison window, rate-limited by the refractory gap.
TRIGGER_THRESHOLD_G = 0.15
TRIGGER_WINDOW_MS = 100
TRIGGER_REFRACTORY_MS = 150


@dataclass(frozen=True)
class ControlState:
    """Musical knobs as of the last processed frame."""

    mode: Mode = Mode.STACCATO
    density_level: float = DENSITY_LADDER[0]
    tempo_bpm: float = TEMPO_MIN
    palette_index: int = 0


@dataclass(frozen=True)
class MelodyTrigger:
    """One detected bow flick: slot 4..7, strength in (0, 1]."""

    t_ms: int
    slot: int
    strength: float


def map_tempo(slider: float) -> float:
    """Linear map of slider [0, 1] onto [80, 200] bpm."""
    return TEMPO_MIN + (TEMPO_MAX - TEMPO_MIN) * clamp(slider, 0.0, 1.0)


def apply_buttons(
    state: ControlState, prev: SensorFrame | None, frame: SensorFrame
) -> ControlState:
    """Apply rising-edge button semantics of one frame transition.

    With no previous frame, all buttons count as previously released, so
    a session can open with a press.
    """
    prev_b = (0, 0, 0) if prev is None else (prev.b1, prev.b2, prev.b3)
    cur_b = (frame.b1, frame.b2, frame.b3)
    rising = [p == 0 and c == 1 for p, c in zip(prev_b, cur_b)]

    mode = state.mode
    density = state.density_level
    palette = state.palette_index
    if rising[0]:
        mode = mode.cycled()
    rung = DENSITY_LADDER.index(density)
    if rising[1]:
        rung = (rung + 1) % len(DENSITY_LADDER)
    if rising[2]:
        rung = (rung - 1) % len(DENSITY_LADDER)
    density = DENSITY_LADDER[rung]
    palette += sum(rising)
    return replace(
        state, mode=mode, density_level=density, palette_index=palette
    )


def apply_frame(
    state: ControlState, prev: SensorFrame | None, frame: SensorFrame
) -> ControlState:
    """Full per-frame control update: buttons plus continuous tempo."""
    state = apply_buttons(state, prev, frame)
    return replace(state, tempo_bpm=map_tempo(frame.slider))


def z_slot(az: float) -> int:
    """Quantize a z acceleration into melody slots 4..7.

    Bins over [-1, 1] are closed on the right, so az exactly on an edge
    falls into the lower bin (0.5 lands in slot 6, not 7).
    """
    az = clamp(az, -1.0, 1.0)
    if az <= -0.5:
        return 4
    if az <= 0.0:
        return 5
    if az <= 0.5:
        return 6
    return 7


class TriggerDetector:
    """Stateful flick detector over a short window of recent frames.

    feed() compares the current z acceleration against the newest sample
    at least TRIGGER_WINDOW_MS old; a delta above threshold fires unless
    still inside the refractory gap of the previous trigger.
    """

    def __init__(self) -> None:
        self._window: deque[tuple[int, float]] = deque()
        self._last_trigger_ms: int | None = None

    def feed(self, frame: SensorFrame) -> MelodyTrigger | None:
        t, az = frame.t_ms, frame.az
        window = self._window
        # Keep exactly one sample at or beyond the window horizon; older
        # ones can never be the comparison point again.
        while len(window) >= 2 and window[1][0] <= t - TRIGGER_WINDOW_MS:
            window.popleft()
        reference = window[0] if window and window[0][0] <= t - TRIGGER_WINDOW_MS else None
        window.append((t, az))
        if reference is None:
            return None
        delta = abs(az - reference[1])
        if delta <= TRIGGER_THRESHOLD_G:
            return None
        if (
            self._last_trigger_ms is not None
            and t - self._last_trigger_ms < TRIGGER_REFRACTORY_MS
        ):
            return None
        self._last_trigger_ms = t
        return MelodyTrigger(t_ms=t, slot=z_slot(az), strength=min(1.0, delta))
