"""Slot-to-pitch decoding over a slow chord progression.

Slots 0..7 index low-to-high degrees of a scale anchored on a root that
walks a progression every few bars.  Slots 0..3 voice the accompaniment,
slots 4..7 the melody, so under any one root every melody pitch clears
every accompaniment pitch.  The decoder is deliberately swappable: the
stage version drove a small learned model, and anything honouring the
same ordering contract can sit behind the same interface.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

from bowline.control import MelodyTrigger
from bowline.protocol import NoteEvent
from bowline.rhythm import RhythmEvent, step_duration_ms

DEFAULT_ROOT_MIDI = 48  # C3
DEFAULT_SCALE_STEPS = (0, 2, 3, 5, 7, 8, 10, 12)  # natural minor + octave
DEFAULT_PROGRESSION = (0, -4, 3, -2)
DEFAULT_BARS_PER_ROOT = 2

MELODY_DURATION_MS = 250


class PitchDecoder(Protocol):
    """Anything that turns (slot, root) into a MIDI pitch.

    Implementations must be strictly increasing in slot for a fixed root
    and keep slots 4..7 above slots 0..3 under the same root.
    """

    def decode(self, slot: int, root_midi: int) -> int: ...


@dataclass(frozen=True)
class ScaleTableDecoder:
    """Default decoder: root plus a fixed scale-step offset, clamped."""

    scale_steps: tuple[int, ...] = DEFAULT_SCALE_STEPS

    def __post_init__(self) -> None:
        if len(self.scale_steps) != 8:
            raise ValueError(f"expected 8 scale steps, got {len(self.scale_steps)}")
        if self.scale_steps[0] != 0:
            raise ValueError("scale_steps[0] must be 0")
        if any(a >= b for a, b in zip(self.scale_steps, self.scale_steps[1:])):
            raise ValueError("scale_steps must be strictly increasing")

    def decode(self, slot: int, root_midi: int) -> int:
        pitch = root_midi + self.scale_steps[slot]
        return max(0, min(127, pitch))


@dataclass(frozen=True)
class HarmonyState:
    """Root, progression, and scale shape for a whole session."""

    root_midi: int = DEFAULT_ROOT_MIDI
    progression: tuple[int, ...] = DEFAULT_PROGRESSION
    bars_per_root: int = DEFAULT_BARS_PER_ROOT
    scale_steps: tuple[int, ...] = DEFAULT_SCALE_STEPS

    def __post_init__(self) -> None:
        if not 0 <= self.root_midi <= 127:
            raise ValueError(f"root_midi out of range: {self.root_midi}")
        if not self.progression:
            raise ValueError("progression must not be empty")
        if self.bars_per_root < 1:
            raise ValueError(f"bars_per_root must be >= 1: {self.bars_per_root}")
        ScaleTableDecoder(self.scale_steps)  # reuse the shape checks

    def decoder(self) -> ScaleTableDecoder:
        return ScaleTableDecoder(self.scale_steps)


def advance_root(bar_index: int, state: HarmonyState) -> int:
    """Root active during the given bar: the progression moves every
    bars_per_root bars and loops forever."""
    step = (bar_index // state.bars_per_root) % len(state.progression)
    return state.root_midi + state.progression[step]


def decode_slot(slot: int, root_midi: int, state: HarmonyState) -> int:
    return state.decoder().decode(slot, root_midi)


def melody_velocity(strength: float) -> int:
    """Scale trigger strength (0, 1] onto MIDI velocity 1..127."""
    return max(1, min(127, round(strength * 127)))


def realize(
    scheduled: list[tuple[int, int, RhythmEvent]],
    triggers: list[tuple[int, MelodyTrigger]],
    tempo_bpm: float,
    state: HarmonyState,
    decoder: PitchDecoder | None = None,
) -> list[NoteEvent]:
    """Turn scheduled grid events and admitted flicks into notes.

    scheduled carries (t_ms, bar_index, event) triples; triggers carry
    (bar_index, trigger) so each item decodes under the root of its bar.
    Grid durations convert at the bar tempo; melody notes hold a fixed
    250 ms regardless of tempo.
    """
    decoder = decoder or state.decoder()
    step_ms = step_duration_ms(tempo_bpm)
    notes = []
    for t_ms, bar_index, event in scheduled:
        root = advance_root(bar_index, state)
        notes.append(
            NoteEvent(
                t_ms=t_ms,
                slot=event.voice_slot,
                midi_pitch=decoder.decode(event.voice_slot, root),
                velocity=event.velocity,
                duration_ms=max(1, round(event.duration_steps * step_ms)),
            )
        )
    for bar_index, trigger in triggers:
        root = advance_root(bar_index, state)
        notes.append(
            NoteEvent(
                t_ms=trigger.t_ms,
                slot=trigger.slot,
                midi_pitch=decoder.decode(trigger.slot, root),
                velocity=melody_velocity(trigger.strength),
                duration_ms=MELODY_DURATION_MS,
            )
        )
    notes.sort(key=lambda n: n.t_ms)
    return notes
