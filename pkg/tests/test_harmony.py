"""Pitch decoding, root walking, note realization, MIDI rendering."""

from __future__ import annotations

import itertools

import pytest

from bowline.control import MelodyTrigger
from bowline.harmony import (
    HarmonyState,
    ScaleTableDecoder,
    advance_root,
    decode_slot,
    melody_velocity,
    realize,
)
from bowline.midi import render_midi
from bowline.protocol import NoteEvent
from bowline.rhythm import RhythmEvent


def test_default_root_walk() -> None:
    state = HarmonyState()
    # two bars per step over offsets (0, -4, +3, -2), then wrap
    assert [advance_root(bar, state) for bar in range(10)] == [
        48, 48, 44, 44, 51, 51, 46, 46, 48, 48,
    ]


def test_decode_hand_sums() -> None:
    state = HarmonyState()
    assert decode_slot(0, 48, state) == 48
    assert decode_slot(2, 48, state) == 51
    assert decode_slot(4, 48, state) == 55
    assert decode_slot(7, 48, state) == 60  # root + octave


def test_decode_clamps_to_midi_range() -> None:
    state = HarmonyState()
    assert decode_slot(7, 120, state) == 127
    assert decode_slot(0, 0, state) == 0


def test_state_validation() -> None:
    with pytest.raises(ValueError):
        HarmonyState(root_midi=200)
    with pytest.raises(ValueError):
        HarmonyState(progression=())
    with pytest.raises(ValueError):
        HarmonyState(bars_per_root=0)
    with pytest.raises(ValueError):
        HarmonyState(scale_steps=(0, 2, 2, 5, 7, 8, 10, 12))
    with pytest.raises(ValueError):
        HarmonyState(scale_steps=(1, 2, 3, 5, 7, 8, 10, 12))


DECODERS = [
    ScaleTableDecoder(),  # natural minor
    ScaleTableDecoder((0, 2, 4, 5, 7, 9, 11, 12)),  # major variant
]


@pytest.mark.parametrize("decoder", DECODERS)
def test_decoder_contract_monotonic_and_partitioned(decoder) -> None:
    """Any decoder behind the interface must order slots strictly and
    keep melody slots above accompaniment slots for the same root."""
    state = HarmonyState()
    roots = {advance_root(bar, state) for bar in range(8)}
    for root in roots:
        pitches = [decoder.decode(slot, root) for slot in range(8)]
        for a, b in itertools.combinations(range(8), 2):
            assert pitches[a] < pitches[b]
        assert min(pitches[4:]) > max(pitches[:4])


def test_realize_full_bar_at_120() -> None:
    state = HarmonyState()
    events = [
        (0, 0, RhythmEvent(0, 0, 0.0, 0, 90, 0.6)),
        (500, 0, RhythmEvent(0, 4, 0.0, 1, 90, 4.0)),
        (1500, 0, RhythmEvent(0, 12, 0.0, 3, 90, 8.0)),
    ]
    notes = realize(events, [], 120.0, state)
    assert [n.duration_ms for n in notes] == [75, 500, 1000]  # steps x 125
    assert [n.slot for n in notes] == [0, 1, 3]
    assert all(n.midi_pitch == 48 + state.scale_steps[n.slot] for n in notes)


def test_realize_melody_trigger() -> None:
    state = HarmonyState()
    trigger = MelodyTrigger(t_ms=2000, slot=7, strength=0.5)
    [note] = realize([], [(0, trigger)], 120.0, state)
    assert note == NoteEvent(2000, 7, 60, 64, 250)


def test_realize_decodes_under_bar_root() -> None:
    state = HarmonyState()
    event = RhythmEvent(2, 0, 0.0, 0, 90, 0.6)
    [note] = realize([(1500, 2, event)], [], 120.0, state)
    assert note.midi_pitch == 44  # bar 2 sits on the second progression step
    trigger = MelodyTrigger(t_ms=1600, slot=4, strength=1.0)
    [melody] = realize([], [(2, trigger)], 120.0, state)
    assert melody.midi_pitch == 44 + 7


def test_realize_sorts_by_time() -> None:
    state = HarmonyState()
    events = [
        (700, 0, RhythmEvent(0, 8, 0.0, 0, 90, 0.6)),
        (100, 0, RhythmEvent(0, 1, 0.0, 0, 70, 0.6)),
    ]
    trigger = MelodyTrigger(t_ms=400, slot=5, strength=1.0)
    notes = realize(events, [(0, trigger)], 120.0, state)
    assert [n.t_ms for n in notes] == [100, 400, 700]


def test_melody_velocity_mapping() -> None:
    assert melody_velocity(1.0) == 127
    assert melody_velocity(0.005) == 1  # floor at 1, never 0
    assert melody_velocity(0.5) == 64


def test_midi_rendering_structure() -> None:
    notes = [
        NoteEvent(0, 0, 48, 90, 500),
        NoteEvent(500, 4, 55, 100, 250),
    ]
    data = render_midi(notes)
    assert data[:4] == b"MThd"
    assert int.from_bytes(data[8:10], "big") == 0  # format 0
    assert int.from_bytes(data[10:12], "big") == 1  # single track
    assert int.from_bytes(data[12:14], "big") == 480  # division
    assert data[14:18] == b"MTrk"
    body = data[22:]
    # one on and one off per note, all on channel 0
    assert body.count(b"\x90") >= 2
    ons = sum(
        1
        for i in range(len(body) - 2)
        if body[i] == 0x90 and body[i + 2] > 0
    )
    assert ons == 2


def test_midi_tick_conversion() -> None:
    # 500 ms at 120 bpm is exactly one quarter: 480 ticks
    [note] = [NoteEvent(500, 0, 60, 90, 500)]
    data = render_midi([note])
    track = data[22:]
    # skip tempo meta (delta 0 + 6 bytes), then read the on delta VLQ
    idx = 7
    delta = 0
    while True:
        byte = track[idx]
        delta = (delta << 7) | (byte & 0x7F)
        idx += 1
        if not byte & 0x80:
            break
    assert delta == 480
