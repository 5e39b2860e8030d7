"""Minimal Standard MIDI File writer for exporting note logs.

Produces a format 0 file at 480 ticks per quarter with a single fixed
tempo meta event (120 bpm), so one millisecond is exactly 0.96 ticks.
Only NOTE lines from an event log become notes; everything else in the
log is carried by the text protocol and has no MIDI meaning.
"""

from __future__ import annotations

from pathlib import Path

from bowline.protocol import NoteEvent, ParseError, parse_line

TICKS_PER_QUARTER = 480
TEMPO_USEC_PER_QUARTER = 500_000  # 120 bpm
_TICKS_PER_MS = TICKS_PER_QUARTER / (TEMPO_USEC_PER_QUARTER / 1000.0)


def _vlq(value: int) -> bytes:
    """Variable-length quantity used for MIDI delta times."""
    if value < 0:
        raise ValueError(f"negative delta: {value}")
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append(0x80 | (value & 0x7F))
        value >>= 7
    return bytes(reversed(out))


def _ticks(t_ms: int) -> int:
    return round(t_ms * _TICKS_PER_MS)


def render_midi(notes: list[NoteEvent]) -> bytes:
    """Render notes into format 0 SMF bytes on channel 0."""
    # (tick, order, status, pitch, data2); offs sort before ons at the
    # same tick so immediate restrikes never cancel themselves
    raw: list[tuple[int, int, int, int, int]] = []
    for note in notes:
        on = _ticks(note.t_ms)
        off = _ticks(note.t_ms + note.duration_ms)
        if off <= on:
            off = on + 1
        raw.append((on, 1, 0x90, note.midi_pitch, note.velocity))
        raw.append((off, 0, 0x80, note.midi_pitch, 0))
    raw.sort()

    track = bytearray()
    track += _vlq(0) + bytes(
        [0xFF, 0x51, 0x03]
    ) + TEMPO_USEC_PER_QUARTER.to_bytes(3, "big")
    cursor = 0
    for tick, _, status, pitch, data2 in raw:
        track += _vlq(tick - cursor)
        track += bytes([status, pitch, data2])
        cursor = tick
    track += _vlq(0) + bytes([0xFF, 0x2F, 0x00])  # end of track

    header = b"MThd" + (6).to_bytes(4, "big")
    header += (0).to_bytes(2, "big") + (1).to_bytes(2, "big")
    header += TICKS_PER_QUARTER.to_bytes(2, "big")
    return header + b"MTrk" + len(track).to_bytes(4, "big") + bytes(track)


def read_note_log(path: str | Path) -> list[NoteEvent]:
    """Collect the NoteEvents out of an event log, skipping other kinds."""
    notes = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            if not line.startswith("NOTE "):
                continue
            try:
                event = parse_line(line)
            except ParseError as exc:
                raise ParseError(exc.kind, f"line {lineno}: {exc}") from None
            assert isinstance(event, NoteEvent)
            notes.append(event)
    return notes


def export_midi(log_path: str | Path, out_path: str | Path) -> int:
    """Write the MIDI rendering of a log's notes; returns the note count."""
    notes = read_note_log(log_path)
    Path(out_path).write_bytes(render_midi(notes))
    return len(notes)
