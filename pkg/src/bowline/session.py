"""The session loop: one logical clock owning all engine state.

Time is driven entirely by input-frame timestamps; wall time never
enters, so a live socket feed and a replay of its recording take the
same code path and produce identical bytes.  The loop runs fixed 1/60 s
ticks.  A frame's arrival proves the clock has reached its timestamp,
so feeding advances through every tick that ends strictly before it;
the tick containing the frame runs once a later frame (or finish)
closes it.  Each tick:

* frames and bar downbeats are processed in timestamp order, so a bar
  always latches the control state as of its boundary (ties go to the
  bar: a change landing exactly on the line affects the next bar);
* due events pop off one queue ordered by (t_ms, kind, payload); drum
  strikes consult arm recovery at pop time, keeping each arm's history
  chronological even when tremolo bursts spill across a bar line;
* the visual scene steps once against the latest bow sample, and on
  snapshot ticks serializes itself.

Output is written strictly in (t_ms, kind) order with kinds ranked
STATE < NOTE < HIT < PULSE; sensor frames echo into the log between
STATE and NOTE, snapshots last.
"""

from __future__ import annotations

import heapq
import random
from collections import deque
from typing import Callable

from bowline.config import SessionConfig
from bowline.control import ControlState, TriggerDetector, apply_frame
from bowline.drums import DrumKit, route
from bowline.harmony import realize
from bowline.protocol import (
    HitEvent,
    ParseError,
    PulseEvent,
    SensorFrame,
    SensorStream,
    StateEvent,
    encode_event,
    encode_sensor_frame,
    encode_snapshot,
)
from bowline.rhythm import generate_bar, schedule, step_duration_ms
from bowline.visuals import DT, VisualState

# tie-break ranks at equal t_ms
RANK_STATE = 0
RANK_BOW = 1
RANK_NOTE = 2
RANK_HIT = 3
RANK_PULSE = 4
RANK_SNAP = 5

_PLAIN = 0
_HIT_CANDIDATE = 1

Sink = Callable[[str], None]


def tick_time_ms(k: int) -> int:
    """Wall position of tick k: round(k * 1000 / 60) in exact integers."""
    return (k * 100 + 3) // 6


def ticks_for(t_ms: int) -> int:
    """Tick count covering a duration: ceil(t_ms / tick length)."""
    return (t_ms * 3 + 49) // 50


class Session:
    """Deterministic engine; emits encoded lines to the given sinks."""

    def __init__(self, config: SessionConfig, sinks: list[Sink]):
        self._config = config
        self._sinks = sinks
        self._stream = SensorStream()
        self._control = ControlState()
        self._prev_frame: SensorFrame | None = None
        self._detector = TriggerDetector()
        self._melody_rng = random.Random(f"{config.seed}:melody")
        self._kit = DrumKit(recovery_ms=config.recovery_ms)
        self._visual = VisualState(config.seed)
        # (t, rank, line, kind, drum, velocity); the all-int tail keeps
        # tuple comparison total when ranks collide
        self._queue: list[tuple[int, int, str, int, int, int]] = []
        self._frames: deque[SensorFrame] = deque()
        self._state_lines: dict[int, str] = {}
        self._tick = 0
        self._last_frame_t = 0
        self._bar_count = 0
        self._next_bar_start = 0.0
        self._last_bow = (0.0, 0.0, 0.0, 0.0)  # ax, ay, az, slider
        self._snap_every = round(60 / config.snapshot_rate_hz)
        self._finished = False
        self.frames_accepted = 0
        self.lines_dropped = 0

        self._state_lines[0] = encode_event(self._state_event(0))
        self._recorded_state = self._control

    def add_sink(self, sink: Sink) -> None:
        """Attach another output consumer (e.g. a network broadcast)."""
        self._sinks.append(sink)

    @property
    def hits_suppressed(self) -> int:
        """Strikes swallowed by arm recovery, summed over all drums."""
        return self._kit.suppressed_total()

    def _state_event(self, t_ms: int) -> StateEvent:
        c = self._control
        return StateEvent(t_ms, c.mode, c.density_level, c.tempo_bpm,
                          c.palette_index)

    # ------------------------------------------------------------ input

    def feed_line(self, line: str, lineno: int | None = None,
                  strict: bool = False) -> bool:
        """Ingest one input line.

        Lines whose first token is not BOW are skipped, so a recorded
        session log (which interleaves engine output with the frames)
        replays as-is.  Malformed or time-regressing frames raise in
        strict (replay) mode and are counted and dropped in live mode.
        Returns True when a frame was accepted.
        """
        if self._finished:
            raise RuntimeError("session already finished")
        tokens = line.split(None, 1)
        if not tokens or tokens[0] != "BOW":
            return False
        try:
            frame = self._stream.parse(line.strip())
        except ParseError as exc:
            if strict:
                prefix = f"line {lineno}: " if lineno is not None else ""
                raise ParseError(exc.kind, f"{prefix}{exc}") from None
            self.lines_dropped += 1
            return False
        # run every tick that ends before this frame; its own tick stays
        # open in case more frames share it
        while tick_time_ms(self._tick + 1) < frame.t_ms:
            self._tick += 1
            self._run_tick(self._tick)
        self._frames.append(frame)
        self._last_frame_t = frame.t_ms
        self.frames_accepted += 1
        return True

    def finish(self) -> None:
        """Close the final tick and flush.  A session that never saw a
        frame emits exactly its opening STATE line.  Queued events past
        the final tick are dropped unplayed."""
        if self._finished:
            return
        self._finished = True
        target = ticks_for(self._last_frame_t)
        while self._tick < target:
            self._tick += 1
            self._run_tick(self._tick)
        if self._state_lines:
            for t in sorted(self._state_lines):
                self._write(self._state_lines[t])
            self._state_lines.clear()

    # ------------------------------------------------------------ ticks

    def _run_tick(self, k: int) -> None:
        t_k = tick_time_ms(k)
        buffer: list[tuple[int, int, str]] = []

        # interleave frames and bar downbeats by timestamp; a bar is due
        # once its rounded start falls inside this tick (its events are
        # rounded the same way, so none can land before an already
        # emitted tick), but a frame stamped before the true boundary
        # still applies first
        while True:
            frame = self._frames[0] if self._frames else None
            frame_due = frame is not None and frame.t_ms <= t_k
            bar_due = round(self._next_bar_start) <= t_k
            if bar_due and (not frame_due or self._next_bar_start <= frame.t_ms):
                self._generate_bar()
            elif frame_due:
                self._frames.popleft()
                self._ingest_frame(frame, buffer)
            else:
                break

        while self._queue and self._queue[0][0] <= t_k:
            t, rank, line, kind, drum, velocity = heapq.heappop(self._queue)
            if kind == _HIT_CANDIDATE:
                if self._kit.try_hit(t, drum, velocity) is None:
                    continue
                self._visual.on_hit(drum)
            buffer.append((t, rank, line))

        ax, ay, az, slider = self._last_bow
        self._visual.step(DT, ax, ay, az, slider, self._control.palette_index)
        if k % self._snap_every == 0:
            buffer.append(
                (t_k, RANK_SNAP, encode_snapshot(self._visual.snapshot(t_k)))
            )

        if self._state_lines:
            for t in sorted(self._state_lines):
                buffer.append((t, RANK_STATE, self._state_lines[t]))
            self._state_lines.clear()

        buffer.sort()
        for _, _, line in buffer:
            self._write(line)

    # ------------------------------------------------------------ steps

    def _ingest_frame(
        self, frame: SensorFrame, buffer: list[tuple[int, int, str]]
    ) -> None:
        buffer.append((frame.t_ms, RANK_BOW, encode_sensor_frame(frame)))
        self._control = apply_frame(self._control, self._prev_frame, frame)
        self._prev_frame = frame
        self._last_bow = (frame.ax, frame.ay, frame.az, frame.slider)
        if self._control != self._recorded_state:
            # one STATE per millisecond: a second change in the same ms
            # replaces the pending line instead of contradicting it
            self._state_lines[frame.t_ms] = encode_event(
                self._state_event(frame.t_ms)
            )
            self._recorded_state = self._control

        trigger = self._detector.feed(frame)
        if trigger is None:
            return
        # the admission draw is consumed per trigger, admitted or not,
        # so the stream position depends only on the input
        admitted = self._melody_rng.random() < self._control.density_level
        if not admitted:
            return
        bar_index = max(0, self._bar_count - 1)
        [note] = realize(
            [], [(bar_index, trigger)], self._control.tempo_bpm,
            self._config.harmony,
        )
        heapq.heappush(
            self._queue,
            (note.t_ms, RANK_NOTE, encode_event(note), _PLAIN, 0, 0),
        )

    def _generate_bar(self) -> None:
        bar_index = self._bar_count
        bar_start = self._next_bar_start
        control = self._control
        tempo = control.tempo_bpm
        events = generate_bar(
            control.mode, control.density_level, bar_index,
            self._config.seed, self._config.rhythm,
        )
        scheduled = schedule(events, tempo, bar_start)
        notes = realize(
            [(t, bar_index, e) for t, e in scheduled], [], tempo,
            self._config.harmony,
        )
        for note in notes:
            heapq.heappush(
                self._queue,
                (note.t_ms, RANK_NOTE, encode_event(note), _PLAIN, 0, 0),
            )
        for t, event in scheduled:
            drum = route(event.voice_slot)
            line = encode_event(HitEvent(t, drum, event.velocity))
            heapq.heappush(
                self._queue,
                (t, RANK_HIT, line, _HIT_CANDIDATE, drum, event.velocity),
            )
        step_ms = step_duration_ms(tempo)
        for beat in range(4):
            t = round(bar_start + beat * 4 * step_ms)
            heapq.heappush(
                self._queue,
                (t, RANK_PULSE, encode_event(PulseEvent(t, beat)), _PLAIN, 0, 0),
            )
        self._bar_count += 1
        self._next_bar_start = bar_start + 16 * step_ms

    def _write(self, line: str) -> None:
        for sink in self._sinks:
            sink(line)


def run_replay(config: SessionConfig, sinks: list[Sink]) -> Session:
    """Replay a recorded or synthesized log file through a session."""
    session = Session(config, sinks)
    assert config.replay_path is not None
    with open(config.replay_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            session.feed_line(line, lineno=lineno, strict=True)
    session.finish()
    return session
