"""Probabilistic rhythm grid: one 4/4 bar of sixteen cells per voice.

Each mode carries a table of per-cell onset probabilities.  An onset
lands in a cell when a uniform draw falls under

    table[mode].cells[c] * density_level * voice_weight[voice]

so density scales the whole texture and lower voices thin out first.
Draws come from a stream keyed by (seed, bar, voice), which makes any
bar reproducible in isolation.  Tremolo onsets expand into four-event
bursts on a half-step lattice; Sustain draws a long duration per onset.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from bowline.protocol import Mode

CELLS_PER_BAR = 16
BEAT_CELLS = (0, 4, 8, 12)
OFFBEAT_CELLS = (2, 6, 10, 14)

VOICE_WEIGHTS = (1.0, 0.8, 0.8, 0.6)

BEAT_VELOCITY = 90
OFFGRID_VELOCITY = 70
STACCATO_DURATION_STEPS = 0.6
SUSTAIN_DURATION_RANGE = (4, 8)
SUSTAIN_TABLE_SCALE = 0.3
TREMOLO_CELL_PROBABILITY = 0.15
TREMOLO_BURST_OFFSETS = (0.0, 0.5, 1.0, 1.5)
TREMOLO_BURST_VELOCITIES = (100, 90, 80, 70)
TREMOLO_DURATION_STEPS = 0.25


def _staccato_cells() -> tuple[float, ...]:
    cells = [0.1] * CELLS_PER_BAR
    for c in BEAT_CELLS:
        cells[c] = 0.9
    for c in OFFBEAT_CELLS:
        cells[c] = 0.3
    return tuple(cells)


@dataclass(frozen=True)
class ProbabilityTable:
    """Per-cell onset probabilities for one mode."""

    cells: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.cells) != CELLS_PER_BAR:
            raise ValueError(f"expected {CELLS_PER_BAR} cells, got {len(self.cells)}")
        if any(not 0.0 <= p <= 1.0 for p in self.cells):
            raise ValueError("cell probabilities must sit in [0, 1]")


def default_tables() -> dict[Mode, ProbabilityTable]:
    staccato = _staccato_cells()
    return {
        Mode.STACCATO: ProbabilityTable(staccato),
        Mode.SUSTAIN: ProbabilityTable(
            tuple(p * SUSTAIN_TABLE_SCALE for p in staccato)
        ),
        Mode.TREMOLO: ProbabilityTable((TREMOLO_CELL_PROBABILITY,) * CELLS_PER_BAR),
    }


@dataclass(frozen=True)
class RhythmEvent:
    """One scheduled grid onset before pitch decoding.

    step normally sits in 0..15; step 16 appears only when a tremolo
    burst starting on the final cell spills past the bar line.
    sub_offset is a fraction of one step in [0, 1).
    """

    bar: int
    step: int
    sub_offset: float
    voice_slot: int
    velocity: int
    duration_steps: float

    def __post_init__(self) -> None:
        if not 0 <= self.step <= CELLS_PER_BAR:
            raise ValueError(f"step out of range: {self.step}")
        if not 0.0 <= self.sub_offset < 1.0:
            raise ValueError(f"sub_offset out of range: {self.sub_offset}")
        if not 0 <= self.voice_slot <= 3:
            raise ValueError(f"voice_slot out of range: {self.voice_slot}")
        if self.duration_steps <= 0:
            raise ValueError(f"duration_steps must be positive: {self.duration_steps}")


@dataclass
class RhythmConfig:
    """Tunable rhythm parameters; defaults reproduce the stage setup."""

    tables: dict[Mode, ProbabilityTable] = field(default_factory=default_tables)
    voice_weights: tuple[float, ...] = VOICE_WEIGHTS
    voices: int = 4

    def __post_init__(self) -> None:
        if not 1 <= self.voices <= 4:
            raise ValueError(f"voices out of range: {self.voices}")


def voice_rng(seed: int, bar_index: int, voice_slot: int) -> random.Random:
    """Independent stream per (seed, bar, voice); string seeding keeps the
    derivation stable across platforms and hash randomization."""
    return random.Random(f"{seed}:{bar_index}:{voice_slot}")


def _base_velocity(cell: int) -> int:
    return BEAT_VELOCITY if cell in BEAT_CELLS else OFFGRID_VELOCITY


def _tremolo_burst(bar: int, cell: int, voice: int) -> list[RhythmEvent]:
    burst = []
    for offset, velocity in zip(TREMOLO_BURST_OFFSETS, TREMOLO_BURST_VELOCITIES):
        whole, frac = divmod(cell + offset, 1.0)
        burst.append(
            RhythmEvent(
                bar=bar,
                step=int(whole),
                sub_offset=frac,
                voice_slot=voice,
                velocity=velocity,
                duration_steps=TREMOLO_DURATION_STEPS,
            )
        )
    return burst


def generate_bar(
    mode: Mode,
    density_level: float,
    bar_index: int,
    seed: int,
    config: RhythmConfig | None = None,
) -> list[RhythmEvent]:
    """Sample one bar of onsets for every active voice.

    Exactly one uniform draw per cell (plus one integer draw per Sustain
    onset) keeps the stream layout stable under table edits.
    """
    config = config or RhythmConfig()
    table = config.tables[mode].cells
    events: list[RhythmEvent] = []
    for voice in range(config.voices):
        weight = config.voice_weights[voice]
        rng = voice_rng(seed, bar_index, voice)
        for cell in range(CELLS_PER_BAR):
            p = min(1.0, table[cell] * density_level * weight)
            if rng.random() >= p:
                continue
            if mode is Mode.TREMOLO:
                events.extend(_tremolo_burst(bar_index, cell, voice))
            elif mode is Mode.SUSTAIN:
                duration = rng.randint(*SUSTAIN_DURATION_RANGE)
                events.append(
                    RhythmEvent(
                        bar=bar_index,
                        step=cell,
                        sub_offset=0.0,
                        voice_slot=voice,
                        velocity=_base_velocity(cell),
                        duration_steps=float(duration),
                    )
                )
            else:
                events.append(
                    RhythmEvent(
                        bar=bar_index,
                        step=cell,
                        sub_offset=0.0,
                        voice_slot=voice,
                        velocity=_base_velocity(cell),
                        duration_steps=STACCATO_DURATION_STEPS,
                    )
                )
    return events


def step_duration_ms(tempo_bpm: float) -> float:
    """One sixteenth at the given tempo: 60000 / tempo / 4 milliseconds."""
    return 60_000.0 / tempo_bpm / 4.0


def schedule(
    events: list[RhythmEvent], tempo_bpm: float, bar_start_ms: float
) -> list[tuple[int, RhythmEvent]]:
    """Place bar events on the absolute clock, rounded to whole ms."""
    step_ms = step_duration_ms(tempo_bpm)
    return [
        (round(bar_start_ms + (e.step + e.sub_offset) * step_ms), e) for e in events
    ]


def expected_onsets_per_bar(
    mode: Mode, density_level: float, config: RhythmConfig | None = None
) -> float:
    """Analytic mean onset count per bar across active voices."""
    config = config or RhythmConfig()
    table = config.tables[mode].cells
    return sum(
        min(1.0, p * density_level * config.voice_weights[voice])
        for voice in range(config.voices)
        for p in table
    )


def gate_melody(density_level: float, rng: random.Random) -> bool:
    """Admit a melody trigger with probability equal to density."""
    return rng.random() < density_level
