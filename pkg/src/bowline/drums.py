"""Four percussion arms with mechanical recovery limits.

Accompaniment voices map onto the drums one-to-one: voice 0 drives the
bass drum, voice 1 the tom, voice 2 the ride, voice 3 the hi-hat.  Each
arm needs recovery_ms between strikes; a strike landing inside that gap
is suppressed outright (dropped, never delayed) and counted, because a
late hit is worse than a missing one.  A PULSE event marks every quarter
note so downstream hardware can blink in time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from bowline.protocol import HitEvent, PulseEvent

# voice slot -> drum id; drums are 1 hi-hat, 2 bass, 3 ride, 4 tom
ROUTE = {0: 2, 1: 4, 2: 3, 3: 1}

DEFAULT_RECOVERY_MS = 80


def route(voice_slot: int) -> int:
    """Drum for an accompaniment voice; a bijection on 0..3 -> 1..4."""
    return ROUTE[voice_slot]


@dataclass
class ArmState:
    """Recovery bookkeeping for one drum arm."""

    drum_id: int
    last_hit_ms: int | None = None
    suppressed: int = 0


@dataclass
class DrumKit:
    """The four arms plus the shared recovery window."""

    recovery_ms: int = DEFAULT_RECOVERY_MS
    arms: dict[int, ArmState] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.recovery_ms < 0:
            raise ValueError(f"recovery_ms must be >= 0: {self.recovery_ms}")
        if not self.arms:
            self.arms = {d: ArmState(d) for d in (1, 2, 3, 4)}

    def try_hit(self, t_ms: int, drum_id: int, velocity: int) -> HitEvent | None:
        """Strike if the arm has recovered; the boundary is inclusive, so
        hits at t and t+recovery_ms both land.  Suppressions only count."""
        arm = self.arms[drum_id]
        if arm.last_hit_ms is not None and t_ms - arm.last_hit_ms < self.recovery_ms:
            arm.suppressed += 1
            return None
        arm.last_hit_ms = t_ms
        return HitEvent(t_ms=t_ms, drum_id=drum_id, velocity=velocity)

    def suppressed_total(self) -> int:
        return sum(arm.suppressed for arm in self.arms.values())


def pulse(t_ms: int, beat_index: int) -> PulseEvent:
    """Quarter-note pulse; the wire carries the beat position in the bar."""
    return PulseEvent(t_ms=t_ms, beat_index=beat_index % 4)
