"""Drum routing and arm recovery."""

from __future__ import annotations

import random

from bowline.drums import DrumKit, ROUTE, pulse, route
from bowline.protocol import HitEvent


def test_route_table() -> None:
    assert route(0) == 2  # bass
    assert route(1) == 4  # tom
    assert route(2) == 3  # ride
    assert route(3) == 1  # hi-hat


def test_route_is_a_bijection() -> None:
    assert sorted(ROUTE) == [0, 1, 2, 3]
    assert sorted(ROUTE.values()) == [1, 2, 3, 4]


def test_first_hit_always_lands() -> None:
    kit = DrumKit()
    assert kit.try_hit(0, 1, 90) == HitEvent(0, 1, 90)


def test_recovery_boundary_inclusive() -> None:
    kit = DrumKit()
    assert kit.try_hit(0, 2, 90) is not None
    assert kit.try_hit(80, 2, 90) is not None  # exactly recovery_ms later
    assert kit.try_hit(159, 2, 90) is None  # 79 ms after the last strike
    assert kit.arms[2].suppressed == 1


def test_suppression_drops_never_delays() -> None:
    kit = DrumKit()
    kit.try_hit(0, 3, 90)
    assert kit.try_hit(40, 3, 90) is None
    # the suppressed attempt must not move the recovery window
    assert kit.try_hit(80, 3, 90) is not None


def test_arms_recover_independently() -> None:
    kit = DrumKit()
    assert kit.try_hit(0, 1, 90) is not None
    assert kit.try_hit(10, 2, 90) is not None
    assert kit.try_hit(20, 3, 90) is not None
    assert kit.try_hit(30, 4, 90) is not None
    assert kit.suppressed_total() == 0


def test_random_storm_never_violates_recovery() -> None:
    rng = random.Random(17)
    kit = DrumKit()
    last: dict[int, int] = {}
    t = 0
    for _ in range(20_000):
        t += rng.randrange(0, 30)
        drum = rng.randrange(1, 5)
        hit = kit.try_hit(t, drum, 90)
        if hit is not None:
            if drum in last:
                assert hit.t_ms - last[drum] >= kit.recovery_ms
            last[drum] = hit.t_ms
    assert kit.suppressed_total() > 0


def test_custom_recovery_window() -> None:
    kit = DrumKit(recovery_ms=200)
    kit.try_hit(0, 1, 90)
    assert kit.try_hit(150, 1, 90) is None
    assert kit.try_hit(200, 1, 90) is not None


def test_pulse_wraps_beat_index() -> None:
    assert pulse(2500, 5).beat_index == 1
    assert pulse(0, 0).beat_index == 0
    assert pulse(750, 3).beat_index == 3
    assert pulse(1000, 4).beat_index == 0
