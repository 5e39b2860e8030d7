"""Headless visual scene stepped on a fixed 60 Hz clock.

Three layers share the unit square (x right, y down):

* a particle system blown sideways by bow energy: the emitter tracks the
  bow tilt, spawn rate is constant, and the slider scales a wind force
  proportional to smoothed acceleration;
* four line walkers, one per drum, that creep forward on every strike of
  their drum and reverse when they reach an edge;
* three circles in elastic flight that bounce off walls, each other and
  the walker lines, changing colour and size on every contact.

Everything here is deterministic given the seed and the call sequence;
rendering belongs to whatever consumes the snapshots.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from bowline.protocol import SnapshotMessage, clamp

DT = 1.0 / 60.0

SPAWN_RATE_PER_S = 120.0
LIFE_DECAY_PER_S = 1.0
WIND_BASE = 0.05
WIND_SPAN = 0.45
ACCEL_SMOOTHING = 0.1  # EMA coefficient per step
SPAWN_VELOCITY_SPREAD = 0.1  # initial velocity is uniform in +-spread

WALKER_STEP_RANGE = (0.02, 0.06)
WALKER_DRIFT_RANGE = (-0.02, 0.02)
SEGMENT_HALF_LENGTH = 0.15

CIRCLE_COUNT = 3
RADIUS_MIN = 0.02
RADIUS_MAX = 0.12
RADIUS_START = 0.06
GROW_FACTOR = 1.1
SHRINK_FACTOR = 0.9
CIRCLE_SPEED_SPREAD = 0.25

PARTICLE_SNAPSHOT_CAP = 512


class ParticleField:
    """Fixed-capacity particle pool in insertion order (oldest first)."""

    def __init__(self, rng: random.Random, capacity: int = 4096):
        self._rng = rng
        self._cap = capacity
        self._x = np.zeros(capacity)
        self._y = np.zeros(capacity)
        self._vx = np.zeros(capacity)
        self._vy = np.zeros(capacity)
        self._life = np.zeros(capacity)
        self._palette = np.zeros(capacity, dtype=np.int64)
        self._n = 0
        self._spawn_acc = 0.0
        self.smoothed_mag = 0.0

    def __len__(self) -> int:
        return self._n

    def step(
        self,
        dt: float,
        ax: float,
        ay: float,
        accel_mag: float,
        slider: float,
        palette_index: int,
    ) -> None:
        """Decay, cull, integrate, then spawn at the emitter.

        New particles appear exactly at the emitter and first move on
        the following step.
        """
        self.smoothed_mag += ACCEL_SMOOTHING * (accel_mag - self.smoothed_mag)
        n = self._n
        if n:
            self._life[:n] -= LIFE_DECAY_PER_S * dt
            alive = self._life[:n] > 0.0
            k = int(alive.sum())
            if k < n:
                for arr in (self._x, self._y, self._vx, self._vy, self._life,
                            self._palette):
                    arr[:k] = arr[:n][alive]
                n = self._n = k
        if n:
            wind = (WIND_BASE + WIND_SPAN * slider) * self.smoothed_mag
            self._vx[:n] += wind * dt
            self._x[:n] += self._vx[:n] * dt
            self._y[:n] += self._vy[:n] * dt
            np.clip(self._x[:n], 0.0, 1.0, out=self._x[:n])
            np.clip(self._y[:n], 0.0, 1.0, out=self._y[:n])

        self._spawn_acc += SPAWN_RATE_PER_S * dt
        spawn = int(self._spawn_acc)
        self._spawn_acc -= spawn
        if spawn:
            ex = (clamp(ax, -1.0, 1.0) + 1.0) / 2.0
            ey = (clamp(ay, -1.0, 1.0) + 1.0) / 2.0
            for _ in range(spawn):
                if self._n == self._cap:  # overflow drops the oldest
                    for arr in (self._x, self._y, self._vx, self._vy,
                                self._life, self._palette):
                        arr[:-1] = arr[1:]
                    self._n -= 1
                i = self._n
                self._x[i] = ex
                self._y[i] = ey
                self._vx[i] = self._rng.uniform(
                    -SPAWN_VELOCITY_SPREAD, SPAWN_VELOCITY_SPREAD
                )
                self._vy[i] = self._rng.uniform(
                    -SPAWN_VELOCITY_SPREAD, SPAWN_VELOCITY_SPREAD
                )
                self._life[i] = 1.0
                self._palette[i] = palette_index
                self._n += 1

    def triples(self, cap: int = PARTICLE_SNAPSHOT_CAP) -> tuple:
        """(x, y, life) triples of the most recent `cap` particles."""
        lo = max(0, self._n - cap)
        return tuple(
            (float(self._x[i]), float(self._y[i]), float(self._life[i]))
            for i in range(lo, self._n)
        )


@dataclass
class LineWalker:
    """One drum's line: a 1-D walk along its axis with sideways drift.

    axis "V" walks along y (lateral is x); axis "H" walks along x.
    """

    walker_id: int
    axis: str
    travel: float
    lateral: float
    direction: int

    def on_hit(self, rng: random.Random) -> None:
        step = rng.uniform(*WALKER_STEP_RANGE)
        drift = rng.uniform(*WALKER_DRIFT_RANGE)
        moved = self.travel + self.direction * step
        if moved >= 1.0:
            self.travel = 1.0
            self.direction = -1
        elif moved <= 0.0:
            self.travel = 0.0
            self.direction = 1
        else:
            self.travel = moved
        self.lateral = clamp(self.lateral + drift, 0.0, 1.0)

    def position(self) -> tuple[float, float]:
        if self.axis == "V":
            return (self.lateral, self.travel)
        return (self.travel, self.lateral)

    def segment(self) -> tuple[float, float, float, float]:
        """Endpoints of the drawn line, perpendicular to the walk axis."""
        x, y = self.position()
        if self.axis == "V":
            return (x - SEGMENT_HALF_LENGTH, y, x + SEGMENT_HALF_LENGTH, y)
        return (x, y - SEGMENT_HALF_LENGTH, x, y + SEGMENT_HALF_LENGTH)


def default_walkers() -> dict[int, LineWalker]:
    """Home positions mirror the kit: hi-hat top centre, bass bottom
    centre, ride and tom on the left and right flanks."""
    return {
        1: LineWalker(1, "V", travel=0.0, lateral=0.5, direction=1),
        2: LineWalker(2, "V", travel=1.0, lateral=0.5, direction=-1),
        3: LineWalker(3, "H", travel=0.0, lateral=0.5, direction=1),
        4: LineWalker(4, "H", travel=1.0, lateral=0.5, direction=-1),
    }


@dataclass
class CircleBody:
    x: float
    y: float
    vx: float
    vy: float
    radius: float
    color_index: int
    collisions: int = 0

    def register_collision(self) -> None:
        """Contacts alternate growth and shrink, starting with growth."""
        self.collisions += 1
        self.color_index += 1
        factor = GROW_FACTOR if self.collisions % 2 == 1 else SHRINK_FACTOR
        self.radius = clamp(self.radius * factor, RADIUS_MIN, RADIUS_MAX)


def _closest_point_on_segment(
    px: float, py: float, seg: tuple[float, float, float, float]
) -> tuple[float, float]:
    x1, y1, x2, y2 = seg
    dx, dy = x2 - x1, y2 - y1
    length_sq = dx * dx + dy * dy
    if length_sq == 0.0:
        return (x1, y1)
    t = ((px - x1) * dx + (py - y1) * dy) / length_sq
    t = clamp(t, 0.0, 1.0)
    return (x1 + t * dx, y1 + t * dy)


def _wall_bounce(circle: CircleBody) -> None:
    r = circle.radius
    if circle.x < r:
        circle.x = r
        circle.vx = abs(circle.vx)
    elif circle.x > 1.0 - r:
        circle.x = 1.0 - r
        circle.vx = -abs(circle.vx)
    if circle.y < r:
        circle.y = r
        circle.vy = abs(circle.vy)
    elif circle.y > 1.0 - r:
        circle.y = 1.0 - r
        circle.vy = -abs(circle.vy)


def step_circles(
    circles: list[CircleBody],
    segments: list[tuple[float, float, float, float]],
    dt: float,
) -> None:
    """Integrate, bounce, exchange momentum, then separate.

    Pair response swaps the normal velocity components (equal masses);
    the relaxation pass afterwards guarantees no resting overlap
    survives the step.  Wall contact changes neither colour nor size.
    """
    for c in circles:
        c.x += c.vx * dt
        c.y += c.vy * dt
        _wall_bounce(c)

    for i in range(len(circles)):
        for j in range(i + 1, len(circles)):
            a, b = circles[i], circles[j]
            dx, dy = b.x - a.x, b.y - a.y
            dist = math.hypot(dx, dy)
            if dist >= a.radius + b.radius:
                continue
            if dist == 0.0:
                nx, ny = 1.0, 0.0  # coincident centres: separate along x
            else:
                nx, ny = dx / dist, dy / dist
            rel = (b.vx - a.vx) * nx + (b.vy - a.vy) * ny
            if rel < 0.0:  # approaching: elastic swap along the normal
                a_n = a.vx * nx + a.vy * ny
                b_n = b.vx * nx + b.vy * ny
                a.vx += (b_n - a_n) * nx
                a.vy += (b_n - a_n) * ny
                b.vx += (a_n - b_n) * nx
                b.vy += (a_n - b_n) * ny
                a.register_collision()
                b.register_collision()

    for c in circles:
        for seg in segments:
            px, py = _closest_point_on_segment(c.x, c.y, seg)
            dx, dy = c.x - px, c.y - py
            dist = math.hypot(dx, dy)
            if dist >= c.radius:
                continue
            if dist == 0.0:
                vertical = seg[0] == seg[2]
                nx, ny = (1.0, 0.0) if vertical else (0.0, 1.0)
            else:
                nx, ny = dx / dist, dy / dist
            v_n = c.vx * nx + c.vy * ny
            if v_n < 0.0:  # moving into the line: reflect and push out
                c.vx -= 2.0 * v_n * nx
                c.vy -= 2.0 * v_n * ny
                c.register_collision()  # size first so the push-out clears
                c.x = px + nx * c.radius
                c.y = py + ny * c.radius
                _wall_bounce(c)

    _separate(circles)


def _separate(circles: list[CircleBody]) -> None:
    """Positional relaxation: push overlapping pairs apart symmetrically
    and re-clamp to the walls until the layout is clean."""
    for _ in range(256):
        worst = 0.0
        for i in range(len(circles)):
            for j in range(i + 1, len(circles)):
                a, b = circles[i], circles[j]
                dx, dy = b.x - a.x, b.y - a.y
                dist = math.hypot(dx, dy)
                overlap = a.radius + b.radius - dist
                if overlap <= 0.0:
                    continue
                worst = max(worst, overlap)
                if dist == 0.0:
                    nx, ny = 1.0, 0.0
                else:
                    nx, ny = dx / dist, dy / dist
                shift = overlap / 2.0
                a.x -= nx * shift
                a.y -= ny * shift
                b.x += nx * shift
                b.y += ny * shift
        for c in circles:
            r = c.radius
            before = (c.x, c.y)
            c.x = clamp(c.x, r, 1.0 - r)
            c.y = clamp(c.y, r, 1.0 - r)
            if (c.x, c.y) != before:
                worst = max(worst, 1.0)  # wall clamp may recreate overlap
        if worst <= 1e-12:
            return


def default_circles(rng: random.Random) -> list[CircleBody]:
    """Seeded starts away from the walls, rejection-sampled apart."""
    circles: list[CircleBody] = []
    for i in range(CIRCLE_COUNT):
        for _ in range(100):
            x = rng.uniform(0.2, 0.8)
            y = rng.uniform(0.2, 0.8)
            if all(
                math.hypot(x - c.x, y - c.y) > RADIUS_START * 2.5 for c in circles
            ):
                break
        vx = rng.uniform(-CIRCLE_SPEED_SPREAD, CIRCLE_SPEED_SPREAD)
        vy = rng.uniform(-CIRCLE_SPEED_SPREAD, CIRCLE_SPEED_SPREAD)
        circles.append(CircleBody(x, y, vx, vy, RADIUS_START, color_index=i))
    return circles


class VisualState:
    """The whole scene plus its three private random streams."""

    def __init__(self, seed: int):
        self.particles = ParticleField(random.Random(f"{seed}:particles"))
        self._walker_rng = random.Random(f"{seed}:walkers")
        self.walkers = default_walkers()
        self.circles = default_circles(random.Random(f"{seed}:circles"))

    def on_hit(self, drum_id: int) -> None:
        self.walkers[drum_id].on_hit(self._walker_rng)

    def step(
        self, dt: float, ax: float, ay: float, az: float, slider: float,
        palette_index: int,
    ) -> None:
        accel_mag = math.sqrt(ax * ax + ay * ay + az * az)
        self.particles.step(dt, ax, ay, accel_mag, slider, palette_index)
        segments = [w.segment() for w in self.walkers.values()]
        step_circles(self.circles, segments, dt)

    def snapshot(self, t_ms: int) -> SnapshotMessage:
        return SnapshotMessage(
            t_ms=t_ms,
            particles=self.particles.triples(),
            lines=tuple(
                (w.axis, w.lateral, w.travel, w.direction)
                for w in self.walkers.values()
            ),
            circles=tuple(
                (c.x, c.y, c.radius, c.color_index) for c in self.circles
            ),
        )
