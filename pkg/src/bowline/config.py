"""Session configuration: defaults, file loading, validation.

Config files are flat key-value text with section headers (configparser
syntax).  Every key is optional; anything absent falls back to the stage
defaults.  Unknown sections or keys are errors, because a typo silently
reverting to a default is the worst failure mode a live rig can have.

    [session]
    seed = 42
    snapshot_rate_hz = 30

    [rhythm]
    voices = 4
    voice_weights = 1.0 0.8 0.8 0.6

    [tables]
    staccato = 0.9 0.1 0.3 0.1 0.9 0.1 0.3 0.1 0.9 0.1 0.3 0.1 0.9 0.1 0.3 0.1
    sustain  = <16 reals>
    tremolo  = <16 reals>

    [harmony]
    root_midi = 48
    scale_steps = 0 2 3 5 7 8 10 12
    progression = 0 -4 3 -2
    bars_per_root = 2

    [drums]
    recovery_ms = 80
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from bowline.drums import DEFAULT_RECOVERY_MS
from bowline.harmony import HarmonyState
from bowline.protocol import Mode
from bowline.rhythm import CELLS_PER_BAR, ProbabilityTable, RhythmConfig


class ConfigError(ValueError):
    """Carries every problem found in one pass, not just the first."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass
class SessionConfig:
    """Everything a session needs: engine knobs plus input/output wiring."""

    seed: int = 0
    snapshot_rate_hz: int = 30
    rhythm: RhythmConfig = field(default_factory=RhythmConfig)
    harmony: HarmonyState = field(default_factory=HarmonyState)
    recovery_ms: int = DEFAULT_RECOVERY_MS
    listen_address: tuple[str, int] | None = None
    replay_path: str | None = None
    record_path: str | None = None
    headless: bool = False

    def validate_sources(self) -> None:
        """Exactly one input source: a replay file, a listening socket,
        or stdin when running headless."""
        if self.replay_path and self.listen_address:
            raise ConfigError(
                ["--replay and --listen are both input sources; pick one"]
            )
        if self.listen_address and self.headless:
            raise ConfigError(["--headless cannot also listen on a socket"])
        if not (self.replay_path or self.listen_address or self.headless):
            raise ConfigError(["no input source: need --replay, --listen, or --headless"])

    def input_mode(self) -> str:
        if self.replay_path:
            return "replay"
        if self.listen_address:
            return "live"
        return "headless"


_SCHEMA = {
    "session": {"seed", "snapshot_rate_hz"},
    "rhythm": {"voices", "voice_weights"},
    "tables": {"staccato", "sustain", "tremolo"},
    "harmony": {"root_midi", "scale_steps", "progression", "bars_per_root"},
    "drums": {"recovery_ms"},
}


def _floats(raw: str, count: int | None, where: str, errors: list[str]) -> list[float] | None:
    try:
        values = [float(tok) for tok in raw.split()]
    except ValueError:
        errors.append(f"{where}: expected space-separated reals")
        return None
    if count is not None and len(values) != count:
        errors.append(f"{where}: expected {count} values, got {len(values)}")
        return None
    return values


def _ints(raw: str, count: int | None, where: str, errors: list[str]) -> list[int] | None:
    try:
        values = [int(tok) for tok in raw.split()]
    except ValueError:
        errors.append(f"{where}: expected space-separated integers")
        return None
    if count is not None and len(values) != count:
        errors.append(f"{where}: expected {count} values, got {len(values)}")
        return None
    return values


def _int(raw: str, where: str, errors: list[str]) -> int | None:
    try:
        return int(raw)
    except ValueError:
        errors.append(f"{where}: expected an integer")
        return None


def load_config(path: str | Path) -> SessionConfig:
    """Parse and validate a config file into a SessionConfig.

    Raises ConfigError listing every problem found.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError([f"cannot read {path}: {exc.strerror}"]) from None
    except configparser.Error as exc:
        raise ConfigError([f"malformed config: {exc}"]) from None

    errors: list[str] = []
    for section in parser.sections():
        if section not in _SCHEMA:
            errors.append(f"unknown section [{section}]")
            continue
        for key in parser[section]:
            if key not in _SCHEMA[section]:
                errors.append(f"unknown key {key} in [{section}]")

    config = SessionConfig()

    def get(section: str, key: str) -> str | None:
        return parser.get(section, key, fallback=None)

    raw = get("session", "seed")
    if raw is not None:
        seed = _int(raw, "session.seed", errors)
        if seed is not None:
            config.seed = seed
    raw = get("session", "snapshot_rate_hz")
    if raw is not None:
        rate = _int(raw, "session.snapshot_rate_hz", errors)
        if rate is not None:
            if rate < 1 or 60 % rate != 0:
                errors.append(
                    "session.snapshot_rate_hz: must divide the 60 Hz clock"
                )
            else:
                config.snapshot_rate_hz = rate

    rhythm = RhythmConfig()
    raw = get("rhythm", "voices")
    if raw is not None:
        voices = _int(raw, "rhythm.voices", errors)
        if voices is not None:
            if not 1 <= voices <= 4:
                errors.append("rhythm.voices: must be 1..4")
            else:
                rhythm.voices = voices
    raw = get("rhythm", "voice_weights")
    if raw is not None:
        weights = _floats(raw, 4, "rhythm.voice_weights", errors)
        if weights is not None:
            if any(not 0.0 < w <= 1.0 for w in weights):
                errors.append("rhythm.voice_weights: weights must sit in (0, 1]")
            else:
                rhythm.voice_weights = tuple(weights)
    table_keys = {"staccato": Mode.STACCATO, "sustain": Mode.SUSTAIN,
                  "tremolo": Mode.TREMOLO}
    for key, mode in table_keys.items():
        raw = get("tables", key)
        if raw is None:
            continue
        cells = _floats(raw, CELLS_PER_BAR, f"tables.{key}", errors)
        if cells is None:
            continue
        try:
            rhythm.tables[mode] = ProbabilityTable(tuple(cells))
        except ValueError as exc:
            errors.append(f"tables.{key}: {exc}")
    config.rhythm = rhythm

    harmony_kwargs = {}
    raw = get("harmony", "root_midi")
    if raw is not None:
        root = _int(raw, "harmony.root_midi", errors)
        if root is not None:
            harmony_kwargs["root_midi"] = root
    raw = get("harmony", "scale_steps")
    if raw is not None:
        steps = _ints(raw, 8, "harmony.scale_steps", errors)
        if steps is not None:
            harmony_kwargs["scale_steps"] = tuple(steps)
    raw = get("harmony", "progression")
    if raw is not None:
        offsets = _ints(raw, None, "harmony.progression", errors)
        if offsets is not None:
            harmony_kwargs["progression"] = tuple(offsets)
    raw = get("harmony", "bars_per_root")
    if raw is not None:
        bars = _int(raw, "harmony.bars_per_root", errors)
        if bars is not None:
            harmony_kwargs["bars_per_root"] = bars
    try:
        config.harmony = HarmonyState(**harmony_kwargs)
    except ValueError as exc:
        errors.append(f"harmony: {exc}")

    raw = get("drums", "recovery_ms")
    if raw is not None:
        recovery = _int(raw, "drums.recovery_ms", errors)
        if recovery is not None:
            if recovery < 0:
                errors.append("drums.recovery_ms: must be >= 0")
            else:
                config.recovery_ms = recovery

    if errors:
        raise ConfigError(errors)
    return config
