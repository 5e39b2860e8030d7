"""Regenerate the wire fixtures consumed by the console test suite.

Everything here comes from the engine itself so the TypeScript mirror is
tested against authoritative bytes, not against its own assumptions:

  wire-vectors.json      valid lines with their canonical engine encoding,
                         plus invalid lines with the error kind the engine
                         parser raises
  golden-snap.txt        one busy mid-session snapshot line
  golden-home-snap.txt   first snapshot of a silent session: walkers at
                         their home positions, no particles
  state-transcript.txt   a short scripted session's full output log, used
                         to drive the status-strip tests

Run from the repository root with the engine package installed:

    python3 frontend/test/fixtures/make_fixtures.py
"""

from __future__ import annotations

import json
import math
import subprocess
import sys
import tempfile
from pathlib import Path

from bowline.protocol import ParseError, encode_message, parse_line

HERE = Path(__file__).resolve().parent
REPO = HERE.parents[2]
DEMO_LOG = REPO / "tests" / "data" / "demo-60s.log"

# Raw lines the grammar accepts after clamping or normalization.  The
# canonical form is computed by the engine parser, never written by hand.
TRICKY_VALID = [
    "BOW 0 0 0 0 0 0 0 0",
    "BOW 5 -0.0 +0.5 .25 2 1 -3 1.5",
    "BOW 100 9.75 -12 3.9999 0 0 1 0.2222",
    "BOW 360000 1e-1 -2.5e-1 0.0001 1 1 1 1",
    "HIT -5 1 64",
    "HIT\t100  4\t127",
    "NOTE 5 1 60 100 +250",
    "NOTE 0 7 127 127 1",
    "STATE 12 TREMOLO 1.0000 200.0000 9",
    "STATE 0 SUSTAIN 0.5 1.25e2 0",
    "PULSE 750 3",
    "PULSE -1 0",
    # one-particle snapshot with out-of-range components that clamp
    "SNAP 33 1 -0.25 1.5 0.5 V 0.5 0.0 1 V 0.5 1.0 -1 H 0.5 0.0 1"
    " H 0.5 1.0 -1 0.3 0.4 0.5 0 0.6 0.7 0.001 1 0.1 0.2 0.06 2",
]

# Lines the grammar rejects, with the expected error kind.
INVALID = [
    "",
    "   ",
    "BOW",
    "BOW 1 2 3 4 5 6 7",
    "BOW 1 2 3 4 5 6 7 8 9",
    "BOW x 0 0 0 0 0 0 0",
    "BOW 1 nan 0 0 0 0 0 0",
    "BOW 1 inf 0 0 0 0 0 0",
    "BOW 1 0 0 0 0.5 0 0 0",
    "BOW 1e3 0 0 0 0 0 0 0",
    "HIT 100 5 64",
    "HIT 100 0 64",
    "HIT 100 1 0",
    "HIT 100 1 128",
    "HIT 100 1",
    "HIT 100 1 64 9",
    "NOTE 5 8 60 100 250",
    "NOTE 5 -1 60 100 250",
    "NOTE 5 1 128 100 250",
    "NOTE 5 1 60 0 250",
    "NOTE 5 1 60 100 0",
    "NOTE 5 1 60 100 -20",
    "NOTE 5 1 60 100 2.5",
    "STATE 0 LEGATO 0.2500 80.0000 0",
    "STATE 0 staccato 0.2500 80.0000 0",
    "STATE 0 STACCATO 0.3000 80.0000 0",
    "STATE 0 STACCATO 0.2500 79.9999 0",
    "STATE 0 STACCATO 0.2500 200.0001 0",
    "STATE 0 STACCATO 0.2500 80.0000 -1",
    "STATE 0 STACCATO 0.2500 80.0000",
    "PULSE 10 4",
    "PULSE 10 -1",
    "PULSE 10",
    "DRUM 1 2 3",
    "bow 0 0 0 0 0 0 0 0",
    "SNAP",
    "SNAP 0",
    "SNAP 0 -1",
    "SNAP 0 x",
    "SNAP 0 0 V 0.5 0.0 1 V 0.5 1.0 -1 H 0.5 0.0 1 H 0.5 1.0 -1",
    "SNAP 0 0 X 0.5 0.0 1 V 0.5 1.0 -1 H 0.5 0.0 1 H 0.5 1.0 -1"
    " 0.3 0.4 0.05 0 0.6 0.7 0.05 1 0.1 0.2 0.06 2",
    "SNAP 0 0 V 0.5 0.0 0 V 0.5 1.0 -1 H 0.5 0.0 1 H 0.5 1.0 -1"
    " 0.3 0.4 0.05 0 0.6 0.7 0.05 1 0.1 0.2 0.06 2",
    "SNAP 0 0 V 0.5 0.0 1 V 0.5 1.0 -1 H 0.5 0.0 1 H 0.5 1.0 -1"
    " 0.3 0.4 0.05 -1 0.6 0.7 0.05 1 0.1 0.2 0.06 2",
]


def run_engine(args: list[str]) -> None:
    subprocess.run(["bowline", *args], check=True, cwd=REPO)


def canonical(line: str) -> str:
    out = encode_message(parse_line(line))
    assert encode_message(parse_line(out)) == out, f"not idempotent: {line!r}"
    return out


def error_kind(line: str) -> str:
    try:
        parse_line(line)
    except ParseError as exc:
        return exc.kind.value
    raise AssertionError(f"expected a parse error: {line!r}")


def sample_demo_lines(record: Path) -> tuple[list[str], str]:
    """Spread samples of every kind from the demo record, plus one busy
    snapshot line for the golden fixture."""
    by_kind: dict[str, list[str]] = {}
    snaps: list[tuple[int, str]] = []
    for line in record.read_text().splitlines():
        kind = line.split(" ", 1)[0]
        if kind == "SNAP":
            snaps.append((int(line.split(" ", 3)[2]), line))
        else:
            by_kind.setdefault(kind, []).append(line)
    picked: list[str] = []
    quota = {"BOW": 15, "STATE": 10, "NOTE": 10, "HIT": 10, "PULSE": 6}
    for kind, want in quota.items():
        pool = list(dict.fromkeys(by_kind.get(kind, [])))
        step = max(1, len(pool) // want)
        picked.extend(pool[::step][:want])
    small = [line for n, line in snaps if n <= 8][:2]
    picked.extend(small)
    golden = next((line for n, line in snaps if 40 <= n <= 200), None)
    if golden is None:
        golden = max(snaps, key=lambda item: min(item[0], 200))[1]
    return picked, golden


def silent_session(tmp: Path) -> str:
    """A session whose rhythm tables are all zero: no hits, walkers never
    leave home.  Returns the first snapshot line."""
    ini = tmp / "silent.ini"
    zeros = " ".join(["0"] * 16)
    ini.write_text(
        "[tables]\n"
        f"staccato = {zeros}\nsustain = {zeros}\ntremolo = {zeros}\n"
    )
    src = tmp / "silent-in.log"
    src.write_text(
        "".join(f"BOW {t} 0.0000 0.0000 0.0000 0 0 0 0.0000\n" for t in (0, 50, 100))
    )
    rec = tmp / "silent-out.log"
    run_engine(
        ["run", "--seed", "5", "--config", str(ini), "--replay", str(src),
         "--record", str(rec), "--headless"]
    )
    for line in rec.read_text().splitlines():
        if line.startswith("SNAP "):
            return line
    raise AssertionError("silent session emitted no snapshot")


def scripted_session(tmp: Path) -> str:
    """A 10 s interaction touching every control: mode, palette, density,
    slider sweep, and two melody flicks.  Returns the whole record."""
    frames = []
    held = {1: range(60, 64), 2: range(120, 124), 3: range(165, 169)}
    mode_again = range(210, 214)
    for i in range(301):
        t = i * 100 // 3
        ax = round(0.05 * math.sin(i / 20), 4)
        ay = round(0.04 * math.cos(i / 31), 4)
        az = 0.0
        for flick_at in (90, 240):
            if flick_at <= i < flick_at + 3:
                az = round((1.2, 0.7, 0.3)[i - flick_at], 4)
        b1 = 1 if (i in held[1] or i in mode_again) else 0
        b2 = 1 if i in held[2] else 0
        b3 = 1 if i in held[3] else 0
        slider = round(min(0.8, i / 300), 4)
        frames.append(f"BOW {t} {ax} {ay} {az} {b1} {b2} {b3} {slider}\n")
    ini = tmp / "scripted.ini"
    ini.write_text("[session]\nsnapshot_rate_hz = 10\n")
    src = tmp / "scripted-in.log"
    src.write_text("".join(frames))
    rec = tmp / "scripted-out.log"
    run_engine(
        ["run", "--seed", "7", "--config", str(ini), "--replay", str(src),
         "--record", str(rec), "--headless"]
    )
    return rec.read_text()


def main() -> int:
    with tempfile.TemporaryDirectory() as tmpdir:
        tmp = Path(tmpdir)
        demo_rec = tmp / "demo-out.log"
        run_engine(
            ["run", "--seed", "42", "--replay", str(DEMO_LOG),
             "--record", str(demo_rec), "--headless"]
        )
        sampled, golden = sample_demo_lines(demo_rec)
        home_snap = silent_session(tmp)
        transcript = scripted_session(tmp)

    valid = [{"line": ln, "canonical": canonical(ln)} for ln in TRICKY_VALID]
    for ln in sampled:
        assert canonical(ln) == ln, f"demo line not canonical: {ln!r}"
        valid.append({"line": ln, "canonical": ln})
    invalid = [{"line": ln, "kind": error_kind(ln)} for ln in INVALID]

    vectors = {"valid": valid, "invalid": invalid}
    (HERE / "wire-vectors.json").write_text(json.dumps(vectors, indent=1) + "\n")
    (HERE / "golden-snap.txt").write_text(golden + "\n")
    (HERE / "golden-home-snap.txt").write_text(home_snap + "\n")
    (HERE / "state-transcript.txt").write_text(transcript)
    print(
        f"wrote {len(valid)} valid + {len(invalid)} invalid vectors, "
        f"golden snap n={golden.split(' ', 3)[2]}, "
        f"transcript {transcript.count(chr(10))} lines"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
