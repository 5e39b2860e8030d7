"""WebSocket endpoint: framing, echo stream, engine equivalence."""

from fastapi.testclient import TestClient

from bowline.config import SessionConfig
from bowline.server import create_app
from bowline.session import Session


def bow(t, az=0.0, b2=0):
    return f"BOW {t} 0.0000 0.0000 {az:.4f} 0 {b2} 0 0.0000"


def expected_lines(lines, seed=0):
    out = []
    session = Session(SessionConfig(seed=seed), [out.append])
    for line in lines:
        session.feed_line(line)
    return out  # unfinished: the socket session keeps running too


def collect(ws, n):
    return [ws.receive_text() for _ in range(n)]


def test_socket_stream_matches_direct_session():
    lines = [bow(t, az=(t % 100) / 100) for t in range(0, 2_000, 33)]
    session = Session(SessionConfig(seed=8), [])
    app = create_app(session)
    with TestClient(app) as client:
        with client.websocket_connect("/ws") as ws:
            for line in lines:
                ws.send_text(line)
            want = expected_lines(lines, seed=8)
            got = collect(ws, len(want))
    assert got == want


def test_multi_line_message_accepted():
    lines = [bow(0), bow(33), bow(67), bow(100)]
    session = Session(SessionConfig(), [])
    app = create_app(session)
    with TestClient(app) as client:
        with client.websocket_connect("/ws") as ws:
            ws.send_text("\n".join(lines))
            want = expected_lines(lines)
            got = collect(ws, len(want))
    assert got == want
    assert session.frames_accepted == 4


def test_bad_lines_dropped_not_fatal():
    session = Session(SessionConfig(), [])
    app = create_app(session)
    with TestClient(app) as client:
        with client.websocket_connect("/ws") as ws:
            ws.send_text("BOW nope")
            ws.send_text(bow(0))
            ws.send_text(bow(40))
            assert ws.receive_text().startswith("STATE 0 ")
        health = client.get("/health").json()
    assert health["frames_accepted"] == 2
    assert health["lines_dropped"] == 1


def test_shutdown_finishes_session():
    session = Session(SessionConfig(), [])
    app = create_app(session)
    with TestClient(app):
        pass
    out = []
    # finished at lifespan exit: feeding afterwards must fail loudly
    try:
        session.feed_line(bow(0))
    except RuntimeError:
        out.append("refused")
    assert out == ["refused"]
