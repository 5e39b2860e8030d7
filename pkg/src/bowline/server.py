"""WebSocket front door for live operation.

One session per server process.  A connected console streams BOW lines
in (one or more per text message) and receives the full output log back,
one line per message, including its own frame echoes; it is expected to
ignore kinds it does not render.  The engine itself stays synchronous:
all feeding happens on the receive path, so output order depends only on
input order, never on socket scheduling.
"""

from __future__ import annotations

from contextlib import asynccontextmanager

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from bowline.session import Session


def create_app(session: Session) -> FastAPI:
    """Wrap a session in a FastAPI app exposing /ws and /health."""

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        session.finish()

    app = FastAPI(lifespan=lifespan)
    clients: list[WebSocket] = []
    pending: list[str] = []
    session.add_sink(pending.append)

    async def drain() -> None:
        if not pending:
            return
        lines = pending.copy()
        pending.clear()
        dead = []
        for client in clients:
            try:
                for line in lines:
                    await client.send_text(line)
            except Exception:
                dead.append(client)
        for client in dead:
            if client in clients:
                clients.remove(client)

    @app.get("/health")
    async def health() -> dict:
        return {
            "status": "ok",
            "frames_accepted": session.frames_accepted,
            "lines_dropped": session.lines_dropped,
        }

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        clients.append(ws)
        try:
            while True:
                text = await ws.receive_text()
                for line in text.splitlines():
                    session.feed_line(line)
                await drain()
        except WebSocketDisconnect:
            pass
        finally:
            if ws in clients:
                clients.remove(ws)

    return app
