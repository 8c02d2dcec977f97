"""Frame-serving socket service.

One engine per connection; the scene template is shared and immutable, so
connections cannot observe each other.  All writes to a connection go through
a per-connection lock with a generation dedupe, which keeps frame generations
strictly increasing on the wire no matter which thread produced the frame.
"""

from __future__ import annotations

import socketserver
import threading

from . import protocol
from .engine import Engine
from .errors import PlotforgeError
from .labels import readout_text
from .model import PlotNode, find_transform, iter_nodes
from .png import encode_png


class _Connection(socketserver.BaseRequestHandler):
    server: "ViewerServer"

    def setup(self) -> None:
        self.engine: Engine | None = None
        self.lock = threading.Lock()
        self.last_sent_generation = 0

    def handle(self) -> None:
        while True:
            try:
                msg = protocol.read_message(self.request)
            except (protocol.ProtocolViolation, ConnectionError, OSError):
                return
            if msg is None:
                return
            if msg[0] != "control":
                self._send(protocol.encode_control(
                    {"type": "error", "id": None, "code": "BAD_MESSAGE", "message": "clients send control messages only"}
                ))
                continue
            self._dispatch(msg[1])

    def finish(self) -> None:
        if self.engine is not None:
            self.engine.close()

    # --- outbound ----------------------------------------------------------------

    def _send(self, data: bytes) -> None:
        try:
            with self.lock:
                self.request.sendall(data)
        except OSError:
            pass  # connection is going away; reader will notice

    def _send_frame(self, generation: int, raster) -> None:
        png = encode_png(raster)
        data = protocol.encode_frame({"type": "frame", "generation": generation}, png)
        try:
            with self.lock:
                if generation <= self.last_sent_generation:
                    return
                self.last_sent_generation = generation
                self.request.sendall(data)
        except OSError:
            pass

    def _ack(self, mid) -> None:
        self._send(protocol.encode_control({"type": "ack", "id": mid}))

    def _error(self, mid, code: str, message: str) -> None:
        self._send(protocol.encode_control({"type": "error", "id": mid, "code": code, "message": message}))

    # --- inbound -------------------------------------------------------------------

    def _dispatch(self, obj: dict) -> None:
        mid = obj.get("id")
        mtype = obj.get("type")
        try:
            if mtype == "hello":
                self._hello(mid, obj)
                return
            if self.engine is None:
                self._error(mid, "NOT_READY", "hello required before other messages")
                return
            handler = getattr(self, f"_msg_{mtype}", None) if isinstance(mtype, str) else None
            if handler is None:
                self._error(mid, "UNKNOWN_MESSAGE", f"unknown message type {mtype!r}")
                return
            handler(mid, obj)
        except PlotforgeError as exc:
            self._error(mid, exc.code, str(exc))
        except (KeyError, TypeError, ValueError, OverflowError) as exc:
            self._error(mid, "BAD_MESSAGE", f"malformed {mtype!r} message: {exc}")

    def _hello(self, mid, obj: dict) -> None:
        if self.engine is not None:
            self._error(mid, "BAD_MESSAGE", "hello already received")
            return
        viewport = obj["viewport"]
        self.engine = Engine(self.server.scene, int(viewport["width"]), int(viewport["height"]))
        self.engine.add_frame_listener(self._send_frame)
        self._ack(mid)
        # the initial render may have completed before the listener registered
        self.engine.wait_idle(30)
        shown = self.engine.displayed()
        if shown is not None:
            self._send_frame(*shown)

    def _msg_resize(self, mid, obj: dict) -> None:
        self.engine.resize(int(obj["width"]), int(obj["height"]))
        self._ack(mid)

    def _msg_zoom_rect(self, mid, obj: dict) -> None:
        self.engine.zoom_rect(float(obj["x0"]), float(obj["y0"]), float(obj["x1"]), float(obj["y1"]))
        self._ack(mid)

    def _msg_wheel(self, mid, obj: dict) -> None:
        self.engine.wheel(float(obj["x"]), float(obj["y"]), int(obj["notches"]))
        self._ack(mid)

    def _msg_click(self, mid, obj: dict) -> None:
        readouts = self.engine.click_to_data(float(obj["x"]), float(obj["y"]))
        self._ack(mid)
        snapshot = self.engine.snapshot()
        nodes = {n.id: n for n in iter_nodes(snapshot)}
        coords = []
        for r in readouts:
            node = nodes[r.node_id]
            tx = find_transform(node, r.x_transform, "readout")
            ty = find_transform(node, r.y_transform, "readout")
            coords.append(
                {
                    "node": r.node_id,
                    "x_transform": r.x_transform,
                    "y_transform": r.y_transform,
                    "x": r.x,
                    "y": r.y,
                    "x_text": readout_text(tx.kind, tx.sexa_mode, r.x),
                    "y_text": readout_text(ty.kind, ty.sexa_mode, r.y),
                }
            )
        self._send(protocol.encode_control({"type": "coords", "id": mid, "coords": coords}))

    def _msg_set_property(self, mid, obj: dict) -> None:
        self.engine.set_property(obj["path"], obj["value"])
        self._ack(mid)

    def _msg_batch(self, mid, obj: dict) -> None:
        mode = obj["mode"]
        if mode == "begin":
            self.engine.begin_batch()
        elif mode == "end":
            self.engine.end_batch()
        else:
            raise ValueError(f"batch mode must be 'begin' or 'end', got {mode!r}")
        self._ack(mid)

    def _msg_reset_zoom(self, mid, obj: dict) -> None:
        self.engine.reset_zoom()
        self._ack(mid)

    def _msg_get_tree(self, mid, obj: dict) -> None:
        handles = self.engine.tree()
        self._ack(mid)
        tree = [
            {"path": h.path, "kind": h.kind, "value": h.value, "choices": list(h.choices) if h.choices else None}
            for h in handles
        ]
        self._send(protocol.encode_control({"type": "tree", "id": mid, "tree": tree}))


class ViewerServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, scene: PlotNode, host: str = "127.0.0.1", port: int = 0):
        self.scene = scene
        super().__init__((host, port), _Connection)

    @property
    def port(self) -> int:
        return self.server_address[1]
