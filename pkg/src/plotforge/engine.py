"""Command dispatcher and generational render pipeline.

One dispatcher thread owns the authoritative scene.  Every mutation and every
consistent read goes through its queue, so clients on any number of threads
see a single total order.  Renders fan out to a worker pool tagged with a
monotone generation; presentation keeps only the highest generation, so a
stale completion can never overwrite a newer frame.
"""

from __future__ import annotations

import queue
import threading
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import transforms
from .cache import TileCache
from .errors import EngineError
from .layout import GeometryMap, layout
from .model import AxisTransform, PlotNode, Range, find_transform, iter_nodes
from .paths import Handle
from .pipeline import render_scene
from .session import SceneSession


class CommandKind(Enum):
    SET_PROPERTY = "set_property"
    SET_DATA = "set_data"
    ZOOM_RECT = "zoom_rect"
    WHEEL = "wheel"
    BEGIN_BATCH = "begin_batch"
    END_BATCH = "end_batch"
    RESET_ZOOM = "reset_zoom"
    # queries and viewport control ride the same queue for a consistent view
    CLICK_TO_DATA = "click_to_data"
    GET_TREE = "get_tree"
    SNAPSHOT = "snapshot"
    RESIZE = "resize"


@dataclass
class Command:
    kind: CommandKind
    payload: dict = field(default_factory=dict)
    reply: Future = field(default_factory=Future)


@dataclass(frozen=True)
class ClickReadout:
    node_id: str
    x_transform: str
    y_transform: str
    x: float
    y: float


_STOP = object()


class Engine:
    """Authoritative scene owner; safe to drive from any number of threads."""

    def __init__(
        self,
        scene: PlotNode,
        width: int = 640,
        height: int = 480,
        workers: int | None = None,
        cache_capacity: int = 256,
    ):
        self._session = SceneSession(scene)
        self._session.subscribe(self._on_publish)
        self._width, self._height = width, height
        self._cache = TileCache(cache_capacity)
        self._queue: queue.Queue = queue.Queue()
        self._pool = ThreadPoolExecutor(max_workers=workers)
        self._closed = False

        self._state = threading.Condition()
        self._pending = 0          # commands submitted but not yet fully handled
        self._inflight = 0         # render tasks scheduled but not yet resolved
        self._generation = 0       # last scheduled generation
        self._displayed: tuple[int, np.ndarray] | None = None
        self._listeners: list = []

        # zoom history: ((node id, transform id) -> Range) per zoom action,
        # oldest first; transform ids are only unique within a node
        self._zoom_stack: list[dict[tuple[str, str], Range]] = []
        self.last_render_error: Exception | None = None
        self.command_log: list[tuple[CommandKind, dict]] = []

        self._dispatcher = threading.Thread(target=self._run, name="plotforge-dispatch", daemon=True)
        self._dispatcher.start()
        self._schedule_render()  # initial frame, generation 1

    # --- client surface --------------------------------------------------------

    def submit(self, kind: CommandKind, payload: dict | None = None) -> Future:
        cmd = Command(kind, payload or {})
        with self._state:
            if self._closed:
                raise EngineError("SESSION_CLOSED", "engine is closed")
            self._pending += 1
        self._queue.put(cmd)
        return cmd.reply

    def set_property(self, path: str, value):
        return self.submit(CommandKind.SET_PROPERTY, {"path": path, "value": value}).result()

    def set_data(self, path: str, value: dict):
        return self.submit(CommandKind.SET_DATA, {"path": path, "value": value}).result()

    def begin_batch(self) -> None:
        self.submit(CommandKind.BEGIN_BATCH).result()

    def end_batch(self) -> None:
        self.submit(CommandKind.END_BATCH).result()

    def zoom_rect(self, x0: float, y0: float, x1: float, y1: float):
        return self.submit(CommandKind.ZOOM_RECT, {"x0": x0, "y0": y0, "x1": x1, "y1": y1}).result()

    def wheel(self, x: float, y: float, notches: int):
        return self.submit(CommandKind.WHEEL, {"x": x, "y": y, "notches": notches}).result()

    def reset_zoom(self):
        return self.submit(CommandKind.RESET_ZOOM).result()

    def click_to_data(self, x: float, y: float) -> list[ClickReadout]:
        return self.submit(CommandKind.CLICK_TO_DATA, {"x": x, "y": y}).result()

    def tree(self) -> list[Handle]:
        return self.submit(CommandKind.GET_TREE).result()

    def snapshot(self) -> PlotNode:
        return self.submit(CommandKind.SNAPSHOT).result()

    def resize(self, width: int, height: int) -> None:
        self.submit(CommandKind.RESIZE, {"width": width, "height": height}).result()

    def add_frame_listener(self, fn) -> None:
        """fn(generation, raster); called in presentation order while the
        presentation lock is held, so it must not call back into the engine."""
        with self._state:
            self._listeners.append(fn)

    def remove_frame_listener(self, fn) -> None:
        with self._state:
            self._listeners.remove(fn)

    def displayed(self) -> tuple[int, np.ndarray] | None:
        with self._state:
            return self._displayed

    @property
    def generations_scheduled(self) -> int:
        with self._state:
            return self._generation

    def wait_idle(self, timeout: float | None = None) -> bool:
        """Block until no command is queued and no render is in flight."""
        with self._state:
            return self._state.wait_for(lambda: self._pending == 0 and self._inflight == 0, timeout)

    def close(self) -> None:
        with self._state:
            if self._closed:
                return
            self._closed = True
        self._queue.put(_STOP)
        self._dispatcher.join()
        # a submit may have raced past the closed check; fail what it queued
        while True:
            try:
                cmd = self._queue.get_nowait()
            except queue.Empty:
                break
            if cmd is not _STOP:
                cmd.reply.set_exception(EngineError("SESSION_CLOSED", "engine is closed"))
                self._done()
        self._pool.shutdown(wait=True)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    # --- dispatcher ------------------------------------------------------------

    def _run(self) -> None:
        while True:
            item = self._queue.get()
            if item is _STOP:
                # fail whatever is still queued
                while True:
                    try:
                        cmd = self._queue.get_nowait()
                    except queue.Empty:
                        break
                    if cmd is not _STOP:
                        cmd.reply.set_exception(EngineError("SESSION_CLOSED", "engine is closed"))
                        self._done()
                return
            try:
                result = self._apply(item)
            except Exception as exc:  # command-level error: reply, keep serving
                item.reply.set_exception(exc)
            else:
                self.command_log.append((item.kind, dict(item.payload)))
                item.reply.set_result(result)
            finally:
                self._done()

    def _done(self) -> None:
        with self._state:
            self._pending -= 1
            self._state.notify_all()

    def _apply(self, cmd: Command):
        k, p = cmd.kind, cmd.payload
        if k is CommandKind.SET_PROPERTY:
            return self._session.set(p["path"], p["value"])
        if k is CommandKind.SET_DATA:
            return self._session.set(p["path"], p["value"])
        if k is CommandKind.BEGIN_BATCH:
            return self._session.begin_batch()
        if k is CommandKind.END_BATCH:
            return self._session.end_batch()
        if k is CommandKind.ZOOM_RECT:
            return self._zoom_rect(p["x0"], p["y0"], p["x1"], p["y1"])
        if k is CommandKind.WHEEL:
            return self._wheel(p["x"], p["y"], p["notches"])
        if k is CommandKind.RESET_ZOOM:
            return self._reset_zoom()
        if k is CommandKind.CLICK_TO_DATA:
            return self._click(p["x"], p["y"])
        if k is CommandKind.GET_TREE:
            return self._session.handles()
        if k is CommandKind.SNAPSHOT:
            return self._session.scene
        if k is CommandKind.RESIZE:
            w, h = int(p["width"]), int(p["height"])
            layout(self._session.scene, w, h)  # reject sizes that cannot lay out
            self._width, self._height = w, h
            self._schedule_render()
            return None
        raise EngineError("BAD_COMMAND", f"unknown command kind {k}")

    # --- spatial commands --------------------------------------------------------

    def _geometry(self) -> GeometryMap:
        return layout(self._session.scene, self._width, self._height)

    def _hit_node(self, x: float, y: float) -> PlotNode | None:
        """Deepest node whose content rect contains the point."""
        gm = self._geometry()
        hit = None
        for node in iter_nodes(self._session.scene):  # preorder: parents first
            if gm.nodes[node.id].content.contains(x, y):
                hit = node
        return hit

    def _layer_transforms(self, node: PlotNode) -> tuple[list[AxisTransform], list[AxisTransform]]:
        xs: dict[str, AxisTransform] = {}
        ys: dict[str, AxisTransform] = {}
        for layer in node.layers:
            tx = find_transform(node, layer.x_transform, "layer")
            ty = find_transform(node, layer.y_transform, "layer")
            xs.setdefault(tx.id, tx)
            ys.setdefault(ty.id, ty)
        return list(xs.values()), list(ys.values())

    def _set_ranges(self, node: PlotNode, new_ranges: dict[str, Range]) -> None:
        """Write transform ranges through property paths, as one batch."""
        scene = self._session.scene
        nodes = list(iter_nodes(scene))
        k = next(i for i, n in enumerate(nodes) if n.id == node.id)
        self._session.begin_batch()
        try:
            for j, tr in enumerate(nodes[k].transforms):
                if tr.id in new_ranges:
                    r = new_ranges[tr.id]
                    self._session.set(f"plots[{k}].transforms[{j}].range", (r.lo, r.hi))
        finally:
            self._session.end_batch()

    def _zoom_rect(self, x0: float, y0: float, x1: float, y1: float):
        x0, x1 = min(x0, x1), max(x0, x1)
        y0, y1 = min(y0, y1), max(y0, y1)
        node = self._hit_node((x0 + x1) / 2.0, (y0 + y1) / 2.0)
        if node is None:
            raise EngineError("RECT_OUTSIDE_PLOT", "zoom rect center is outside every plot")
        content = self._geometry().nodes[node.id].content
        fx0 = (x0 - content.x0) / content.w
        fx1 = (x1 - content.x0) / content.w
        # device y grows downward; data fraction 0 sits at the content bottom
        fy0 = (content.y1 - y1) / content.h
        fy1 = (content.y1 - y0) / content.h
        xs, ys = self._layer_transforms(node)
        previous = {(node.id, tr.id): tr.range for tr in xs + ys}
        new_ranges = {tr.id: transforms.zoom_to_fraction(tr, fx0, fx1) for tr in xs}
        new_ranges.update({tr.id: transforms.zoom_to_fraction(tr, fy0, fy1) for tr in ys})
        self._set_ranges(node, new_ranges)
        self._zoom_stack.append(previous)
        return dict(new_ranges)

    def _wheel(self, x: float, y: float, notches: int):
        node = self._hit_node(x, y)
        if node is None:
            raise EngineError("RECT_OUTSIDE_PLOT", "wheel point is outside every plot")
        content = self._geometry().nodes[node.id].content
        ax = (x - content.x0) / content.w
        ay = (content.y1 - y) / content.h
        xs, ys = self._layer_transforms(node)
        previous = {(node.id, tr.id): tr.range for tr in xs + ys}
        new_ranges = {tr.id: transforms.wheel_zoom(tr, ax, notches) for tr in xs}
        new_ranges.update({tr.id: transforms.wheel_zoom(tr, ay, notches) for tr in ys})
        self._set_ranges(node, new_ranges)
        self._zoom_stack.append(previous)
        return dict(new_ranges)

    def _reset_zoom(self):
        if not self._zoom_stack:
            return {}
        # oldest recorded range per transform = the pre-zoom original
        original: dict[tuple[str, str], Range] = {}
        for entry in self._zoom_stack:
            for key, r in entry.items():
                original.setdefault(key, r)
        self._zoom_stack.clear()
        nodes = list(iter_nodes(self._session.scene))
        self._session.begin_batch()
        try:
            for k, node in enumerate(nodes):
                for j, tr in enumerate(node.transforms):
                    r = original.get((node.id, tr.id))
                    if r is not None and tr.range != r:
                        self._session.set(f"plots[{k}].transforms[{j}].range", (r.lo, r.hi))
        finally:
            self._session.end_batch()
        return original

    def _click(self, x: float, y: float) -> list[ClickReadout]:
        node = self._hit_node(x, y)
        if node is None:
            return []
        content = self._geometry().nodes[node.id].content
        fx = (x - content.x0) / content.w
        fy = (content.y1 - y) / content.h
        out, seen = [], set()
        for layer in node.layers:
            pair = (layer.x_transform, layer.y_transform)
            if pair in seen:
                continue
            seen.add(pair)
            tx = find_transform(node, pair[0], "layer")
            ty = find_transform(node, pair[1], "layer")
            out.append(
                ClickReadout(
                    node_id=node.id,
                    x_transform=tx.id,
                    y_transform=ty.id,
                    x=transforms.inverse(tx, fx),
                    y=transforms.inverse(ty, fy),
                )
            )
        return out

    # --- rendering ---------------------------------------------------------------

    def _on_publish(self, scene: PlotNode, record) -> None:
        self._schedule_render()

    def _schedule_render(self) -> None:
        snapshot = self._session.scene
        with self._state:
            self._generation += 1
            gen = self._generation
            self._inflight += 1
        self._pool.submit(self._render_task, gen, snapshot, self._width, self._height)

    def _render_task(self, gen: int, snapshot: PlotNode, width: int, height: int) -> None:
        try:
            with self._state:
                newer = self._generation > gen
            if newer:
                return  # a newer generation is already scheduled; skip the work
            raster, _ = render_scene(snapshot, width, height, self._cache)
            with self._state:
                if self._displayed is None or gen > self._displayed[0]:
                    self._displayed = (gen, raster)
                    for fn in list(self._listeners):
                        fn(gen, raster)
        except Exception as exc:  # keep the pipeline alive; surface on next read
            self.last_render_error = exc
        finally:
            with self._state:
                self._inflight -= 1
                self._state.notify_all()
