"""Scene sessions: the mutable shell around immutable snapshots.

A session owns the current snapshot and hands out new ones on every write.
Batches coalesce writes into one published change; they nest, and only the
outermost end publishes.
"""

from __future__ import annotations

from typing import Callable

from .errors import SceneError
from .model import PlotNode, validate_scene
from .paths import ChangeRecord, Handle, apply_change, enumerate_paths, resolve

Subscriber = Callable[[PlotNode, ChangeRecord], None]


class SceneSession:
    def __init__(self, scene: PlotNode):
        validate_scene(scene)
        self._scene = scene
        self._depth = 0
        self._pending: list[ChangeRecord] = []
        self._subscribers: list[Subscriber] = []

    @property
    def scene(self) -> PlotNode:
        return self._scene

    def subscribe(self, fn: Subscriber) -> None:
        self._subscribers.append(fn)

    def resolve(self, path: str) -> Handle:
        return resolve(self._scene, path)

    def handles(self) -> list[Handle]:
        return enumerate_paths(self._scene)

    def set(self, path: str, value) -> ChangeRecord:
        """Write one property.  Outside a batch the change publishes immediately."""
        new_scene, record = apply_change(self._scene, path, value)
        self._scene = new_scene
        if self._depth > 0:
            self._pending.append(record)
        else:
            self._publish(record)
        return record

    def replace_scene(self, scene: PlotNode, record: ChangeRecord) -> None:
        """Install an externally built snapshot (structural edits)."""
        validate_scene(scene)
        self._scene = scene
        if self._depth > 0:
            self._pending.append(record)
        else:
            self._publish(record)

    def begin_batch(self) -> None:
        self._depth += 1

    def end_batch(self) -> ChangeRecord:
        if self._depth == 0:
            raise SceneError("END_WITHOUT_BEGIN", "end_batch without a matching begin_batch")
        self._depth -= 1
        if self._depth > 0:
            return ChangeRecord((), frozenset())
        merged = ChangeRecord.union(self._pending)
        self._pending = []
        if merged.paths or merged.affected:
            self._publish(merged)
        return merged

    def _publish(self, record: ChangeRecord) -> None:
        for fn in list(self._subscribers):
            fn(self._scene, record)
