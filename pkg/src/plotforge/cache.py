"""Content-addressed tile cache.

Keys are content hashes of everything a component tile depends on, so a stale
entry can never be returned for changed content; eviction only ever costs a
re-render.  Safe for concurrent use from render pool threads.
"""

from __future__ import annotations

import threading
from collections import OrderedDict

import numpy as np


class RenderStats:
    """Per-render accounting: which component tiles hit the cache and which missed."""

    def __init__(self) -> None:
        self.hits: list[tuple] = []
        self.misses: list[tuple] = []

    @property
    def hit_count(self) -> int:
        return len(self.hits)

    @property
    def miss_count(self) -> int:
        return len(self.misses)


class TileCache:
    def __init__(self, capacity: int = 256):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._lock = threading.Lock()
        self._entries: OrderedDict[str, np.ndarray] = OrderedDict()

    def get(self, key: str) -> np.ndarray | None:
        with self._lock:
            tile = self._entries.get(key)
            if tile is not None:
                self._entries.move_to_end(key)
            return tile

    def put(self, key: str, tile: np.ndarray) -> None:
        tile.setflags(write=False)
        with self._lock:
            self._entries[key] = tile
            self._entries.move_to_end(key)
            while len(self._entries) > self.capacity:
                self._entries.popitem(last=False)

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)
