"""Memoisation of invariant computations."""

import json
import time
from dataclasses import dataclass
from threading import RLock
from typing import Any, Callable, Dict, Generic, Hashable, Optional, TypeVar

T = TypeVar("T")


@dataclass
class CacheEntry(Generic[T]):
    """Cache entry with metadata."""

    value: T
    created_at: float
    access_count: int = 1

    def touch(self) -> None:
        self.access_count += 1


class LRUCache(Generic[T]):
    """Least recently used cache, safe to share between threads."""

    def __init__(self, max_size: int = 4096) -> None:
        if max_size < 0:
            raise ValueError("max_size must be non-negative")
        self.max_size = max_size
        self._cache: Dict[Hashable, CacheEntry[T]] = {}
        self._lock = RLock()
        self.hits = 0
        self.misses = 0

    def get(self, key: Hashable) -> Optional[T]:
        with self._lock:
            entry = self._cache.pop(key, None)
            if entry is None:
                self.misses += 1
                return None
            # Reinsert to mark as most recent; dicts keep insertion order.
            self._cache[key] = entry
            entry.touch()
            self.hits += 1
            return entry.value

    def put(self, key: Hashable, value: T) -> None:
        if self.max_size == 0:
            return
        with self._lock:
            self._cache.pop(key, None)
            self._cache[key] = CacheEntry(value=value, created_at=time.time())
            while len(self._cache) > self.max_size:
                self._cache.pop(next(iter(self._cache)))

    def get_or_compute(self, key: Hashable, compute: Callable[[], T]) -> T:
        cached = self.get(key)
        if cached is not None:
            return cached
        value = compute()
        self.put(key, value)
        return value

    def clear(self) -> None:
        with self._lock:
            self._cache.clear()
            self.hits = 0
            self.misses = 0

    @property
    def size(self) -> int:
        return len(self._cache)

    def stats(self) -> Dict[str, Any]:
        with self._lock:
            return {
                "size": len(self._cache),
                "max_size": self.max_size,
                "hits": self.hits,
                "misses": self.misses,
            }


class FingerprintCache(LRUCache[Any]):
    """LRU cache keyed by canonical PD codes."""

    @staticmethod
    def key_for(pd: Any) -> str:
        return json.dumps(pd.to_json(), separators=(",", ":"))
