from threading import Lock
from typing import Callable, Optional

import numpy as np
from cachetools import LRUCache

from app.core.config import settings
from app.core.logging import get_logger

logger = get_logger(__name__)


class CacheKeyBuilder:
    """Builder to generate consistent cache keys."""

    @staticmethod
    def spectrum(kind: str, size: int, threshold: Optional[int] = None) -> str:
        key = f"spectrum:{kind}:{size}"

        if threshold is not None:
            key += f":k={threshold}"

        return key


class SpectrumCache:
    """Thread-safe in-process LRU cache of clause coefficient vectors."""

    def __init__(self, maxsize: int = None):
        self._cache: LRUCache = LRUCache(
            maxsize=maxsize or settings.SPECTRUM_CACHE_SIZE
        )
        self._lock = Lock()
        self.hits = 0
        self.misses = 0

    def get(self, key: str) -> Optional[np.ndarray]:
        """Gets a cached vector."""
        with self._lock:
            value = self._cache.get(key)
            if value is None:
                self.misses += 1
            else:
                self.hits += 1
            return value

    def set(self, key: str, value: np.ndarray) -> None:
        """Stores a vector; cached arrays are made read-only."""
        value.setflags(write=False)
        with self._lock:
            self._cache[key] = value

    def get_or_compute(self, key: str, compute: Callable[[], np.ndarray]) -> np.ndarray:
        """Returns the cached vector or computes and stores it."""
        value = self.get(key)
        if value is None:
            value = compute()
            self.set(key, value)
            logger.debug("Spectrum computed", key=key)
        return value

    def clear(self) -> None:
        with self._lock:
            self._cache.clear()
            self.hits = 0
            self.misses = 0


_spectrum_cache: Optional[SpectrumCache] = None


def get_spectrum_cache() -> SpectrumCache:
    """Gets or creates the global spectrum cache."""
    global _spectrum_cache

    if _spectrum_cache is None:
        _spectrum_cache = SpectrumCache()

    return _spectrum_cache
