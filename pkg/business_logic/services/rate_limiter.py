"""
Per-source sliding-window rate limiter.

Each source may issue at most ``floor(rate)`` requests in any window of one
second (one request per ``1 / rate`` seconds for rates below 1). Request
timestamps are kept per source in a deque; a caller over the limit sleeps
until the oldest request leaves the window.

The clock and the sleep function are injectable so the limiter can be driven
by a virtual clock in tests.

Example:
    >>> limiter = RateLimiter()
    >>> limiter.wait_if_needed("yahoo_backlinks", rate_limit=2.0)
    0.0
"""

import logging
import math
import threading
import time
from collections import defaultdict, deque
from typing import Callable

logger = logging.getLogger(__name__)

# Waits shorter than this count as elapsed (float noise on virtual clocks).
_EPSILON = 1e-9


class RateLimiter:
    def __init__(
        self,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        self.clock = clock
        self.sleep = sleep
        self._requests: defaultdict[str, deque[float]] = defaultdict(deque)
        self._locks: defaultdict[str, threading.Lock] = defaultdict(threading.Lock)
        self._registry_lock = threading.Lock()

    @staticmethod
    def window_for(rate_limit: float) -> tuple[int, float]:
        """``(capacity, window_seconds)`` for a requests-per-second limit."""
        if rate_limit <= 0:
            raise ValueError(f"rate limit must be positive, got {rate_limit}")
        if rate_limit >= 1:
            return math.floor(rate_limit), 1.0
        return 1, 1.0 / rate_limit

    def _lock_for(self, source_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks[source_id]

    def wait_if_needed(self, source_id: str, rate_limit: float) -> float:
        """
        Block until ``source_id`` may issue another request, then record it.

        Returns:
            float: Total seconds slept.
        """
        capacity, window = self.window_for(rate_limit)
        waited = 0.0
        with self._lock_for(source_id):
            timestamps = self._requests[source_id]
            while True:
                now = self.clock()
                while timestamps and timestamps[0] + window - now <= _EPSILON:
                    timestamps.popleft()
                if len(timestamps) < capacity:
                    timestamps.append(now)
                    return waited
                wait_time = timestamps[0] + window - now
                logger.debug("rate limit: waiting %.3fs for %s", wait_time, source_id)
                self.sleep(wait_time)
                waited += wait_time
