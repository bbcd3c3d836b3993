import logging
import threading
from collections import deque
from typing import List, Optional

from telemetry.samples import TelemetrySample

logger = logging.getLogger(__name__)


class SampleBuffer:
    """
    Bounded FIFO between the poll loop (producer) and the uplink (consumer).

    A sample leaves only when acknowledged (pop_acked) or when it is evicted
    as the oldest entry of a full buffer; evictions are counted in `dropped`.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError(f'capacity must be at least 1, got {capacity}')
        self.capacity = capacity
        self.dropped = 0
        self._items = deque()
        self._lock = threading.Lock()
        self._not_empty = threading.Condition(self._lock)

    def put(self, sample: TelemetrySample) -> Optional[TelemetrySample]:
        """Append a sample; returns the evicted oldest sample when full"""
        with self._lock:
            evicted = None
            if len(self._items) >= self.capacity:
                evicted = self._items.popleft()
                self.dropped += 1
            self._items.append(sample)
            self._not_empty.notify()
        if evicted is not None:
            logger.warning(f"Buffer full ({self.capacity}): dropped seq {evicted.seq}")
        return evicted

    def peek(self) -> Optional[TelemetrySample]:
        with self._lock:
            return self._items[0] if self._items else None

    def pop_acked(self, seq: int) -> bool:
        """Remove the head if it is `seq`; a head evicted meanwhile is left alone"""
        with self._lock:
            if self._items and self._items[0].seq == seq:
                self._items.popleft()
                return True
            return False

    def wait(self, timeout: float) -> bool:
        """Block until a sample is buffered or timeout passes"""
        with self._not_empty:
            return self._not_empty.wait_for(lambda: bool(self._items), timeout)

    def snapshot(self) -> List[TelemetrySample]:
        with self._lock:
            return list(self._items)

    def __len__(self) -> int:
        with self._lock:
            return len(self._items)
