"""
Clocks are zero-argument callables returning seconds. The agent, the
emulator session and the replay harness all take one, so a run can be
driven by wall time or stepped by hand.
"""

import threading
import time


class SystemClock:
    """Monotonic seconds, plus the epoch offset used for sample timestamps"""

    def __init__(self):
        self.epoch_ms = int(time.time() * 1000)
        self._origin = time.monotonic()

    def __call__(self) -> float:
        return time.monotonic() - self._origin


class ManualClock:
    """Advances only when told to; sleep() advances instead of blocking"""

    def __init__(self, start: float = 0.0, epoch_ms: int = 0):
        self.epoch_ms = epoch_ms
        # whole nanoseconds, so repeated 0.1 s steps land on exact ticks
        self._now_ns = round(start * 1e9)
        self._lock = threading.Lock()

    def __call__(self) -> float:
        with self._lock:
            return self._now_ns / 1e9

    def advance(self, seconds: float):
        if seconds < 0:
            raise ValueError('a clock cannot run backwards')
        with self._lock:
            self._now_ns += round(seconds * 1e9)

    def sleep(self, seconds: float):
        if seconds > 0:
            self.advance(seconds)
