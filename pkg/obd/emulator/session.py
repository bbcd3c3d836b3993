import logging
import time
from dataclasses import dataclass, replace
from typing import Callable, List

from .state import EmulatorState, ScriptedEcu, handle_line

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LogEntry:
    command: str
    reply: str


class Elm327Session:
    """
    One connection's worth of interpreter state.

    The scenario clock starts when the session is created and advances with
    `clock`, so an accelerated or manual clock drives the scenario directly.
    """

    def __init__(self, ecu: ScriptedEcu, clock: Callable[[], float] = time.monotonic):
        self.ecu = ecu
        self._clock = clock
        self._started = clock()
        self.state = EmulatorState()
        self.log: List[LogEntry] = []

    @property
    def scenario_time(self) -> float:
        return max(self._clock() - self._started, 0.0)

    def handle(self, line: str) -> str:
        self.state = replace(self.state, scenario_clock=self.scenario_time)
        self.state, reply = handle_line(self.state, line, self.ecu)
        self.log.append(LogEntry(line.rstrip('\r\n'), reply))
        return reply

    @property
    def commands(self) -> List[str]:
        """Commands received so far, in order"""
        return [entry.command for entry in self.log if entry.command]

    def transcript(self) -> str:
        return ''.join(entry.reply for entry in self.log)
