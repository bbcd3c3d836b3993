"""
Scenario files driving the scripted ECU.

One tick per line, '#' starts a comment:

    # t, speed km/h, MAF g/s[, GLL sentence]
    0,0,4.15
    1,2,4.35,$GPGLL,2545.1234,S,02813.5678,E,080001,A*38

Between ticks the last value holds (step-hold); in loop mode the time axis
wraps at the last tick.
"""

import bisect
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Tuple, Union

from obd.codec.pids import MAF_MAX, SPEED_MAX
from obd.nmea import GeoFix, NmeaError, parse_gll, render_gll

logger = logging.getLogger(__name__)


class ScenarioError(ValueError):
    """Scenario text that cannot be parsed; carries the 1-based line number"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f'line {line_number}: {message}'
        super().__init__(message)


class EmptyScenario(ScenarioError):
    pass


class LoopMode(str, Enum):
    HOLD = 'hold'
    LOOP = 'loop'


@dataclass(frozen=True)
class ScenarioTick:
    t: float
    speed_kmh: int
    maf_gs: float
    gll: Optional[GeoFix] = None


@dataclass(frozen=True)
class ScenarioSample:
    speed_kmh: int
    maf_gs: float
    gll: Optional[GeoFix]


@dataclass(frozen=True)
class Scenario:
    ticks: Tuple[ScenarioTick, ...]
    loop_mode: LoopMode = LoopMode.HOLD

    def __post_init__(self):
        if not self.ticks:
            raise EmptyScenario('scenario has no ticks')
        times = [tick.t for tick in self.ticks]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ScenarioError('tick times must be strictly increasing')
        object.__setattr__(self, '_times', times)

    @property
    def duration(self) -> float:
        """Time of the last tick"""
        return self.ticks[-1].t

    def __len__(self) -> int:
        return len(self.ticks)


def scenario_time(scenario: Scenario, t: float) -> float:
    """Position on the scenario time axis; loop mode wraps at the last tick"""
    if t < 0:
        raise ValueError(f'scenario time {t} is negative')
    if scenario.loop_mode is LoopMode.LOOP and scenario.duration > 0:
        return t % scenario.duration
    return t


def sample_scenario(scenario: Scenario, t: float) -> ScenarioSample:
    """Value of the latest tick with tick.t <= t (before the first tick, the first tick)"""
    t = scenario_time(scenario, t)
    index = bisect.bisect_right(scenario._times, t) - 1
    tick = scenario.ticks[max(index, 0)]
    return ScenarioSample(tick.speed_kmh, tick.maf_gs, tick.gll)


def _parse_line(line: str, line_number: int) -> ScenarioTick:
    parts = [part.strip() for part in line.split(',', 3)]
    if len(parts) < 3:
        raise ScenarioError(f'expected t,speed,maf[,gll], got {line!r}', line_number)
    try:
        t = float(parts[0])
        speed = int(parts[1])
        maf = round(float(parts[2]), 2)
    except ValueError as e:
        raise ScenarioError(str(e), line_number) from None

    if t < 0:
        raise ScenarioError(f'negative tick time {t}', line_number)
    if not 0 <= speed <= SPEED_MAX:
        raise ScenarioError(f'speed {speed} outside 0..{SPEED_MAX} km/h', line_number)
    if not 0 <= maf <= MAF_MAX:
        raise ScenarioError(f'MAF {maf} outside 0..{MAF_MAX} g/s', line_number)

    gll = None
    if len(parts) == 4 and parts[3]:
        try:
            gll = parse_gll(parts[3])
        except NmeaError as e:
            raise ScenarioError(f'bad GLL sentence: {e}', line_number) from None
    return ScenarioTick(t, speed, maf, gll)


def parse_scenario_ticks(lines: Iterable[str]) -> Tuple[ScenarioTick, ...]:
    ticks = []
    for line_number, raw in enumerate(lines, start=1):
        line = raw.split('#', 1)[0].strip() if not raw.lstrip().startswith('#') else ''
        if not line:
            continue
        tick = _parse_line(line, line_number)
        if ticks and tick.t <= ticks[-1].t:
            raise ScenarioError(f'tick time {tick.t} does not increase', line_number)
        ticks.append(tick)
    return tuple(ticks)


def parse_scenario(text: str, loop_mode: LoopMode = LoopMode.HOLD) -> Scenario:
    ticks = parse_scenario_ticks(text.splitlines())
    if not ticks:
        raise EmptyScenario('scenario has no ticks')
    return Scenario(ticks, LoopMode(loop_mode))


def load_scenario(path: Union[str, Path], loop_mode: LoopMode = LoopMode.HOLD) -> Scenario:
    path = Path(path)
    scenario = parse_scenario(path.read_text(encoding='ascii'), loop_mode)
    logger.info(f"Loaded scenario {path.name}: {len(scenario)} ticks, {scenario.duration:g} s")
    return scenario


def scenario_text(scenario: Scenario) -> str:
    """Render a scenario back to the file format"""
    lines = ['# t,speed_kmh,maf_gs[,gll]']
    for tick in scenario.ticks:
        row = f'{tick.t:g},{tick.speed_kmh},{tick.maf_gs:.2f}'
        if tick.gll is not None:
            row += ',' + render_gll(tick.gll)
        lines.append(row)
    return '\n'.join(lines) + '\n'
