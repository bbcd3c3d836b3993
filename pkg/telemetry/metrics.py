"""
Fuel consumption, distance and trip summaries from decoded speed/MAF.

Units are fixed throughout: km, km/h, g/s, L/km, seconds. A fuel
consumption of None means "undefined" (vehicle standing still).
"""

from dataclasses import asdict, dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

SECONDS_PER_HOUR = 3600.0


class MetricsError(ValueError):
    """Base class for metrics failures"""


class NonPositiveDt(MetricsError):
    pass


class EmptyTrip(MetricsError):
    pass


class NonMonotonicTimestamps(MetricsError):
    pass


class FuelKind(str, Enum):
    PETROL = 'petrol'
    DIESEL = 'diesel'


@dataclass(frozen=True)
class FuelModel:
    kind: FuelKind
    afr: float      # mass of air per mass of fuel
    density: float  # g/L

    @classmethod
    def petrol(cls) -> 'FuelModel':
        return cls(FuelKind.PETROL, 14.7, 820.0)

    @classmethod
    def diesel(cls) -> 'FuelModel':
        return cls(FuelKind.DIESEL, 14.5, 750.0)

    @classmethod
    def for_kind(cls, kind) -> 'FuelModel':
        kind = FuelKind(kind)
        return cls.petrol() if kind is FuelKind.PETROL else cls.diesel()

    def fuel_flow_l_per_h(self, maf: float) -> float:
        """Fuel flow implied by the air flow"""
        return maf * SECONDS_PER_HOUR / (self.afr * self.density)


def fuel_consumption(maf: float, speed: float, model: FuelModel) -> Optional[float]:
    """maf * 3600 / (afr * density * speed) in L/km; None when speed is 0"""
    if maf < 0:
        raise MetricsError(f'negative MAF {maf}')
    if speed == 0:
        return None
    return maf * SECONDS_PER_HOUR / (model.afr * model.density * speed)


def fuel_consumption_from_flow(flow_l_per_h: float, speed: float) -> Optional[float]:
    if flow_l_per_h < 0:
        raise MetricsError(f'negative fuel flow {flow_l_per_h}')
    if speed == 0:
        return None
    return flow_l_per_h / speed


def to_litres_per_100km(fc: Optional[float]) -> Optional[float]:
    return None if fc is None else fc * 100.0


def integrate_distance(cumulative_km: float, speed: float, dt: float) -> float:
    """Add one sample's distance: speed held for dt seconds"""
    if dt <= 0:
        raise NonPositiveDt(f'dt must be positive, got {dt}')
    return cumulative_km + speed * dt / SECONDS_PER_HOUR


def integrate_profile(speed_fn: Callable[[float], float], duration_s: float, dt: float) -> float:
    """
    Distance in km of a continuous speed profile sampled every dt seconds
    over [0, duration_s), each sample held for dt (left Riemann sum).
    """
    if dt <= 0:
        raise NonPositiveDt(f'dt must be positive, got {dt}')
    steps = int(round(duration_s / dt))
    times = np.arange(steps) * dt
    speeds = np.array([speed_fn(float(t)) for t in times], dtype=float)
    return float(np.sum(speeds) * dt / SECONDS_PER_HOUR)


def distance_error_pct(measured_km: float, reference_km: float) -> float:
    if reference_km == 0:
        raise MetricsError('reference distance is zero')
    return abs(measured_km - reference_km) / reference_km * 100.0


@dataclass(frozen=True)
class TripSummary:
    total_distance_km: float
    max_speed_kmh: int
    max_fuel_consumption_l_per_km: Optional[float]
    duration_s: float
    sample_count: int
    average_speed_kmh: float
    average_fuel_consumption_l_per_km: Optional[float]

    def to_dict(self) -> dict:
        return asdict(self)


def summarize_trip(samples: Sequence) -> TripSummary:
    """
    Totals and maxima over an ordered run of telemetry samples.

    Each sample contributes speed_kmh * period_s of distance; undefined fuel
    values are left out of the fuel maximum and average.

    Raises:
        EmptyTrip: no samples
        NonMonotonicTimestamps: timestamps do not strictly increase
    """
    if not samples:
        raise EmptyTrip('no samples in range')

    timestamps = np.array([s.timestamp for s in samples], dtype=np.int64)
    if np.any(np.diff(timestamps) <= 0):
        raise NonMonotonicTimestamps('sample timestamps must strictly increase')

    speeds = np.array([s.speed_kmh for s in samples], dtype=float)
    periods = np.array([s.period_s for s in samples], dtype=float)
    fuel = np.array([s.fuel_l_per_km for s in samples if s.fuel_l_per_km is not None], dtype=float)

    distance = float(np.sum(speeds * periods) / SECONDS_PER_HOUR)
    duration = float(np.sum(periods))
    average_speed = distance / duration * SECONDS_PER_HOUR if duration > 0 else 0.0

    return TripSummary(
        total_distance_km=distance,
        max_speed_kmh=int(speeds.max()),
        max_fuel_consumption_l_per_km=float(fuel.max()) if fuel.size else None,
        duration_s=duration,
        sample_count=len(samples),
        average_speed_kmh=average_speed,
        average_fuel_consumption_l_per_km=float(fuel.mean()) if fuel.size else None,
    )
