from dataclasses import dataclass, field
from typing import Optional, Tuple

from django.conf import settings

from obd.emulator.server import parse_listen
from telemetry.metrics import FuelModel


@dataclass(frozen=True)
class AgentConfig:
    vehicle_id: str
    obd_address: str = 'socket://127.0.0.1:35000'
    server_address: Tuple[str, int] = ('127.0.0.1', 5055)
    poll_period: float = 1.0
    fuel_model: FuelModel = field(default_factory=FuelModel.petrol)
    buffer_capacity: int = 3600
    handshake_timeout: float = 2.0
    ack_timeout: float = 2.0
    baudrate: int = 38400

    def __post_init__(self):
        if not self.vehicle_id:
            raise ValueError('vehicle_id is required')
        if self.poll_period <= 0:
            raise ValueError(f'poll_period must be positive, got {self.poll_period}')
        if self.buffer_capacity < 1:
            raise ValueError(f'buffer_capacity must be at least 1, got {self.buffer_capacity}')
        if self.handshake_timeout <= 0 or self.ack_timeout <= 0:
            raise ValueError('timeouts must be positive')

    @classmethod
    def from_settings(cls, vehicle_id: str, obd_address: Optional[str] = None,
                      server: Optional[str] = None, period: Optional[float] = None,
                      fuel: Optional[str] = None, buffer_capacity: Optional[int] = None,
                      handshake_timeout: Optional[float] = None,
                      ack_timeout: Optional[float] = None) -> 'AgentConfig':
        """Settings supply the defaults; explicit arguments win"""

        def pick(value, name, default):
            return value if value is not None else getattr(settings, name, default)

        return cls(
            vehicle_id=vehicle_id,
            obd_address=pick(obd_address, 'OBD_ADDRESS', 'socket://127.0.0.1:35000'),
            server_address=parse_listen(pick(server, 'FLEET_INGEST_LISTEN', '127.0.0.1:5055')),
            poll_period=pick(period, 'AGENT_POLL_PERIOD', 1.0),
            fuel_model=FuelModel.for_kind(pick(fuel, 'AGENT_FUEL', 'petrol')),
            buffer_capacity=pick(buffer_capacity, 'AGENT_BUFFER_CAPACITY', 3600),
            handshake_timeout=pick(handshake_timeout, 'AGENT_HANDSHAKE_TIMEOUT', 2.0),
            ack_timeout=pick(ack_timeout, 'AGENT_ACK_TIMEOUT', 2.0),
            baudrate=getattr(settings, 'OBD_BAUDRATE', 38400),
        )
