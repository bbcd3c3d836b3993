"""
OBD II parameter identifiers and protocol metadata.
"""

from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Dict, NewType, Optional

# Physical units carried by the decoded mode-01 values
SpeedKmh = NewType('SpeedKmh', int)            # 0..255 km/h, one data byte
MafGramsPerSec = NewType('MafGramsPerSec', float)  # 0..655.35 g/s, two bytes / 100

MODE_CURRENT_DATA = 0x01
MODE_MIN = 0x01
MODE_MAX = 0x0A
RESPONSE_MODE_OFFSET = 0x40

SPEED_MAX = 255
MAF_MAX = 655.35


class Pid(IntEnum):
    """Mode-01 PIDs the reader knows about"""
    SUPPORTED_PIDS = 0x00
    SPEED = 0x0D
    MAF = 0x10
    FUEL_FLOW = 0x5E  # recognized, reported unsupported

    @classmethod
    def lookup(cls, code: int) -> Optional['Pid']:
        try:
            return cls(code)
        except ValueError:
            return None


# Data bytes defined for each known PID (positions A..D)
PID_DATA_LENGTH: Dict[Pid, int] = {
    Pid.SUPPORTED_PIDS: 4,
    Pid.SPEED: 1,
    Pid.MAF: 2,
    Pid.FUEL_FLOW: 2,
}

PID_DESCRIPTIONS: Dict[Pid, str] = {
    Pid.SUPPORTED_PIDS: 'PIDs supported [01 - 20]',
    Pid.SPEED: 'Vehicle speed',
    Pid.MAF: 'Mass air flow rate',
    Pid.FUEL_FLOW: 'Engine fuel rate',
}

# CAN bit rates; ELM protocol numbers 6/7 run at high speed, 8/9 at 250 kbps
CAN_LOW_SPEED_BPS = 125_000
CAN_MEDIUM_SPEED_BPS = 250_000
CAN_HIGH_SPEED_BPS = 500_000


class Protocol(str, Enum):
    AUTO = 'auto'
    ISO9141 = 'iso9141'
    ISO14230 = 'iso14230'
    CAN11 = 'can11'
    CAN29 = 'can29'

    @property
    def info(self) -> 'ProtocolInfo':
        return PROTOCOL_INFO[self]

    @property
    def is_can(self) -> bool:
        return self in (Protocol.CAN11, Protocol.CAN29)

    @classmethod
    def from_elm_number(cls, number: int) -> Optional['Protocol']:
        """Map an ATSPn protocol number; J1850 (1, 2) is not implemented"""
        return ELM_PROTOCOL_NUMBERS.get(number)


@dataclass(frozen=True)
class ProtocolInfo:
    """Metadata for one OBD II signalling protocol"""
    elm_number: int
    description: str
    bit_rate: Optional[int] = None  # metadata only, never simulated


PROTOCOL_INFO: Dict[Protocol, ProtocolInfo] = {
    Protocol.AUTO: ProtocolInfo(0, 'Automatic'),
    Protocol.ISO9141: ProtocolInfo(3, 'ISO 9141-2', 10_400),
    Protocol.ISO14230: ProtocolInfo(5, 'ISO 14230-4 (KWP FAST)', 10_400),
    Protocol.CAN11: ProtocolInfo(6, 'ISO 15765-4 (CAN 11/500)', CAN_HIGH_SPEED_BPS),
    Protocol.CAN29: ProtocolInfo(7, 'ISO 15765-4 (CAN 29/500)', CAN_HIGH_SPEED_BPS),
}

ELM_PROTOCOL_NUMBERS: Dict[int, Protocol] = {
    0: Protocol.AUTO,
    3: Protocol.ISO9141,
    4: Protocol.ISO14230,
    5: Protocol.ISO14230,
    6: Protocol.CAN11,
    7: Protocol.CAN29,
    8: Protocol.CAN11,
    9: Protocol.CAN29,
}
