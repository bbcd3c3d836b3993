"""
OBD II reader control logic.

Usage:
    config = AgentConfig.from_settings('car-1')
    link = open_link(config.obd_address, config.baudrate)
    uplink = Uplink(lambda: TcpUplinkConnection(config.server_address, config.ack_timeout),
                    SampleBuffer(config.buffer_capacity), clock)
    TelemetryAgent(config, link, uplink, clock).run()
"""

from .agent import RunResult, TelemetryAgent
from .buffer import SampleBuffer
from .config import AgentConfig
from .errors import AgentError, HandshakeTimeout, LinkDown, PidReadError, ReplyTimeout, UnexpectedReply
from .gps import NmeaReader
from .handshake import INIT_SEQUENCE, ReadyState, initialize
from .link import ElmLink, Exchange, LoopbackTransport, SerialTransport, open_link
from .uplink import (
    FaultInjectingConnector,
    InProcessUplinkConnection,
    LinkStats,
    ReconnectStrategy,
    TcpUplinkConnection,
    TransmitResult,
    Uplink,
)

__all__ = [
    'AgentConfig', 'AgentError', 'ElmLink', 'Exchange', 'FaultInjectingConnector',
    'HandshakeTimeout', 'INIT_SEQUENCE', 'InProcessUplinkConnection', 'LinkDown', 'LinkStats',
    'LoopbackTransport', 'NmeaReader', 'PidReadError', 'ReadyState', 'ReconnectStrategy',
    'ReplyTimeout', 'RunResult', 'SampleBuffer', 'SerialTransport', 'TcpUplinkConnection',
    'TelemetryAgent', 'TransmitResult', 'UnexpectedReply', 'Uplink', 'initialize', 'open_link',
]
