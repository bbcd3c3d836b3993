"""
ELM327 v1.4b command interpreter.

handle_line() is a pure function over an immutable EmulatorState: one
CR-terminated command in, the next state and the full reply (echo, body,
prompt) out. Sessions and listeners own the state between commands.
"""

import logging
from dataclasses import dataclass, replace
from typing import Optional, Tuple

from obd.codec.framing import (
    CAN11_RESPONSE_ID,
    CAN29_RESPONSE_ID,
    ISO_RESPONSE_HEADER,
    frame_iso9141,
)
from obd.codec.messages import (
    NO_DATA,
    ObdRequest,
    encode_maf,
    encode_speed,
    response_for,
    supported_pids_bitmap,
)
from obd.codec.errors import InvalidRequest
from obd.codec.pids import MODE_CURRENT_DATA, Pid, Protocol

from .scenario import Scenario, sample_scenario

logger = logging.getLogger(__name__)

VERSION = 'ELM327 v1.4b'
PROMPT = '>'
OK = 'OK'
UNKNOWN = '?'
UNABLE_TO_CONNECT = 'UNABLE TO CONNECT'

# PIDs answered by the scripted ECU
SUPPORTED_PIDS = (Pid.SPEED, Pid.MAF)


@dataclass(frozen=True)
class EmulatorState:
    echo_enabled: bool = True
    spaces_enabled: bool = True
    headers_enabled: bool = False
    protocol: Protocol = Protocol.AUTO
    protocol_locked: bool = False
    automatic: bool = True  # protocol chosen by search rather than ATSPn
    scenario_clock: float = 0.0

    def __post_init__(self):
        if self.protocol_locked and self.protocol is Protocol.AUTO:
            raise ValueError('a locked protocol cannot be AUTO')

    def reset(self) -> 'EmulatorState':
        """Power-up defaults; the scenario keeps running"""
        return EmulatorState(scenario_clock=self.scenario_clock)


@dataclass(frozen=True)
class ScriptedEcu:
    """The vehicle behind the interpreter: a scenario on a fixed bus protocol"""
    scenario: Scenario
    protocol: Protocol = Protocol.CAN11

    def __post_init__(self):
        if self.protocol is Protocol.AUTO:
            raise ValueError('the ECU must speak a concrete protocol')

    def read(self, pid: int, t: float) -> Optional[bytes]:
        """Data bytes for a mode-01 PID at scenario time t, None when unsupported"""
        if pid == Pid.SUPPORTED_PIDS:
            return supported_pids_bitmap(SUPPORTED_PIDS)
        sample = sample_scenario(self.scenario, t)
        if pid == Pid.SPEED:
            return encode_speed(sample.speed_kmh)
        if pid == Pid.MAF:
            return encode_maf(sample.maf_gs)
        return None


def _join(values, spaces: bool) -> str:
    return (' ' if spaces else '').join(values)


def _render_payload(state: EmulatorState, payload: bytes) -> str:
    hex_bytes = [f'{b:02X}' for b in payload]
    if not state.headers_enabled:
        return _join(hex_bytes, state.spaces_enabled)

    if state.protocol is Protocol.CAN11:
        return _join([f'{CAN11_RESPONSE_ID:03X}', f'{len(payload):02X}', *hex_bytes], state.spaces_enabled)
    if state.protocol is Protocol.CAN29:
        id_bytes = [f'{b:02X}' for b in CAN29_RESPONSE_ID.to_bytes(4, 'big')]
        return _join([*id_bytes, f'{len(payload):02X}', *hex_bytes], state.spaces_enabled)

    frame = frame_iso9141(*ISO_RESPONSE_HEADER, payload)
    return _join([f'{b:02X}' for b in frame.to_bytes()], state.spaces_enabled)


def _describe_protocol(state: EmulatorState) -> str:
    if state.protocol is Protocol.AUTO:
        return 'AUTO'
    description = state.protocol.info.description
    return f'AUTO, {description}' if state.automatic else description


def _handle_at(state: EmulatorState, command: str) -> Tuple[EmulatorState, str]:
    if command == 'Z':
        return state.reset(), VERSION
    if command == 'I':
        return state, VERSION
    if command == 'FE':
        return state, OK
    if command == 'DP':
        return state, _describe_protocol(state)

    toggles = {
        'E0': ('echo_enabled', False), 'E1': ('echo_enabled', True),
        'S0': ('spaces_enabled', False), 'S1': ('spaces_enabled', True),
        'H0': ('headers_enabled', False), 'H1': ('headers_enabled', True),
    }
    if command in toggles:
        name, value = toggles[command]
        return replace(state, **{name: value}), OK

    if command.startswith('SP') and len(command) == 3 and command[2].isdigit():
        protocol = Protocol.from_elm_number(int(command[2]))
        if protocol is None:
            return state, UNKNOWN
        if protocol is Protocol.AUTO:
            return replace(state, protocol=Protocol.AUTO, protocol_locked=False, automatic=True), OK
        return replace(state, protocol=protocol, protocol_locked=True, automatic=False), OK

    return state, UNKNOWN


def _handle_obd(state: EmulatorState, request: ObdRequest, ecu: ScriptedEcu) -> Tuple[EmulatorState, str]:
    if request.mode != MODE_CURRENT_DATA:
        return state, NO_DATA

    if request.pid == Pid.SUPPORTED_PIDS and not state.protocol_locked:
        # Protocol search: the bus only answers in the ECU's own protocol
        state = replace(state, protocol=ecu.protocol, protocol_locked=True)
    elif not state.protocol_locked:
        return state, NO_DATA

    if state.protocol is not ecu.protocol:
        return state, UNABLE_TO_CONNECT

    data = ecu.read(request.pid, state.scenario_clock)
    if data is None:
        return state, NO_DATA
    response = response_for(request, data)
    return state, _render_payload(state, bytes([response.mode_echo, response.pid_echo, *response.data]))


def handle_line(state: EmulatorState, line: str, ecu: ScriptedEcu) -> Tuple[EmulatorState, str]:
    """
    Interpret one command line.

    Returns:
        (next state, reply) where the reply is the echoed command when echo
        was on before the command, the reply body, CR CR and the prompt.
    """
    command_text = line.rstrip('\r\n')
    command = ''.join(command_text.split()).upper()
    if not command:
        return state, PROMPT

    if command.startswith('AT'):
        next_state, body = _handle_at(state, command[2:])
    else:
        try:
            request = ObdRequest.parse(command)
        except InvalidRequest:
            next_state, body = state, UNKNOWN
        else:
            next_state, body = _handle_obd(state, request, ecu)

    if body == UNKNOWN:
        logger.debug(f"Unknown command {command_text!r}")

    echo = command_text + '\r' if state.echo_enabled else ''
    return next_state, f'{echo}{body}\r\r{PROMPT}'
