"""
ELM327 adapter emulator driven by a scenario file.

Usage:
    ecu = ScriptedEcu(load_scenario('scenarios/short_trip.txt'))
    session = Elm327Session(ecu)
    session.handle('010D')      # '41 0D 00\\r\\r>'
"""

from .gps import GpsFeed, start_nmea_feed
from .scenario import (
    EmptyScenario,
    LoopMode,
    Scenario,
    ScenarioError,
    ScenarioSample,
    ScenarioTick,
    load_scenario,
    parse_scenario,
    sample_scenario,
    scenario_text,
)
from .server import parse_listen, serve_serial, start_tcp_emulator
from .session import Elm327Session
from .state import EmulatorState, ScriptedEcu, handle_line

__all__ = [
    'Elm327Session', 'EmptyScenario', 'EmulatorState', 'GpsFeed', 'LoopMode', 'Scenario',
    'ScenarioError', 'ScenarioSample', 'ScenarioTick', 'ScriptedEcu', 'handle_line',
    'load_scenario', 'parse_listen', 'parse_scenario', 'sample_scenario', 'scenario_text',
    'serve_serial', 'start_nmea_feed', 'start_tcp_emulator',
]
