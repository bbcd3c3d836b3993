class AgentError(Exception):
    """Base class for agent failures"""


class ReplyTimeout(AgentError):
    """No prompt came back from the adapter in time"""


class HandshakeTimeout(ReplyTimeout):
    pass


class UnexpectedReply(AgentError):

    def __init__(self, command: str, reply: str, expected: str):
        self.command = command
        self.reply = reply
        super().__init__(f'{command}: expected {expected}, got {reply!r}')


class PidReadError(AgentError):
    """A PID could not be read or decoded; the cycle's sample is skipped"""


class LinkDown(AgentError):
    """The uplink to the fleet server is unusable"""
