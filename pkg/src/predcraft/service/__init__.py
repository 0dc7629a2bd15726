from .app import create_app
from .events import EventLog
from .state import ServiceState, Session, allowed_transition, assign_group
from .store import PrecomputeStore

__all__ = [
    "create_app",
    "EventLog",
    "ServiceState",
    "Session",
    "allowed_transition",
    "assign_group",
    "PrecomputeStore",
]
