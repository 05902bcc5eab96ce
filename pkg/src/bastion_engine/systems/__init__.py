"""
Systems module - one phase of a closed-loop step each.
"""

from .base import System
from .integration import IntegrationSystem, ProjectionSystem
from .monitors import MonitorSystem
from .recording import LoggingSystem
from .safety import SafetySystem
from .sampling import CaptureSystem, SamplingSystem

__all__ = [
    "System",
    "SamplingSystem",
    "CaptureSystem",
    "MonitorSystem",
    "LoggingSystem",
    "IntegrationSystem",
    "ProjectionSystem",
    "SafetySystem",
]
