"""
Telemetry module for run logging and analysis.
"""

from .database import TelemetryDatabase
from .config import LogConfig, LogLevel
from .trajectory import TrajectoryLog, trajectory_header
from .recorder import TelemetryManager
from .csv_export import write_trajectory_csv, read_trajectory_csv, check_trajectory_csv, CheckReport

__all__ = [
    'TelemetryDatabase',
    'LogConfig',
    'LogLevel',
    'TrajectoryLog',
    'trajectory_header',
    'TelemetryManager',
    'write_trajectory_csv',
    'read_trajectory_csv',
    'check_trajectory_csv',
    'CheckReport',
]
