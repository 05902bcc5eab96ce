"""
Telemetry manager: trajectory rows in memory, events batched to SQLite.
"""

from __future__ import annotations

import json
from datetime import datetime
from typing import TYPE_CHECKING, Any, Optional

from .config import LogConfig
from .database import TelemetryDatabase
from .trajectory import TrajectoryLog

if TYPE_CHECKING:
    from bastion_engine.estimator.history import AdmissionDecision

DEFAULT_DB_PATH = "./logs/telemetry.db"


class TelemetryManager:
    """Manages all run telemetry with an optional database backend."""

    def __init__(self, config: LogConfig, trajectory: TrajectoryLog,
                 scenario_name: str = "simulation"):
        """
        Args:
            config: Logging configuration
            trajectory: Log that receives one row per logged step
            scenario_name: Name of the scenario being run
        """
        self.config = config
        self.trajectory = trajectory
        self.scenario_name = scenario_name

        if config.use_database:
            self.db: Optional[TelemetryDatabase] = TelemetryDatabase(config.db_path or DEFAULT_DB_PATH)
        else:
            self.db = None

        self.run_id: Optional[int] = None
        self.start_time = datetime.now()

        # Kept in memory regardless of the database; the run summary reads them
        self.admissions: list[dict[str, Any]] = []
        self.safety_events: list[dict[str, Any]] = []
        self.diagnostics: list[dict[str, Any]] = []

        self._admission_buffer: list = []
        self._safety_buffer: list = []
        self._diagnostic_buffer: list = []

    def start_run(self, mode: str, dt: float, config_hash: str = "",
                  config_dict: Optional[dict] = None):
        if self.db is None:
            return
        self.run_id = self.db.create_run(
            scenario_name=self.scenario_name,
            mode=mode,
            start_time=self.start_time.isoformat(),
            dt=dt,
            config_hash=config_hash,
            config_json=json.dumps(config_dict or {}, sort_keys=True),
        )

    def finalize_run(self, total_steps: int, status: str = "ok"):
        """Finalize the run and flush all buffers."""
        self._flush_all_buffers()
        if self.db and self.run_id:
            self.db.finalize_run(
                run_id=self.run_id,
                end_time=datetime.now().isoformat(),
                total_steps=total_steps,
                status=status,
            )

    def log_admission(self, decision: "AdmissionDecision"):
        """Record a history-stack decision; rejections only at DEBUG level."""
        if decision.admitted:
            if not self.config.log_admissions:
                return
            self.admissions.append({
                "t": decision.t,
                "slot": decision.slot,
                "min_eig": decision.min_eig_after,
                "filling": decision.filling,
            })
        elif not self.config.log_rejections:
            return

        if self.db is not None and self.run_id is not None:
            self._admission_buffer.append((
                self.run_id, decision.t, decision.slot, decision.min_eig_before,
                decision.min_eig_after, int(decision.admitted), int(decision.filling),
            ))
            if len(self._admission_buffer) >= self.config.batch_size:
                self._flush_admissions()

    def log_safety_event(self, t: float, kind: str, h: Optional[float] = None):
        if not self.config.log_safety_events:
            return
        self.safety_events.append({"t": t, "kind": kind, "h": h})
        if self.db is not None and self.run_id is not None:
            self._safety_buffer.append((self.run_id, t, kind, h))
            if len(self._safety_buffer) >= self.config.batch_size:
                self._flush_safety_events()

    def log_diagnostic(self, t: float, name: str, payload: dict[str, Any]):
        if not self.config.log_diagnostics:
            return
        self.diagnostics.append({"t": t, "name": name, **payload})
        if self.db is not None and self.run_id is not None:
            self._diagnostic_buffer.append((self.run_id, t, name, json.dumps(payload, sort_keys=True)))
            if len(self._diagnostic_buffer) >= self.config.batch_size:
                self._flush_diagnostics()

    def _flush_admissions(self):
        if not self._admission_buffer or self.db is None:
            return
        self.db.executemany("""
            INSERT INTO stack_admissions
            (run_id, t, slot, min_eig_before, min_eig_after, accepted, filling)
            VALUES (?, ?, ?, ?, ?, ?, ?)
        """, self._admission_buffer)
        self.db.commit()
        self._admission_buffer.clear()

    def _flush_safety_events(self):
        if not self._safety_buffer or self.db is None:
            return
        self.db.executemany("""
            INSERT INTO safety_events (run_id, t, kind, h) VALUES (?, ?, ?, ?)
        """, self._safety_buffer)
        self.db.commit()
        self._safety_buffer.clear()

    def _flush_diagnostics(self):
        if not self._diagnostic_buffer or self.db is None:
            return
        self.db.executemany("""
            INSERT INTO diagnostics (run_id, t, name, payload) VALUES (?, ?, ?, ?)
        """, self._diagnostic_buffer)
        self.db.commit()
        self._diagnostic_buffer.clear()

    def _flush_all_buffers(self):
        self._flush_admissions()
        self._flush_safety_events()
        self._flush_diagnostics()

    def close(self):
        """Close the telemetry manager and database."""
        self._flush_all_buffers()
        if self.db:
            self.db.close()
            self.db = None

    def __del__(self):
        """Ensure cleanup on deletion."""
        try:
            self.close()
        except Exception:
            pass
