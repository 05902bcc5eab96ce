"""
Closed-loop simulation: plant, barrier state, observer, estimator and
actor-critic integrated jointly with fixed-step RK4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .adp.approximation import (
    ActorState, CriticState, ExtrapolatedBellman, bellman_terms, hjb_residual,
)
from .adp.grid import GridTerms, control_metric, prepare_grid
from .adp.update_laws import UpsilonClamp, actor_deriv, critic_deriv, upsilon_deriv
from .core.state import LoopState, StateLayout
from .errors import BarrierDomainError, SafetyViolationError, UnsafeStateError
from .estimator.history import HistoryStack, WindowBuffer
from .estimator.icl import EstimatorState, gamma_deriv, observer_deriv, theta_deriv
from .model.barrier import augment
from .model.dynamics import plant_deriv
from .problem import Problem
from .systems import (
    CaptureSystem, IntegrationSystem, LoggingSystem, MonitorSystem, ProjectionSystem,
    SafetySystem, SamplingSystem, System,
)

# Telemetry
from telemetry import LogConfig, TelemetryManager, TrajectoryLog


@dataclass
class StageTerms:
    """Everything one derivative evaluation computes, kept for logging."""
    s: np.ndarray
    u: np.ndarray
    delta: float
    omega: np.ndarray
    rho: float
    extrapolated: ExtrapolatedBellman
    cost: float


@dataclass
class LoopContext:
    """Data frozen for the duration of one RK4 step."""
    problem: Problem
    layout: StateLayout
    stack: HistoryStack
    grid_terms: GridTerms
    clamp: UpsilonClamp = field(default_factory=UpsilonClamp)


def evaluate(y: np.ndarray, ctx: LoopContext) -> tuple[np.ndarray, StageTerms]:
    """
    One consistent derivative evaluation of the whole bundle.

    The control is computed once and shared by the plant, the barrier state,
    the observer and every learner.
    """
    pb = ctx.problem
    layout = ctx.layout
    st = layout.unpack(y)
    s = layout.s(st)

    A, F, G = pb.dynamics.maps(s)
    grad = pb.basis.grad(s)
    cost_s = float(s @ pb.Q @ s)
    delta, omega, rho, u = bellman_terms(
        grad, st.W_c, st.W_a, A, F, G, st.theta_hat, pb.R, pb.adp.nu, cost_s,
    )
    delta, rho = float(delta), float(rho)

    dy = np.zeros_like(y)
    dy[layout.slices["x"]] = plant_deriv(pb.model, st.x, u)

    est = EstimatorState(theta_hat=st.theta_hat, Gamma=st.Gamma, z_hat=st.z_hat)
    if layout.with_barrier:
        z_dot = float(A[-1] @ pb.model.theta_true + F[-1] + G[-1] @ u)
        z_hat_dot = observer_deriv(est, st.x, st.z, u, pb.model, pb.spec, pb.icl.gamma_obs,
                                   maps=(A, F, G))
        dy[layout.slices["bas"]] = (z_dot, z_hat_dot)
        theta_dot, phi = theta_deriv(est, ctx.stack, pb.icl, z=st.z, barrier_row=A[-1])
    else:
        theta_dot, phi = theta_deriv(est, ctx.stack, pb.icl)
    dy[layout.slices["theta_hat"]] = theta_dot
    dy[layout.slices["Gamma"]] = gamma_deriv(est, ctx.stack, phi, pb.icl).reshape(-1)

    gt = ctx.grid_terms
    deltas, omegas, rhos, _ = bellman_terms(
        gt.grad, st.W_c, st.W_a, gt.A, gt.F, gt.G, st.theta_hat, pb.R, pb.adp.nu, gt.state_cost,
    )
    ext = ExtrapolatedBellman(deltas=deltas, omegas=omegas, rhos=rhos, G_sigmas=gt.G_sigma)

    critic = CriticState(W_c_hat=st.W_c, Upsilon=st.Upsilon)
    actor = ActorState(W_a_hat=st.W_a)
    dy[layout.slices["W_c"]] = critic_deriv(critic, delta, omega, rho, ext, pb.adp)
    dy[layout.slices["Upsilon"]] = upsilon_deriv(critic, omega, rho, ext, pb.adp, ctx.clamp).reshape(-1)
    G_sigma = control_metric(grad, G, pb.R)
    dy[layout.slices["W_a"]] = actor_deriv(actor, critic, omega, rho, G_sigma, ext, pb.adp)

    terms = StageTerms(
        s=s, u=u, delta=delta, omega=omega, rho=rho, extrapolated=ext,
        cost=cost_s + float(u @ pb.R @ u),
    )
    return dy, terms


def closed_loop_deriv(t: float, y: np.ndarray, ctx: LoopContext) -> np.ndarray:
    """Derivative of the full bundle (time-invariant; ``t`` is carried for RK4)."""
    dy, _ = evaluate(y, ctx)
    return dy


@dataclass
class RunResult:
    log: TrajectoryLog
    summary: dict[str, Any]
    stack: HistoryStack
    final: LoopState


class Simulation:
    """Main simulation class coordinating the per-step systems."""

    def __init__(self, problem: Problem, log_config: Optional[LogConfig] = None,
                 config_dict: Optional[dict] = None, config_hash: str = ""):
        """
        Initialize the closed loop from a resolved problem.

        Args:
            problem: Components, gains and initial values (see scenarios.factory)
            log_config: Telemetry configuration (optional)
            config_dict: Resolved scenario, stored with the run when a database is used
            config_hash: Content hash of the resolved scenario
        """
        self.problem = problem
        self.config_hash = config_hash
        model = problem.model

        self.layout = StateLayout(model.n, model.p, problem.basis.L, problem.with_barrier)
        self.stack = HistoryStack(problem.stack_capacity, model.p, problem.delta, problem.icl.kappa)
        self.window = WindowBuffer(problem.window, problem.dt)
        self.grid_terms = prepare_grid(problem.grid, problem.dynamics, problem.basis, problem.Q, problem.R)
        self.ctx = LoopContext(problem=problem, layout=self.layout, stack=self.stack,
                               grid_terms=self.grid_terms)

        z0 = 0.0
        if problem.with_barrier:
            try:
                z0 = augment(problem.spec, problem.x0).z
            except UnsafeStateError as e:
                raise ValueError(f"x0 must be strictly safe in bas-rl mode, h(x0)={e.h:.6g}")
        initial = LoopState(
            x=problem.x0.copy(),
            z=z0,
            z_hat=problem.z_hat0 if problem.with_barrier else 0.0,
            theta_hat=problem.theta0.copy(),
            Gamma=problem.Gamma0.copy(),
            W_c=problem.W_c0.copy(),
            Upsilon=problem.Upsilon0.copy(),
            W_a=problem.W_a0.copy(),
        )
        self.y = self.layout.pack(initial)
        self.step_index = 0
        self.capture_every = max(1, int(round(problem.capture_interval / problem.dt)))
        self.terms: Optional[StageTerms] = None

        # Running quantities read by the summary
        self.J = 0.0
        self.min_h = float("inf")
        self.argmin_t = 0.0
        self.h_prev: Optional[float] = None
        self.incursions = 0
        self.projection_clamps = 0
        self.growth_suspended_steps = 0
        self.shrink_suspended_steps = 0
        self.outside_omega_steps = 0
        self.gamma_min = float("inf")
        self.gamma_max = 0.0
        self.sigmin_grid = 0.0
        self.sigmin_grid_inf = float("inf")
        self.sigmin_grid_inf_learning = float("inf")
        self.learning_from: Optional[float] = None
        self.normalized_regressor_max = 0.0
        self.cone_error_max = 0.0
        self.gain_report = None
        self.theta_err_initial = float(np.linalg.norm(problem.theta0 - model.theta_true))

        self.monitor = MonitorSystem()
        self.recorder = LoggingSystem()
        self.safety = SafetySystem()
        self.systems: list[System] = [
            SamplingSystem(),
            CaptureSystem(),
            self.monitor,
            self.recorder,
            IntegrationSystem(),
            ProjectionSystem(),
            self.safety,
        ]

        if log_config is None:
            log_config = LogConfig.standard()
        trajectory = TrajectoryLog(model.n, model.p, problem.basis.L, model.m,
                                   dt_row=problem.dt * problem.log_every)
        self.telemetry = TelemetryManager(log_config, trajectory, scenario_name=problem.name)
        self.telemetry.start_run(
            mode="bas-rl" if problem.with_barrier else "no-safety",
            dt=problem.dt,
            config_hash=config_hash,
            config_dict=config_dict,
        )
        self.safety.execute(self)

    @property
    def t(self) -> float:
        return self.step_index * self.problem.dt

    @property
    def state(self) -> LoopState:
        return self.layout.unpack(self.y)

    @property
    def log(self) -> TrajectoryLog:
        return self.telemetry.trajectory

    def evaluate_now(self) -> StageTerms:
        """Stage terms at the current step boundary."""
        try:
            _, terms = evaluate(self.y, self.ctx)
        except (BarrierDomainError, UnsafeStateError):
            raise SafetyViolationError(self.t, self.h_now())
        return terms

    def h_now(self) -> float:
        return float(self.problem.constraint.h(self.state.x))

    def run(self) -> RunResult:
        """Integrate over [0, duration] and log the final boundary."""
        status = "ok"
        try:
            for _ in range(self.problem.steps):
                self.step()
            self.terms = self.evaluate_now()
            self.monitor.execute(self)
            self.recorder.execute(self)
            self.monitor.check_gains(self)
        except SafetyViolationError:
            status = "safety_violation"
            raise
        except Exception:
            status = "error"
            raise
        finally:
            self.telemetry.finalize_run(self.step_index, status=status)
        return RunResult(log=self.log, summary=self.summary(), stack=self.stack, final=self.state)

    def step(self):
        """
        Advance one step of dt.

        Step order:
        1. Sampling -> 2. Capture/admission -> 3. Monitors -> 4. Logging ->
        5. RK4 integration -> 6. Projection clamp -> 7. Safety check
        """
        self.terms = self.evaluate_now()
        for system in self.systems:
            system.execute(self)

    def summary(self) -> dict[str, Any]:
        from .metrics import compute_metrics

        pb = self.problem
        st = self.state
        metrics = compute_metrics(self.log, chi=pb.chi)

        grid_residual = hjb_residual(pb.basis, st.W_c, pb.grid.points, st.theta_hat, pb.dynamics, pb.Q, pb.R)
        try:
            final_residual = float(
                hjb_residual(pb.basis, st.W_c, self.layout.s(st), st.theta_hat, pb.dynamics, pb.Q, pb.R)
            )
        except (BarrierDomainError, UnsafeStateError):
            # Final state left the barrier domain (aborted run)
            final_residual = None

        metrics.update({
            "scenario": pb.name,
            "mode": "bas-rl" if pb.with_barrier else "no-safety",
            "config_hash": self.config_hash,
            "steps": self.step_index,
            "dt": pb.dt,
            "min_h_all_steps": self.min_h,
            "argmin_t_all_steps": self.argmin_t,
            "incursions": self.incursions,
            "theta_err_initial": self.theta_err_initial,
            "theta_final": st.theta_hat.tolist(),
            "W_c_final": st.W_c.tolist(),
            "W_a_final": st.W_a.tolist(),
            "weight_gap": float(np.linalg.norm(st.W_a - st.W_c)),
            "gamma_bounds": {"min_eig": self.gamma_min, "max_eig": self.gamma_max},
            "upsilon_clamp": {
                "growth_suspended_steps": self.growth_suspended_steps,
                "shrink_suspended_steps": self.shrink_suspended_steps,
            },
            "projection_clamps": self.projection_clamps,
            "normalized_regressor_max": self.normalized_regressor_max,
            "normalized_regressor_bound": 1.0 / (2.0 * np.sqrt(pb.adp.nu)),
            "sigmin_grid_inf_learning": (
                self.sigmin_grid_inf_learning if math.isfinite(self.sigmin_grid_inf_learning) else None
            ),
            "learning_from": self.learning_from,
            "outside_omega_fraction": self.outside_omega_steps / max(1, self.step_index + 1),
            "hjb_residual_final": final_residual,
            "hjb_residual_grid_rms": float(np.sqrt(np.mean(grid_residual ** 2))),
            "gain_condition": (
                self.gain_report.to_dict() if self.gain_report is not None
                else {"applicable": False, "message": "not yet applicable"}
            ),
            "stack_trace": list(self.telemetry.admissions),
            "stack_snapshot": self.stack.snapshot(),
            "safety_events": list(self.telemetry.safety_events),
        })
        if pb.with_barrier:
            metrics["cone_error_max"] = self.cone_error_max
        return metrics

    def close(self):
        """Close telemetry and release resources."""
        if self.telemetry:
            self.telemetry.close()


def run_scenario(config, log_config: Optional[LogConfig] = None) -> RunResult:
    """
    Build and run a scenario.

    Args:
        config: ScenarioConfig (validated) or an already resolved Problem
    """
    if isinstance(config, Problem):
        problem, config_dict, digest = config, None, ""
    else:
        from scenarios.factory import build_problem
        problem, config_dict, digest = build_problem(config), config.to_dict(), config.config_hash()

    sim = Simulation(problem, log_config=log_config, config_dict=config_dict, config_hash=digest)
    try:
        return sim.run()
    finally:
        sim.close()
