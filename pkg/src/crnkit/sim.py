"""Floating-point trajectory integration with first-integral monitoring.

Two integrators are provided: classical fixed-step RK4 and adaptive
Runge-Kutta-Fehlberg 4(5).  When a quadratic invariant is attached, its value
is recorded along the trajectory so conservation drift can be reported.  For
positive-definite diagonal invariants an optional level-set projection
rescales the state back onto the initial level surface after every step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, TextIO

from .poly import PolynomialSystem
from .qfi import QuadraticCandidate

CLAMP_TOLERANCE = 1e-12


class SimulationError(RuntimeError):
    """Integration aborted; carries the last valid time."""

    def __init__(self, message: str, last_time: float):
        super().__init__(f"{message} (last valid time t={last_time:.6g})")
        self.last_time = last_time


@dataclass
class SimConfig:
    """Integration settings.

    method is "rk4_fixed" (uses `step`) or "rkf45_adaptive" (uses
    `tolerance`); `stride` keeps every k-th accepted step in the output;
    projection is "off" or "level_set".
    """

    method: str = "rk4_fixed"
    step: float = 1e-3
    tolerance: float = 1e-9
    t_end: float = 10.0
    stride: int = 1
    projection: str = "off"

    def __post_init__(self):
        if self.method not in ("rk4_fixed", "rkf45_adaptive"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.projection not in ("off", "level_set"):
            raise ValueError(f"unknown projection {self.projection!r}")
        if self.step <= 0 or self.tolerance <= 0 or self.t_end <= 0:
            raise ValueError("step, tolerance and t_end must be positive")
        if self.stride < 1:
            raise ValueError("stride must be at least 1")


@dataclass
class Trajectory:
    """Sampled solution with optional invariant values and positivity log."""

    variables: tuple[str, ...]
    times: list[float]
    states: list[list[float]]
    invariant_values: list[float] | None = None
    positivity_events: list[tuple[float, int, float]] = field(default_factory=list)

    def write_csv(self, stream: TextIO):
        header = ["t"] + list(self.variables)
        if self.invariant_values is not None:
            header.append("V")
        stream.write(",".join(header) + "\n")
        for i, (t, state) in enumerate(zip(self.times, self.states)):
            row = [repr(t)] + [repr(v) for v in state]
            if self.invariant_values is not None:
                row.append(repr(self.invariant_values[i]))
            stream.write(",".join(row) + "\n")

    def to_csv(self) -> str:
        import io

        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def compile_rhs(system: PolynomialSystem) -> Callable[[Sequence[float]], list[float]]:
    """Generate a fast float evaluator for the system's right-hand side."""
    n = system.dim
    exprs = []
    for component in system.components:
        parts = []
        for expts, coeff in component.sorted_terms():
            factors = [repr(float(coeff))]
            for i, e in enumerate(expts):
                if e == 1:
                    factors.append(f"x{i}")
                elif e > 1:
                    factors.append(f"x{i}**{e}")
            parts.append("*".join(factors))
        exprs.append(" + ".join(parts) if parts else "0.0")
    unpack = "; ".join(f"x{i} = state[{i}]" for i in range(n)) or "pass"
    src = f"def _rhs(state):\n    {unpack}\n    return [{', '.join(exprs)}]\n"
    namespace: dict = {}
    exec(src, namespace)  # generated from our own AST; no external input
    return namespace["_rhs"]


def compile_invariant(candidate: QuadraticCandidate) -> Callable[[Sequence[float]], float]:
    q = [[float(v) for v in row] for row in candidate.q]
    linear = [float(v) for v in candidate.linear]
    constant = float(candidate.constant)
    n = candidate.dim

    def value(state: Sequence[float]) -> float:
        total = constant
        for i in range(n):
            xi = state[i]
            total += linear[i] * xi
            for j in range(n):
                total += q[i][j] * xi * state[j]
        return total

    return value


_RKF_A = (
    (),
    (1 / 4,),
    (3 / 32, 9 / 32),
    (1932 / 2197, -7200 / 2197, 7296 / 2197),
    (439 / 216, -8.0, 3680 / 513, -845 / 4104),
    (-8 / 27, 2.0, -3544 / 2565, 1859 / 4104, -11 / 40),
)
_RKF_B4 = (25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -1 / 5, 0.0)
_RKF_B5 = (16 / 135, 0.0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55)


def _rk4_step(rhs, state, h):
    k1 = rhs(state)
    k2 = rhs([x + 0.5 * h * k for x, k in zip(state, k1)])
    k3 = rhs([x + 0.5 * h * k for x, k in zip(state, k2)])
    k4 = rhs([x + h * k for x, k in zip(state, k3)])
    return [
        x + h / 6.0 * (a + 2 * b + 2 * c + d)
        for x, a, b, c, d in zip(state, k1, k2, k3, k4)
    ]


def _rkf45_step(rhs, state, h):
    ks = [rhs(state)]
    for stage in range(1, 6):
        coeffs = _RKF_A[stage]
        probe = [
            x + h * sum(c * ks[i][idx] for i, c in enumerate(coeffs))
            for idx, x in enumerate(state)
        ]
        ks.append(rhs(probe))
    fourth = [
        x + h * sum(b * ks[i][idx] for i, b in enumerate(_RKF_B4))
        for idx, x in enumerate(state)
    ]
    fifth = [
        x + h * sum(b * ks[i][idx] for i, b in enumerate(_RKF_B5))
        for idx, x in enumerate(state)
    ]
    error = max(abs(a - b) for a, b in zip(fourth, fifth))
    return fifth, error


def integrate(
    system: PolynomialSystem,
    x0: Sequence[float],
    config: SimConfig,
    invariant: QuadraticCandidate | None = None,
) -> Trajectory:
    """Integrate x' = f(x) from x0 over [0, t_end].

    States are kept in the closed positive orthant: overshoot below zero by
    at most CLAMP_TOLERANCE is clamped (and logged as a positivity event);
    anything larger aborts with SimulationError, as does a nonfinite state.
    """
    n = system.dim
    if len(x0) != n:
        raise ValueError(f"initial state has length {len(x0)}, expected {n}")
    state = [float(v) for v in x0]
    if any(v < 0 for v in state):
        raise ValueError("initial state must be nonnegative")
    if invariant is not None and invariant.dim != n:
        raise ValueError("invariant dimension does not match system")
    if config.projection == "level_set":
        if invariant is None or invariant.signature() != "positive-definite diagonal":
            raise ValueError(
                "level-set projection needs a positive-definite diagonal invariant"
            )

    rhs = compile_rhs(system)
    v_func = compile_invariant(invariant) if invariant is not None else None
    v0 = v_func(state) if v_func is not None else None

    traj = Trajectory(
        variables=system.variables,
        times=[0.0],
        states=[list(state)],
        invariant_values=[v0] if v_func is not None else None,
    )

    def check_state(new_state: list[float], t_new: float, t_old: float) -> list[float]:
        for value in new_state:
            if not math.isfinite(value):
                raise SimulationError("state became nonfinite (blow-up)", t_old)
        adjusted = list(new_state)
        for i, value in enumerate(adjusted):
            if value < 0:
                if value < -CLAMP_TOLERANCE:
                    raise SimulationError(
                        f"component {system.variables[i]} went negative ({value:.3e})",
                        t_old,
                    )
                traj.positivity_events.append((t_new, i, value))
                adjusted[i] = 0.0
        return adjusted

    def project(new_state: list[float]) -> list[float]:
        if config.projection != "level_set" or v0 is None or v0 <= 0:
            return new_state
        current = v_func(new_state)
        if current <= 0:
            return new_state
        scale = math.sqrt(v0 / current)
        return [scale * v for v in new_state]

    def record(t: float, accepted_steps: int, final: bool):
        if final or accepted_steps % config.stride == 0:
            if final and traj.times and traj.times[-1] == t:
                return
            traj.times.append(t)
            traj.states.append(list(state))
            if v_func is not None:
                traj.invariant_values.append(v_func(state))

    t = 0.0
    accepted = 0
    t_end = config.t_end
    eps = 1e-12 * max(1.0, t_end)

    if config.method == "rk4_fixed":
        h = config.step
        while t < t_end - eps:
            step_h = min(h, t_end - t)
            try:
                new_state = _rk4_step(rhs, state, step_h)
            except OverflowError:
                raise SimulationError("state became nonfinite (blow-up)", t) from None
            new_t = t + step_h
            state = project(check_state(new_state, new_t, t))
            t = new_t
            accepted += 1
            record(t, accepted, final=t >= t_end - eps)
    else:
        h = min(config.step, t_end)
        h_min = 1e-12 * t_end
        while t < t_end - eps:
            step_h = min(h, t_end - t)
            try:
                new_state, error = _rkf45_step(rhs, state, step_h)
            except OverflowError:
                raise SimulationError("state became nonfinite (blow-up)", t) from None
            scale = config.tolerance * max(
                1.0, max((abs(v) for v in state), default=1.0)
            )
            if error <= scale or step_h <= h_min:
                new_t = t + step_h
                state = project(check_state(new_state, new_t, t))
                t = new_t
                accepted += 1
                record(t, accepted, final=t >= t_end - eps)
            if error > 0:
                factor = 0.9 * (scale / error) ** 0.2
                h = step_h * min(5.0, max(0.2, factor))
            else:
                h = step_h * 5.0
            if h < h_min:
                raise SimulationError("step size underflow", t)
    return traj


def drift_report(trajectory: Trajectory) -> dict:
    """Summarize invariant drift: max and final deviation from the start."""
    if trajectory.invariant_values is None:
        raise ValueError("trajectory has no invariant attached")
    v0 = trajectory.invariant_values[0]
    drifts = [abs(v - v0) for v in trajectory.invariant_values]
    return {
        "max_abs_drift": max(drifts),
        "final_drift": trajectory.invariant_values[-1] - v0,
        "positivity_events": len(trajectory.positivity_events),
    }
