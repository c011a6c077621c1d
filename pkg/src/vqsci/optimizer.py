"""Derivative-free minimizers for exact or shot-noisy energy objectives.

Two methods are provided.  "cobyla" is a linear-approximation trust-region
scheme: it rebuilds a probe simplex of n+1 points around the incumbent each
cycle so the model never degenerates, fits the linear model that
interpolates them, steps from the best vertex to the model's
steepest-descent point at the current radius, and when no step helps it
shrinks the radius (geometric factor 0.4) until the radius drops below the
tolerance.  A noisy objective would let the incumbent ride shot-noise dips,
so every acceptance is gated: a candidate must improve on the incumbent by
three times its own reported standard error, and the incumbent's value is
re-sampled once per cycle so a lucky draw cannot block progress forever.
An exact objective reports zero error and the gates vanish.  Linear models
zigzag across curved valleys, so if the trust-region phase cannot certify
convergence within a third of the evaluation budget, the remaining budget
re-runs the search from the same initial point with the "simplex" scheme, a
reflection/expansion/contraction method with size-adaptive coefficients
whose geometry can stretch along a valley; the trace keeps the best
evaluation from either phase.  "simplex" alone is also selectable.  Both
methods evaluate the caller's starting point first, record every
evaluation, and are deterministic for a deterministic objective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "OptimizerError",
    "OptimizerConfig",
    "OptimizationTrace",
    "minimize",
    "tail_statistics",
]

Objective = Callable[[np.ndarray], tuple[float, float]]

_SHRINK = 0.4
_EXTEND_CAP = 64
_GATE = 3.0  # required improvement, in reported standard errors


class OptimizerError(ValueError):
    """Raised for inconsistent dimensions or exhausted objectives."""


@dataclass(frozen=True)
class OptimizerConfig:
    method: str = "cobyla"
    max_iterations: int = 50_000
    initial_step: float = 0.5
    convergence_tol: float | None = None  # None resolves to 1e-6
    rng_seed: int = 0
    restarts: int = 0

    def __post_init__(self):
        if self.method not in ("cobyla", "simplex"):
            raise OptimizerError(f"unknown method {self.method!r}")
        if self.max_iterations < 1:
            raise OptimizerError("max_iterations must be positive")
        if self.initial_step <= 0:
            raise OptimizerError("initial_step must be positive")
        if self.convergence_tol is not None and self.convergence_tol <= 0:
            raise OptimizerError("convergence_tol must be positive")
        if self.restarts < 0:
            raise OptimizerError("restarts must be nonnegative")

    @property
    def tol(self) -> float:
        return 1e-6 if self.convergence_tol is None else self.convergence_tol


@dataclass
class OptimizationTrace:
    """Every evaluation in order, plus the running best and a converged flag."""

    parameters: list[np.ndarray] = field(default_factory=list)
    energies: list[float] = field(default_factory=list)
    stderrs: list[float] = field(default_factory=list)
    best_parameters: np.ndarray | None = None
    best_energy: float = math.inf
    iterations_used: int = 0
    converged: bool = False


class _Budget(Exception):
    pass


class _Recorder:
    def __init__(self, objective: Objective, budget: int, trace: OptimizationTrace):
        self.objective = objective
        self.budget = budget
        self.trace = trace
        self.last_stderr = 0.0

    def __call__(self, x: np.ndarray) -> float:
        if self.trace.iterations_used >= self.budget:
            raise _Budget
        point = np.array(x, dtype=np.float64, copy=True)
        try:
            energy, stderr = self.objective(point)
        except Exception as exc:
            raise OptimizerError(
                f"objective failed at iteration {self.trace.iterations_used}: {exc}"
            ) from exc
        energy = float(energy)
        t = self.trace
        t.parameters.append(point)
        t.energies.append(energy)
        t.stderrs.append(float(stderr))
        t.iterations_used += 1
        self.last_stderr = float(stderr)
        if energy < t.best_energy:
            t.best_energy = energy
            t.best_parameters = point
        return energy


def _linear_model(points: list[np.ndarray], values: list[float]) -> np.ndarray:
    edges = np.stack([p - points[0] for p in points[1:]])
    deltas = np.asarray(values[1:], dtype=np.float64) - values[0]
    gradient, *_ = np.linalg.lstsq(edges, deltas, rcond=None)
    return gradient


def _axis_probes(fun: _Recorder, center: np.ndarray, center_value: float, rho: float):
    points = [center]
    values = [center_value]
    errors = [0.0]
    for i in range(center.shape[0]):
        probe = center.copy()
        probe[i] += rho
        points.append(probe)
        values.append(fun(probe))
        errors.append(fun.last_stderr)
    return points, values, errors


def _cobyla(fun: _Recorder, start: np.ndarray, step: float, tol: float) -> bool:
    rho = step
    center = np.array(start, dtype=np.float64)
    center_val = fun(center)
    center_err = fun.last_stderr
    while rho > tol:
        if center_err > 0.0:
            # refresh the noisy incumbent so one lucky draw cannot gate out
            # every later candidate; the stale value is replaced, not averaged
            center_val = fun(center)
            center_err = fun.last_stderr
        # fresh probes around the incumbent keep the linear model full rank
        # at the current scale
        points, values, errors = _axis_probes(fun, center, center_val, rho)
        gradient = _linear_model(points, values)
        norm = float(np.linalg.norm(gradient))
        best = int(np.argmin(values))
        moved = False
        if norm > 1e-300:
            direction = -gradient / norm
            trial = points[best] + rho * direction
            f_trial = fun(trial)
            e_trial = fun.last_stderr
            if f_trial + _GATE * e_trial < values[best]:
                moved = True
                # greedy extension: keep marching while each step pays off
                for _ in range(_EXTEND_CAP):
                    nxt = trial + rho * direction
                    f_nxt = fun(nxt)
                    if f_nxt + _GATE * fun.last_stderr >= f_trial:
                        break
                    trial, f_trial, e_trial = nxt, f_nxt, fun.last_stderr
                center, center_val, center_err = trial, f_trial, e_trial
        if not moved:
            if best > 0 and values[best] + _GATE * errors[best] < center_val:
                center, center_val, center_err = points[best], values[best], errors[best]
            rho *= _SHRINK
    return True


def _staged_cobyla(fun: _Recorder, start: np.ndarray, step: float, tol: float) -> bool:
    total = fun.budget
    used = fun.trace.iterations_used
    remaining = total - used
    share = max(start.shape[0] + 2, remaining // 3)
    fun.budget = used + min(share, remaining)
    try:
        finished = _cobyla(fun, start, step, tol)
        fun.budget = total
        return finished
    except _Budget:
        fun.budget = total
        if fun.trace.iterations_used >= total:
            raise
    # the linear model zigzags across curved valleys; when it cannot certify
    # convergence on its share of the budget, spend the rest on the simplex
    # scheme from the same start and keep the best of both
    return _simplex(fun, start, step, tol)


def _simplex(fun: _Recorder, start: np.ndarray, step: float, tol: float) -> bool:
    n = start.shape[0]
    alpha, gamma = 1.0, 1.0 + 2.0 / n
    beta, sigma = 0.75 - 0.5 / n, 1.0 - 1.0 / n
    points = [np.array(start, dtype=np.float64)]
    values = [fun(points[0])]
    for i in range(n):
        probe = points[0].copy()
        probe[i] += step
        points.append(probe)
        values.append(fun(probe))
    while True:
        order = np.argsort(values, kind="stable")
        points = [points[i] for i in order]
        values = [values[i] for i in order]
        size = max(float(np.linalg.norm(p - points[0])) for p in points[1:])
        if size < tol:
            return True
        centroid = np.mean(points[:-1], axis=0)
        reflected = centroid + alpha * (centroid - points[-1])
        f_r = fun(reflected)
        if f_r < values[0]:
            expanded = centroid + gamma * (reflected - centroid)
            f_e = fun(expanded)
            if f_e < f_r:
                points[-1], values[-1] = expanded, f_e
            else:
                points[-1], values[-1] = reflected, f_r
        elif f_r < values[-2]:
            points[-1], values[-1] = reflected, f_r
        else:
            pivot = reflected if f_r < values[-1] else points[-1]
            f_pivot = f_r if f_r < values[-1] else values[-1]
            contracted = centroid + beta * (pivot - centroid)
            f_c = fun(contracted)
            if f_c < f_pivot:
                points[-1], values[-1] = contracted, f_c
            else:
                for i in range(1, n + 1):
                    points[i] = points[0] + sigma * (points[i] - points[0])
                    values[i] = fun(points[i])


def minimize(
    objective: Objective,
    dim: int,
    config: OptimizerConfig,
    initial,
) -> OptimizationTrace:
    """Minimize ``objective`` from ``initial``; every evaluation is recorded.

    The first evaluated point is exactly ``initial``.  Termination happens
    when the working radius (or simplex size) falls below the configured
    tolerance or the evaluation budget runs out; with ``restarts`` > 0 the
    search re-expands from the best point that many extra times.  The
    "cobyla" method hands its remaining budget to a simplex run from the
    same start when its trust-region phase cannot certify convergence within
    a third of the budget; the trace keeps the best point of both phases.
    """
    if dim < 1:
        raise OptimizerError(f"dimension {dim} must be at least 1")
    start = np.asarray(initial, dtype=np.float64)
    if start.shape != (dim,):
        raise OptimizerError(f"initial point shape {start.shape} does not match dim {dim}")
    trace = OptimizationTrace()
    fun = _Recorder(objective, config.max_iterations, trace)
    method = _staged_cobyla if config.method == "cobyla" else _simplex
    finished = False
    try:
        finished = method(fun, start, config.initial_step, config.tol)
        for _ in range(config.restarts):
            finished = method(
                fun, np.asarray(trace.best_parameters), config.initial_step, config.tol
            )
    except _Budget:
        finished = False
    trace.converged = finished
    return trace


def tail_statistics(trace: OptimizationTrace, window: int = 10) -> tuple[float, float]:
    """Mean and population standard deviation of the last ``window`` energies."""
    if not trace.energies:
        raise OptimizerError("empty trace has no tail statistics")
    tail = np.asarray(trace.energies[-window:], dtype=np.float64)
    return float(tail.mean()), float(tail.std(ddof=0))
