import csv
import math
from collections import deque
from pathlib import Path
from typing import Callable, Sequence, TextIO

import numpy as np
from loguru import logger

from app.core.config import settings
from app.core.errors import CyclicFrameworkError
from app.models.qbaf import Qbaf, StrengthVector
from app.models.semantics import Aggregation, SemanticsSpec
from app.models.solve import SolveConfig, SolveMode, SolveResult, SolveStatus
from app.services.qbaf_service import analyze_graph
from app.services.semantics import CompiledQbaf, update, update_all

Step = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _forward_pass(q: Qbaf, spec: SemanticsSpec, order: Sequence[str]) -> StrengthVector:
    strengths: StrengthVector = {}
    for a in order:
        strengths[a] = update(spec, q, strengths, a)
    return {a: strengths[a] for a in q.ids}


def solve_acyclic(q: Qbaf, spec: SemanticsSpec) -> StrengthVector:
    """Single forward pass in topological order; the result is the unique fixed point."""
    info = analyze_graph(q)
    if not info.acyclic:
        logger.error(f"Forward pass requested on a cyclic framework ({q.size} arguments)")
        raise CyclicFrameworkError("framework contains a cycle; use iterative or continuous mode")
    return _forward_pass(q, spec, info.topo_order)


def settle_acyclic(spec: SemanticsSpec, compiled: CompiledQbaf) -> np.ndarray:
    """Strengths of an acyclic index-array framework by synchronous sweeps from tau.

    Each sweep fixes one more level of the graph, so a framework of depth L is
    exact after L + 1 sweeps; one more sweep confirms it bit for bit.
    """
    current = compiled.tau
    for _ in range(compiled.size + 1):
        following = update_all(spec, compiled, current)
        if np.array_equal(following, current):
            return following
        current = following
    raise CyclicFrameworkError("framework contains a cycle; use iterative or continuous mode")


def detect_oscillation(trajectory: Sequence, tol: float, min_period: int = 1) -> int | None:
    """Smallest period p whose repetition holds over the last 3p steps within tol (max-norm)."""
    if not trajectory:
        raise ValueError("trajectory must not be empty")
    if tol <= 0:
        raise ValueError("tol must be positive")
    vectors = [np.fromiter(v.values(), dtype=float) if isinstance(v, dict) else np.asarray(v, dtype=float) for v in trajectory]
    n = len(vectors)
    for p in range(min_period, n // 4 + 1):
        if all(
            np.max(np.abs(vectors[t] - vectors[t - p]), initial=0.0) <= tol
            for t in range(n - 1, n - 1 - 3 * p, -1)
        ):
            return p
    return None


def _run(q: Qbaf, spec: SemanticsSpec, cfg: SolveConfig, step: Step, h: float = 1.0) -> SolveResult:
    compiled = CompiledQbaf.from_qbaf(q)
    # an unconverged run moves at least h * epsilon per step; repeats must be tighter than that
    oscillation_tol = min(cfg.oscillation_tol, 0.1 * h * cfg.epsilon)
    current = compiled.tau.copy()
    window: deque[np.ndarray] = deque([current], maxlen=cfg.oscillation_window)
    trajectory = [current] if cfg.record_trajectory else None

    status = SolveStatus.MAX_ITER_EXCEEDED
    residual = math.inf
    period = None
    iterations = 0
    for iterations in range(1, cfg.max_iter + 1):
        target = update_all(spec, compiled, current)
        residual = float(np.max(np.abs(target - current), initial=0.0))
        current = step(current, target)
        window.append(current)
        if trajectory is not None:
            trajectory.append(current)
        if residual < cfg.epsilon:
            status = SolveStatus.CONVERGED
            break
        # period 1 within tol < epsilon is convergence, handled above
        period = detect_oscillation(window, oscillation_tol, min_period=2)
        if period is not None:
            status = SolveStatus.OSCILLATION_DETECTED
            break

    if status is SolveStatus.CONVERGED:
        logger.info(f"{spec} converged after {iterations} iterations (residual={residual:.3g})")
    else:
        logger.warning(f"{spec} stopped with {status.value} after {iterations} iterations (residual={residual:.3g})")
    return SolveResult(
        strengths=compiled.vector(current),
        status=status,
        iterations=iterations,
        residual=residual,
        trajectory=[compiled.vector(v) for v in trajectory] if trajectory is not None else None,
        oscillation_period=period,
    )


def solve_iterative(q: Qbaf, spec: SemanticsSpec, cfg: SolveConfig | None = None) -> SolveResult:
    """Synchronous (Jacobi) iteration from rho^0 = tau."""
    return _run(q, spec, cfg or SolveConfig(mode=SolveMode.DISCRETE), lambda current, target: target)


def solve_continuous(q: Qbaf, spec: SemanticsSpec, cfg: SolveConfig | None = None) -> SolveResult:
    """Explicit Euler integration of d(rho)/dt = update(rho) - rho."""
    cfg = cfg or SolveConfig(mode=SolveMode.CONTINUOUS)
    h = cfg.step_h
    if h == 1.0:
        return _run(q, spec, cfg, lambda current, target: target)
    return _run(q, spec, cfg, lambda current, target: current + h * (target - current), h)


def solve(q: Qbaf, spec: SemanticsSpec, cfg: SolveConfig | None = None) -> SolveResult:
    cfg = cfg or SolveConfig()
    if cfg.mode is SolveMode.CONTINUOUS:
        return solve_continuous(q, spec, cfg)
    if cfg.mode is SolveMode.ACYCLIC_AUTO:
        info = analyze_graph(q)
        if info.acyclic:
            strengths = _forward_pass(q, spec, info.topo_order)
            logger.info(f"{spec} evaluated by forward pass over {q.size} arguments")
            return SolveResult(
                strengths=strengths,
                status=SolveStatus.CONVERGED,
                iterations=1,
                residual=0.0,
                trajectory=[q.taus, strengths] if cfg.record_trajectory else None,
            )
    return solve_iterative(q, spec, cfg)


def convergence_bound(q: Qbaf, qsel: Aggregation | str) -> float:
    """Sufficient upper bound on gamma for smooth-clamp convergence: 2/(3d) for sum, 1/d for max."""
    d = analyze_graph(q).max_in_degree
    if d == 0:
        return math.inf
    return 2.0 / (3.0 * d) if Aggregation(qsel) is Aggregation.SUM else 1.0 / d


def write_trajectory_csv(result: SolveResult, ids: Sequence[str], out: TextIO | str | Path) -> None:
    if result.trajectory is None:
        raise ValueError("result carries no trajectory; solve with record_trajectory=True")
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8", newline="") as handle:
            write_trajectory_csv(result, ids, handle)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["iteration", *ids])
    for i, vector in enumerate(result.trajectory):
        writer.writerow([i, *(format(vector[a], settings.CSV_FLOAT_FORMAT) for a in ids)])
