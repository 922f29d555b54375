import csv
import itertools
import time
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np
from loguru import logger

from app.core.config import settings
from app.models.bench import DivergenceWitness, ExperimentRow
from app.models.qbaf import Argument, Qbaf
from app.models.semantics import Family, SemanticsSpec
from app.models.solve import SolveConfig, SolveMode, SolveStatus
from app.services.engine import solve, solve_acyclic, solve_continuous, solve_iterative
from app.services.generators import (
    GOAL,
    augment_ladder,
    derive_seed,
    gen_ladder,
    gen_random_acyclic,
    gen_random_cyclic,
)
from app.services.qbaf_service import analyze_graph

CSV_HEADER = ("framework_id", "semantics", "q", "gamma", "n", "metric", "value", "runtime_ms")

DEFAULT_GAMMAS = tuple(np.arange(0.0, 3.0 + 1e-9, 0.25).round(2).tolist())
DISTANCE_SIZES = (1, 2, 5, 10, 20, 50, 100)
# a desk-sized subset of the 100..3000 benchmark; cyclic generators need n >= 2
RUNTIME_SIZES = (100, 300, 1000)


def _row(framework_id: str, spec: SemanticsSpec, n: int, metric: str, value: float, runtime_ms: float = 0.0):
    drl = spec.family in (Family.DRL, Family.DDRL)
    return ExperimentRow(
        framework_id=framework_id,
        semantics=spec.family.value,
        q=spec.q.value if spec.uses_delta else None,
        gamma=spec.gamma if drl else None,
        n=n,
        metric=metric,
        value=value,
        runtime_ms=runtime_ms,
    )


def bench_config() -> SolveConfig:
    return SolveConfig(
        mode=SolveMode.DISCRETE, epsilon=settings.BENCH_EPSILON, max_iter=settings.BENCH_MAX_ITER
    )


def exp_distance_vs_n(
    specs: Sequence[SemanticsSpec],
    ns: Sequence[int],
    per_n: int,
    seed: int,
    unit_strengths: bool = False,
    timing: bool = False,
) -> list[ExperimentRow]:
    """Mean |rho(g) - tau(g)| on goal-ladders, each ladder grown by augmentation so tau values nest across n."""
    sizes = sorted(set(ns))
    if not sizes or not specs:
        return []
    distances = {(n, i): [] for n in sizes for i in range(len(specs))}
    runtimes = {(n, i): [] for n in sizes for i in range(len(specs))}

    for sample in range(per_n):
        sample_seed = derive_seed(seed, sample)
        ladder = gen_ladder(sizes[0], sample_seed, unit_strengths)
        current = sizes[0]
        for n in sizes:
            while current < n:
                ladder = augment_ladder(ladder, sample_seed, unit_strengths)
                current += 1
            tau_g = ladder.tau(GOAL)
            for i, spec in enumerate(specs):
                started = time.perf_counter()
                rho_g = solve_acyclic(ladder, spec)[GOAL]
                runtimes[n, i].append((time.perf_counter() - started) * 1000.0)
                distances[n, i].append(abs(rho_g - tau_g))

    rows = []
    for n in sizes:
        for i, spec in enumerate(specs):
            rows.append(
                _row(
                    f"ladder-n{n}",
                    spec,
                    n,
                    "mean_abs_distance",
                    float(np.mean(distances[n, i])) if per_n else 0.0,
                    float(np.mean(runtimes[n, i])) if timing and per_n else 0.0,
                )
            )
    logger.info(f"Distance experiment: {len(rows)} rows over {per_n} ladders per size")
    return rows


def gamma_dataset(dataset: str, count: int, seed: int) -> list[Qbaf]:
    if dataset == "ladders":
        return [gen_ladder(i, derive_seed(seed, i)) for i in range(count)]
    if dataset == "random_acyclic":
        return [gen_random_acyclic(derive_seed(seed, i)) for i in range(count)]
    raise ValueError(f"unknown dataset '{dataset}', expected 'ladders' or 'random_acyclic'")


def exp_gamma_sweep(
    family: Family | str,
    dataset: str,
    seed: int,
    gammas: Sequence[float] = DEFAULT_GAMMAS,
    count: int = 20,
    q: str = "sum",
    timing: bool = False,
) -> list[ExperimentRow]:
    """Mean |rho(x) - tau(x)| over every argument of the dataset, per gamma."""
    family = Family(family)
    if family not in (Family.DRL, Family.DDRL):
        raise ValueError(f"gamma sweeps apply to drl and ddrl, not {family.value}")
    frameworks = gamma_dataset(dataset, count, seed)
    total_arguments = sum(f.size for f in frameworks)

    rows = []
    for gamma in gammas:
        spec = SemanticsSpec(family=family, q=q, gamma=gamma)
        started = time.perf_counter()
        distance = 0.0
        for framework in frameworks:
            rho = solve_acyclic(framework, spec)
            distance += sum(abs(rho[a] - framework.tau(a)) for a in framework.ids)
        elapsed = (time.perf_counter() - started) * 1000.0
        rows.append(
            _row(
                dataset,
                spec,
                total_arguments,
                "mean_abs_distance",
                distance / total_arguments if total_arguments else 0.0,
                elapsed if timing else 0.0,
            )
        )
    return rows


def exp_runtime_convergence(
    sizes: Sequence[int],
    per_size: int,
    specs: Sequence[SemanticsSpec],
    seed: int,
    cfg: SolveConfig | None = None,
    mean_degree: float = 1.0,
) -> list[ExperimentRow]:
    """Convergence rate and runtime of discrete iteration on random cyclic frameworks."""
    cfg = cfg or bench_config()
    rows = []
    for n in sizes:
        density = min(1.0, mean_degree / max(n - 1, 1))
        frameworks = [gen_random_cyclic(n, density, derive_seed(seed, n, i)) for i in range(per_size)]
        for spec in specs:
            converged, iterations, runtimes = 0, [], []
            for framework in frameworks:
                started = time.perf_counter()
                result = solve(framework, spec, cfg)
                elapsed = (time.perf_counter() - started) * 1000.0
                converged += result.converged
                iterations.append(result.iterations)
                runtimes.append(elapsed)
            total_ms = float(np.sum(runtimes))
            total_iterations = int(np.sum(iterations))
            framework_id = f"random_cyclic-n{n}"
            rows += [
                _row(framework_id, spec, n, "converged_fraction", converged / per_size if per_size else 0.0),
                _row(framework_id, spec, n, "mean_iterations", float(np.mean(iterations)) if per_size else 0.0),
                _row(
                    framework_id,
                    spec,
                    n,
                    "ms_per_iteration",
                    total_ms / total_iterations if total_iterations else 0.0,
                    float(np.mean(runtimes)) if per_size else 0.0,
                ),
            ]
            logger.info(f"{spec} on n={n}: {converged}/{per_size} converged")
    return rows


def _topologies(n: int) -> Iterable[tuple[tuple, tuple]]:
    pairs = [(f"x{i}", f"x{j}") for i in range(n) for j in range(n)]
    for labels in itertools.product((None, "attack", "support"), repeat=len(pairs)):
        attacks = tuple(p for p, label in zip(pairs, labels) if label == "attack")
        supports = tuple(p for p, label in zip(pairs, labels) if label == "support")
        yield attacks, supports


def search_divergence_witness(
    spec: SemanticsSpec | None = None,
    max_arguments: int = 4,
    taus: Sequence[float] = (0.0, 0.5, 1.0),
    max_iter: int = 200,
) -> DivergenceWitness | None:
    """First cyclic framework, by size, on which discrete iteration oscillates but continuous smooth-clamp mode converges."""
    spec = spec or SemanticsSpec(family=Family.DRL, gamma=1.0)
    discrete_cfg = SolveConfig(mode=SolveMode.DISCRETE, epsilon=settings.SOLVER_EPSILON, max_iter=max_iter)
    continuous_cfg = SolveConfig(mode=SolveMode.CONTINUOUS)
    smooth = spec.model_copy(update={"family": Family.DDRL})

    for n in range(1, max_arguments + 1):
        ids = [f"x{i}" for i in range(n)]
        for attacks, supports in _topologies(n):
            if not attacks and not supports:
                continue
            shape = Qbaf(arguments=tuple(Argument(id=a, tau=0.0) for a in ids), attacks=attacks, supports=supports)
            if analyze_graph(shape).acyclic:
                continue
            for values in itertools.product(taus, repeat=n):
                q = Qbaf(
                    arguments=tuple(Argument(id=a, tau=t) for a, t in zip(ids, values)),
                    attacks=attacks,
                    supports=supports,
                )
                discrete = solve_iterative(q, spec, discrete_cfg)
                if discrete.status is not SolveStatus.OSCILLATION_DETECTED:
                    continue
                continuous = solve_continuous(q, smooth, continuous_cfg)
                if continuous.converged:
                    logger.info(f"Divergence witness with {n} arguments: discrete {discrete.status.value}")
                    return DivergenceWitness(framework=q, discrete=discrete, continuous=continuous)
    logger.warning(f"No divergence witness with at most {max_arguments} arguments")
    return None


def write_rows_csv(rows: Sequence[ExperimentRow], out: TextIO | str | Path) -> None:
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8", newline="") as handle:
            write_rows_csv(rows, handle)
        return
    fmt = settings.CSV_FLOAT_FORMAT
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(
            [
                row.framework_id,
                row.semantics,
                row.q or "",
                "" if row.gamma is None else format(row.gamma, fmt),
                row.n,
                row.metric,
                format(row.value, fmt),
                format(row.runtime_ms, fmt),
            ]
        )
