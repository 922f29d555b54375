"""Seeded framework generators.

All randomness comes from numpy's Philox counter-based bit generator keyed by a
``SeedSequence``; child streams are derived with ``spawn_key`` so every output is a
pure function of its parameters and seed on every platform.
"""

import numpy as np
from loguru import logger

from app.core.config import settings
from app.models.bench import GenKind, GenParams
from app.models.qbaf import Argument, Qbaf

GOAL = "g"


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=stream)))


def derive_seed(seed: int, *stream: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=stream).generate_state(1, dtype=np.uint64)[0])


def _ladder_qbaf(tau_g: float, attackers: list[float], supporters: list[float]) -> Qbaf:
    attacker_ids = [f"a{i + 1}" for i in range(len(attackers))]
    supporter_ids = [f"s{i + 1}" for i in range(len(supporters))]
    return Qbaf(
        arguments=(
            Argument(id=GOAL, tau=tau_g),
            *(Argument(id=a, tau=t) for a, t in zip(attacker_ids, attackers)),
            *(Argument(id=s, tau=t) for s, t in zip(supporter_ids, supporters)),
        ),
        attacks=tuple((a, GOAL) for a in attacker_ids),
        supports=tuple((s, GOAL) for s in supporter_ids),
    )


def gen_ladder(n: int, seed: int, unit_strengths: bool = False) -> Qbaf:
    """Goal g with n + 2 unattacked attackers and n unattacked supporters, sum(att) - sum(sup) = 2."""
    if n < 0:
        raise ValueError(f"ladder size must be non-negative, got {n}")
    if unit_strengths:
        return _ladder_qbaf(1.0, [1.0] * (n + 2), [1.0] * n)

    rng = rng_for(seed)
    tau_g = float(rng.random())
    for _ in range(settings.LADDER_MAX_RESAMPLES):
        supporters = rng.random(n)
        target = float(supporters.sum()) + 2.0
        attackers = rng.random(n + 2)
        attackers *= target / attackers.sum()
        if attackers.max() <= 1.0:
            break
    else:
        logger.warning(
            f"Ladder n={n} seed={seed}: attacker rescaling infeasible after "
            f"{settings.LADDER_MAX_RESAMPLES} resamples, using uniform attackers"
        )
        attackers = np.full(n + 2, target / (n + 2))
    return _ladder_qbaf(tau_g, attackers.tolist(), supporters.tolist())


def augment_ladder(ladder: Qbaf, seed: int, unit_strengths: bool = False) -> Qbaf:
    """Add one supporter and one attacker of equal tau; existing tau values are untouched."""
    attackers, supporters = ladder.attackers(GOAL), ladder.supporters(GOAL)
    tau = 1.0 if unit_strengths else float(rng_for(seed, len(supporters) + 1).random())
    supporter_id, attacker_id = f"s{len(supporters) + 1}", f"a{len(attackers) + 1}"
    return Qbaf(
        arguments=(*ladder.arguments, Argument(id=supporter_id, tau=tau), Argument(id=attacker_id, tau=tau)),
        attacks=(*ladder.attacks, (attacker_id, GOAL)),
        supports=(*ladder.supports, (supporter_id, GOAL)),
    )


def _build(n: int, sources, targets, is_attack, taus) -> Qbaf:
    ids = [f"a{i}" for i in range(n)]
    attacks, supports = [], []
    for s, t, attack in zip(sources.tolist(), targets.tolist(), is_attack.tolist()):
        (attacks if attack else supports).append((ids[s], ids[t]))
    return Qbaf(
        arguments=tuple(Argument(id=a, tau=float(t)) for a, t in zip(ids, taus)),
        attacks=tuple(attacks),
        supports=tuple(supports),
    )


def gen_random_acyclic(
    seed: int,
    n: int | None = None,
    density: float | None = None,
    att_sup_ratio: float | None = None,
) -> Qbaf:
    """Random framework with edges only forward along a random permutation."""
    rng = rng_for(seed)
    n = int(rng.integers(30, 101)) if n is None else n
    density = float(rng.uniform(0.1, 0.3)) if density is None else density
    ratio = float(rng.uniform(0.4, 0.8)) if att_sup_ratio is None else att_sup_ratio

    order = rng.permutation(n)
    upper_i, upper_j = np.triu_indices(n, k=1)
    max_edges = len(upper_i)
    m = int(round(density * max_edges))
    chosen = np.sort(rng.choice(max_edges, size=m, replace=False)) if m else np.zeros(0, dtype=np.intp)
    sources, targets = order[upper_i[chosen]], order[upper_j[chosen]]
    is_attack = rng.random(m) < ratio / (1.0 + ratio)
    taus = rng.random(n)
    return _build(n, sources, targets, is_attack, taus)


def gen_random_cyclic(n: int, density: float, seed: int) -> Qbaf:
    """Random directed edges over all ordered pairs of distinct arguments, attack or support uniformly."""
    if n < 2:
        raise ValueError(f"random cyclic frameworks need at least 2 arguments, got {n}")
    rng = rng_for(seed)
    max_edges = n * (n - 1)
    m = int(round(density * max_edges))
    chosen = np.sort(rng.choice(max_edges, size=m, replace=False)) if m else np.zeros(0, dtype=np.intp)
    sources, rest = np.divmod(chosen, n - 1)
    targets = rest + (rest >= sources)
    is_attack = rng.random(m) < 0.5
    taus = rng.random(n)
    return _build(n, sources, targets, is_attack, taus)


def gen_random_cycle_disjoint(n: int, seed: int, mean_degree: float = 1.5) -> Qbaf:
    """Every argument lies on at most one cycle: disjoint simple cycles of length 1-4 plus forward edges."""
    rng = rng_for(seed)
    sizes: list[int] = []
    while sum(sizes) < n:
        sizes.append(min(int(rng.integers(1, 5)), n - sum(sizes)))

    sources, targets = [], []
    start = 0
    for size in sizes:
        if rng.random() < 0.5:
            # a block of one becomes a self-loop
            for i in range(size):
                sources.append(start + i)
                targets.append(start + (i + 1) % size)
        start += size

    block_of = np.repeat(np.arange(len(sizes)), sizes)
    forward = block_of[:, None] < block_of[None, :]
    forward &= rng.random((n, n)) < min(1.0, mean_degree / max(n - 1, 1))
    forward_sources, forward_targets = np.nonzero(forward)

    all_sources = np.concatenate([np.asarray(sources, dtype=np.intp), forward_sources])
    all_targets = np.concatenate([np.asarray(targets, dtype=np.intp), forward_targets])
    is_attack = rng.random(len(all_sources)) < 0.5
    taus = rng.random(n)
    return _build(n, all_sources, all_targets, is_attack, taus)


def generate(params: GenParams) -> Qbaf:
    if params.kind is GenKind.LADDER:
        return gen_ladder(params.n or 0, params.seed, params.unit_strengths)
    if params.kind is GenKind.RANDOM_ACYCLIC:
        return gen_random_acyclic(params.seed, params.n, params.density, params.att_sup_ratio)
    if params.kind is GenKind.RANDOM_CYCLIC:
        n = 100 if params.n is None else params.n
        return gen_random_cyclic(n, 0.02 if params.density is None else params.density, params.seed)
    return gen_random_cycle_disjoint(50 if params.n is None else params.n, params.seed)
