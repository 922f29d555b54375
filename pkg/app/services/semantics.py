"""Aggregation and influence functions of the modular semantics.

Every influence function accepts scalars or numpy arrays; scalars come back as
plain floats. Per-argument functions read a framework and a strength vector,
``update_all`` evaluates a whole synchronous step on index arrays.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from app.core.config import settings
from app.core.errors import AggregationError
from app.models.qbaf import Qbaf, StrengthVector
from app.models.semantics import Aggregation, Clamp, Family, SemanticsSpec
from app.services.qbaf_service import parents

# exp() stays finite on this range; beyond it the influence is saturated anyway
_EXP_LIMIT = 700.0


def _as_output(x):
    return float(x) if np.ndim(x) == 0 else x


class SumAggregate(NamedTuple):
    alpha: float
    alpha_plus: float
    alpha_minus: float


def aggregate_sum(q: Qbaf, s: StrengthVector, a: str) -> SumAggregate:
    attackers, supporters = parents(q, a)
    alpha_plus = sum(s[b] for b in supporters)
    alpha_minus = sum(s[b] for b in attackers)
    return SumAggregate(alpha_plus - alpha_minus, alpha_plus, alpha_minus)


def aggregate_prod(q: Qbaf, s: StrengthVector, a: str) -> float:
    attackers, supporters = parents(q, a)
    return math.prod(1.0 - s[b] for b in attackers) - math.prod(1.0 - s[b] for b in supporters)


def delta_q(alpha: float, alpha_plus: float, alpha_minus: float, q: Aggregation | str) -> float:
    q = Aggregation(q)
    if alpha_plus < 0 or alpha_minus < 0:
        raise AggregationError(f"partial sums must be non-negative, got {alpha_plus} and {alpha_minus}")
    scale = max(1.0, alpha_plus + alpha_minus)
    if abs(alpha - (alpha_plus - alpha_minus)) > settings.DELTA_CONSISTENCY_TOL * scale:
        raise AggregationError(f"alpha={alpha} differs from alpha_plus - alpha_minus={alpha_plus - alpha_minus}")
    if alpha_plus == 0 and alpha_minus == 0:
        return 0.0
    denominator = alpha_plus + alpha_minus if q is Aggregation.SUM else max(alpha_plus, alpha_minus)
    return alpha * abs(alpha) / denominator


def delta_q_array(alpha_plus: np.ndarray, alpha_minus: np.ndarray, q: Aggregation) -> np.ndarray:
    alpha = alpha_plus - alpha_minus
    if q is Aggregation.SUM:
        denominator = alpha_plus + alpha_minus
    else:
        denominator = np.maximum(alpha_plus, alpha_minus)
    safe = np.where(denominator > 0, denominator, 1.0)
    return np.where(denominator > 0, alpha * np.abs(alpha) / safe, 0.0)


def drelu(z):
    return _as_output(np.clip(z, -1.0, 1.0))


def ddrelu(z, k: float = 100.0):
    """Smooth clamp (1/k)·ln((1+e^{k(z+1)})/(1+e^{k(z-1)})) - 1 as a difference of softplus terms.

    Evaluated on |z| and re-signed so the result is exactly odd.
    """
    z = np.asarray(z, dtype=float)
    m = np.abs(z)
    value = (np.logaddexp(0.0, k * (m + 1.0)) - np.logaddexp(0.0, k * (m - 1.0))) / k - 1.0
    value = np.clip(value, 0.0, 1.0)
    return _as_output(np.sign(z) * value)


def _sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def ddrelu_derivative(z, k: float = 100.0):
    m = np.abs(np.asarray(z, dtype=float))
    # sigma(k(m+1)) - sigma(k(m-1)) rewritten so both terms vanish for large m
    return _as_output(_sigmoid(k * (1.0 - m)) - _sigmoid(-k * (m + 1.0)))


def update_dfq(tau, pi):
    tau, pi = np.asarray(tau, dtype=float), np.asarray(pi, dtype=float)
    return _as_output(np.where(pi <= 0, tau * (1.0 + pi), tau * (1.0 - pi) + pi))


def update_reb(tau, alpha):
    tau = np.asarray(tau, dtype=float)
    alpha = np.clip(alpha, -_EXP_LIMIT, _EXP_LIMIT)
    return _as_output(1.0 - (1.0 - tau * tau) / (1.0 + tau * np.exp(alpha)))


def _quadratic_energy(tau, x):
    tau, x = np.asarray(tau, dtype=float), np.asarray(x, dtype=float)
    energy = x * x / (1.0 + x * x)
    return _as_output(np.where(x <= 0, (1.0 - energy) * tau, energy + (1.0 - energy) * tau))


def update_qen(tau, alpha):
    return _quadratic_energy(tau, alpha)


def update_mlp(tau, alpha):
    # sigma(ln(tau/(1-tau)) + alpha) in a form that is exact at tau = 0 and tau = 1
    tau = np.asarray(tau, dtype=float)
    alpha = np.clip(alpha, -_EXP_LIMIT, _EXP_LIMIT)
    return _as_output(tau / (tau + (1.0 - tau) * np.exp(-alpha)))


def update_mqe(tau, delta):
    return _quadratic_energy(tau, delta)


def update_drl(tau, delta, gamma: float = 1.0, clamp: Clamp | str = Clamp.EXACT, k: float = 100.0):
    tau, delta = np.asarray(tau, dtype=float), np.asarray(delta, dtype=float)
    z = (2.0 * tau - 1.0) + delta * gamma
    clamped = ddrelu(z, k) if Clamp(clamp) is Clamp.DIFFERENTIABLE else drelu(z)
    return _as_output((np.asarray(clamped) + 1.0) / 2.0)


_ALPHA_INFLUENCE = {
    Family.REB: update_reb,
    Family.QEN: update_qen,
    Family.MLP: update_mlp,
}


def _delta_influence(spec: SemanticsSpec, tau, delta):
    if spec.family is Family.MQE:
        return update_mqe(tau, delta)
    return update_drl(tau, delta, spec.gamma, spec.clamp, spec.k)


def update(spec: SemanticsSpec, q: Qbaf, s: StrengthVector, a: str) -> float:
    """New strength of one argument given the current strengths of its parents."""
    if spec.family is Family.DFQ:
        pi = aggregate_prod(q, s, a)
        result = update_dfq(q.tau(a), pi)
    else:
        aggregate = aggregate_sum(q, s, a)
        tau = q.tau(a)
        if spec.family in _ALPHA_INFLUENCE:
            result = _ALPHA_INFLUENCE[spec.family](tau, aggregate.alpha)
        else:
            delta = delta_q(aggregate.alpha, aggregate.alpha_plus, aggregate.alpha_minus, spec.q)
            result = _delta_influence(spec, tau, delta)
    return min(1.0, max(0.0, float(result)))


@dataclass(frozen=True)
class CompiledQbaf:
    """Index-array view of a framework for vectorized synchronous updates."""

    ids: tuple[str, ...]
    tau: np.ndarray
    att_src: np.ndarray
    att_dst: np.ndarray
    sup_src: np.ndarray
    sup_dst: np.ndarray

    @classmethod
    def from_qbaf(cls, q: Qbaf) -> "CompiledQbaf":
        index = {a: i for i, a in enumerate(q.ids)}

        def columns(edges):
            src = np.fromiter((index[s] for s, _ in edges), dtype=np.intp, count=len(edges))
            dst = np.fromiter((index[t] for _, t in edges), dtype=np.intp, count=len(edges))
            return src, dst

        att_src, att_dst = columns(q.attacks)
        sup_src, sup_dst = columns(q.supports)
        tau = np.fromiter((a.tau for a in q.arguments), dtype=float, count=q.size)
        return cls(tuple(q.ids), tau, att_src, att_dst, sup_src, sup_dst)

    @classmethod
    def concat(cls, parts: Sequence["CompiledQbaf"]) -> tuple["CompiledQbaf", np.ndarray]:
        """Disjoint union of several frameworks and the offset of each part in it."""
        sizes = np.array([part.size for part in parts], dtype=np.intp)
        offsets = np.cumsum(sizes) - sizes

        def joined(name: str) -> np.ndarray:
            shifted = [getattr(part, name) + offset for part, offset in zip(parts, offsets)]
            return np.concatenate(shifted) if shifted else np.zeros(0, dtype=np.intp)

        union = cls(
            ids=tuple(a for part in parts for a in part.ids),
            tau=np.concatenate([part.tau for part in parts]) if parts else np.zeros(0),
            att_src=joined("att_src"),
            att_dst=joined("att_dst"),
            sup_src=joined("sup_src"),
            sup_dst=joined("sup_dst"),
        )
        return union, offsets

    def extended(
        self,
        taus: Sequence[float] = (),
        attacks: Sequence[tuple[int, int]] = (),
        supports: Sequence[tuple[int, int]] = (),
    ) -> "CompiledQbaf":
        """Copy with unnamed arguments appended after the existing ones and extra edges given by position."""
        attacks = np.array(attacks, dtype=np.intp).reshape(-1, 2)
        supports = np.array(supports, dtype=np.intp).reshape(-1, 2)
        return CompiledQbaf(
            ids=(),
            tau=np.concatenate((self.tau, np.asarray(taus, dtype=float))),
            att_src=np.concatenate((self.att_src, attacks[:, 0])),
            att_dst=np.concatenate((self.att_dst, attacks[:, 1])),
            sup_src=np.concatenate((self.sup_src, supports[:, 0])),
            sup_dst=np.concatenate((self.sup_dst, supports[:, 1])),
        )

    @property
    def size(self) -> int:
        return len(self.tau)

    def vector(self, s: np.ndarray) -> StrengthVector:
        return {a: float(v) for a, v in zip(self.ids, s)}

    def array(self, s: StrengthVector) -> np.ndarray:
        return np.fromiter((s[a] for a in self.ids), dtype=float, count=self.size)


def update_all(spec: SemanticsSpec, compiled: CompiledQbaf, s: np.ndarray) -> np.ndarray:
    n = compiled.size
    if spec.family is Family.DFQ:
        attacked = np.ones(n)
        supported = np.ones(n)
        np.multiply.at(attacked, compiled.att_dst, 1.0 - s[compiled.att_src])
        np.multiply.at(supported, compiled.sup_dst, 1.0 - s[compiled.sup_src])
        result = update_dfq(compiled.tau, attacked - supported)
    else:
        alpha_plus = np.bincount(compiled.sup_dst, weights=s[compiled.sup_src], minlength=n)
        alpha_minus = np.bincount(compiled.att_dst, weights=s[compiled.att_src], minlength=n)
        if spec.family in _ALPHA_INFLUENCE:
            result = _ALPHA_INFLUENCE[spec.family](compiled.tau, alpha_plus - alpha_minus)
        else:
            result = _delta_influence(spec, compiled.tau, delta_q_array(alpha_plus, alpha_minus, spec.q))
    return np.clip(np.asarray(result, dtype=float), 0.0, 1.0)
