"""Randomized checkers for the gradual-semantics principles on acyclic frameworks.

Each checker derives variant frameworks from a sampled framework and compares
their strengths with those of the original. Relational principles are tested on
star frameworks built from a target's parent strength profile, once as sampled
and once with an extra strength-1 attacker and supporter so that saturated
products are exercised. Every recorded violation carries the variant framework
it was found on.

Variants run on index arrays: all variants of one principle on one sampled
framework are joined into a single disjoint union and settled together. The
named variant framework is only built when a violation is recorded.
"""

import math
from functools import cached_property
from typing import Callable, Iterator, Optional, Sequence

import networkx as nx
import numpy as np
from loguru import logger

from app.core.config import settings
from app.core.errors import CyclicFrameworkError
from app.models.postulate import Principle, PostulateReport, Violation
from app.models.qbaf import Argument, Qbaf
from app.models.semantics import Clamp, SemanticsSpec
from app.services.engine import settle_acyclic
from app.services.generators import derive_seed, gen_random_acyclic
from app.services.qbaf_service import analyze_graph, to_digraph
from app.services.semantics import CompiledQbaf

Star = tuple[float, Sequence[float], Sequence[float]]
Profile = tuple[tuple[float, ...], tuple[float, ...]]
Outcome = Optional[Callable[[], Violation]]

# relational variants keep the target's tau away from the bounds
_INTERIOR = (0.05, 0.95)
_EXTRA = 0.5


def _star(label: str, tau: float, attackers: Sequence[float], supporters: Sequence[float]):
    arguments = [Argument(id=label, tau=tau)]
    attacks, supports = [], []
    for i, strength in enumerate(attackers):
        arguments.append(Argument(id=f"{label}-a{i}", tau=strength))
        attacks.append((f"{label}-a{i}", label))
    for i, strength in enumerate(supporters):
        arguments.append(Argument(id=f"{label}-s{i}", tau=strength))
        supports.append((f"{label}-s{i}", label))
    return arguments, attacks, supports


def star_framework(*stars: tuple[str, float, Sequence[float], Sequence[float]]) -> Qbaf:
    arguments, attacks, supports = [], [], []
    for star in stars:
        a, att, sup = _star(*star)
        arguments += a
        attacks += att
        supports += sup
    return Qbaf(arguments=tuple(arguments), attacks=tuple(attacks), supports=tuple(supports))


def compile_stars(stars: Sequence[Star]) -> tuple[CompiledQbaf, np.ndarray]:
    """Disjoint stars as one index-array framework, plus the position of each centre.

    Arguments are laid out as in ``star_framework``: centre, attackers, supporters.
    """
    tau: list[float] = []
    att_src: list[int] = []
    att_dst: list[int] = []
    sup_src: list[int] = []
    sup_dst: list[int] = []
    centres: list[int] = []
    for centre_tau, attackers, supporters in stars:
        centre = len(tau)
        centres.append(centre)
        tau.append(centre_tau)
        tau.extend(attackers)
        tau.extend(supporters)
        first_supporter = centre + 1 + len(attackers)
        att_src.extend(range(centre + 1, first_supporter))
        att_dst.extend([centre] * len(attackers))
        sup_src.extend(range(first_supporter, first_supporter + len(supporters)))
        sup_dst.extend([centre] * len(supporters))
    compiled = CompiledQbaf(
        ids=(),
        tau=np.array(tau, dtype=float),
        att_src=np.array(att_src, dtype=np.intp),
        att_dst=np.array(att_dst, dtype=np.intp),
        sup_src=np.array(sup_src, dtype=np.intp),
        sup_dst=np.array(sup_dst, dtype=np.intp),
    )
    return compiled, np.array(centres, dtype=np.intp)


def _fresh_prefix(q: Qbaf) -> str:
    prefix = "~"
    while any(a.startswith(prefix) for a in q.ids):
        prefix += "~"
    return prefix


def _extend(q: Qbaf, arguments=(), attacks=(), supports=()) -> Qbaf:
    return Qbaf(
        arguments=(*q.arguments, *arguments),
        attacks=(*q.attacks, *attacks),
        supports=(*q.supports, *supports),
    )


def _interior(tau: float) -> float:
    low, high = _INTERIOR
    return min(high, max(low, tau))


def _mirror(compiled: CompiledQbaf, i: int) -> CompiledQbaf:
    """Swap the attackers and supporters of argument i and replace its tau by 1 - tau."""
    keep_att, keep_sup = compiled.att_dst != i, compiled.sup_dst != i
    tau = compiled.tau.copy()
    tau[i] = 1.0 - tau[i]
    return CompiledQbaf(
        ids=compiled.ids,
        tau=tau,
        att_src=np.concatenate((compiled.att_src[keep_att], compiled.sup_src[~keep_sup])),
        att_dst=np.concatenate((compiled.att_dst[keep_att], compiled.sup_dst[~keep_sup])),
        sup_src=np.concatenate((compiled.sup_src[keep_sup], compiled.att_src[~keep_att])),
        sup_dst=np.concatenate((compiled.sup_dst[keep_sup], compiled.att_dst[~keep_att])),
    )


def _doubling(limit: int) -> list[int]:
    counts = [1]
    while counts[-1] < limit:
        counts.append(min(2 * counts[-1], limit))
    return counts


def _witness(framework: Callable[[], Qbaf], arguments: Sequence[str], values: Sequence[float], detail: str):
    return lambda: Violation(
        framework=framework(), arguments=list(arguments), values=[float(v) for v in values], detail=detail
    )


class PreparedFramework:
    """A sampled framework with everything about it that does not depend on the semantics."""

    def __init__(self, q: Qbaf):
        if not analyze_graph(q).acyclic:
            raise CyclicFrameworkError("principle checks need acyclic frameworks")
        self.q = q
        self.compiled = CompiledQbaf.from_qbaf(q)
        self.index = {a: i for i, a in enumerate(q.ids)}
        self.prefix = _fresh_prefix(q)
        ranked = sorted(
            q.ids,
            key=lambda a: (not (q.attackers(a) and q.supporters(a)), -q.in_degree(a), q.position(a)),
        )
        self.targets = ranked[: settings.POSTULATE_TARGETS_PER_FRAMEWORK]

    @property
    def size(self) -> int:
        return self.compiled.size

    @cached_property
    def parent_positions(self) -> dict[str, tuple[np.ndarray, np.ndarray]]:
        def positions(names):
            return np.array([self.index[b] for b in names], dtype=np.intp)

        return {a: (positions(self.q.attackers(a)), positions(self.q.supporters(a))) for a in self.targets}

    @cached_property
    def unparented(self) -> np.ndarray:
        degree = np.bincount(self.compiled.att_dst, minlength=self.size)
        degree += np.bincount(self.compiled.sup_dst, minlength=self.size)
        return np.flatnonzero(degree == 0)

    @cached_property
    def renamed(self) -> tuple[CompiledQbaf, np.ndarray]:
        """The framework with every id renamed and every list reversed, and where each argument went."""
        q = self.q
        names = {a: f"x{i}" for i, a in enumerate(reversed(q.ids))}
        image = Qbaf(
            arguments=tuple(Argument(id=names[x.id], tau=x.tau) for x in reversed(q.arguments)),
            attacks=tuple((names[s], names[t]) for s, t in reversed(q.attacks)),
            supports=tuple((names[s], names[t]) for s, t in reversed(q.supports)),
        )
        return CompiledQbaf.from_qbaf(image), np.array([image.position(names[a]) for a in q.ids], dtype=np.intp)

    @cached_property
    def doubled(self) -> CompiledQbaf:
        return CompiledQbaf.concat([self.compiled, self.compiled])[0]

    @cached_property
    def directed(self) -> list[tuple[str, str, np.ndarray]]:
        """(source, target, unaffected positions) for each attack that can be added without a cycle."""
        graph = to_digraph(self.q)
        attacks = set(self.q.attacks)
        pairs = []
        for a in self.targets:
            ancestors = nx.ancestors(graph, a)
            b = next((b for b in self.q.ids if b != a and b not in ancestors and (a, b) not in attacks), None)
            if b is None:
                continue
            affected = {b} | nx.descendants(graph, b)
            unaffected = np.array([i for i, x in enumerate(self.q.ids) if x not in affected], dtype=np.intp)
            pairs.append((a, b, unaffected))
        return pairs

    @cached_property
    def directed_union(self) -> tuple[CompiledQbaf, np.ndarray]:
        return CompiledQbaf.concat(
            [self.compiled.extended(attacks=[(self.index[a], self.index[b])]) for a, b, _ in self.directed]
        )

    @cached_property
    def neutral(self) -> list[tuple[str, str]]:
        return [(a, kind) for a in self.targets for kind in ("attack", "support")]

    @cached_property
    def neutral_union(self) -> tuple[CompiledQbaf, np.ndarray]:
        zero = self.size
        parts = []
        for a, kind in self.neutral:
            edge = [(zero, self.index[a])]
            parts.append(self.compiled.extended([0.0], *((edge, ()) if kind == "attack" else ((), edge))))
        return CompiledQbaf.concat(parts)

    def neutral_framework(self, a: str, kind: str) -> Qbaf:
        zero = Argument(id=self.prefix + "zero", tau=0.0)
        edge = ((zero.id, a),)
        return _extend(self.q, (zero,), *((edge, ()) if kind == "attack" else ((), edge)))

    @cached_property
    def mirrored_union(self) -> tuple[CompiledQbaf, np.ndarray]:
        return CompiledQbaf.concat([_mirror(self.compiled, self.index[a]) for a in self.targets])


class PostulateChecker:
    """Runs the checks of each principle for one semantics.

    ``prepared`` may be shared between checkers of different semantics that
    look at the same sample.
    """

    def __init__(
        self,
        spec: SemanticsSpec,
        tol: float | None = None,
        prepared: dict[int, PreparedFramework] | None = None,
    ):
        self.spec = spec
        self.tol = settings.POSTULATE_TOL if tol is None else tol
        # the smooth clamp deviates from the exact one by at most ln(2)/k
        approximation = math.log(2.0) / spec.k if spec.clamp is Clamp.DIFFERENTIABLE else 0.0
        self.equality_tol = self.tol + approximation
        self.saturation_tol = settings.POSTULATE_SATURATION_TOL
        self._prepared = {} if prepared is None else prepared
        self._rho: dict[int, tuple[PreparedFramework, np.ndarray]] = {}
        self._checks: dict[Principle, Callable[[PreparedFramework], Iterator[Outcome]]] = {
            Principle.ANONYMITY: self._anonymity,
            Principle.INDEPENDENCE: self._independence,
            Principle.DIRECTIONALITY: self._directionality,
            Principle.EQUIVALENCE: self._equivalence,
            Principle.STABILITY: self._stability,
            Principle.NEUTRALITY: self._neutrality,
            Principle.MONOTONICITY: self._monotonicity,
            Principle.REINFORCEMENT: self._reinforcement,
            Principle.WEAKENING: self._weakening,
            Principle.STRENGTHENING: self._strengthening,
            Principle.DUALITY: self._duality,
            Principle.OPEN_MINDEDNESS: self._open_mindedness,
        }

    def prepare(self, q: Qbaf) -> PreparedFramework:
        """Acyclicity is checked once per framework, however many principles look at it."""
        cached = self._prepared.get(id(q))
        if cached is None or cached.q is not q:
            cached = PreparedFramework(q)
            self._prepared[id(q)] = cached
        return cached

    def check(self, principle: Principle | str, sample: Sequence[Qbaf]) -> PostulateReport:
        principle = Principle.parse(principle)
        prepared = [self.prepare(q) for q in sample]

        trials = 0
        violations: list[Violation] = []
        count = 0
        for p in prepared:
            for outcome in self._checks[principle](p):
                trials += 1
                if outcome is None:
                    continue
                count += 1
                if len(violations) < settings.POSTULATE_MAX_WITNESSES:
                    violations.append(outcome())

        if count:
            logger.info(f"{self.spec} violates {principle.value} in {count} of {trials} trials")
        else:
            logger.info(f"{self.spec} satisfies {principle.value} over {trials} trials")
        return PostulateReport(
            principle=principle,
            semantics=self.spec,
            trials=trials,
            violation_count=count,
            violations=violations,
        )

    def strengths(self, q: Qbaf) -> np.ndarray:
        """Final strengths of a sampled framework in document order."""
        return self._strengths(self.prepare(q))

    def _strengths(self, p: PreparedFramework) -> np.ndarray:
        cached = self._rho.get(id(p))
        if cached is None or cached[0] is not p:
            cached = (p, self._settle(p.compiled))
            self._rho[id(p)] = cached
        return cached[1]

    def _settle(self, compiled: CompiledQbaf) -> np.ndarray:
        return settle_acyclic(self.spec, compiled)

    def _profile(self, p: PreparedFramework, a: str) -> Profile:
        rho = self._strengths(p)
        attackers, supporters = p.parent_positions[a]
        return tuple(rho[attackers].tolist()), tuple(rho[supporters].tolist())

    def _profiles(self, p: PreparedFramework, a: str) -> list[Profile]:
        attackers, supporters = self._profile(p, a)
        return [(attackers, supporters), ((*attackers, 1.0), (*supporters, 1.0))]

    def _saturated(self, x: float, y: float) -> bool:
        low, high = self.saturation_tol, 1.0 - self.saturation_tol
        return (x <= low and y <= low) or (x >= high and y >= high)

    def _compare(
        self,
        p: PreparedFramework,
        before: np.ndarray,
        after: np.ndarray,
        framework: Callable[[], Qbaf],
        detail: str,
        positions: np.ndarray | None = None,
    ) -> Outcome:
        if before.size == 0:
            return None
        gaps = np.abs(before - after)
        worst = int(np.argmax(gaps))
        if gaps[worst] <= self.equality_tol:
            return None
        argument = p.q.ids[worst if positions is None else int(positions[worst])]
        return _witness(framework, [argument], [before[worst], after[worst]], detail)

    def _ordered(self, pairs: list[tuple[Star, Star, bool, str]]) -> Iterator[Outcome]:
        """Each pair (stronger, weaker, strict, detail) must end with the first centre on top."""
        compiled, centres = compile_stars([star for stronger, weaker, _, _ in pairs for star in (stronger, weaker)])
        values = self._settle(compiled)[centres]
        for k, (stronger, weaker, strict, detail) in enumerate(pairs):
            x, y = float(values[2 * k]), float(values[2 * k + 1])
            if x < y - self.tol or (strict and x - y <= self.tol and not self._saturated(x, y)):
                yield _witness(
                    lambda stronger=stronger, weaker=weaker: star_framework(("A", *stronger), ("B", *weaker)),
                    ["A", "B"],
                    [x, y],
                    detail,
                )
            else:
                yield None

    def _anonymity(self, p: PreparedFramework) -> Iterator[Outcome]:
        image, positions = p.renamed
        rho_image = self._settle(image)
        yield self._compare(
            p, self._strengths(p), rho_image[positions], lambda: p.q, "strength changes under renaming"
        )

    def _independence(self, p: PreparedFramework) -> Iterator[Outcome]:
        rho_union = self._settle(p.doubled)[: p.size]
        yield self._compare(
            p, self._strengths(p), rho_union, lambda: p.q, "strength changes next to a disjoint framework"
        )

    def _directionality(self, p: PreparedFramework) -> Iterator[Outcome]:
        union, offsets = p.directed_union
        rho_all = self._settle(union)
        rho = self._strengths(p)
        for (a, b, unaffected), offset in zip(p.directed, offsets):
            derived = rho_all[offset : offset + p.size]
            yield self._compare(
                p,
                rho[unaffected],
                derived[unaffected],
                lambda a=a, b=b: _extend(p.q, attacks=((a, b),)),
                f"new attack ({a}, {b}) changes an argument it cannot reach",
                positions=unaffected,
            )

    def _equivalence(self, p: PreparedFramework) -> Iterator[Outcome]:
        stars = [(p.q.tau(a), *self._profile(p, a)) for a in p.targets]
        twins, centres = compile_stars(stars)
        union, offsets = CompiledQbaf.concat([p.compiled, twins])
        rho_all = self._settle(union)
        for a, star, centre in zip(p.targets, stars, centres):
            x, y = float(rho_all[p.index[a]]), float(rho_all[offsets[1] + centre])
            if abs(x - y) > self.equality_tol:
                twin = p.prefix + a
                yield _witness(
                    lambda star=star, twin=twin: _extend(p.q, *_star(twin, *star)),
                    [a, twin],
                    [x, y],
                    "equivalent arguments receive different strengths",
                )
            else:
                yield None

    def _stability(self, p: PreparedFramework) -> Iterator[Outcome]:
        rho = self._strengths(p)
        for i in p.unparented:
            tau, value = float(p.compiled.tau[i]), float(rho[i])
            if abs(value - tau) > self.equality_tol:
                yield _witness(lambda: p.q, [p.q.ids[i]], [tau, value], "argument without parents moved")
            else:
                yield None

    def _neutrality(self, p: PreparedFramework) -> Iterator[Outcome]:
        union, offsets = p.neutral_union
        rho_all = self._settle(union)
        rho = self._strengths(p)
        for (a, kind), offset in zip(p.neutral, offsets):
            yield self._compare(
                p,
                rho,
                rho_all[offset : offset + p.size],
                lambda a=a, kind=kind: p.neutral_framework(a, kind),
                f"zero-strength {kind}er changes {a}",
            )

    def _monotonicity(self, p: PreparedFramework) -> Iterator[Outcome]:
        pairs = []
        for a in p.targets:
            tau = _interior(p.q.tau(a))
            for attackers, supporters in self._profiles(p, a):
                pairs += [
                    (
                        (tau, attackers, supporters),
                        (tau, (*attackers, _EXTRA), supporters),
                        True,
                        "an extra attacker does not lower the strength",
                    ),
                    (
                        (tau, attackers, (*supporters, _EXTRA)),
                        (tau, attackers, supporters),
                        True,
                        "an extra supporter does not raise the strength",
                    ),
                    (
                        ((tau + 1.0) / 2.0, attackers, supporters),
                        (tau, attackers, supporters),
                        False,
                        "a higher initial strength ends lower",
                    ),
                ]
        return self._ordered(pairs)

    def _reinforcement(self, p: PreparedFramework) -> Iterator[Outcome]:
        pairs = []
        for a in p.targets:
            tau = _interior(p.q.tau(a))
            for attackers, supporters in self._profiles(p, a):
                pairs.append(
                    (
                        (tau, (*attackers, 0.25), (*supporters, 0.75)),
                        (tau, (*attackers, 0.75), (*supporters, 0.25)),
                        True,
                        "weaker attacker and stronger supporter do not raise the strength",
                    )
                )
        return self._ordered(pairs)

    def _tilted(self, p: PreparedFramework, toward_attack: bool) -> Iterator[Outcome]:
        stars: list[Star] = []
        for a in p.targets:
            tau = _interior(p.q.tau(a))
            for attackers, supporters in self._profiles(p, a):
                heavy, light = (attackers, supporters) if toward_attack else (supporters, attackers)
                missing = math.ceil(sum(light) - sum(heavy) + _EXTRA)
                heavy = (*heavy, *([1.0] * max(missing, 0)))
                stars.append((tau, heavy, light) if toward_attack else (tau, light, heavy))

        compiled, centres = compile_stars(stars)
        values = self._settle(compiled)[centres]
        direction = "below" if toward_attack else "above"
        detail = f"dominant {'attack' if toward_attack else 'support'} does not move the strength {direction} tau"
        for star, value in zip(stars, values.tolist()):
            tau = star[0]
            moved = tau - value if toward_attack else value - tau
            if moved > self.tol:
                yield None
            else:
                yield _witness(lambda star=star: star_framework(("A", *star)), ["A"], [tau, value], detail)

    def _weakening(self, p: PreparedFramework) -> Iterator[Outcome]:
        return self._tilted(p, toward_attack=True)

    def _strengthening(self, p: PreparedFramework) -> Iterator[Outcome]:
        return self._tilted(p, toward_attack=False)

    def _duality(self, p: PreparedFramework) -> Iterator[Outcome]:
        union, offsets = p.mirrored_union
        rho_all = self._settle(union)
        rho = self._strengths(p)
        for a, offset in zip(p.targets, offsets):
            i = p.index[a]
            before, value = float(rho[i]), float(rho_all[offset + i])
            if abs(value + before - 1.0) > self.equality_tol:
                yield _witness(
                    lambda: p.q,
                    [a],
                    [before, value],
                    "mirrored argument does not end at 1 - strength",
                )
            else:
                yield None

    def _open_mindedness(self, p: PreparedFramework) -> Iterator[Outcome]:
        low, high = settings.OPEN_MINDED_LOW, settings.OPEN_MINDED_HIGH
        counts = _doubling(settings.OPEN_MINDED_MAX_PARENTS)
        sways = []
        for a in p.targets:
            attackers, supporters = self._profile(p, a)
            for toward_attack, extreme in ((True, 1.0), (False, 0.0)):
                for tau in (p.q.tau(a), extreme):
                    sways.append((tau, attackers, supporters, toward_attack))

        stars: list[Star] = []
        for tau, attackers, supporters, toward_attack in sways:
            for m in counts:
                extra = (1.0,) * m
                stars.append(
                    (tau, (*attackers, *extra), supporters) if toward_attack else (tau, attackers, (*supporters, *extra))
                )
        compiled, centres = compile_stars(stars)
        values = self._settle(compiled)[centres].reshape(len(sways), len(counts))

        for k, ((tau, _, _, toward_attack), row) in enumerate(zip(sways, values)):
            threshold = low if toward_attack else high
            swayed = row < threshold if toward_attack else row > threshold
            if swayed.any():
                yield None
                continue
            last = stars[(k + 1) * len(counts) - 1]
            kind = "attackers" if toward_attack else "supporters"
            yield _witness(
                lambda last=last: star_framework(("A", *last)),
                ["A"],
                [tau, row[-1]],
                f"{counts[-1]} strength-1 {kind} cannot move the strength past {threshold}",
            )


def check_principle(
    principle: Principle | str, spec: SemanticsSpec, sample: Sequence[Qbaf], tol: float | None = None
) -> PostulateReport:
    return PostulateChecker(spec, tol).check(principle, sample)


def sample_frameworks(n_frameworks: int, seed: int) -> list[Qbaf]:
    return [gen_random_acyclic(derive_seed(seed, i)) for i in range(n_frameworks)]


def run_postulate_suite(
    spec: SemanticsSpec,
    n_frameworks: int,
    seed: int,
    principles: Sequence[Principle | str] | None = None,
    sample: Sequence[Qbaf] | None = None,
    prepared: dict[int, PreparedFramework] | None = None,
) -> list[PostulateReport]:
    sample = sample_frameworks(n_frameworks, seed) if sample is None else sample
    checker = PostulateChecker(spec, prepared=prepared)
    return [checker.check(p, sample) for p in (principles or list(Principle))]


def principle_matrix(
    specs: Sequence[SemanticsSpec], n_frameworks: int, seed: int
) -> dict[str, dict[Principle, bool]]:
    """Pass/fail per semantics and principle, every semantics checked on the same sample."""
    sample = sample_frameworks(n_frameworks, seed)
    prepared: dict[int, PreparedFramework] = {}
    matrix = {}
    for spec in specs:
        reports = run_postulate_suite(spec, len(sample), seed, sample=sample, prepared=prepared)
        matrix[spec.encode()] = {report.principle: report.passed for report in reports}
    return matrix
