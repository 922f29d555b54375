import json
import time

import pytest
from numpy.testing import assert_allclose, assert_array_equal

from app.core.errors import CyclicFrameworkError, UnknownPrincipleError
from app.models.postulate import Principle
from app.models.semantics import Family, SemanticsSpec
from app.services import postulates
from app.services.engine import solve_acyclic
from app.services.postulates import (
    PostulateChecker,
    check_principle,
    compile_stars,
    principle_matrix,
    run_postulate_suite,
    sample_frameworks,
    star_framework,
)
from app.services.semantics import CompiledQbaf

P = Principle
EXPECTED_FAILURES = {
    "dfq": {P.MONOTONICITY, P.REINFORCEMENT, P.WEAKENING, P.STRENGTHENING, P.OPEN_MINDEDNESS},
    "reb": {P.DUALITY, P.OPEN_MINDEDNESS},
    "qen": set(),
    "mlp": {P.OPEN_MINDEDNESS},
    "mqe:q=sum": set(),
    "mqe:q=max": set(),
    "drl:q=sum,gamma=1": set(),
    "drl:q=max,gamma=1": set(),
    "ddrl:q=sum,gamma=1,k=100": set(),
}


@pytest.fixture(scope="module")
def small_sample():
    return sample_frameworks(8, seed=7)


def failures(reports):
    return {report.principle for report in reports if not report.passed}


@pytest.mark.parametrize("name", ["duality", "Du", "open-mindedness", "OP", P.STABILITY])
def test_principle_parse(name):
    assert Principle.parse(name) in Principle


def test_principle_parse_unknown():
    with pytest.raises(UnknownPrincipleError):
        Principle.parse("fairness")


def test_abbreviations_are_unique():
    assert len({p.abbreviation for p in Principle}) == 12
    assert P.STRENGTHENING.abbreviation == "St"


def test_unknown_principle_name(small_sample):
    with pytest.raises(UnknownPrincipleError):
        check_principle("fairness", SemanticsSpec(family=Family.DRL), small_sample)


def test_cyclic_sample_rejected(mutual_attack):
    with pytest.raises(CyclicFrameworkError):
        check_principle(P.ANONYMITY, SemanticsSpec(family=Family.DRL), [mutual_attack])


def test_empty_sample_passes_trivially():
    report = check_principle(P.MONOTONICITY, SemanticsSpec(family=Family.DFQ), [])
    assert report.passed
    assert report.trials == 0


@pytest.mark.parametrize("family", [Family.DRL, Family.MQE, Family.QEN])
def test_delta_and_energy_semantics_pass_everything(small_sample, family):
    reports = run_postulate_suite(SemanticsSpec(family=family), 0, 0, sample=small_sample)
    assert len(reports) == 12
    assert failures(reports) == set()
    assert all(report.trials > 0 for report in reports if report.principle is not P.STABILITY)


def test_dfq_saturates(small_sample):
    spec = SemanticsSpec(family=Family.DFQ)
    for principle in (P.MONOTONICITY, P.REINFORCEMENT):
        report = check_principle(principle, spec, small_sample)
        assert not report.passed
        assert len(report.violations) <= report.violation_count


def test_dfq_passes_duality(small_sample):
    assert check_principle(P.DUALITY, SemanticsSpec(family=Family.DFQ), small_sample).passed


def test_reb_fails_duality(small_sample):
    report = check_principle(P.DUALITY, SemanticsSpec(family=Family.REB), small_sample)
    assert not report.passed
    violation = report.violations[0]
    rho, mirrored = violation.values
    assert abs(rho + mirrored - 1.0) > 1e-9


def test_mlp_is_not_open_minded(small_sample):
    assert not check_principle(P.OPEN_MINDEDNESS, SemanticsSpec(family=Family.MLP), small_sample).passed
    assert check_principle(P.MONOTONICITY, SemanticsSpec(family=Family.MLP), small_sample).passed


@pytest.mark.parametrize(
    "family, principle",
    [
        (Family.DFQ, P.MONOTONICITY),
        (Family.DFQ, P.WEAKENING),
        (Family.DFQ, P.OPEN_MINDEDNESS),
        (Family.REB, P.DUALITY),
        (Family.MLP, P.OPEN_MINDEDNESS),
    ],
)
def test_witnesses_fail_again(small_sample, family, principle):
    checker = PostulateChecker(SemanticsSpec(family=family))
    report = checker.check(principle, small_sample)
    witness = report.violations[0].framework
    assert not checker.check(principle, [witness]).passed


def test_star_framework():
    q = star_framework(("A", 0.5, [0.2, 0.3], [0.9]), ("B", 0.1, [], []))
    assert q.ids == ["A", "A-a0", "A-a1", "A-s0", "B"]
    assert q.attackers("A") == ("A-a0", "A-a1")
    assert q.supporters("A") == ("A-s0",)


def test_report_json(small_sample):
    report = check_principle(P.DUALITY, SemanticsSpec(family=Family.REB), small_sample)
    payload = json.loads(report.model_dump_json())
    assert payload["passed"] is False
    assert payload["principle"] == "duality"
    assert payload["semantics"]["family"] == "reb"
    assert payload["violations"][0]["framework"]["arguments"]


@pytest.mark.slow
def test_principle_matrix():
    specs = [SemanticsSpec.parse(name) for name in EXPECTED_FAILURES]
    started = time.perf_counter()
    matrix = principle_matrix(specs, n_frameworks=200, seed=7)
    assert time.perf_counter() - started < 60.0
    assert list(matrix) == list(EXPECTED_FAILURES)
    for name, row in matrix.items():
        assert {p for p, passed in row.items() if not passed} == EXPECTED_FAILURES[name], name


def test_check_principle_takes_the_principle_first(small_sample):
    report = check_principle("Du", SemanticsSpec(family=Family.REB), small_sample)
    assert report.principle is P.DUALITY
    assert report.semantics.family is Family.REB


@pytest.mark.parametrize("family", list(Family))
def test_checker_strengths_match_forward_pass(small_sample, family):
    spec = SemanticsSpec(family=family)
    checker = PostulateChecker(spec)
    for q in small_sample:
        expected = solve_acyclic(q, spec)
        assert_allclose(checker.strengths(q), [expected[a] for a in q.ids], atol=1e-12)


def test_compiled_stars_follow_star_layout():
    stars = [(0.5, [0.2, 0.3], [0.9]), (0.1, [], []), (0.7, [], [0.4])]
    compiled, centres = compile_stars(stars)
    expected = CompiledQbaf.from_qbaf(star_framework(*((label, *star) for label, star in zip("ABC", stars))))
    assert centres.tolist() == [0, 4, 5]
    for name in ("tau", "att_src", "att_dst", "sup_src", "sup_dst"):
        assert_array_equal(getattr(compiled, name), getattr(expected, name))


def test_compile_no_stars():
    compiled, centres = compile_stars([])
    assert compiled.size == 0
    assert centres.size == 0


def test_matrix_analyzes_each_framework_once(monkeypatch):
    analyzed = []
    analyze = postulates.analyze_graph
    monkeypatch.setattr(postulates, "analyze_graph", lambda q: analyzed.append(q) or analyze(q))
    specs = [SemanticsSpec(family=Family.DRL), SemanticsSpec(family=Family.QEN)]
    matrix = principle_matrix(specs, n_frameworks=3, seed=1)
    assert all(all(row.values()) for row in matrix.values())
    assert len(analyzed) == 3

