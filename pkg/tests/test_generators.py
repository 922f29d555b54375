import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from app.models.bench import GenKind, GenParams
from app.models.semantics import Family, SemanticsSpec
from app.services.engine import solve_acyclic
from app.services.generators import (
    GOAL,
    augment_ladder,
    derive_seed,
    gen_ladder,
    gen_random_acyclic,
    gen_random_cycle_disjoint,
    gen_random_cyclic,
    generate,
)
from app.services.qbaf_service import analyze_graph
from app.services.semantics import aggregate_sum

seeds = st.integers(min_value=0, max_value=2**64 - 1)


def ladder_alpha(ladder):
    strengths = solve_acyclic(ladder, SemanticsSpec(family=Family.QEN))
    return aggregate_sum(ladder, strengths, GOAL).alpha


@pytest.mark.parametrize("n", [0, 1, 5, 20])
def test_ladder_shape(n):
    ladder = gen_ladder(n, seed=1)
    assert ladder.size == 2 * n + 3
    assert len(ladder.attackers(GOAL)) == n + 2
    assert len(ladder.supporters(GOAL)) == n
    assert all(ladder.in_degree(a) == 0 for a in ladder.ids if a != GOAL)
    assert ladder_alpha(ladder) == pytest.approx(-2.0, abs=1e-9)


@hypothesis_settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=30), seeds)
def test_ladder_attackers_stay_in_range(n, seed):
    ladder = gen_ladder(n, seed)
    assert all(0.0 <= argument.tau <= 1.0 for argument in ladder.arguments)
    assert ladder_alpha(ladder) == pytest.approx(-2.0, abs=1e-9)


def test_ladder_is_deterministic():
    assert gen_ladder(7, seed=42) == gen_ladder(7, seed=42)
    assert gen_ladder(7, seed=42) != gen_ladder(7, seed=43)


def test_unit_ladder():
    ladder = gen_ladder(5, seed=0, unit_strengths=True)
    assert ladder.size == 13
    assert set(ladder.taus.values()) == {1.0}


def test_augment_ladder_nests():
    ladder = gen_ladder(2, seed=3)
    grown = augment_ladder(ladder, seed=3)
    assert grown.size == ladder.size + 2
    assert len(grown.supporters(GOAL)) == 3
    for a in ladder.ids:
        assert grown.tau(a) == ladder.tau(a)
    assert ladder_alpha(grown) == pytest.approx(-2.0, abs=1e-9)
    assert augment_ladder(ladder, seed=3) == grown


def test_augmented_ladders_match_generated_shape():
    ladder = gen_ladder(0, seed=0, unit_strengths=True)
    for _ in range(5):
        ladder = augment_ladder(ladder, seed=0, unit_strengths=True)
    assert sorted(ladder.ids) == sorted(gen_ladder(5, seed=0, unit_strengths=True).ids)


@hypothesis_settings(max_examples=25, deadline=None)
@given(seeds)
def test_random_acyclic_frameworks(seed):
    q = gen_random_acyclic(seed)
    info = analyze_graph(q)
    assert info.acyclic
    assert 30 <= q.size <= 100
    max_edges = q.size * (q.size - 1) // 2
    assert 0.1 - 1.0 / max_edges <= q.edge_count / max_edges <= 0.3 + 1.0 / max_edges
    position = {a: i for i, a in enumerate(info.topo_order)}
    assert all(position[s] < position[t] for s, t, _ in q.edges())


def test_random_acyclic_overrides():
    q = gen_random_acyclic(seed=5, n=10, density=1.0, att_sup_ratio=1.0)
    assert q.size == 10
    assert q.edge_count == 45
    assert analyze_graph(q).acyclic


def test_random_acyclic_is_deterministic():
    assert gen_random_acyclic(9) == gen_random_acyclic(9)
    assert gen_random_acyclic(9) != gen_random_acyclic(10)


def test_random_cyclic_complete_pair():
    q = gen_random_cyclic(2, 1.0, seed=0)
    assert q.edge_count == 2
    info = analyze_graph(q)
    assert not info.acyclic
    assert info.sccs == (("a0", "a1"),)


def test_random_cyclic_density():
    q = gen_random_cyclic(40, 0.05, seed=2)
    assert q.edge_count == round(0.05 * 40 * 39)
    assert all(s != t for s, t, _ in q.edges())


def test_random_cyclic_needs_two_arguments():
    with pytest.raises(ValueError):
        gen_random_cyclic(1, 0.5, seed=0)


@hypothesis_settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=60), seeds)
def test_cycle_disjoint_frameworks(n, seed):
    q = gen_random_cycle_disjoint(n, seed)
    assert q.size == n
    assert analyze_graph(q).at_most_one_cycle


def test_derive_seed_streams_differ():
    assert derive_seed(1, 0) != derive_seed(1, 1)
    assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)


@pytest.mark.parametrize("kind", list(GenKind))
def test_generate_dispatch(kind):
    q = generate(GenParams(kind=kind, n=12, seed=4))
    assert q.size == (27 if kind is GenKind.LADDER else 12)


def test_gen_params_validation():
    with pytest.raises(ValueError):
        GenParams(kind="ladder", n=-1)
    with pytest.raises(ValueError):
        GenParams(kind="random_cyclic", density=1.5)
