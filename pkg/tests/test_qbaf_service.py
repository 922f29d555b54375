import io

import pytest

from app.core.errors import QbafError, QbafFormatError, UnknownArgumentError
from app.services.generators import gen_ladder, gen_random_acyclic, gen_random_cycle_disjoint, gen_random_cyclic
from app.services.qbaf_service import (
    analyze_graph,
    load_qbaf,
    parents,
    parse_qbaf,
    save_qbaf,
    serialize_qbaf,
)
from tests.conftest import GOAL_STAR_JSON, make_qbaf


def test_parse_goal_star(goal_star):
    q = parse_qbaf(GOAL_STAR_JSON)
    assert q == goal_star
    assert q.ids == ["g", "a1", "s1", "s2"]
    assert q.tau("a1") == 0.9
    assert q.attackers("g") == ("a1",)
    assert q.supporters("g") == ("s1", "s2")


@pytest.mark.parametrize(
    "document",
    [
        '{"arguments":[{"id":"a","tau":0.5},{"id":"a","tau":0.1}],"attacks":[],"supports":[]}',
        '{"arguments":[{"id":"a","tau":0.5}],"attacks":[["a","b"]],"supports":[]}',
        '{"arguments":[{"id":"a","tau":0.5}],"attacks":[],"supports":[["a","b"]]}',
        '{"arguments":[{"id":"a","tau":0.5}],"attacks":[["b","a"]],"supports":[]}',
        '{"arguments":[{"id":"a","tau":"0.5"}],"attacks":[],"supports":[]}',
        '{"arguments":[{"id":"a","tau":true}],"attacks":[],"supports":[]}',
        '{"arguments":[{"id":"a","tau":null}],"attacks":[],"supports":[]}',
        '{"arguments":[{"id":"a","tau":1.5}],"attacks":[],"supports":[]}',
        '{"arguments":[{"id":"a","tau":-0.1}],"attacks":[],"supports":[]}',
        '{"arguments":[{"id":"a","tau":0.5}],"attacks":[["a","a"],["a","a"]],"supports":[]}',
        '{"arguments":[{"id":"","tau":0.5}],"attacks":[],"supports":[]}',
        '{"arguments":[{"id":"a","tau":0.5}],"attacks":[]}',
        '{"arguments":[{"id":"a","tau":0.5,"label":"x"}],"attacks":[],"supports":[]}',
        '{"arguments":[',
    ],
)
def test_parse_rejects_malformed(document):
    with pytest.raises(QbafFormatError):
        parse_qbaf(document)


def test_unknown_edge_target_is_a_format_error():
    with pytest.raises(QbafFormatError, match="unknown argument 'x'"):
        parse_qbaf('{"arguments":[{"id":"g","tau":0.5}],"attacks":[["g","x"]],"supports":[]}')


def test_integer_strengths_are_numbers():
    q = parse_qbaf('{"arguments":[{"id":"a","tau":1},{"id":"b","tau":0}],"attacks":[],"supports":[]}')
    assert q.taus == {"a": 1.0, "b": 0.0}


def test_format_error_is_value_error():
    with pytest.raises(ValueError):
        parse_qbaf("[]")


def test_same_pair_may_attack_and_support():
    q = parse_qbaf('{"arguments":[{"id":"a","tau":0.5},{"id":"b","tau":0.5}],"attacks":[["a","b"]],"supports":[["a","b"]]}')
    assert q.in_degree("b") == 2


def test_serialize_round_trip(goal_star):
    text = serialize_qbaf(goal_star)
    assert text.endswith("\n")
    assert parse_qbaf(text) == goal_star
    assert serialize_qbaf(parse_qbaf(text)) == text


def test_load_and_save(tmp_path, goal_star, monkeypatch):
    path = tmp_path / "goal_star.json"
    save_qbaf(goal_star, path)
    assert load_qbaf(path) == goal_star

    monkeypatch.setattr("sys.stdin", io.StringIO(GOAL_STAR_JSON))
    assert load_qbaf("-") == goal_star


def test_load_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_qbaf(tmp_path / "missing.json")


def test_parents(goal_star):
    assert parents(goal_star, "g") == (("a1",), ("s1", "s2"))
    assert parents(goal_star, "a1") == ((), ())


def test_parents_unknown_argument(goal_star):
    with pytest.raises(UnknownArgumentError) as e:
        parents(goal_star, "zz")
    assert e.value.argument_id == "zz"
    assert isinstance(e.value, QbafError)
    assert isinstance(e.value, KeyError)


def test_analyze_goal_star(goal_star):
    info = analyze_graph(goal_star)
    assert info.acyclic
    assert info.max_in_degree == 3
    assert info.at_most_one_cycle
    assert info.topo_order == ("a1", "s1", "s2", "g")
    assert info.scc_count == 4


def test_analyze_empty(empty):
    info = analyze_graph(empty)
    assert info.acyclic
    assert info.topo_order == ()
    assert info.max_in_degree == 0
    assert info.sccs == ()


def test_analyze_oscillator(oscillator):
    info = analyze_graph(oscillator)
    assert not info.acyclic
    assert info.topo_order is None
    assert info.max_in_degree == 2
    assert info.sccs == (("x0", "x1"),)
    assert not info.at_most_one_cycle


def test_two_cycles_through_one_argument_share_a_component():
    q = make_qbaf(
        {"x": 0.5, "y": 0.4, "z": 0.3},
        attacks=[("x", "y"), ("x", "z")],
        supports=[("y", "x"), ("z", "x")],
    )
    info = analyze_graph(q)
    assert info.sccs == (("x", "y", "z"),)
    assert not info.at_most_one_cycle


def test_simple_cycles_count_as_one_cycle(mutual_attack):
    info = analyze_graph(mutual_attack)
    assert not info.acyclic
    assert info.at_most_one_cycle


def test_self_loop_is_a_cycle():
    info = analyze_graph(make_qbaf({"a": 0.3}, supports=[("a", "a")]))
    assert not info.acyclic
    assert info.at_most_one_cycle


def test_attack_and_support_on_a_cycle_pair_are_two_edges():
    q = make_qbaf({"a": 0.5, "b": 0.5}, attacks=[("a", "b"), ("b", "a")], supports=[("a", "b")])
    assert not analyze_graph(q).at_most_one_cycle


def test_sccs_follow_document_order():
    q = make_qbaf(
        {"c": 0.1, "a": 0.2, "b": 0.3, "d": 0.4},
        attacks=[("a", "b"), ("b", "a"), ("d", "c")],
    )
    assert analyze_graph(q).sccs == (("c",), ("a", "b"), ("d",))


@pytest.mark.parametrize("seed", [0, 1, 7])
@pytest.mark.parametrize(
    "generate",
    [
        lambda seed: gen_ladder(6, seed),
        lambda seed: gen_random_acyclic(seed, n=20, density=0.2),
        lambda seed: gen_random_cyclic(12, 0.3, seed),
        lambda seed: gen_random_cycle_disjoint(15, seed),
    ],
    ids=["ladder", "acyclic", "cyclic", "cycle-disjoint"],
)
def test_generated_frameworks_survive_serialization(generate, seed):
    q = generate(seed)
    text = serialize_qbaf(q)
    restored = parse_qbaf(text)
    assert restored == q
    assert serialize_qbaf(restored) == text
