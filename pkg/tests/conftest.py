import pytest

from app.models.qbaf import Argument, Qbaf
from app.services.qbaf_service import serialize_qbaf

GOAL_STAR_JSON = (
    '{"arguments":[{"id":"g","tau":0.5},{"id":"a1","tau":0.9},{"id":"s1","tau":0.1},{"id":"s2","tau":0.2}],'
    '"attacks":[["a1","g"]],"supports":[["s1","g"],["s2","g"]]}'
)


def make_qbaf(taus: dict[str, float], attacks=(), supports=()) -> Qbaf:
    return Qbaf(
        arguments=tuple(Argument(id=a, tau=t) for a, t in taus.items()),
        attacks=tuple(attacks),
        supports=tuple(supports),
    )


@pytest.fixture
def goal_star() -> Qbaf:
    """Goal g (0.5) attacked by a1 (0.9), supported by s1 (0.1) and s2 (0.2)."""
    return make_qbaf(
        {"g": 0.5, "a1": 0.9, "s1": 0.1, "s2": 0.2},
        attacks=[("a1", "g")],
        supports=[("s1", "g"), ("s2", "g")],
    )


@pytest.fixture
def single_attack() -> Qbaf:
    return make_qbaf({"g": 1.0, "a1": 1.0}, attacks=[("a1", "g")])


@pytest.fixture
def mutual_attack() -> Qbaf:
    return make_qbaf({"a": 1.0, "b": 1.0}, attacks=[("a", "b"), ("b", "a")])


@pytest.fixture
def oscillator() -> Qbaf:
    """Two arguments attacking themselves and each other; exact-clamp iteration alternates 1, 0."""
    return make_qbaf(
        {"x0": 1.0, "x1": 1.0},
        attacks=[("x0", "x0"), ("x0", "x1"), ("x1", "x0"), ("x1", "x1")],
    )


@pytest.fixture
def empty() -> Qbaf:
    return Qbaf()


@pytest.fixture
def write_qbaf(tmp_path):
    def _write(q: Qbaf, name: str = "framework.json") -> str:
        path = tmp_path / name
        path.write_text(serialize_qbaf(q), encoding="utf-8")
        return str(path)

    return _write
