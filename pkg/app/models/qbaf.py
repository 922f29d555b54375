from typing import Iterator, TypeAlias

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator
from typing_extensions import Annotated

ArgumentId: TypeAlias = Annotated[str, Field(min_length=1, description="Argument identifier, unique within a framework")]
Strength: TypeAlias = Annotated[float, Field(ge=0.0, le=1.0, allow_inf_nan=False)]
Edge: TypeAlias = tuple[ArgumentId, ArgumentId]
StrengthVector: TypeAlias = dict[str, float]


class Argument(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    id: ArgumentId
    tau: Strength = Field(..., description="Initial strength")


class Qbaf(BaseModel):
    """Arguments with initial strengths plus attack and support relations.

    Argument order is the document order and drives every deterministic output.
    The same ordered pair may be both an attack and a support; self-loops are allowed.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    arguments: tuple[Argument, ...] = ()
    attacks: tuple[Edge, ...] = ()
    supports: tuple[Edge, ...] = ()

    _position: dict[str, int] = PrivateAttr()
    _attackers: dict[str, tuple[str, ...]] = PrivateAttr()
    _supporters: dict[str, tuple[str, ...]] = PrivateAttr()

    @model_validator(mode="after")
    def _check_integrity(self) -> "Qbaf":
        ids: set[str] = set()
        for argument in self.arguments:
            if argument.id in ids:
                raise ValueError(f"duplicate argument id '{argument.id}'")
            ids.add(argument.id)

        for kind, edges in (("attack", self.attacks), ("support", self.supports)):
            seen: set[Edge] = set()
            for source, target in edges:
                for endpoint in (source, target):
                    if endpoint not in ids:
                        raise ValueError(f"{kind} ({source}, {target}) names unknown argument '{endpoint}'")
                if (source, target) in seen:
                    raise ValueError(f"duplicate {kind} ({source}, {target})")
                seen.add((source, target))

        # Endpoints are known from here on.
        self._position = {argument.id: i for i, argument in enumerate(self.arguments)}
        attackers: dict[str, list[str]] = {argument.id: [] for argument in self.arguments}
        supporters: dict[str, list[str]] = {argument.id: [] for argument in self.arguments}
        for source, target in self.attacks:
            attackers[target].append(source)
        for source, target in self.supports:
            supporters[target].append(source)
        self._attackers = {k: tuple(v) for k, v in attackers.items()}
        self._supporters = {k: tuple(v) for k, v in supporters.items()}
        return self

    def __contains__(self, argument_id: object) -> bool:
        return argument_id in self._position

    @property
    def size(self) -> int:
        return len(self.arguments)

    @property
    def ids(self) -> list[str]:
        return [argument.id for argument in self.arguments]

    @property
    def taus(self) -> StrengthVector:
        return {argument.id: argument.tau for argument in self.arguments}

    @property
    def edge_count(self) -> int:
        return len(self.attacks) + len(self.supports)

    def position(self, argument_id: str) -> int:
        return self._position[argument_id]

    def tau(self, argument_id: str) -> float:
        return self.arguments[self._position[argument_id]].tau

    def attackers(self, argument_id: str) -> tuple[str, ...]:
        return self._attackers[argument_id]

    def supporters(self, argument_id: str) -> tuple[str, ...]:
        return self._supporters[argument_id]

    def in_degree(self, argument_id: str) -> int:
        return len(self._attackers[argument_id]) + len(self._supporters[argument_id])

    def edges(self) -> Iterator[tuple[str, str, str]]:
        for source, target in self.attacks:
            yield source, target, "attack"
        for source, target in self.supports:
            yield source, target, "support"


class GraphInfo(BaseModel):
    model_config = ConfigDict(frozen=True)

    acyclic: bool
    topo_order: tuple[str, ...] | None = Field(None, description="Present iff acyclic")
    max_in_degree: int = Field(..., ge=0, description="Largest count of incoming attacks plus supports")
    sccs: tuple[tuple[str, ...], ...]
    at_most_one_cycle: bool

    @property
    def scc_count(self) -> int:
        return len(self.sccs)
