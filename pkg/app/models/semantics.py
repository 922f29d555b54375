import re
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from app.core.errors import SemanticsSpecError


class Family(str, Enum):
    DFQ = "dfq"
    REB = "reb"
    QEN = "qen"
    MLP = "mlp"
    MQE = "mqe"
    DRL = "drl"
    DDRL = "ddrl"


class Aggregation(str, Enum):
    SUM = "sum"
    MAX = "max"


class Clamp(str, Enum):
    EXACT = "exact"
    DIFFERENTIABLE = "differentiable"


DELTA_FAMILIES = frozenset({Family.MQE, Family.DRL, Family.DDRL})
ALPHA_FAMILIES = frozenset({Family.REB, Family.QEN, Family.MLP})

_SEPARATORS = re.compile(r"[:,\s]+")
_LIST_SEPARATORS = re.compile(r"[,;]")


class SemanticsSpec(BaseModel):
    """Semantics family plus its parameters.

    Text form: ``family[:q=sum|max][,gamma=<float>][,k=<float>]``, e.g. ``ddrl:q=max,gamma=0.5``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    family: Family
    q: Aggregation = Field(Aggregation.SUM, description="Normalization of the delta aggregation (mqe, drl, ddrl)")
    gamma: float = Field(1.0, ge=0.0, allow_inf_nan=False, description="Weight of the aggregated influence (drl, ddrl)")
    k: float = Field(100.0, ge=1.0, allow_inf_nan=False, description="Sharpness of the smooth clamp (ddrl)")

    @classmethod
    def parse(cls, text: str, **defaults) -> "SemanticsSpec":
        tokens = [t for t in _SEPARATORS.split(text.strip().lower()) if t]
        if not tokens:
            raise SemanticsSpecError("empty semantics specification")
        fields: dict = {**defaults, "family": tokens[0]}
        for token in tokens[1:]:
            key, sep, value = token.partition("=")
            if not sep or key not in ("q", "gamma", "k"):
                raise SemanticsSpecError(f"bad semantics parameter '{token}' in '{text}'")
            fields[key] = value
        try:
            return cls(**fields)
        except ValidationError as e:
            details = "; ".join(f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors())
            raise SemanticsSpecError(f"invalid semantics '{text}': {details}") from e

    @classmethod
    def parse_many(cls, text: str, **defaults) -> list["SemanticsSpec"]:
        """Parse a list such as ``drl:q=max,gamma=0.5,qen`` or ``drl:q=max;qen``.

        A comma-separated piece of the form ``key=value`` belongs to the specification before it.
        """
        groups: list[list[str]] = []
        for piece in _LIST_SEPARATORS.split(text):
            piece = piece.strip()
            if not piece:
                continue
            head = _SEPARATORS.split(piece)[0]
            if "=" in head:
                if not groups:
                    raise SemanticsSpecError(f"parameter '{piece}' given before any family in '{text}'")
                groups[-1].append(piece)
            else:
                groups.append([piece])
        return [cls.parse(",".join(group), **defaults) for group in groups]

    @property
    def uses_delta(self) -> bool:
        return self.family in DELTA_FAMILIES

    @property
    def clamp(self) -> Clamp:
        return Clamp.DIFFERENTIABLE if self.family is Family.DDRL else Clamp.EXACT

    def encode(self) -> str:
        if self.family in (Family.DRL, Family.DDRL):
            text = f"{self.family.value}:q={self.q.value},gamma={self.gamma:g}"
            return f"{text},k={self.k:g}" if self.family is Family.DDRL else text
        if self.family is Family.MQE:
            return f"mqe:q={self.q.value}"
        return self.family.value

    def __str__(self) -> str:
        return self.encode()
