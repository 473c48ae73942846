"""
Deterministic +-1 response functions I(n, lambda).

Each response is evaluated for one setting against a whole array of hidden
variables at once. Responses that ignore lambda are the deterministic
building blocks; ``threshold-simulator`` compares lambda in [0, 1) with a
setting-dependent threshold; ``memberwise`` and ``pinned`` express explicit
finite ensembles where lambda is a member index.

sign(0) is +1 everywhere.
"""

from typing import Annotated, Dict, List, Literal, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator

from ..errors import DomainError
from ..models.core import Setting, setting_to_unit_vector

Sign = Literal[1, -1]


def _sign(x: np.ndarray) -> np.ndarray:
    return np.where(x >= 0.0, 1, -1).astype(np.int8)


class _Response(BaseModel):
    model_config = ConfigDict(frozen=True)

    def respond(self, setting: Setting, lambdas: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, setting: Setting, hidden_value: float = 0.0) -> int:
        """Scalar evaluation for a single hidden value."""
        return int(self.respond(setting, np.array([hidden_value]))[0])


class ConstantResponse(_Response):
    """Always the same outcome."""

    kind: Literal["constant"] = "constant"
    value: Sign = 1

    def respond(self, setting: Setting, lambdas: np.ndarray) -> np.ndarray:
        return np.full(len(lambdas), self.value, dtype=np.int8)


class SignOfCosTheta(_Response):
    """+1 on the upper hemisphere (cos theta >= 0), -1 below."""

    kind: Literal["sign-of-cos-theta"] = "sign-of-cos-theta"

    def respond(self, setting: Setting, lambdas: np.ndarray) -> np.ndarray:
        return np.full(len(lambdas), _sign(np.array(np.cos(setting.theta))), dtype=np.int8)


class SignOfDotProduct(_Response):
    """sign(n . v) for a fixed vector v."""

    kind: Literal["sign-of-dot-product"] = "sign-of-dot-product"
    vector: Tuple[float, float, float]

    @field_validator("vector")
    @classmethod
    def _nonzero(cls, value):
        if not any(value):
            raise ValueError("vector must be nonzero")
        return value

    def respond(self, setting: Setting, lambdas: np.ndarray) -> np.ndarray:
        dot = float(np.dot(setting_to_unit_vector(setting), self.vector))
        return np.full(len(lambdas), _sign(np.array(dot)), dtype=np.int8)


class ThresholdResponse(_Response):
    """+1 if lambda < (1 + n . b) / 2 else -1, for lambda uniform on [0, 1)."""

    kind: Literal["threshold-simulator"] = "threshold-simulator"
    bloch: Tuple[float, float, float]

    @field_validator("bloch")
    @classmethod
    def _inside_ball(cls, value):
        if float(np.dot(value, value)) > 1.0 + 1e-12:
            raise ValueError(f"Bloch vector {value} lies outside the unit ball")
        return value

    def respond(self, setting: Setting, lambdas: np.ndarray) -> np.ndarray:
        threshold = (1.0 + float(np.dot(setting_to_unit_vector(setting), self.bloch))) / 2.0
        return np.where(np.asarray(lambdas) < threshold, 1, -1).astype(np.int8)


class SignTable(_Response):
    """
    Outcomes tabulated on the nodes of one sphere grid.

    Only valid for settings that are nodes of the grid the table was sampled on.
    """

    kind: Literal["sign-table"] = "sign-table"
    entries: Tuple[Tuple[float, float, Sign], ...] = Field(..., min_length=1)

    _lookup: Dict[Tuple[float, float], int] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context) -> None:
        self._lookup.update({(theta, phi): sign for theta, phi, sign in self.entries})

    def respond(self, setting: Setting, lambdas: np.ndarray) -> np.ndarray:
        try:
            sign = self._lookup[(setting.theta, setting.phi)]
        except KeyError:
            raise DomainError(
                f"Setting (theta={setting.theta}, phi={setting.phi}) is not a node of this sign table's grid"
            ) from None
        return np.full(len(lambdas), sign, dtype=np.int8)


class PinnedResponse(_Response):
    """A response evaluated at a fixed hidden value, whatever lambda is passed."""

    kind: Literal["pinned"] = "pinned"
    base: "ResponseFunction"
    hidden_value: float

    def respond(self, setting: Setting, lambdas: np.ndarray) -> np.ndarray:
        pinned = self.base.respond(setting, np.array([self.hidden_value]))[0]
        return np.full(len(lambdas), pinned, dtype=np.int8)


class MemberwiseResponse(_Response):
    """One response per ensemble member; lambda is the member index."""

    kind: Literal["memberwise"] = "memberwise"
    per_member: Tuple["ResponseFunction", ...] = Field(..., min_length=1)

    def respond(self, setting: Setting, lambdas: np.ndarray) -> np.ndarray:
        out = np.empty(len(lambdas), dtype=np.int8)
        for k, lam in enumerate(lambdas):
            index = int(lam)
            if index != lam or not 0 <= index < len(self.per_member):
                raise DomainError(f"Hidden value {lam} is not a member index")
            out[k] = self.per_member[index].respond(setting, np.array([lam]))[0]
        return out


ResponseFunction = Annotated[
    Union[
        ConstantResponse,
        SignOfCosTheta,
        SignOfDotProduct,
        ThresholdResponse,
        SignTable,
        PinnedResponse,
        MemberwiseResponse,
    ],
    Field(discriminator="kind"),
]

PinnedResponse.model_rebuild()
MemberwiseResponse.model_rebuild()


def sign_table(response: _Response, settings_list: Sequence[Setting], hidden_value: float = 0.0) -> SignTable:
    """Sample a response on the given settings (typically a grid's nodes)."""
    entries: List[Tuple[float, float, int]] = [
        (s.theta, s.phi, response(s, hidden_value)) for s in settings_list
    ]
    return SignTable(entries=tuple(entries))


def random_sign_table(settings_list: Sequence[Setting], rng: np.random.Generator) -> SignTable:
    """Independent uniformly random +-1 outcome at every node."""
    signs = rng.choice([1, -1], size=len(settings_list))
    return SignTable(entries=tuple((s.theta, s.phi, int(v)) for s, v in zip(settings_list, signs)))
