from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator

from ggt.cases import CASE_IDS
from ggt.fpgroup import STRATEGIES

# ==================== Group Models ====================


class GroupSelector(BaseModel):
    genus: Optional[int] = None
    orientable: bool = False
    rank: int = 2
    relator: Optional[str] = None


class EqualityRequest(BaseModel):
    group: GroupSelector = Field(default_factory=GroupSelector)
    u: str
    v: str
    strategy: str = "auto"

    @field_validator("strategy")
    @classmethod
    def _known_strategy(cls, value: str) -> str:
        if value not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}")
        return value


class EqualityResponse(BaseModel):
    verdict: str
    strategy: str
    witness: List[str]


# ==================== Subgroup Models ====================


class StallingsRequest(BaseModel):
    generators: List[str]
    rank: int = 2
    word: Optional[str] = None


class StallingsResponse(BaseModel):
    automaton: Dict[str, Any]
    contains: Optional[bool] = None


class MalnormalRequest(BaseModel):
    generators: List[str]
    rank: int = 2
    radius: int = Field(default=2, ge=1)
    cap: int = Field(default=4, ge=1)


# ==================== Relative Metric Models ====================


class DhatRequest(BaseModel):
    setting: str = "g3"
    radius: int = Field(default=5, ge=0)
    h: str


class DhatBallRequest(BaseModel):
    setting: str = "g3"
    radius: int = Field(default=5, ge=0)
    r: int = Field(ge=0)
    horizon: Optional[int] = None


# ==================== Quasimorphism Models ====================


class BrooksRequest(BaseModel):
    pattern: str
    word: str
    homogenize: Optional[int] = Field(default=None, ge=1)


class BrooksResponse(BaseModel):
    value: int
    homogenized: Optional[str] = None


class DefectRequest(BaseModel):
    pattern: str
    max_length: int = Field(default=6, ge=0)
    exhaustive: bool = False
    samples: int = Field(default=1000, ge=1)
    seed: int = 0


# ==================== Case Models ====================


class CaseRequest(BaseModel):
    case: str
    seed: Optional[int] = None
    overrides: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("case")
    @classmethod
    def _known_case(cls, value: str) -> str:
        if value not in CASE_IDS:
            raise ValueError(f"case must be one of {CASE_IDS}")
        return value
