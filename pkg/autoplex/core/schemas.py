from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

Measure = Literal["AN", "AMINUS", "ANLOWER"]


class FamilyMember(BaseModel):
    """One power occurrence of an optimal A_N^lower family."""

    start: int = Field(..., ge=0, description="0-based start position")
    period: int = Field(..., ge=1, description="Length of the repeated base")
    extent: int = Field(..., ge=2, description="Length of the whole occurrence")


class ComplexityRecord(BaseModel):
    word: str = Field(..., description="The word, one decimal digit per symbol")
    length: int = Field(..., ge=0)
    measure: Measure
    value: int = Field(..., ge=1, description="Complexity value (lower end of the bracket when incomplete)")
    witness: Optional[List[int]] = Field(None, description="State sequence inducing a witness automaton")
    elapsed_ms: float = Field(0.0, ge=0.0)
    method: str = Field(..., description="How the value was obtained")

    # Filled in when a time budget cut the computation short
    complete: bool = True
    lower: Optional[int] = None
    upper: Optional[int] = None

    family: Optional[List[FamilyMember]] = None

    @field_validator("witness")
    @classmethod
    def _witness_starts_at_zero(cls, v):
        if v is not None and (not v or v[0] != 0):
            raise ValueError("witness state sequence must start at state 0")
        return v

    model_config = {
        "json_schema_extra": {
            "examples": [
                {
                    "word": "0102",
                    "length": 4,
                    "measure": "AMINUS",
                    "value": 3,
                    "witness": None,
                    "elapsed_ms": 0.4,
                    "method": "exact-search",
                }
            ]
        }
    }


class CacheEntry(BaseModel):
    digest: str
    word: str
    measure: Measure
    value: int
    witness: Optional[List[int]] = None
    family: Optional[List[FamilyMember]] = None
    tool_version: str
    timestamp: str


class SearchConfig(BaseModel):
    """Knobs for the exact A_N / A- search."""

    q_min: int = Field(1, ge=1, description="Smallest state count tried (raised to A_N^lower automatically)")
    q_max: Optional[int] = Field(None, ge=1, description="Largest state count tried; defaults to |w|+1")
    deterministic: bool = Field(False, description="Search for deterministic partial witnesses (A-)")
    parallel_split_depth: int = Field(4, ge=0, description="Canonical-prefix depth of the work items")
    checkpoint_path: Optional[str] = None
    time_budget: Optional[float] = Field(None, gt=0, description="Seconds before the search gives up")
    threads: int = Field(1, ge=1)
    prune: bool = Field(True, description="Walk-count pruning during the search")
