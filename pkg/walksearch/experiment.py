"""
Validated configuration for each command-line experiment

Every model checks the lattice and walk invariants on construction, before
any amplitude array is allocated.
"""

from pathlib import Path
from typing import List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from .evolve import MarkedSet, StopRule, WalkParams
from .lattice import LatticeConfig, check_coords

FIT_MODELS = ("inverse-L", "log2-d", "inverse-d", "fixed-L")
TABLE_CHOICES = (1, 2, 3, 5)


def parse_marked(values: Sequence[str]) -> List[Tuple[int, ...]]:
    """Parse repeated "x1,x2,...,xd" options into coordinate tuples"""
    parsed = []
    for value in values:
        try:
            parsed.append(tuple(int(part) for part in value.split(",")))
        except ValueError:
            raise ValueError(f"marked vertex must be comma-separated integers, got {value!r}")
    return parsed


class LatticeExperiment(BaseModel):
    d: int = Field(ge=1)
    L: int
    threads: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check_lattice(self) -> "LatticeExperiment":
        LatticeConfig(d=self.d, L=self.L)
        return self

    @property
    def lattice(self) -> LatticeConfig:
        return LatticeConfig(d=self.d, L=self.L)


class MarkedExperiment(LatticeExperiment):
    t1: int = Field(ge=1)
    marked: List[Tuple[int, ...]] = Field(default_factory=list)
    max_queries: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check_marked(self) -> "MarkedExperiment":
        if not self.marked:
            self.marked = [(0,) * self.d]
        cfg = self.lattice
        for coords in self.marked:
            check_coords(coords, cfg)
        if len(set(self.marked)) != len(self.marked):
            raise ValueError("marked vertices must be distinct")
        return self

    @property
    def marked_set(self) -> MarkedSet:
        return MarkedSet.from_coords(self.marked, self.lattice)

    @property
    def stop(self) -> StopRule:
        return StopRule(max_queries=self.max_queries)


class SearchConfig(MarkedExperiment):
    """Flags of the search command"""

    s: float = Field(ge=0.0, le=1.0)
    trace: Optional[Path] = None
    summary: Optional[Path] = None
    append_results: Optional[Path] = None
    snapshot: Optional[Path] = None

    @property
    def params(self) -> WalkParams:
        return WalkParams(s=self.s, t1=self.t1)


class ScanConfig(MarkedExperiment):
    """Flags of the scan-s command"""

    s_lo: float = Field(ge=0.0, le=1.0)
    s_hi: float = Field(ge=0.0, le=1.0)
    step: float = Field(gt=0.0)
    workers: int = Field(default=1, ge=1)
    output: Optional[Path] = None
    summary: Optional[Path] = None

    @model_validator(mode="after")
    def _check_bounds(self) -> "ScanConfig":
        if self.s_lo > self.s_hi:
            raise ValueError(f"s_lo {self.s_lo} exceeds s_hi {self.s_hi}")
        return self


class ReturnAmpConfig(LatticeExperiment):
    """Flags of the return-amp command: a single s or a scan range"""

    t1: int = Field(ge=1)
    s: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    s_lo: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    s_hi: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    step: Optional[float] = Field(default=None, gt=0.0)
    start: Optional[Tuple[int, ...]] = None
    output: Optional[Path] = None

    @model_validator(mode="after")
    def _check_mode(self) -> "ReturnAmpConfig":
        scan = (self.s_lo, self.s_hi, self.step)
        if self.s is None and any(v is None for v in scan):
            raise ValueError("give either --s or all of --s-lo, --s-hi and --step")
        if self.s is not None and any(v is not None for v in scan):
            raise ValueError("--s cannot be combined with a scan range")
        if self.s is None and self.s_lo > self.s_hi:
            raise ValueError(f"s_lo {self.s_lo} exceeds s_hi {self.s_hi}")
        if self.start is not None:
            check_coords(self.start, self.lattice)
        return self

    @property
    def is_scan(self) -> bool:
        return self.s is None


class FitConfig(BaseModel):
    """Flags of the fit command"""

    input: Path
    model: Literal["inverse-L", "log2-d", "inverse-d", "fixed-L"]
    d: Optional[int] = Field(default=None, ge=1)
    t1: Optional[int] = Field(default=None, ge=1)
    s: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    L: Optional[int] = Field(default=None, ge=4)
    output: Optional[Path] = None

    @field_validator("input")
    @classmethod
    def _check_input(cls, value: Path) -> Path:
        if not value.exists():
            raise ValueError(f"input file not found: {value}")
        return value

    @model_validator(mode="after")
    def _check_selectors(self) -> "FitConfig":
        if self.model == "fixed-L" and (self.L is None or self.t1 is None):
            raise ValueError("model fixed-L needs --L and --t1")
        return self


class ReproduceConfig(BaseModel):
    """Flags of the reproduce command"""

    table: Literal[1, 2, 3, 5]
    t1: Optional[int] = Field(default=None, ge=1)
    full: bool = False
    threads: Optional[int] = Field(default=None, ge=1)
    output: Optional[Path] = None
