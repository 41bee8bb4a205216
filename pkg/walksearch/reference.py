"""
Published reference values shipped with the package
"""

import json
import math
from functools import lru_cache
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import BaseModel

DATA_FILE = Path(__file__).parent / "data" / "published_tables.json"

GROVER_CONSTANT = math.pi / 4


class SearchOptimum(BaseModel):
    s: float
    t2: int
    P: float
    theta: float


class WalkOptimum(BaseModel):
    s: float
    A: float
    theta: float


class TuningRow(BaseModel):
    """Optimal s for one (d, L, t1), by search peak and by return amplitude"""

    d: int
    L: int
    t1: int
    search: SearchOptimum
    walk: WalkOptimum


class FiniteSizeRow(BaseModel):
    """P = a1 + b1/L and t2/sqrt(N) = a2 + b2/L for one (s, t1, d)"""

    s: float
    t1: int
    d: int
    L: List[int]
    a1: float
    b1: Optional[float]
    err1: Optional[float]
    a2: float
    b2: Optional[float]
    err2: Optional[float]
    ratio: float


class DimensionFitRow(BaseModel):
    s: float
    t1: int
    dims: List[int]
    c1: float
    d1: float
    err1: float
    c2: float
    d2: float
    err2: float
    c3: float
    d3: float
    err3: float


class FixedSideRow(BaseModel):
    s: float
    t1: int
    L: int
    dims: List[int]
    a: float
    b: float
    err: float


class MultiTargetRow(BaseModel):
    marked: List[Tuple[int, ...]]
    P: List[float]
    t2: List[int]

    @property
    def M(self) -> int:
        return len(self.marked)


class MultiTargetTable(BaseModel):
    d: int
    L: int
    s: float
    t1: int
    rows: List[MultiTargetRow]


class PublishedTables(BaseModel):
    optimal_tuning: List[TuningRow]
    finite_size_fits: List[FiniteSizeRow]
    dimension_fits: List[DimensionFitRow]
    fixed_side_fits: List[FixedSideRow]
    multi_target: MultiTargetTable

    def tuning(self, d: int, t1: int) -> TuningRow:
        for row in self.optimal_tuning:
            if row.d == d and row.t1 == t1:
                return row
        raise KeyError(f"no tuning row for d={d}, t1={t1}")

    def finite_size(self, t1: int, d: Optional[int] = None) -> List[FiniteSizeRow]:
        return [r for r in self.finite_size_fits if r.t1 == t1 and (d is None or r.d == d)]

    def dimension_fit(self, t1: int) -> DimensionFitRow:
        for row in self.dimension_fits:
            if row.t1 == t1:
                return row
        raise KeyError(f"no dimension fit for t1={t1}")


@lru_cache(maxsize=1)
def load_published_tables(path: Optional[Path] = None) -> PublishedTables:
    """Parse the bundled reference tables"""
    with open(path or DATA_FILE, "r") as f:
        return PublishedTables.model_validate(json.load(f))
