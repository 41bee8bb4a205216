"""
Hypercubic lattice geometry
Vertex indexing, coordinates and the odd/even elementary-hypercube partitions
"""

import itertools
from enum import Enum
from functools import lru_cache
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from .exceptions import ContractViolation

VertexCoords = Tuple[int, ...]

INDEX_LIMIT = int(np.iinfo(np.int64).max)


class Parity(str, Enum):
    """Label of the two block-diagonal halves of the walk"""

    ODD = "odd"
    EVEN = "even"

    @property
    def offset(self) -> int:
        """Coordinate parity shared by every block base of this class"""
        return 0 if self is Parity.ODD else 1


class LatticeConfig(BaseModel):
    """Periodic d-dimensional hypercubic lattice with side L and N = L^d vertices"""

    model_config = ConfigDict(frozen=True)

    d: int
    L: int

    @field_validator("d")
    @classmethod
    def _check_dimension(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"dimension must be >= 1, got {value}")
        return value

    @field_validator("L")
    @classmethod
    def _check_side(cls, value: int) -> int:
        if value < 4 or value % 2:
            raise ValueError(f"lattice side must be an even integer >= 4, got {value}")
        return value

    @model_validator(mode="after")
    def _check_index_range(self) -> "LatticeConfig":
        if self.L**self.d > INDEX_LIMIT:
            raise ValueError(f"N = {self.L}^{self.d} exceeds the addressable index range")
        return self

    @property
    def N(self) -> int:
        return self.L**self.d

    @property
    def shape(self) -> Tuple[int, ...]:
        """Array shape of the amplitude field; axis 0 is dimension d, the last axis dimension 1"""
        return (self.L,) * self.d

    @property
    def corners(self) -> int:
        return 2**self.d

    @property
    def blocks_per_parity(self) -> int:
        return self.N // self.corners


class BlockId(NamedTuple):
    """Elementary hypercube identified by parity and lowest corner"""

    parity: Parity
    base: VertexCoords


def check_coords(coords: Sequence[int], cfg: LatticeConfig) -> None:
    """Raise ContractViolation unless coords is a valid vertex of cfg"""
    if len(coords) != cfg.d:
        raise ContractViolation(f"expected {cfg.d} coordinates, got {len(coords)}")
    for axis, x in enumerate(coords, start=1):
        if not 0 <= x < cfg.L:
            raise ContractViolation(f"coordinate {axis} = {x} outside [0, {cfg.L})")


def vertex_index(coords: Sequence[int], cfg: LatticeConfig) -> int:
    """Flat index sum_j x_j L^(j-1); dimension 1 has stride 1"""
    check_coords(coords, cfg)
    index = 0
    for x in reversed(coords):
        index = index * cfg.L + int(x)
    return index


def coords_of_index(index: int, cfg: LatticeConfig) -> VertexCoords:
    """Inverse of vertex_index"""
    if not 0 <= index < cfg.N:
        raise ContractViolation(f"vertex index {index} outside [0, {cfg.N})")
    coords = []
    for _ in range(cfg.d):
        index, x = divmod(index, cfg.L)
        coords.append(x)
    return tuple(coords)


def corner_code(coords: Sequence[int]) -> int:
    """Position of a vertex inside its elementary hypercube, sum_j (x_j mod 2) 2^(j-1)"""
    return sum((int(x) % 2) << j for j, x in enumerate(coords))


def enumerate_blocks(parity: Parity, cfg: LatticeConfig) -> List[BlockId]:
    """All blocks of one parity class, ordered by the flat index of their base"""
    starts = range(parity.offset, cfg.L, 2)
    # product varies its last factor fastest, so feed dimensions slowest-first
    return [
        BlockId(parity, tuple(reversed(base)))
        for base in itertools.product(starts, repeat=cfg.d)
    ]


def block_members(block: BlockId, cfg: LatticeConfig) -> List[int]:
    """Flat indices of the 2^d corners of a block, ordered by corner code"""
    parity, base = block
    check_coords(base, cfg)
    if any(x % 2 != parity.offset for x in base):
        raise ContractViolation(f"{base} is not the base of an {parity.value} block")
    members = []
    for code in range(cfg.corners):
        corner = tuple((x + ((code >> j) & 1)) % cfg.L for j, x in enumerate(base))
        members.append(vertex_index(corner, cfg))
    return members


def translate_block(block: BlockId, axis: int, cfg: LatticeConfig, steps: int = 2) -> BlockId:
    """Shift a block base along one axis (1-based); even steps keep the parity class"""
    if not 1 <= axis <= cfg.d:
        raise ContractViolation(f"axis must lie in [1, {cfg.d}], got {axis}")
    if steps % 2:
        raise ContractViolation("blocks are only translation invariant in steps of 2")
    base = list(block.base)
    base[axis - 1] = (base[axis - 1] + steps) % cfg.L
    return BlockId(block.parity, tuple(base))


def index_dtype(n: int) -> type:
    return np.int32 if n <= np.iinfo(np.int32).max else np.int64


@lru_cache(maxsize=2)
def block_member_table(parity: Parity, cfg: LatticeConfig) -> np.ndarray:
    """Vectorised block_members for a whole parity class, shape (N / 2^d, 2^d)

    Row order matches enumerate_blocks and column order is the corner code.
    Indices are int32 whenever N fits.
    """
    grid = np.arange(cfg.N, dtype=index_dtype(cfg.N)).reshape(cfg.shape)
    if parity is Parity.EVEN:
        grid = np.roll(grid, shift=-1, axis=tuple(range(cfg.d)))

    half = cfg.L // 2
    split = grid.reshape(sum(((half, 2) for _ in range(cfg.d)), ()))
    # block axes first, then corner axes (dimension d outermost, so bit 1 is fastest)
    order = tuple(range(0, 2 * cfg.d, 2)) + tuple(range(1, 2 * cfg.d, 2))
    table = np.ascontiguousarray(
        split.transpose(order).reshape(cfg.blocks_per_parity, cfg.corners)
    )
    table.flags.writeable = False
    return table
