"""
Tests for lattice geometry and the block partitions
"""

import numpy as np
import pytest
from pydantic import ValidationError

from walksearch.exceptions import ContractViolation
from walksearch.lattice import (
    BlockId,
    LatticeConfig,
    Parity,
    block_member_table,
    block_members,
    check_coords,
    coords_of_index,
    corner_code,
    enumerate_blocks,
    index_dtype,
    translate_block,
    vertex_index,
)


class TestLatticeConfig:

    def test_derived_sizes(self, cube_lattice):
        """Test N, shape, corners and blocks per parity"""
        assert cube_lattice.N == 64
        assert cube_lattice.shape == (4, 4, 4)
        assert cube_lattice.corners == 8
        assert cube_lattice.blocks_per_parity == 8

    @pytest.mark.parametrize("L", [2, 5, 7, 0])
    def test_rejects_bad_sides(self, L):
        """Test that odd sides and sides below 4 are rejected"""
        with pytest.raises(ValidationError):
            LatticeConfig(d=2, L=L)

    def test_rejects_zero_dimension(self):
        """Test that d must be at least 1"""
        with pytest.raises(ValidationError):
            LatticeConfig(d=0, L=4)

    def test_rejects_unaddressable_size(self):
        """Test that N beyond the 64-bit index range is rejected"""
        with pytest.raises(ValidationError):
            LatticeConfig(d=40, L=4)

    def test_is_hashable(self):
        """Test that equal configs hash alike so caches can key on them"""
        assert hash(LatticeConfig(d=2, L=8)) == hash(LatticeConfig(d=2, L=8))


class TestIndexing:

    def test_dimension_one_is_fastest(self, cube_lattice):
        """Test the flat index strides"""
        assert vertex_index((1, 0, 0), cube_lattice) == 1
        assert vertex_index((0, 1, 0), cube_lattice) == 4
        assert vertex_index((0, 0, 1), cube_lattice) == 16
        assert vertex_index((3, 2, 1), cube_lattice) == 3 + 2 * 4 + 16

    def test_coords_of_index_inverts_vertex_index(self, cube_lattice):
        """Test index -> coordinates -> index on every vertex"""
        for v in range(cube_lattice.N):
            assert vertex_index(coords_of_index(v, cube_lattice), cube_lattice) == v

    def test_out_of_range_coordinate(self, square_lattice):
        """Test coordinate bounds"""
        with pytest.raises(ContractViolation, match="outside"):
            check_coords((0, 4), square_lattice)

    def test_wrong_coordinate_count(self, square_lattice):
        """Test coordinate arity"""
        with pytest.raises(ContractViolation, match="expected 2 coordinates"):
            vertex_index((0, 0, 0), square_lattice)

    def test_index_out_of_range(self, square_lattice):
        """Test flat index bounds"""
        with pytest.raises(ContractViolation):
            coords_of_index(16, square_lattice)

    def test_corner_code(self):
        """Test the in-block position of a vertex"""
        assert corner_code((1, 0, 1)) == 5
        assert corner_code((2, 4, 6)) == 0
        assert corner_code((3, 3)) == 3


class TestBlocks:

    def test_odd_block_members(self, square_lattice):
        """Test the corners of the block at the origin"""
        block = BlockId(Parity.ODD, (0, 0))
        assert block_members(block, square_lattice) == [0, 1, 4, 5]

    def test_even_block_members(self, square_lattice):
        """Test an even block and one that wraps around both axes"""
        assert block_members(BlockId(Parity.EVEN, (1, 1)), square_lattice) == [5, 6, 9, 10]
        assert block_members(BlockId(Parity.EVEN, (3, 3)), square_lattice) == [15, 12, 3, 0]

    def test_wrong_parity_base(self, square_lattice):
        """Test that a base with the wrong coordinate parity is rejected"""
        with pytest.raises(ContractViolation, match="not the base"):
            block_members(BlockId(Parity.EVEN, (0, 1)), square_lattice)

    def test_enumerate_blocks_order(self, square_lattice):
        """Test that blocks come out ordered by the flat index of their base"""
        bases = [b.base for b in enumerate_blocks(Parity.ODD, square_lattice)]
        assert bases == [(0, 0), (2, 0), (0, 2), (2, 2)]
        flat = [vertex_index(b, square_lattice) for b in bases]
        assert flat == sorted(flat)

    @pytest.mark.parametrize("parity", list(Parity))
    @pytest.mark.parametrize("d,L", [(1, 6), (2, 4), (3, 4), (2, 8)])
    def test_member_table_matches_block_members(self, parity, d, L):
        """Test the vectorised table against the per-block construction"""
        cfg = LatticeConfig(d=d, L=L)
        table = block_member_table(parity, cfg)
        expected = [block_members(b, cfg) for b in enumerate_blocks(parity, cfg)]
        assert table.shape == (cfg.blocks_per_parity, cfg.corners)
        assert table.tolist() == expected

    @pytest.mark.parametrize("parity", list(Parity))
    def test_partition_covers_every_vertex_once(self, parity, cube_lattice):
        """Test that the blocks of one parity tile the lattice"""
        table = block_member_table(parity, cube_lattice)
        assert np.array_equal(np.sort(table.ravel()), np.arange(cube_lattice.N))

    def test_member_table_is_read_only(self, square_lattice):
        """Test that the cached table cannot be mutated"""
        table = block_member_table(Parity.ODD, square_lattice)
        with pytest.raises(ValueError):
            table[0, 0] = 1

    def test_member_table_uses_narrow_indices(self, cube_lattice):
        """Test int32 member indices below 2^31 vertices and int64 above"""
        assert block_member_table(Parity.EVEN, cube_lattice).dtype == np.int32
        assert index_dtype(2**31 - 1) == np.int32
        assert index_dtype(2**31) == np.int64

    def test_member_table_cache_holds_one_lattice(self):
        """Test that building tables for several lattices keeps only the latest pair"""
        block_member_table.cache_clear()
        for L in (4, 6, 8):
            cfg = LatticeConfig(d=2, L=L)
            for parity in Parity:
                block_member_table(parity, cfg)
        info = block_member_table.cache_info()
        assert info.maxsize == 2
        assert info.currsize == 2

    def test_translate_block(self, square_lattice):
        """Test translation by two sites, with wrap-around"""
        block = BlockId(Parity.ODD, (0, 0))
        moved = translate_block(block, 1, square_lattice)
        assert moved == BlockId(Parity.ODD, (2, 0))
        assert translate_block(moved, 1, square_lattice) == block

    def test_translate_block_keeps_corner_order(self, plane_lattice):
        """Test that translated blocks list their corners in the same pattern"""
        block = BlockId(Parity.EVEN, (1, 1))
        moved = translate_block(block, 2, plane_lattice, steps=4)
        shift = 4 * plane_lattice.L
        before = block_members(block, plane_lattice)
        after = block_members(moved, plane_lattice)
        assert after == [v + shift for v in before]

    def test_translate_block_rejects_odd_steps(self, square_lattice):
        """Test that only even translations keep the partition"""
        with pytest.raises(ContractViolation):
            translate_block(BlockId(Parity.ODD, (0, 0)), 1, square_lattice, steps=1)

    def test_translate_block_rejects_bad_axis(self, square_lattice):
        """Test that the axis is 1-based"""
        with pytest.raises(ContractViolation):
            translate_block(BlockId(Parity.ODD, (0, 0)), 0, square_lattice)
