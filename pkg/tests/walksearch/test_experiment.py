"""
Tests for the validated experiment configurations
"""

import pytest
from pydantic import ValidationError

from walksearch.exceptions import ContractViolation
from walksearch.experiment import (
    FitConfig,
    ReproduceConfig,
    ReturnAmpConfig,
    ScanConfig,
    SearchConfig,
    parse_marked,
)


class TestParseMarked:

    def test_parses_coordinates(self):
        """Test the x1,...,xd option format"""
        assert parse_marked(["0,32,33", "1,2,3"]) == [(0, 32, 33), (1, 2, 3)]

    def test_rejects_garbage(self):
        """Test a non-integer coordinate"""
        with pytest.raises(ValueError, match="comma-separated"):
            parse_marked(["1,a"])


class TestSearchConfig:

    def test_defaults_to_origin(self):
        """Test that an empty marked list means the origin"""
        config = SearchConfig(d=3, L=8, t1=3, s=0.7)
        assert config.marked == [(0, 0, 0)]
        assert config.marked_set.vertices == (0,)
        assert config.params.s == 0.7
        assert config.stop.max_queries is None

    def test_marked_coordinates_are_checked(self):
        """Test that marked vertices must lie on the lattice"""
        with pytest.raises((ValidationError, ContractViolation)):
            SearchConfig(d=2, L=8, t1=3, s=0.7, marked=[(8, 0)])

    def test_duplicate_marked_vertices(self):
        """Test that the marked vertices must be distinct"""
        with pytest.raises(ValidationError):
            SearchConfig(d=2, L=8, t1=3, s=0.7, marked=[(1, 1), (1, 1)])

    @pytest.mark.parametrize(
        "overrides",
        [{"L": 7}, {"L": 2}, {"s": 1.5}, {"t1": 0}, {"d": 0}, {"max_queries": 0}],
    )
    def test_rejects_invalid_flags(self, overrides):
        """Test that bad flags fail before any state is allocated"""
        flags = dict(d=2, L=8, t1=3, s=0.7)
        flags.update(overrides)
        with pytest.raises(ValidationError):
            SearchConfig(**flags)


class TestScanConfig:

    def test_bounds_order(self):
        """Test s_lo <= s_hi"""
        with pytest.raises(ValidationError):
            ScanConfig(d=2, L=8, t1=3, s_lo=0.8, s_hi=0.2, step=0.1)

    def test_valid_scan(self):
        """Test a well-formed scan"""
        config = ScanConfig(d=2, L=8, t1=3, s_lo=0.2, s_hi=0.8, step=0.1, workers=2)
        assert config.workers == 2


class TestReturnAmpConfig:

    def test_single_value(self):
        """Test the single-s mode"""
        assert not ReturnAmpConfig(d=2, L=8, t1=3, s=0.5).is_scan

    def test_scan_mode(self):
        """Test the range mode"""
        assert ReturnAmpConfig(d=2, L=8, t1=3, s_lo=0.1, s_hi=0.9, step=0.1).is_scan

    def test_modes_are_exclusive(self):
        """Test that --s and a range cannot be mixed"""
        with pytest.raises(ValidationError):
            ReturnAmpConfig(d=2, L=8, t1=3, s=0.5, s_lo=0.1)
        with pytest.raises(ValidationError):
            ReturnAmpConfig(d=2, L=8, t1=3, s_lo=0.1)


class TestFitConfig:

    def test_missing_input(self, tmp_path):
        """Test that the results file must exist"""
        with pytest.raises(ValidationError, match="not found"):
            FitConfig(input=tmp_path / "missing.csv", model="inverse-L")

    def test_unknown_model(self, linear_results_file):
        """Test the model choices"""
        with pytest.raises(ValidationError):
            FitConfig(input=linear_results_file, model="cubic")

    def test_fixed_side_needs_selectors(self, linear_results_file):
        """Test that fixed-L needs --L and --t1"""
        with pytest.raises(ValidationError):
            FitConfig(input=linear_results_file, model="fixed-L", L=8)
        assert FitConfig(input=linear_results_file, model="fixed-L", L=8, t1=3).L == 8


class TestReproduceConfig:

    @pytest.mark.parametrize("table", [1, 2, 3, 5])
    def test_known_tables(self, table):
        """Test the reproducible tables"""
        assert ReproduceConfig(table=table).table == table

    def test_unknown_table(self):
        """Test that other table numbers are rejected"""
        with pytest.raises(ValidationError):
            ReproduceConfig(table=4)
