"""
Tests for the bundled published tables and the comparison records
"""

import math

import pytest

from walksearch.reference import GROVER_CONSTANT, load_published_tables
from walksearch.reproduce import ComparisonRow, reproduce, reproduce_dimension_fits
from walksearch.tune import SCALING_PRESETS, theta


class TestPublishedTables:

    def test_table_sizes(self):
        """Test that every table is present"""
        tables = load_published_tables()
        assert len(tables.optimal_tuning) == 19
        assert len(tables.finite_size_fits) == 21
        assert len(tables.dimension_fits) == 3
        assert len(tables.fixed_side_fits) == 12
        assert [row.M for row in tables.multi_target.rows] == [1, 2, 2, 3, 3, 3]

    def test_lookups(self):
        """Test row lookup helpers"""
        tables = load_published_tables()
        row = tables.tuning(d=3, t1=3)
        assert row.L == 32
        assert row.search.s == pytest.approx(0.7015)
        assert [r.d for r in tables.finite_size(2)] == [3, 4, 5, 6, 7, 8, 9]
        with pytest.raises(KeyError):
            tables.tuning(d=9, t1=3)

    def test_theta_column_is_consistent(self):
        """Test that the tabulated theta agrees with the tabulated s"""
        for row in load_published_tables().optimal_tuning:
            assert theta(row.search.s, row.t1) == pytest.approx(row.search.theta, abs=0.01)
            assert theta(row.walk.s, row.t1) == pytest.approx(row.walk.theta, abs=0.01)

    def test_finite_size_rows_use_scaling_presets(self):
        """Test that the finite-size series were run at the preset tunings"""
        for row in load_published_tables().finite_size_fits:
            assert row.s == pytest.approx(SCALING_PRESETS[row.t1])

    def test_ratio_column(self):
        """Test a2/sqrt(a1) against its own a1 and a2"""
        for row in load_published_tables().finite_size_fits:
            assert row.a2 / math.sqrt(row.a1) == pytest.approx(row.ratio, rel=0.03)

    def test_grover_constant(self):
        """Test pi/4"""
        assert GROVER_CONSTANT == pytest.approx(0.7853981634)


class TestComparisonRow:

    def test_absolute_tolerance(self):
        """Test an absolute comparison"""
        row = ComparisonRow(1, "d=3", "t2", 55, 56, 1)
        assert row.passed
        assert row.as_row()["tolerance"] == "1"

    def test_relative_tolerance(self):
        """Test a relative comparison"""
        row = ComparisonRow(1, "d=3", "P", 0.1, 0.102, 0.01, relative=True)
        assert row.deviation == pytest.approx(0.02)
        assert not row.passed
        assert row.as_row()["tolerance"] == "0.01 rel"


class TestDimensionFitReproduction:

    def test_refit_of_published_coefficients(self):
        """Test that the dimension fits follow from the tabulated finite-size coefficients"""
        report = reproduce_dimension_fits(t1=3)
        assert len(report.rows) == 6
        c1 = next(r for r in report.rows if r.quantity == "c1")
        d1 = next(r for r in report.rows if r.quantity == "d1")
        assert c1.passed and d1.passed

    def test_unknown_table(self):
        """Test that only the reproducible tables are accepted"""
        with pytest.raises(ValueError):
            reproduce(4)
