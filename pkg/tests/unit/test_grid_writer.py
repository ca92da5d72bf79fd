"""Tests for grid serialization."""

import pytest

from sas_entanglement.config import GridConfig
from sas_entanglement.exceptions import ValidationError
from sas_entanglement.models.api import GridPayload
from sas_entanglement.models.domain import GridResult, GridRow
from sas_entanglement.workers.grid_builder import GridBuilder
from sas_entanglement.workers.grid_writer import (
    parse_csv,
    series_path,
    series_to_csv_text,
    to_csv_text,
    to_json,
    write_csv,
    write_json,
)


@pytest.fixture
def grid() -> GridResult:
    return GridBuilder(GridConfig(boundary_points=5), seed=1).fig1(resolution=6)


class TestCsv:
    def test_layout(self, grid):
        lines = to_csv_text(grid).split("\n")
        assert lines[0] == '# figure: "fig1"'
        assert "tau3,tau2,value" in lines
        assert lines[-1] == ""
        assert "\r" not in to_csv_text(grid)

    def test_parse_recovers_rows_and_metadata(self, grid):
        parsed = parse_csv(to_csv_text(grid))
        assert parsed.axis_names == grid.axis_names
        assert parsed.metadata == grid.metadata
        assert parsed.rows == grid.rows

    def test_rewrite_is_byte_identical(self, grid):
        text = to_csv_text(grid)
        assert to_csv_text(parse_csv(text)) == text

    def test_empty_grid(self):
        empty = GridResult(axis_names=("a", "b"), rows=[], metadata={"figure": "none"})
        assert parse_csv(to_csv_text(empty)).rows == []

    def test_non_finite_rejected(self):
        bad = GridResult(axis_names=("a", "b"), rows=[GridRow(0.0, 0.0, float("inf"))], metadata={})
        with pytest.raises(ValidationError):
            to_csv_text(bad)

    def test_bad_header(self):
        with pytest.raises(ValidationError):
            parse_csv("# figure: \"fig1\"\nx,y,z\n")
        with pytest.raises(ValidationError):
            parse_csv("# figure: \"fig1\"")

    def test_series_text(self, grid):
        text = series_to_csv_text(grid, "sas_boundary")
        parsed = parse_csv(text)
        assert parsed.metadata["series"] == "sas_boundary"
        assert len(parsed.rows) == 5

    def test_unknown_series(self, grid):
        with pytest.raises(ValidationError):
            series_to_csv_text(grid, "missing")


class TestFiles:
    def test_write_csv_with_sibling_series(self, grid, tmp_path):
        output = tmp_path / "out" / "fig1.csv"
        written = write_csv(grid, output)
        assert written == [output, tmp_path / "out" / "fig1.sas_boundary.csv"]
        assert series_path(output, "sas_boundary").read_text(encoding="utf-8") == series_to_csv_text(grid, "sas_boundary")
        assert parse_csv(output.read_text(encoding="utf-8")).rows == grid.rows

    def test_json_round_trip(self, grid, tmp_path):
        path = write_json(grid, tmp_path / "fig1.json")
        restored = GridPayload.model_validate_json(path.read_text(encoding="utf-8")).to_grid()
        assert restored.rows == grid.rows
        assert restored.series == grid.series
        assert restored.metadata == grid.metadata
        assert to_json(restored) == to_json(grid)
