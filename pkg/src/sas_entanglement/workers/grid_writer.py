"""Grid writer worker - CSV and JSON serialization of grids.

CSV layout: ``# key: <json>`` metadata lines, a header row with the two axis
names and ``value``, then one ``%.16e`` row per grid point, ``\\n`` line endings.
Curve series go to sibling files ``<stem>.<series>.csv`` in the same layout.
"""

import io
import json
from pathlib import Path

import numpy as np

from sas_entanglement.config import get_logger
from sas_entanglement.exceptions import ValidationError
from sas_entanglement.models.api import GridPayload
from sas_entanglement.models.domain import GridResult, GridRow

logger = get_logger(__name__)

NUMBER_FORMAT = "%.16e"
VALUE_COLUMN = "value"


def _rows_to_csv(axis_names: tuple[str, str], rows: list[GridRow], metadata: dict[str, object]) -> str:
    buffer = io.StringIO()
    for key, value in metadata.items():
        buffer.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
    buffer.write(",".join((*axis_names, VALUE_COLUMN)) + "\n")
    if rows:
        table = np.array([(row.x, row.y, row.value) for row in rows], dtype=np.float64)
        if not np.all(np.isfinite(table)):
            raise ValidationError("Grid contains non-finite values")
        np.savetxt(buffer, table, fmt=NUMBER_FORMAT, delimiter=",", newline="\n")
    return buffer.getvalue()


def to_csv_text(grid: GridResult) -> str:
    """CSV text of the grid rows (series excluded)."""
    return _rows_to_csv(grid.axis_names, grid.rows, grid.metadata)


def series_to_csv_text(grid: GridResult, name: str) -> str:
    """CSV text of one curve series, tagged with the parent metadata and the series name."""
    if name not in grid.series:
        raise ValidationError(f"Unknown series {name!r}; available: {sorted(grid.series)}")
    metadata = {**grid.metadata, "series": name}
    return _rows_to_csv(grid.axis_names, grid.series[name], metadata)


def parse_csv(text: str) -> GridResult:
    """Inverse of ``to_csv_text``."""
    lines = text.split("\n")
    metadata: dict[str, object] = {}
    header_index = None
    for index, line in enumerate(lines):
        if line.startswith("# "):
            key, _, raw = line[2:].partition(": ")
            metadata[key] = json.loads(raw)
            continue
        header_index = index
        break

    if header_index is None:
        raise ValidationError("CSV has no header row")
    columns = lines[header_index].split(",")
    if len(columns) != 3 or columns[2] != VALUE_COLUMN:
        raise ValidationError(f"Unexpected CSV header: {lines[header_index]!r}")

    body = "\n".join(lines[header_index + 1:])
    rows: list[GridRow] = []
    if body.strip():
        table = np.loadtxt(io.StringIO(body), delimiter=",", dtype=np.float64, ndmin=2)
        rows = [GridRow(float(x), float(y), float(v)) for x, y, v in table]
    return GridResult(axis_names=(columns[0], columns[1]), rows=rows, metadata=metadata)


def to_json(grid: GridResult) -> str:
    """JSON document of the grid including its curve series."""
    return GridPayload.from_grid(grid).model_dump_json(indent=2)


def series_path(output: Path, name: str) -> Path:
    """Sibling file ``<stem>.<series>.csv`` next to ``output``."""
    return output.with_name(f"{output.stem}.{name}.csv")


def write_csv(grid: GridResult, output: Path) -> list[Path]:
    """Write the grid and every series; returns the paths written."""
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(to_csv_text(grid), encoding="utf-8", newline="\n")
    written = [output]
    for name in grid.series:
        path = series_path(output, name)
        path.write_text(series_to_csv_text(grid, name), encoding="utf-8", newline="\n")
        written.append(path)
    logger.info("Grid written", extra={"paths": [str(p) for p in written], "rows": len(grid.rows)})
    return written


def write_json(grid: GridResult, output: Path) -> Path:
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(to_json(grid) + "\n", encoding="utf-8", newline="\n")
    return output
