"""Report models emitted by the command-line interface."""

from typing import Any, Literal

from pydantic import BaseModel, Field

from sas_entanglement.models.domain import GridResult, GridRow


class ClassificationReport(BaseModel):
    """Classification of one symmetric spectrum."""
    n_qubits: Literal[2, 3]
    spectrum: list[float]
    max_negativity: float = Field(..., ge=0.0)
    max_negativity_kind: Literal["closed_form", "orbit_search_lower_bound"]
    verdict: Literal["SAS", "not SAS", "undetermined"]
    reason: str
    on_boundary: bool = False
    radius: float = Field(..., ge=0.0)
    max_concurrence: float | None = None
    obs1_margin: float | None = None
    obs1_lambda_min: float | None = Field(
        default=None,
        description=(
            "Closed-form partial-transpose eigenvalue of the Dicke-mixture arrangement. The full 8x8 partial transpose "
            "also has a two-dimensional kernel, so its minimum is min(obs1_lambda_min, 0)."
        ),
    )
    obs1_pt_min: float | None = Field(default=None, description="Minimal eigenvalue of the full partial transpose, min(obs1_lambda_min, 0).")


class RadiiReport(BaseModel):
    """Ball radii around the maximally mixed symmetric state."""
    n_qubits: Literal[2, 3]
    r_sas: float | None = None
    R_sas: float | None = None
    r_lower_bound: float
    r_sas_upper: float | None = None
    R_sas_upper: float | None = None
    numerical: dict[str, float] = Field(default_factory=dict)
    estimate: float | None = None
    estimate_bracket: tuple[float, float] | None = None
    seed: int | None = None


class CheckResult(BaseModel):
    """One property check of a verification suite."""
    name: str
    passed: bool
    samples: int
    max_deviation: float | None = None
    tolerance: float | None = None
    details: dict[str, Any] = Field(default_factory=dict)


class VerificationReport(BaseModel):
    """Outcome of a verification suite."""
    suite: str
    scale: Literal["quick", "full"]
    seed: int
    passed: bool
    checks: list[CheckResult]
    elapsed_seconds: float


class GridPayload(BaseModel):
    """JSON form of a grid and its curve series."""
    axis_names: tuple[str, str]
    rows: list[tuple[float, float, float]]
    metadata: dict[str, Any]
    series: dict[str, list[tuple[float, float, float]]] = Field(default_factory=dict)

    @classmethod
    def from_grid(cls, grid: GridResult) -> "GridPayload":
        return cls(
            axis_names=grid.axis_names,
            rows=[(row.x, row.y, row.value) for row in grid.rows],
            metadata=grid.metadata,
            series={name: [(row.x, row.y, row.value) for row in rows] for name, rows in grid.series.items()},
        )

    def to_grid(self) -> GridResult:
        return GridResult(
            axis_names=self.axis_names,
            rows=[GridRow(*row) for row in self.rows],
            metadata=dict(self.metadata),
            series={name: [GridRow(*row) for row in rows] for name, rows in self.series.items()},
        )
