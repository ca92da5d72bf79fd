"""Grid builder worker - tabulates figure data over triangular parameter regions.

Every region used here is a triangle, sampled on the barycentric lattice
A + (i / (n - 1)) (B - A) + (j / (n - 1)) (C - A), i + j <= n - 1, so the
three corners are always grid points.
"""

from collections.abc import Callable, Iterator
from math import sqrt

import numpy as np
from codetiming import Timer

from sas_entanglement import __version__
from sas_entanglement.config import GridConfig, get_logger, get_settings
from sas_entanglement.exceptions import DomainError, ValidationError
from sas_entanglement.models.domain import GridResult, GridRow, Spectrum3
from sas_entanglement.three_qubit import _boundary_r_unchecked, is_obs1_boundary_valid
from sas_entanglement.two_qubit import max_negativity_su3, sas_boundary_r, tau2_from_radius

logger = get_logger(__name__)

Point = tuple[float, float]

FIG1_TRIANGLE: tuple[Point, Point, Point] = ((0.0, 0.0), (0.0, 0.5), (1.0 / 3.0, 1.0 / 3.0))
FIG2_TRIANGLE: tuple[Point, Point, Point] = ((1.0 / 3.0, 0.0), (0.0, 1.0 / sqrt(6.0)), (0.0, sqrt(2.0 / 3.0)))
FIG3_TRIANGLE: tuple[Point, Point, Point] = ((0.0, 0.0), (1.0 / 3.0, 0.0), (0.25, 0.25))

SORTING_TOLERANCE = 1e-9


def triangle_lattice(triangle: tuple[Point, Point, Point], resolution: int) -> Iterator[Point]:
    """Barycentric lattice points of a triangle, corners included exactly."""
    if resolution < 2:
        raise ValidationError(f"Resolution must be at least 2, got {resolution}")
    (ax, ay), (bx, by), (cx, cy) = triangle
    steps = resolution - 1
    for i in range(resolution):
        for j in range(resolution - i):
            u, v = i / steps, j / steps
            yield ax + u * (bx - ax) + v * (cx - ax), ay + u * (by - ay) + v * (cy - ay)


def _curve(function: Callable[[float], GridRow], low: float, high: float, n_points: int) -> list[GridRow]:
    return [function(float(x)) for x in np.linspace(low, high, n_points)]


class GridBuilder:
    """Build the density-plot grids and their boundary curves."""

    def __init__(self, config: GridConfig | None = None, seed: int = 0):
        self.config = config or get_settings().grids
        self.seed = seed

    def _metadata(self, figure: str, resolution: int, region: str) -> dict[str, object]:
        return {
            "figure": figure,
            "resolution": resolution,
            "region": region,
            "seed": self.seed,
            "version": __version__,
        }

    @Timer(name="fig1", text="fig1 grid: {:.3f}s", logger=logger.debug)
    def fig1(self, resolution: int | None = None) -> GridResult:
        """Maximal negativity over the simplex of sorted spectra, axes (tau_3, tau_2)."""
        resolution = resolution or self.config.fig1_resolution
        rows = [
            GridRow(tau3, tau2, max_negativity_su3(Spectrum3((1.0 - tau2 - tau3, tau2, tau3))))
            for tau3, tau2 in triangle_lattice(FIG1_TRIANGLE, resolution)
        ]

        def boundary(tau3: float) -> GridRow:
            return GridRow(tau3, (1.0 - sqrt(tau3)) ** 2, 0.0)

        series = {"sas_boundary": _curve(boundary, 1.0 / 9.0, 0.25, self.config.boundary_points)}
        logger.debug(f"fig1: {len(rows)} grid points")
        return GridResult(
            axis_names=("tau3", "tau2"),
            rows=rows,
            metadata=self._metadata("fig1", resolution, "0 <= tau3 <= tau2, 2 tau2 + tau3 <= 1"),
            series=series,
        )

    @Timer(name="fig2", text="fig2 grid: {:.3f}s", logger=logger.debug)
    def fig2(self, resolution: int | None = None) -> GridResult:
        """Maximal negativity over the (tau_3, r) wedge, tau_2 recovered from the radius."""
        resolution = resolution or self.config.fig2_resolution
        rows: list[GridRow] = []
        for tau3, r in triangle_lattice(FIG2_TRIANGLE, resolution):
            tau2 = tau2_from_radius(tau3, r)
            tau1 = 1.0 - tau2 - tau3
            if not (tau1 >= tau2 - SORTING_TOLERANCE and tau2 >= tau3 - SORTING_TOLERANCE):
                raise DomainError(f"Recovered spectrum ({tau1}, {tau2}, {tau3}) at r = {r} is not sorted")
            rows.append(GridRow(tau3, r, max_negativity_su3(Spectrum3((tau1, tau2, tau3)))))

        def boundary(tau3: float) -> GridRow:
            return GridRow(tau3, sas_boundary_r(tau3), 0.0)

        series = {"sas_boundary": _curve(boundary, 1.0 / 9.0, 0.25, self.config.boundary_points)}
        logger.debug(f"fig2: {len(rows)} grid points")
        return GridResult(
            axis_names=("tau3", "r"),
            rows=rows,
            metadata=self._metadata("fig2", resolution, "(1 - 3 tau3)/sqrt(6) <= r <= sqrt(2/3)(1 - 3 tau3)"),
            series=series,
        )

    @Timer(name="fig3", text="fig3 grid: {:.3f}s", logger=logger.debug)
    def fig3(self, resolution: int | None = None) -> GridResult:
        """Indicator of the non-SAS region over (tau_3, tau_4) plus the boundary radius.

        A point is marked 1 when some sorted spectrum with these tau_3, tau_4 meets
        the condition, which happens iff it holds for tau_2 = tau_3.
        """
        resolution = resolution or self.config.fig3_resolution
        rows: list[GridRow] = []
        boundary: list[GridRow] = []
        for tau3, tau4 in triangle_lattice(FIG3_TRIANGLE, resolution):
            inside = tau3 > 0 and tau3 < 1.0 - tau3 - tau4 - sqrt(3.0 * tau3 * tau4)
            rows.append(GridRow(tau3, tau4, 1.0 if inside else 0.0))
            if is_obs1_boundary_valid(tau3, tau4):
                boundary.append(GridRow(tau3, tau4, _boundary_r_unchecked(tau3, tau4)))

        logger.debug(f"fig3: {len(rows)} grid points, {len(boundary)} boundary points")
        return GridResult(
            axis_names=("tau3", "tau4"),
            rows=rows,
            metadata=self._metadata("fig3", resolution, "0 <= tau4 <= tau3, 3 tau3 + tau4 <= 1"),
            series={"obs1_boundary_radius": boundary},
        )
