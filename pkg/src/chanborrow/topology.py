"""Hexagonal cluster geometry, reuse-3 band colouring and co-channel tiers.

Cells are flat-topped hexagons addressed by axial coordinates ``(q, r)``.
The radius is the centre-to-vertex distance, so adjacent centres sit
``sqrt(3) * R`` apart and co-channel centres (reuse 3) ``3 * R`` apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

SQRT3 = math.sqrt(3.0)

# Clockwise from the neighbour at azimuth 30 deg.
RING_DIRECTIONS = ((1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1))

_TIER_RTOL = 1e-9


class BandTag(str, Enum):
    A = "A"
    B = "B"
    C = "C"


@dataclass(frozen=True)
class Band:
    tag: BandTag
    channel_count: int

    def __post_init__(self):
        if self.channel_count < 1:
            raise ValueError("channel_count must be a positive integer")


@dataclass(frozen=True, order=True)
class HexCoord:
    q: int
    r: int

    def __add__(self, other: "HexCoord") -> "HexCoord":
        return HexCoord(self.q + other.q, self.r + other.r)

    def scale(self, k: int) -> "HexCoord":
        return HexCoord(self.q * k, self.r * k)

    def hex_distance(self, other: "HexCoord") -> int:
        dq = self.q - other.q
        dr = self.r - other.r
        return (abs(dq) + abs(dr) + abs(dq + dr)) // 2

    def band_tag(self) -> BandTag:
        return (BandTag.A, BandTag.B, BandTag.C)[(self.q - self.r) % 3]

    def center(self, radius_m: float) -> tuple[float, float]:
        x = 1.5 * radius_m * self.q
        y = SQRT3 * radius_m * (self.r + self.q / 2.0)
        return (x, y)


@dataclass(frozen=True)
class Cell:
    id: int
    coord: HexCoord
    center: tuple[float, float]
    radius: float
    band: Band
    bs_height: float
    tx_power: float
    antenna: str = "omni"

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("cell radius must be positive")
        if self.bs_height <= 0:
            raise ValueError("bs_height must be positive")
        if self.tx_power <= 0:
            raise ValueError("tx_power must be positive")

    def contains(self, point, tol: float = 1e-9) -> bool:
        """Point-in-hexagon test for a flat-topped hexagon."""
        x = abs(point[0] - self.center[0])
        y = abs(point[1] - self.center[1])
        apothem = SQRT3 / 2.0 * self.radius
        slack = tol * self.radius
        if y > apothem + slack:
            return False
        return SQRT3 * x + y <= SQRT3 * self.radius + slack


@dataclass(frozen=True)
class Topology:
    cells: tuple[Cell, ...]
    tier_index: dict = field(repr=False)

    def cell(self, cell_id: int) -> Cell:
        if not 1 <= cell_id <= len(self.cells):
            raise KeyError(f"unknown cell id {cell_id}")
        return self.cells[cell_id - 1]

    @property
    def ids(self) -> list[int]:
        return [c.id for c in self.cells]

    def neighbours(self, cell_id: int) -> list[int]:
        """Ids of hex-adjacent cells, ascending."""
        here = self.cell(cell_id).coord
        return sorted(c.id for c in self.cells if c.coord.hex_distance(here) == 1)

    def cells_with_band(self, tag: BandTag) -> list[Cell]:
        return [c for c in self.cells if c.band.tag == tag]


def distance_m(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def _ring(k: int) -> list[HexCoord]:
    # Ring k walked clockwise starting at k * (first direction).
    if k == 0:
        return [HexCoord(0, 0)]
    coords = []
    start = HexCoord(*RING_DIRECTIONS[0]).scale(k)
    cur = start
    # Walking along the ring: after a corner in direction i, step along direction i + 2.
    for i in range(6):
        step = HexCoord(*RING_DIRECTIONS[(i + 2) % 6])
        for _ in range(k):
            coords.append(cur)
            cur = cur + step
    return coords


def _tiers(cells, origin, tag):
    """Split same-band cells (excluding ``origin``) into the two nearest distance shells."""
    cands = []
    for c in cells:
        if c.id == origin.id or c.band.tag != tag:
            continue
        cands.append((distance_m(origin.center, c.center), c.id))
    if not cands:
        return [], []
    cands.sort()
    shells: list[list[int]] = []
    last = None
    for d, cid in cands:
        if last is None or not math.isclose(d, last, rel_tol=_TIER_RTOL):
            if len(shells) == 2:
                break
            shells.append([])
            last = d
        shells[-1].append(cid)
    while len(shells) < 2:
        shells.append([])
    return sorted(shells[0]), sorted(shells[1])


def build_topology(config) -> Topology:
    """Build the 7-cell cluster plus enough surrounding rings for two interference tiers.

    Cell 1 sits at the origin, cells 2-7 ring it clockwise from azimuth
    30 deg, and further rings follow the same ordering.  Every cell takes
    the transmit power and base-station height of ``config``.
    """
    radius_m = float(config.cell_radius_km) * 1000.0
    if not radius_m > 0:
        raise ValueError("cell_radius_km must be positive")
    n_ch = int(config.channel_count_per_band)
    if n_ch < 1:
        raise ValueError("channel_count_per_band must be >= 1")
    if config.cells_per_cluster != 7 or config.reused_frequencies != 3:
        raise ValueError("only the 7-cell cluster with 3 reused bands is supported")
    rings = int(getattr(config, "grid_rings", 4))
    if rings < 3:
        raise ValueError("grid_rings must be >= 3 to populate tier 2 of the reference cell")

    bands = {tag: Band(tag, n_ch) for tag in BandTag}
    cells = []
    for k in range(rings + 1):
        for coord in _ring(k):
            cells.append(
                Cell(
                    id=len(cells) + 1,
                    coord=coord,
                    center=coord.center(radius_m),
                    radius=radius_m,
                    band=bands[coord.band_tag()],
                    bs_height=float(config.bs_height_m),
                    tx_power=float(config.tx_power_w),
                )
            )
    cells = tuple(cells)
    tier_index = {}
    for c in cells:
        for tag in BandTag:
            tier_index[(c.id, tag)] = _tiers(cells, c, tag)
    return Topology(cells=cells, tier_index=tier_index)


def cochannel_interferers(topo: Topology, cell_id: int, band) -> tuple[list[int], list[int]]:
    """Return ``(tier1, tier2)`` co-channel cell ids for ``band`` seen from ``cell_id``."""
    topo.cell(cell_id)
    tag = band.tag if isinstance(band, Band) else BandTag(band)
    t1, t2 = topo.tier_index[(cell_id, tag)]
    return list(t1), list(t2)


def random_point_in_cell(cell: Cell, rng: np.random.Generator) -> tuple[float, float]:
    """Uniform point inside a flat-topped hexagon by rejection from the bounding box."""
    apothem = SQRT3 / 2.0 * cell.radius
    while True:
        x = rng.uniform(-cell.radius, cell.radius)
        y = rng.uniform(-apothem, apothem)
        if SQRT3 * abs(x) + abs(y) <= SQRT3 * cell.radius:
            return (cell.center[0] + x, cell.center[1] + y)
