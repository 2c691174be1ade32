"""
Pixelwise Rendering
Owner maps of Voronoi diagrams under any family member, implicit-curve
rendering of L_p circles, and 4-connected face counting
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from lpvoronoi.errors import IdenticalSites, InvalidGrid, NoSites
from lpvoronoi.geometry.bisector import l0_bisector, l0_bisector_points
from lpvoronoi.geometry.norms import Exponent, Vec2, distance_key_array, lp_norm_array

logger = logging.getLogger(__name__)

TIE = -1
FOUR_CONNECTED = np.array([[0, 1, 0],
                           [1, 1, 1],
                           [0, 1, 0]])


@dataclass(frozen=True)
class Grid:
    """
    Pixel raster over a world rectangle

    Pixel (row, col) stands for the center of its world cell; row 0 is the
    top edge (ymax).
    """

    width: int
    height: int
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise InvalidGrid(f"grid must be at least 1x1, got {self.width}x{self.height}")
        if not all(math.isfinite(v) for v in (self.xmin, self.ymin, self.xmax, self.ymax)):
            raise InvalidGrid("window bounds must be finite")
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise InvalidGrid(
                f"empty window [{self.xmin}, {self.xmax}] x [{self.ymin}, {self.ymax}]"
            )

    @classmethod
    def from_spec(cls, size: str, window: str) -> 'Grid':
        """Build from `WxH` and `xmin,ymin,xmax,ymax`"""
        try:
            w, h = (int(part) for part in size.lower().split('x'))
            xmin, ymin, xmax, ymax = (float(part) for part in window.split(','))
        except ValueError:
            raise InvalidGrid(f"cannot parse grid {size!r} / window {window!r}")
        return cls(w, h, xmin, ymin, xmax, ymax)

    @property
    def window(self) -> Tuple[float, float, float, float]:
        return (self.xmin, self.ymin, self.xmax, self.ymax)

    @property
    def pixel_size(self) -> Tuple[float, float]:
        return ((self.xmax - self.xmin) / self.width, (self.ymax - self.ymin) / self.height)

    @property
    def pixel_diagonal(self) -> float:
        return math.hypot(*self.pixel_size)

    def x_centers(self) -> np.ndarray:
        i = np.arange(self.width)
        return self.xmin + (self.xmax - self.xmin) * (2 * i + 1) / (2 * self.width)

    def y_centers(self) -> np.ndarray:
        j = np.arange(self.height)
        return self.ymax - (self.ymax - self.ymin) * (2 * j + 1) / (2 * self.height)

    def pixel_centers(self) -> Tuple[np.ndarray, np.ndarray]:
        """(X, Y) arrays of shape (height, width)"""
        return np.meshgrid(self.x_centers(), self.y_centers())

    def locate(self, point: Vec2) -> Optional[Tuple[int, int]]:
        """(row, col) of the pixel containing point, or None outside the window"""
        if not (self.xmin <= point.x <= self.xmax and self.ymin <= point.y <= self.ymax):
            return None
        pw, ph = self.pixel_size
        col = min(int((point.x - self.xmin) / pw), self.width - 1)
        row = min(int((self.ymax - point.y) / ph), self.height - 1)
        return row, col


@dataclass(frozen=True)
class OwnerMap:
    """Nearest-site index per pixel (TIE for exact ties) plus the bisector mask"""

    grid: Grid
    owners: np.ndarray
    bisector_mask: np.ndarray
    sites: Tuple[Vec2, ...]
    exponent: Exponent

    @property
    def site_count(self) -> int:
        return len(self.sites)


def _boundary_mask(labels: np.ndarray) -> np.ndarray:
    """Pixels with a 4-neighbour carrying a different label"""
    mask = np.zeros(labels.shape, dtype=bool)
    horizontal = labels[:, 1:] != labels[:, :-1]
    vertical = labels[1:, :] != labels[:-1, :]
    mask[:, 1:] |= horizontal
    mask[:, :-1] |= horizontal
    mask[1:, :] |= vertical
    mask[:-1, :] |= vertical
    return mask


def render_owners(sites: Sequence[Vec2], e: Exponent, grid: Grid) -> OwnerMap:
    """
    Assign every pixel to its nearest site under e

    Distances are compared through distance_key_array, the same keys
    compare_distance uses; exact ties become TIE.

    Raises:
        NoSites: empty site list
        IdenticalSites: two sites coincide
    """
    sites = tuple(sites)
    if not sites:
        raise NoSites("render needs at least one site")
    if len(set(sites)) != len(sites):
        raise IdenticalSites("render sites must be pairwise distinct")

    X, Y = grid.pixel_centers()
    keys = np.stack([distance_key_array(X - site.x, Y - site.y, e) for site in sites])
    best = keys.min(axis=0)
    owners = keys.argmin(axis=0).astype(np.int64)
    ties = (keys == best).sum(axis=0) > 1
    owners[ties] = TIE

    mask = _boundary_mask(owners) | (owners == TIE)
    logger.debug("rendered %d sites at %dx%d under %s, %d ties",
                 len(sites), grid.width, grid.height, e, int(ties.sum()))
    return OwnerMap(grid=grid, owners=owners, bisector_mask=mask, sites=sites, exponent=e)


def count_faces(owner_map: OwnerMap, site: int) -> int:
    """4-connected components of a site's pixels, bisector pixels left out"""
    region = (owner_map.owners == site) & ~owner_map.bisector_mask
    _, count = ndimage.label(region, structure=FOUR_CONNECTED)
    return int(count)


def face_counts(owner_map: OwnerMap) -> Dict[int, int]:
    return {site: count_faces(owner_map, site) for site in range(owner_map.site_count)}


def render_circle(center: Vec2, r: float, e: Exponent, grid: Grid) -> np.ndarray:
    """
    Mask of pixels where lp_norm(q - center) - r changes sign against a
    4-neighbour (values <= 0 count as inside)
    """
    if not r > 0:
        raise InvalidGrid(f"circle radius must be positive, got {r}")
    X, Y = grid.pixel_centers()
    inside = lp_norm_array(X - center.x, Y - center.y, e) <= r
    return _boundary_mask(inside)


def l0_distance_band(grid: Grid, a: Vec2, b: Vec2, width: float) -> np.ndarray:
    """
    Pixels whose center lies within `width` of the analytic B_*(a,b)

    The line part is measured exactly; the hyperbola (and degenerate lines)
    through a KD-tree over dense samples.
    """
    bisector = l0_bisector(a, b)
    X, Y = grid.pixel_centers()
    pad = width + grid.pixel_diagonal
    window = (grid.xmin - pad, grid.ymin - pad, grid.xmax + pad, grid.ymax + pad)
    n = max(4 * max(grid.width, grid.height), 2000)
    samples = np.array([pt.as_tuple() for pt in l0_bisector_points(bisector, window, n=n)])

    distance = np.full(X.shape, np.inf)
    if len(samples):
        tree = cKDTree(samples)
        nearest, _ = tree.query(np.column_stack([X.ravel(), Y.ravel()]))
        distance = nearest.reshape(X.shape)
    if bisector.degenerate is None:
        A, B, C = bisector.line
        distance = np.minimum(distance, np.abs(A * X + B * Y - C) / math.hypot(A, B))
    return distance <= width


def agreement_fraction(first: OwnerMap, second: OwnerMap,
                       exclude: Optional[np.ndarray] = None) -> float:
    """Share of non-excluded pixels with the same owner in both maps"""
    if first.owners.shape != second.owners.shape:
        raise InvalidGrid("owner maps have different shapes")
    considered = np.ones(first.owners.shape, dtype=bool) if exclude is None else ~exclude
    total = int(considered.sum())
    if total == 0:
        return 1.0
    same = int(((first.owners == second.owners) & considered).sum())
    return same / total


DEFAULT_GRID = '512x512'


def default_window(sites: Sequence[Vec2]) -> str:
    """Three times the sites' bounding box (2 x 2 per degenerate axis), as `xmin,ymin,xmax,ymax`"""
    if not sites:
        return '-1,-1,1,1'
    xs = [site.x for site in sites]
    ys = [site.y for site in sites]
    cx, cy = (min(xs) + max(xs)) / 2, (min(ys) + max(ys)) / 2
    hx = 1.5 * (max(xs) - min(xs)) or 1.0
    hy = 1.5 * (max(ys) - min(ys)) or 1.0
    return f"{cx - hx!r},{cy - hy!r},{cx + hx!r},{cy + hy!r}"


def circle_window(center: Vec2, r: float, e: Exponent) -> str:
    """
    Square window around the circle of radius r, as `xmin,ymin,xmax,ymax`

    For p < 0 the branches cross the diagonal at r * 2^(-1/p), so the half
    extent grows with that factor (exponent capped to keep it finite).
    """
    half = 1.5 * r
    if e.is_finite and e.p < 0:
        half *= 2.0 ** min(-1.0 / e.p, 60.0)
    return f"{center.x - half!r},{center.y - half!r},{center.x + half!r},{center.y + half!r}"
