"""
Canonical Frame
Maps a general-position site pair to a = (-u,-1), b = (u,1) with u >= 1 and
provides the scalar functions the bisector equation w_p(y) = v_p(x) is
built from, the target curves h and s, and the cell grid
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

from lpvoronoi.errors import (
    AsymptoteError,
    DegeneratePair,
    IdenticalSites,
    InvalidCell,
    InvalidHalfWidth,
    PoleAtSite,
    PoleAtUnit,
)
from lpvoronoi.geometry.norms import Vec2, pow_diff

Interval = Tuple[float, float]


@dataclass(frozen=True)
class Translate:
    dx: float
    dy: float

    def apply(self, q: Vec2) -> Vec2:
        return Vec2(q.x + self.dx, q.y + self.dy)

    def invert(self, q: Vec2) -> Vec2:
        return Vec2(q.x - self.dx, q.y - self.dy)


@dataclass(frozen=True)
class ReflectX:
    """Negates x"""

    def apply(self, q: Vec2) -> Vec2:
        return Vec2(-q.x, q.y)

    invert = apply


@dataclass(frozen=True)
class ReflectY:
    """Negates y"""

    def apply(self, q: Vec2) -> Vec2:
        return Vec2(q.x, -q.y)

    invert = apply


@dataclass(frozen=True)
class SwapXY:
    def apply(self, q: Vec2) -> Vec2:
        return Vec2(q.y, q.x)

    invert = apply


@dataclass(frozen=True)
class Scale:
    c: float

    def apply(self, q: Vec2) -> Vec2:
        return Vec2(q.x * self.c, q.y * self.c)

    def invert(self, q: Vec2) -> Vec2:
        return Vec2(q.x / self.c, q.y / self.c)


FrameOp = Union[Translate, ReflectX, ReflectY, SwapXY, Scale]


@dataclass(frozen=True)
class CanonicalFrame:
    """Similarity transform taking a site pair to (-u,-1), (u,1)"""

    u: float
    ops: Tuple[FrameOp, ...] = ()

    def apply(self, q: Vec2) -> Vec2:
        for op in self.ops:
            q = op.apply(q)
        return q

    def invert(self, q: Vec2) -> Vec2:
        for op in reversed(self.ops):
            q = op.invert(q)
        return q

    @property
    def sites(self) -> Tuple[Vec2, Vec2]:
        return Vec2(-self.u, -1.0), Vec2(self.u, 1.0)

    @property
    def lambda_point(self) -> Vec2:
        return Vec2(-self.u, 1.0)

    @property
    def rho_point(self) -> Vec2:
        return Vec2(self.u, -1.0)


def check_half_width(u: float) -> float:
    """u itself when it is a finite canonical half-width (u >= 1)"""
    if not (math.isfinite(u) and u >= 1):
        raise InvalidHalfWidth(f"canonical half-width must be finite and >= 1, got {u}")
    return u


def canonicalize(a: Vec2, b: Vec2) -> CanonicalFrame:
    """
    Build the canonical frame of a site pair

    Translate the midpoint to the origin, swap axes if the vertical spread is
    larger, scale the smaller spread to 2, then reflect so the
    lexicographically smaller site lands on (-u,-1). Ops that would do
    nothing are left out.

    Raises:
        IdenticalSites: a == b
        DegeneratePair: a and b share a coordinate
    """
    if a == b:
        raise IdenticalSites(f"sites coincide at ({a.x}, {a.y})")
    if a.x == b.x or a.y == b.y:
        raise DegeneratePair(
            f"sites ({a.x}, {a.y}) and ({b.x}, {b.y}) share a coordinate"
        )

    ops = []
    mid_x, mid_y = (a.x + b.x) / 2, (a.y + b.y) / 2
    if mid_x != 0 or mid_y != 0:
        ops.append(Translate(-mid_x, -mid_y))

    spread_x, spread_y = abs(b.x - a.x), abs(b.y - a.y)
    if spread_y > spread_x:
        ops.append(SwapXY())
        spread_x, spread_y = spread_y, spread_x
    u = spread_x / spread_y

    c = 2.0 / spread_y
    if c != 1.0:
        ops.append(Scale(c))

    lower = min(a, b, key=lambda site: (site.x, site.y))
    image = lower
    for op in ops:
        image = op.apply(image)
    if image.x > 0:
        ops.append(ReflectX())
    if image.y > 0:
        ops.append(ReflectY())

    return CanonicalFrame(u=u, ops=tuple(ops))


def v_p(x: float, u: float, p: float) -> float:
    """|x+u|^p - |x-u|^p"""
    if p < 0 and (x == u or x == -u):
        raise PoleAtSite(f"v_p has a pole at x = {x} for p = {p}")
    return pow_diff(abs(x + u), abs(x - u), p)


def w_p(y: float, p: float) -> float:
    """|y-1|^p - |y+1|^p"""
    if p < 0 and (y == 1 or y == -1):
        raise PoleAtUnit(f"w_p has a pole at y = {y} for p = {p}")
    return pow_diff(abs(y - 1), abs(y + 1), p)


def z_p_inv(y: float, p: float) -> float:
    """
    |z_p(y)|^-1 where z_p = w_p' / p

    Uses (|y|-1)^(p-1) - (|y|+1)^(p-1) outside [-1,1] and
    (1+y)^(p-1) + (1-y)^(p-1) inside.
    """
    if y == 1 or y == -1:
        raise PoleAtUnit(f"z_p is singular at y = {y}")
    t = abs(y)
    if t > 1:
        denom = pow_diff(t - 1, t + 1, p - 1)
    else:
        denom = (1 + t) ** (p - 1) + (1 - t) ** (p - 1)
    if denom == 0:
        return math.inf
    return 1.0 / abs(denom)


def h(x: float, u: float) -> float:
    """Hyperbola target -u/x"""
    if x == 0:
        raise AsymptoteError("h(x) = -u/x is undefined at x = 0")
    return -u / x


def s(x: float, u: float) -> float:
    """Line target -x/u"""
    return -x / u


_NEG_INF, _POS_INF = -math.inf, math.inf
_ROWS = {
    'low': (_NEG_INF, -1.0),
    'mid': (-1.0, 1.0),
    'high': (1.0, _POS_INF),
}


class Cell(Enum):
    H1 = 'H1'
    H2 = 'H2'
    H3 = 'H3'
    H4 = 'H4'
    S1 = 'S1'
    S2 = 'S2'
    S3 = 'S3'
    S4 = 'S4'
    WHITE_UPPER_RIGHT_NEAR = 'WhiteUpperRightNear'
    WHITE_UPPER_RIGHT_FAR = 'WhiteUpperRightFar'
    WHITE_LOWER_LEFT_NEAR = 'WhiteLowerLeftNear'
    WHITE_LOWER_LEFT_FAR = 'WhiteLowerLeftFar'
    X_NEG_U = 'x=-u'
    X_ZERO = 'x=0'
    X_POS_U = 'x=u'
    Y_NEG_ONE = 'y=-1'
    Y_ZERO = 'y=0'
    Y_POS_ONE = 'y=1'

    @classmethod
    def parse(cls, text: str) -> 'Cell':
        """Look a cell up by its label (`H2`, `WhiteUpperRightNear`, `x=u`) or enum name"""
        token = text.strip()
        for cell in cls:
            if token == cell.value or token.upper() == cell.name:
                return cell
        raise InvalidCell(f"unknown cell {text!r}")

    @property
    def is_boundary(self) -> bool:
        return self in _BOUNDARY

    @property
    def is_grey(self) -> bool:
        return self in GREY_CELLS

    @property
    def is_white(self) -> bool:
        return not self.is_boundary and not self.is_grey

    @property
    def target(self) -> Optional[str]:
        """'h' for hyperbola cells, 's' for line cells, None otherwise"""
        if self.value.startswith('H'):
            return 'h'
        if self.value.startswith('S'):
            return 's'
        return None

    def x_interval(self, u: float) -> Interval:
        column, _ = _LAYOUT[self]
        return (
            (_NEG_INF, -u),
            (-u, 0.0),
            (0.0, u),
            (u, _POS_INF),
        )[column]

    @property
    def y_interval(self) -> Interval:
        _, row = _LAYOUT[self]
        return _ROWS[row]

    def target_value(self, x: float, u: float) -> float:
        """h(x) or s(x) depending on the cell"""
        if self.target == 'h':
            return h(x, u)
        if self.target == 's':
            return s(x, u)
        raise InvalidCell(f"{self.value} carries no bisector piece")

    def contains(self, x: float, y: float, u: float) -> bool:
        """Strict membership in the open cell"""
        if self.is_boundary:
            return False
        x_lo, x_hi = self.x_interval(u)
        y_lo, y_hi = self.y_interval
        return x_lo < x < x_hi and y_lo < y < y_hi


# column index (by x) and row name (by y)
_LAYOUT = {
    Cell.S1: (0, 'high'),
    Cell.H1: (0, 'mid'),
    Cell.WHITE_LOWER_LEFT_FAR: (0, 'low'),
    Cell.H2: (1, 'high'),
    Cell.S2: (1, 'mid'),
    Cell.WHITE_LOWER_LEFT_NEAR: (1, 'low'),
    Cell.WHITE_UPPER_RIGHT_NEAR: (2, 'high'),
    Cell.S3: (2, 'mid'),
    Cell.H3: (2, 'low'),
    Cell.WHITE_UPPER_RIGHT_FAR: (3, 'high'),
    Cell.H4: (3, 'mid'),
    Cell.S4: (3, 'low'),
}
_BY_POSITION = {position: cell for cell, position in _LAYOUT.items()}
_BOUNDARY = frozenset({
    Cell.X_NEG_U, Cell.X_ZERO, Cell.X_POS_U,
    Cell.Y_NEG_ONE, Cell.Y_ZERO, Cell.Y_POS_ONE,
})

GREY_CELLS = (
    Cell.H1, Cell.H2, Cell.H3, Cell.H4,
    Cell.S1, Cell.S2, Cell.S3, Cell.S4,
)
WHITE_CELLS = (
    Cell.WHITE_UPPER_RIGHT_NEAR, Cell.WHITE_UPPER_RIGHT_FAR,
    Cell.WHITE_LOWER_LEFT_NEAR, Cell.WHITE_LOWER_LEFT_FAR,
)
# (x, y) -> (-x, -y) pairs
POINT_MIRROR = {
    Cell.H1: Cell.H4, Cell.H4: Cell.H1,
    Cell.H2: Cell.H3, Cell.H3: Cell.H2,
    Cell.S1: Cell.S4, Cell.S4: Cell.S1,
    Cell.S2: Cell.S3, Cell.S3: Cell.S2,
}


def classify_cell(x: float, y: float, u: float) -> Cell:
    """
    Cell of the canonical grid containing (x, y)

    Exact hits on x in {-u, 0, u} are reported first, then y in {-1, 0, 1}.
    """
    if x == -u:
        return Cell.X_NEG_U
    if x == 0:
        return Cell.X_ZERO
    if x == u:
        return Cell.X_POS_U
    if y == -1:
        return Cell.Y_NEG_ONE
    if y == 0:
        return Cell.Y_ZERO
    if y == 1:
        return Cell.Y_POS_ONE

    if x < -u:
        column = 0
    elif x < 0:
        column = 1
    elif x < u:
        column = 2
    else:
        column = 3
    if y < -1:
        row = 'low'
    elif y < 1:
        row = 'mid'
    else:
        row = 'high'
    return _BY_POSITION[(column, row)]


def default_x_grid(u: float, points: int = 9,
                   cells: Tuple[Cell, ...] = GREY_CELLS) -> dict:
    """
    Evenly spaced x values inside each cell's open X-interval

    Relative positions 1/(points+1) .. points/(points+1); unbounded intervals
    are cut at |x| = 5u.
    """
    grid = {}
    for cell in cells:
        lo, hi = cell.x_interval(u)
        lo = max(lo, -5 * u)
        hi = min(hi, 5 * u)
        grid[cell] = [lo + (hi - lo) * k / (points + 1) for k in range(1, points + 1)]
    return grid
