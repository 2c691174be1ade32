"""
Bisectors
Analytic L_0 bisector (line plus hyperbola) with its six faces, and numeric
L_p bisector samples found by bracketing and bisection on w_p(y) = v_p(x)
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import bisect

from lpvoronoi.config import get_settings
from lpvoronoi.errors import (
    IdenticalSites,
    InvalidCell,
    InvalidExponent,
    NoRootInCell,
    PointOutsideCell,
)
from lpvoronoi.geometry.canonical import (
    Cell,
    SwapXY,
    ReflectX,
    ReflectY,
    canonicalize,
    check_half_width,
    default_x_grid,
    v_p,
    w_p,
)
from lpvoronoi.geometry.norms import Exponent, Ordering, Vec2, compare_distance

logger = logging.getLogger(__name__)

Window = Tuple[float, float, float, float]

# Bracket scan: first sample this far from a finite end, doubling up to _SCAN_LIMIT.
_SCAN_START = 1e-9
_SCAN_LIMIT = 1e12
_RTOL = 4 * np.finfo(float).eps
_XTOL = 1e-300
_MAXITER = 1100

ON_BISECTOR = 'OnBisector'


class Owner(Enum):
    A = 'A'
    B = 'B'


@dataclass(frozen=True)
class FaceLabel:
    """Face of the L_0 diagram: 0 holds the site, 1 and 2 follow counterclockwise"""

    owner: Owner
    index: int


@dataclass(frozen=True)
class L0Bisector:
    """
    B_*(a,b)

    General position: the line A*x + B*y = C and the hyperbola
    (x - cx)(y - cy) = k. Shared coordinate: `degenerate` is 'SharedX' or
    'SharedY' and the bisector is the two axis-parallel lines through
    `midpoint`.
    """

    a: Vec2
    b: Vec2
    midpoint: Vec2
    line: Optional[Tuple[float, float, float]] = None
    center: Optional[Vec2] = None
    k: Optional[float] = None
    lambda_point: Optional[Vec2] = None
    rho_point: Optional[Vec2] = None
    degenerate: Optional[str] = None

    def to_dict(self) -> Dict:
        data = {
            'a': self.a.as_tuple(),
            'b': self.b.as_tuple(),
            'midpoint': self.midpoint.as_tuple(),
            'degenerate': self.degenerate,
        }
        if self.degenerate is None:
            A, B, C = self.line
            data.update({
                'line': {'A': A, 'B': B, 'C': C},
                'hyperbola': {'cx': self.center.x, 'cy': self.center.y, 'k': self.k},
                'lambda': self.lambda_point.as_tuple(),
                'rho': self.rho_point.as_tuple(),
            })
        else:
            data['lines'] = [f"x = {self.midpoint.x!r}", f"y = {self.midpoint.y!r}"]
        return data

    def describe(self) -> List[str]:
        """Human-readable lines for the CLI"""
        if self.degenerate is not None:
            return [
                f"degenerate ({self.degenerate}): both axis-parallel lines through the midpoint",
                f"line: x = {self.midpoint.x!r}",
                f"line: y = {self.midpoint.y!r}",
            ]
        A, B, C = self.line
        return [
            f"line: {A!r}*x + {B!r}*y = {C!r}",
            f"hyperbola: (x - {self.center.x!r})*(y - {self.center.y!r}) = {self.k!r}",
            f"lambda: ({self.lambda_point.x!r}, {self.lambda_point.y!r})",
            f"rho: ({self.rho_point.x!r}, {self.rho_point.y!r})",
        ]


def l0_bisector(a: Vec2, b: Vec2) -> L0Bisector:
    """
    Closed-form L_0 bisector of two sites

    Raises:
        IdenticalSites: a == b
    """
    if a == b:
        raise IdenticalSites(f"sites coincide at ({a.x}, {a.y})")
    midpoint = Vec2((a.x + b.x) / 2, (a.y + b.y) / 2)
    if a.x == b.x:
        return L0Bisector(a=a, b=b, midpoint=midpoint, degenerate='SharedX')
    if a.y == b.y:
        return L0Bisector(a=a, b=b, midpoint=midpoint, degenerate='SharedY')
    line = (a.y - b.y, a.x - b.x, a.x * a.y - b.x * b.y)
    k = -0.25 * (a.x - b.x) * (a.y - b.y)
    return L0Bisector(
        a=a,
        b=b,
        midpoint=midpoint,
        line=line,
        center=midpoint,
        k=k,
        lambda_point=Vec2(a.x, b.y),
        rho_point=Vec2(b.x, a.y),
    )


def l0_bisector_points(bisector: L0Bisector, window: Window, n: int = 200) -> List[Vec2]:
    """
    Points of B_*(a,b) inside a window

    Each curve is sampled both as a function of x and of y so steep parts
    near the hyperbola asymptotes are covered too.
    """
    xmin, ymin, xmax, ymax = window
    xs = np.linspace(xmin, xmax, n)
    ys = np.linspace(ymin, ymax, n)
    points = []

    def keep(x, y):
        if xmin <= x <= xmax and ymin <= y <= ymax:
            points.append(Vec2(float(x), float(y)))

    if bisector.degenerate is not None:
        m = bisector.midpoint
        for x in xs:
            keep(x, m.y)
        for y in ys:
            keep(m.x, y)
        return points

    A, B, C = bisector.line
    if B != 0:
        for x in xs:
            keep(x, (C - A * x) / B)
    if A != 0:
        for y in ys:
            keep((C - B * y) / A, y)

    c, k = bisector.center, bisector.k
    for x in xs:
        if x != c.x:
            keep(x, c.y + k / (x - c.x))
    for y in ys:
        if y != c.y:
            keep(c.x + k / (y - c.y), y)
    return points


def _reverses_orientation(ops) -> bool:
    flips = sum(1 for op in ops if isinstance(op, (ReflectX, ReflectY, SwapXY)))
    return flips % 2 == 1


def l0_face(q: Vec2, a: Vec2, b: Vec2) -> Union[FaceLabel, str]:
    """
    Face of the L_0 diagram of {a, b} containing q

    Faces are split by the hyperbola into a middle region and two branch
    regions; the line then splits each region between the sites. In the
    canonical frame the (-u,-1) site owns the middle face plus the branch
    faces above the line, the (u,1) site the rest.

    Returns:
        FaceLabel, or ON_BISECTOR when q is L_0-equidistant

    Raises:
        DegeneratePair: a and b share a coordinate
    """
    ordering = compare_distance(q, a, b, Exponent.geometric_zero())
    if ordering is Ordering.EQUIDISTANT:
        return ON_BISECTOR
    owner = Owner.A if ordering is Ordering.CLOSER_TO_A else Owner.B

    frame = canonicalize(a, b)
    c = frame.apply(q)
    if c.x * c.y >= -frame.u:
        return FaceLabel(owner, 0)

    lower_left = Owner.A if (a.x, a.y) < (b.x, b.y) else Owner.B
    in_left_branch = c.x < 0
    # counterclockwise in the canonical frame: the lower-left site meets the
    # right branch first, the upper-right site the left branch
    if owner is lower_left:
        index = 2 if in_left_branch else 1
    else:
        index = 1 if in_left_branch else 2
    if _reverses_orientation(frame.ops):
        index = 3 - index
    return FaceLabel(owner, index)


@dataclass(frozen=True)
class BisectorSample:
    """A point (x, y_p) of B_p(a,b) in the canonical frame"""

    x: float
    y: float
    p: float
    cell: Cell
    residual: float

    def to_row(self) -> Dict:
        return {
            'p': self.p,
            'x': self.x,
            'y': self.y,
            'cell': self.cell.value,
            'residual': self.residual,
        }


def bisector_residual(x: float, y: float, u: float, p: float) -> float:
    """|w_p(y) - v_p(x)|"""
    return abs(w_p(y, p) - v_p(x, u, p))


def _scan_points(lo: float, hi: float) -> List[float]:
    """Scan points moving geometrically away from the finite end(s) of (lo, hi)"""
    offsets = []
    d = _SCAN_START
    while d <= _SCAN_LIMIT:
        offsets.append(d)
        d *= 2
    if math.isinf(hi):
        return [lo + d for d in offsets]
    if math.isinf(lo):
        return [hi - d for d in offsets]
    half = (hi - lo) / 2
    near = [d for d in offsets if d < half]
    points = [lo + d for d in near] + [lo + half] + [hi - d for d in reversed(near)]
    return points


def sample_bisector_y(x: float, p: float, cell: Cell, u: float,
                      tol: Optional[float] = None) -> BisectorSample:
    """
    Solve w_p(y) = v_p(x) for y inside a grey cell

    The bracket comes from the first sign change while scanning away from
    the cell's finite Y end; it is refined with bisection. Monotonicity of
    w_p is not assumed.

    Args:
        x: abscissa, strictly inside the cell's X-interval
        p: nonzero exponent
        cell: one of H1..H4, S1..S4
        u: canonical half-width, u >= 1
        tol: residual tolerance (LPV_TOL when omitted)

    Returns:
        BisectorSample with the residual at the returned y

    Raises:
        InvalidCell: white or boundary cell
        PointOutsideCell: x not in the cell's X-interval
        NoRootInCell: no sign change inside the cell
        InvalidHalfWidth: u below 1 or not finite
    """
    if tol is None:
        tol = get_settings().tol
    if p == 0 or not math.isfinite(p):
        raise InvalidExponent(f"sampling needs a finite nonzero p, got {p}")
    if not cell.is_grey:
        raise InvalidCell(f"{cell.value} contains no bisector points")
    check_half_width(u)
    x_lo, x_hi = cell.x_interval(u)
    if not x_lo < x < x_hi:
        raise PointOutsideCell(f"x = {x} is outside {cell.value} = ({x_lo}, {x_hi}) for u = {u}")

    target = v_p(x, u, p)

    def f(y):
        return w_p(y, p) - target

    y_lo, y_hi = cell.y_interval
    scan = _scan_points(y_lo, y_hi)

    bracket = None
    prev_y, prev_f = None, None
    for y in scan:
        fy = f(y)
        if fy == 0:
            return BisectorSample(x=x, y=y, p=p, cell=cell, residual=0.0)
        if prev_f is not None and (prev_f < 0) != (fy < 0):
            bracket = (prev_y, y)
            break
        prev_y, prev_f = y, fy

    if bracket is None:
        raise NoRootInCell(f"no sign change of w_p - v_p in {cell.value} at x = {x}, p = {p}")
    logger.debug("bracket for %s x=%r p=%r: %r", cell.value, x, p, bracket)

    lo, hi = min(bracket), max(bracket)
    root, info = bisect(f, lo, hi, xtol=_XTOL, rtol=_RTOL, maxiter=_MAXITER,
                        full_output=True, disp=False)
    candidates = {root, lo, hi, float(np.nextafter(root, -np.inf)), float(np.nextafter(root, np.inf))}
    candidates = [y for y in candidates if y_lo < y < y_hi]
    best = min(candidates, key=lambda y: abs(f(y)))
    residual = abs(f(best))
    if residual > tol:
        logger.warning(
            "%s x=%r p=%r: residual %.3g above tol %.3g at float resolution",
            cell.value, x, p, residual, tol,
        )
    return BisectorSample(x=x, y=best, p=p, cell=cell, residual=residual)


def sample_cells(p: float, u: float, x_per_cell: Optional[Dict[Cell, Sequence[float]]] = None,
                 tol: Optional[float] = None) -> Tuple[List[BisectorSample], List[Tuple[Cell, float, str]]]:
    """
    Sample B_p(a,b) across grey cells

    Returns:
        (samples, failures) where failures are (cell, x, message) for cells
        with no root at that p
    """
    if x_per_cell is None:
        x_per_cell = default_x_grid(u)
    samples, failures = [], []
    for cell, xs in x_per_cell.items():
        for x in xs:
            try:
                samples.append(sample_bisector_y(x, p, cell, u, tol=tol))
            except NoRootInCell as e:
                failures.append((cell, x, str(e)))
    return samples, failures


@dataclass(frozen=True)
class SpecialLinePoint:
    """
    Bisector point on one of the grid lines

    For the y = -1 / y = 1 roots at p > 0, `gap` is |x - u| (or |x + u|)
    and `log_gap` its natural log; the log stays meaningful after the gap
    underflows.
    """

    point: Vec2
    tag: str
    gap: Optional[float] = None
    log_gap: Optional[float] = None


def _log_half_sum(two_u: float, s: float) -> float:
    """ln((2u + e^s) / 2)"""
    if s < 0:
        return math.log((two_u + math.exp(s)) / 2)
    return s - math.log(2) + math.log1p(two_u * math.exp(-s))


def _solve_log_gap(f, lo: float, hi: float) -> float:
    root, _ = bisect(f, lo, hi, xtol=_XTOL, rtol=_RTOL, maxiter=_MAXITER,
                     full_output=True, disp=False)
    return root


def _extend_down(f, start: float) -> float:
    """Step down from start until f turns positive"""
    step, lo = 1.0, start
    while f(lo) <= 0:
        lo -= step
        step *= 2
        if lo < -1e6:
            raise NoRootInCell("could not bracket the y = -1 intersection")
    return lo


def _y_minus_one_roots(p: float, u: float) -> List[Tuple[float, float]]:
    """
    Roots of ((x+u)/2)^p - (|x-u|/2)^p = 1 near x = u, as (x, log_gap)

    Solved in s = ln|x - u| so the gap is tracked after u +- gap rounds to u.
    Both sides are compared as logs, ln(A^p - B^p) against 0, so large p
    does not overflow. The outer root only exists for p < 1.
    """
    two_u, ln2 = 2 * u, math.log(2)
    log_u = math.log(u)
    t = p * log_u
    guess = ln2 + (t + math.log(-math.expm1(-t))) / p

    def log_excess(log_a, s):
        """ln(A^p - B^p) with B = e^s / 2; -inf when A <= B"""
        log_b = s - ln2
        if log_b >= log_a:
            return -math.inf
        shortfall = -math.expm1(p * (log_b - log_a))
        return p * log_a + math.log(shortfall) if shortfall > 0 else -math.inf

    def inner(s):
        return log_excess(math.log((two_u - math.exp(s)) / 2), s)

    def outer(s):
        return log_excess(_log_half_sum(two_u, s), s)

    roots = []
    hi = log_u
    lo = _extend_down(inner, min(guess, hi) - 1.0)
    s_in = _solve_log_gap(inner, lo, hi)
    roots.append((u - math.exp(s_in), s_in))

    if p < 1:
        hi, step = max(guess + 1.0, log_u), 1.0
        while outer(hi) >= 0:
            hi += step
            step *= 2
            if hi > 700:
                hi = 700.0
                break
        if outer(hi) < 0:
            lo = _extend_down(outer, min(guess, hi) - 1.0)
            s_out = _solve_log_gap(outer, lo, hi)
            roots.append((u + math.exp(s_out), s_out))
    else:
        logger.debug("no outer y = -1 root for p = %r >= 1", p)
    return roots


def special_line_points(p: float, u: float) -> List[SpecialLinePoint]:
    """
    Bisector points on the lines x in {-u, 0, u} and y in {-1, 0, 1}

    The origin is always on the bisector. For p > 0 and u > 1 the line
    y = -1 carries the roots near u (mirrored on y = 1); for p < 0 only the
    corners (u,-1) and (-u,1) are equidistant. For u = 1 those corners are
    bisector points for every p.
    """
    if p == 0 or not math.isfinite(p):
        raise InvalidExponent(f"special lines need a finite nonzero p, got {p}")
    check_half_width(u)
    points = [SpecialLinePoint(Vec2(0.0, 0.0), 'origin')]
    if p < 0 or u == 1:
        points.append(SpecialLinePoint(Vec2(u, -1.0), 'y=-1'))
        points.append(SpecialLinePoint(Vec2(-u, 1.0), 'y=1'))
        return points

    roots = _y_minus_one_roots(p, u)
    for x, log_gap in roots:
        points.append(SpecialLinePoint(Vec2(x, -1.0), 'y=-1', math.exp(log_gap), log_gap))
    for x, log_gap in roots:
        points.append(SpecialLinePoint(Vec2(-x, 1.0), 'y=1', math.exp(log_gap), log_gap))
    return points
