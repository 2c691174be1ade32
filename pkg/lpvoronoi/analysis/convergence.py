"""
Convergence Checks
Sweeps numeric bisector samples over p -> 0 from both sides and compares them
with the L_0 targets h(x) = -u/x and s(x) = -x/u, plus the auxiliary bounds
(error budget, containment intervals, two-sided agreement)
"""
import logging
import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from lpvoronoi.config import get_settings
from lpvoronoi.errors import InsufficientData, InvalidCell, InvalidExponent, NoRootInCell
from lpvoronoi.geometry.bisector import sample_bisector_y
from lpvoronoi.geometry.canonical import (
    GREY_CELLS,
    Cell,
    default_x_grid,
    v_p,
    z_p_inv,
)

logger = logging.getLogger(__name__)

DEFAULT_P_LIST = (0.2, 0.1, 0.05, 0.02, 0.01)
_CELL_ORDER = {cell: i for i, cell in enumerate(GREY_CELLS)}


@dataclass(frozen=True)
class SweepRow:
    p: float
    x: float
    cell: Cell
    target: float
    y_p: Optional[float] = None
    deviation: Optional[float] = None
    flag: str = 'ok'

    @property
    def ok(self) -> bool:
        return self.flag == 'ok'

    def to_row(self) -> Dict:
        return {
            'p': self.p,
            'x': self.x,
            'cell': self.cell.value,
            'y_p': self.y_p,
            'target': self.target,
            'deviation': self.deviation,
            'flag': self.flag,
        }


@dataclass(frozen=True)
class SweepReport:
    u: float
    rows: Tuple[SweepRow, ...]
    tol: float
    p_list: Tuple[float, ...]
    x_grid: Dict[Cell, Tuple[float, ...]] = field(default_factory=dict)

    def ok_rows(self) -> List[SweepRow]:
        return [row for row in self.rows if row.ok]

    def noroot_rows(self) -> List[SweepRow]:
        return [row for row in self.rows if not row.ok]


@dataclass(frozen=True)
class MonotoneVerdict:
    cell: Cell
    x: float
    sign: int
    passed: bool
    final_deviation: Optional[float]
    series: Tuple[Tuple[float, float], ...]
    reason: str = ''


@dataclass(frozen=True)
class ErrorBudget:
    f: float
    zbound: float
    budget: float


def mirror_p_list(p_list: Iterable[float]) -> Tuple[float, ...]:
    """Both signs of every |p|, ordered by |p| descending then + before -"""
    magnitudes = set()
    for p in p_list:
        if p == 0 or not math.isfinite(p):
            raise InvalidExponent(f"sweep exponents must be finite and nonzero, got {p}")
        magnitudes.add(abs(p))
    mirrored = []
    for m in sorted(magnitudes, reverse=True):
        mirrored.extend([m, -m])
    return tuple(mirrored)


def _row_key(row: SweepRow):
    return (_CELL_ORDER[row.cell], row.x, -abs(row.p), -row.p)


def _sample_row(cell: Cell, x: float, p: float, u: float, tol: float) -> SweepRow:
    target = cell.target_value(x, u)
    try:
        sample = sample_bisector_y(x, p, cell, u, tol=tol)
    except NoRootInCell as e:
        logger.info("noroot: %s", e)
        return SweepRow(p=p, x=x, cell=cell, target=target, flag='noroot')
    return SweepRow(
        p=p,
        x=x,
        cell=cell,
        target=target,
        y_p=sample.y,
        deviation=abs(sample.y - target),
    )


def converge_sweep(u: float, x_per_cell: Optional[Dict[Cell, Sequence[float]]] = None,
                   p_list: Optional[Sequence[float]] = None, tol: Optional[float] = None,
                   max_workers: Optional[int] = None) -> SweepReport:
    """
    Sample y_p for every (cell, x, p) and measure |y_p - target|

    Args:
        u: canonical half-width
        x_per_cell: x values per grey cell (default_x_grid when omitted)
        p_list: exponents (both signs of DEFAULT_P_LIST when omitted)
        tol: residual tolerance (LPV_TOL when omitted)
        max_workers: thread count (LPV_MAX_WORKERS when omitted)

    Returns:
        SweepReport with rows sorted by (cell, x, |p| descending); cells with
        no root at some p are kept as 'noroot' rows

    Raises:
        InvalidCell: a white or boundary cell in x_per_cell
    """
    settings = get_settings()
    tol = settings.tol if tol is None else tol
    max_workers = settings.max_workers if max_workers is None else max_workers
    if x_per_cell is None:
        x_per_cell = default_x_grid(u)
    p_values = tuple(mirror_p_list(DEFAULT_P_LIST) if p_list is None else p_list)
    for cell in x_per_cell:
        if not cell.is_grey:
            raise InvalidCell(f"{cell.value} contains no bisector points")
    for p in p_values:
        if p == 0 or not math.isfinite(p):
            raise InvalidExponent(f"sweep exponents must be finite and nonzero, got {p}")

    jobs = [(cell, x, p) for cell, xs in x_per_cell.items() for x in xs for p in p_values]
    rows = []
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = {
            executor.submit(_sample_row, cell, x, p, u, tol): (cell, x, p)
            for cell, x, p in jobs
        }
        for future in as_completed(futures):
            rows.append(future.result())
    rows.sort(key=_row_key)

    noroot = sum(1 for row in rows if not row.ok)
    if noroot:
        logger.warning("%d of %d sweep rows found no root in their cell", noroot, len(rows))
    return SweepReport(
        u=u,
        rows=tuple(rows),
        tol=tol,
        p_list=p_values,
        x_grid={cell: tuple(xs) for cell, xs in x_per_cell.items()},
    )


def _series(report: SweepReport) -> Dict[Tuple[Cell, float, int], List[SweepRow]]:
    groups = defaultdict(list)
    for row in report.rows:
        groups[(row.cell, row.x, 1 if row.p > 0 else -1)].append(row)
    for rows in groups.values():
        rows.sort(key=lambda row: -abs(row.p))
    return groups


def check_monotone(report: SweepReport, final_threshold: Optional[float] = None,
                   slack: float = 1e-12) -> List[MonotoneVerdict]:
    """
    Per (cell, x, sign of p): deviation non-increasing as |p| shrinks and
    final deviation within the threshold

    'noroot' rows are left out of the series.

    Raises:
        InsufficientData: a group has fewer than two distinct |p|
    """
    if final_threshold is None:
        final_threshold = get_settings().final_threshold
    verdicts = []
    for (cell, x, sign), rows in sorted(_series(report).items(),
                                        key=lambda item: (_CELL_ORDER[item[0][0]], item[0][1], -item[0][2])):
        if len({abs(row.p) for row in rows}) < 2:
            raise InsufficientData(
                f"{cell.value} x={x!r} sign={sign:+d} needs at least two |p| values"
            )
        series = tuple((abs(row.p), row.deviation) for row in rows if row.ok)
        if len(series) < 2:
            verdicts.append(MonotoneVerdict(cell, x, sign, False, None, series,
                                            'fewer than two rows with a root'))
            continue
        reason = ''
        for (p_prev, d_prev), (p_next, d_next) in zip(series, series[1:]):
            if d_next > d_prev + slack:
                reason = f"deviation rose from {d_prev:.3g} at |p|={p_prev:g} to {d_next:.3g} at |p|={p_next:g}"
                break
        final = series[-1][1]
        if not reason and final > final_threshold:
            reason = f"final deviation {final:.3g} above {final_threshold:g}"
        verdicts.append(MonotoneVerdict(cell, x, sign, not reason, final, series, reason))
    return verdicts


def error_budget(x: float, p: float, u: float, cell: Cell) -> ErrorBudget:
    """
    Mean-value bound on |y_p - target|

    f = (1/p)(1 - c^-p) v_p(x) with c = |x| for h-cells and c = u for s-cells.
    The |z_p|^-1 bound is 1/2 in the middle row and |z_p(2|target|+3)|^-1 in
    the unbounded rows, where |z_p|^-1 grows with |y|.
    """
    if not cell.is_grey:
        raise InvalidCell(f"{cell.value} carries no bisector piece")
    target = cell.target_value(x, u)
    c = abs(x) if cell.target == 'h' else u
    factor = -math.expm1(-p * math.log(c)) / p
    f = factor * v_p(x, u, p)
    y_lo, y_hi = cell.y_interval
    if math.isinf(y_lo) or math.isinf(y_hi):
        zbound = z_p_inv(2 * abs(target) + 3, p)
    else:
        zbound = 0.5
    return ErrorBudget(f=f, zbound=zbound, budget=zbound * abs(f))


def check_error_budget(report: SweepReport, p_max: float = 0.05,
                       slack: float = 1e-12) -> List[Tuple[SweepRow, ErrorBudget]]:
    """Rows with |p| <= p_max whose deviation exceeds the error budget"""
    violations = []
    for row in report.ok_rows():
        if abs(row.p) > p_max:
            continue
        budget = error_budget(row.x, row.p, report.u, row.cell)
        if row.deviation > budget.budget + slack:
            violations.append((row, budget))
    return violations


def containment_interval(cell: Cell, target: float) -> Optional[Tuple[float, float]]:
    """Interval y_p must lie in for small |p|, for the unbounded-row cells"""
    if cell is Cell.H2:
        return (1.0, 2 * target + 3)
    if cell is Cell.H3:
        return (2 * target - 3, -1.0)
    if cell is Cell.S1:
        return (1.0, 2 * target + 3)
    if cell is Cell.S4:
        return (2 * target - 3, -1.0)
    return None


def check_containment(report: SweepReport, p_max: float = 0.05) -> List[SweepRow]:
    """Rows with |p| <= p_max outside their containment interval"""
    violations = []
    for row in report.ok_rows():
        if abs(row.p) > p_max:
            continue
        interval = containment_interval(row.cell, row.target)
        if interval is None:
            continue
        lo, hi = interval
        if not lo < row.y_p < hi:
            violations.append(row)
    return violations


def two_sided_gaps(report: SweepReport) -> Dict[Tuple[Cell, float], List[Tuple[float, float]]]:
    """|y_{+p} - y_{-p}| per (cell, x), ordered by |p| descending"""
    by_point = defaultdict(dict)
    for row in report.ok_rows():
        by_point[(row.cell, row.x)][row.p] = row.y_p
    gaps = {}
    for key, ys in by_point.items():
        series = []
        for p in sorted({abs(p) for p in ys}, reverse=True):
            if p in ys and -p in ys:
                series.append((p, abs(ys[p] - ys[-p])))
        gaps[key] = series
    return gaps
