#!/usr/bin/env python3
"""
lpvoronoi command line
Render diagrams and circles, sample bisectors, run convergence sweeps and
count faces

Usage:
    python -m lpvoronoi render --site -2,-1 --site 2,1 p=0 --grid 512x512 --window -6,-3,6,3 -o out.ppm
    python -m lpvoronoi bisector p=0.5 --u 2 --line y=-1
    python -m lpvoronoi converge --site -2,-1 --site 2,1 --plist 0.2,0.1,0.05,0.02,0.01 -o report.csv
    python -m lpvoronoi circle p=0.5 --radius 1 --grid 255x255 --window -2,-2,2,2 -o circle.pgm
    python -m lpvoronoi faces --site -2,-1 --site 2,1 p=0
"""
import argparse
import logging
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from lpvoronoi.analysis.convergence import (
    DEFAULT_P_LIST,
    check_monotone,
    converge_sweep,
    mirror_p_list,
)
from lpvoronoi.config import get_settings
from lpvoronoi.errors import InvalidExponent, LpVoronoiError, NoSites
from lpvoronoi.geometry.bisector import (
    l0_bisector,
    sample_bisector_y,
    sample_cells,
    special_line_points,
)
from lpvoronoi.geometry.canonical import Cell, canonicalize, default_x_grid
from lpvoronoi.geometry.norms import Exponent, ExponentKind, Vec2
from lpvoronoi.raster.netpbm import write_pgm, write_ppm
from lpvoronoi.raster.render import (
    DEFAULT_GRID, Grid, circle_window, default_window, face_counts, render_circle, render_owners,
)
from lpvoronoi.reports import faces_lines, samples_frame, write_faces_csv, write_samples_csv, write_sweep_csv

logger = logging.getLogger(__name__)

LINES = ('x=-u', 'x=0', 'x=u', 'y=-1', 'y=0', 'y=1')
# options whose values may start with '-'
_VALUE_OPTIONS = ('--site', '--window', '--plist', '--center', '--x')


@dataclass
class RunConfig:
    subcommand: str
    sites: List[Vec2] = field(default_factory=list)
    exponent: Optional[Exponent] = None
    grid: Optional[Grid] = None
    output: Optional[str] = None
    mask_output: Optional[str] = None
    tol: Optional[float] = None
    p_list: Tuple[float, ...] = ()
    points: int = 9
    u: Optional[float] = None
    line: Optional[str] = None
    cell: Optional[Cell] = None
    x: Optional[float] = None
    center: Vec2 = Vec2(0.0, 0.0)
    radius: Optional[float] = None
    threshold: Optional[float] = None


def _normalize_argv(argv: List[str]) -> List[str]:
    """Glue `--site -2,-1` into `--site=-2,-1` so argparse does not read a flag"""
    out = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith('-'):
            out.append(f"{token}={argv[i + 1]}")
            i += 2
            continue
        out.append(token)
        i += 1
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='lpvoronoi',
        description='L_p and geometric L_0 Voronoi diagrams',
    )
    sub = parser.add_subparsers(dest='subcommand', required=True)

    def add_sites(p):
        p.add_argument('--site', action='append', default=[], metavar='X,Y',
                       help='Site coordinates (repeatable)')

    def add_grid(p):
        p.add_argument('--grid', default=DEFAULT_GRID, metavar='WxH', help='Raster size in pixels')
        p.add_argument('--window', metavar='XMIN,YMIN,XMAX,YMAX',
                       help='World rectangle (default: 3x the site bounding box)')

    render = sub.add_parser('render', help='Render an owner map (PPM) or bisector mask (PGM)')
    add_sites(render)
    render.add_argument('exponent', metavar='p=VALUE')
    add_grid(render)
    render.add_argument('-o', '--output', required=True, help='.ppm for regions, .pgm for bisector pixels')
    render.add_argument('--mask', dest='mask_output', help='Also write the bisector mask as PGM')

    bisector = sub.add_parser('bisector', help='Describe or sample a bisector')
    add_sites(bisector)
    bisector.add_argument('exponent', metavar='p=VALUE')
    bisector.add_argument('--u', type=float, help='Canonical half-width (instead of two sites)')
    bisector.add_argument('--line', choices=LINES, help='Report bisector points on a grid line')
    bisector.add_argument('--cell', help='Grey cell to sample (H1..H4, S1..S4)')
    bisector.add_argument('--x', type=float, help='Abscissa to sample at (with --cell)')
    bisector.add_argument('--tol', type=float, help='Residual tolerance')
    bisector.add_argument('-o', '--output', help='CSV path for cell samples (default: stdout)')

    converge = sub.add_parser('converge', help='Sweep p -> 0 and check convergence')
    add_sites(converge)
    converge.add_argument('--u', type=float, help='Canonical half-width (instead of two sites)')
    converge.add_argument('--plist', default=','.join(str(p) for p in DEFAULT_P_LIST),
                          help='Comma-separated |p| values; both signs are swept')
    converge.add_argument('--points', type=int, default=9, help='x values per cell')
    converge.add_argument('--tol', type=float, help='Residual tolerance')
    converge.add_argument('--threshold', type=float, help='Final-deviation threshold')
    converge.add_argument('-o', '--output', required=True, help='CSV report path')

    circle = sub.add_parser('circle', help='Render an L_p circle as PGM')
    circle.add_argument('exponent', metavar='p=VALUE')
    circle.add_argument('--radius', type=float, required=True)
    circle.add_argument('--center', default='0,0', metavar='X,Y')
    circle.add_argument('--grid', default=DEFAULT_GRID, metavar='WxH')
    circle.add_argument('--window', metavar='XMIN,YMIN,XMAX,YMAX',
                        help='World rectangle (default: 1.5 radii around the center, widened for p < 0)')
    circle.add_argument('-o', '--output', required=True)

    faces = sub.add_parser('faces', help='Count faces per site')
    add_sites(faces)
    faces.add_argument('exponent', metavar='p=VALUE')
    add_grid(faces)
    faces.add_argument('-o', '--output', help='CSV path (default: site,faces lines on stdout)')
    return parser


def parse_args(argv: List[str]) -> RunConfig:
    """
    Parse and validate a command line

    Exits with code 2 (argparse usage error) on unknown flags, malformed
    numbers, bad exponents or bad grids.
    """
    parser = _build_parser()
    args = parser.parse_args(_normalize_argv(list(argv)))
    config = RunConfig(subcommand=args.subcommand)
    try:
        config.sites = [Vec2.parse(text) for text in getattr(args, 'site', [])]
        if getattr(args, 'exponent', None) is not None:
            config.exponent = Exponent.parse(args.exponent)
        config.output = getattr(args, 'output', None)
        config.mask_output = getattr(args, 'mask_output', None)
        config.tol = getattr(args, 'tol', None)
        config.u = getattr(args, 'u', None)
        config.threshold = getattr(args, 'threshold', None)

        if args.subcommand in ('render', 'faces'):
            config.grid = Grid.from_spec(args.grid, args.window or default_window(config.sites))
        elif args.subcommand == 'circle':
            config.radius = args.radius
            config.center = Vec2.parse(args.center)
            if not config.radius > 0:
                parser.error(f"--radius must be positive, got {config.radius}")
            window = args.window or circle_window(config.center, config.radius, config.exponent)
            config.grid = Grid.from_spec(args.grid, window)
        elif args.subcommand == 'bisector':
            config.line = args.line
            config.x = args.x
            if args.cell is not None:
                config.cell = Cell.parse(args.cell)
            if (config.cell is None) != (config.x is None):
                parser.error('--cell and --x go together')
        elif args.subcommand == 'converge':
            try:
                values = [float(v) for v in args.plist.split(',') if v.strip()]
            except ValueError:
                parser.error(f"malformed --plist {args.plist!r}")
            config.p_list = mirror_p_list(values)
            config.points = args.points
            if config.points < 1:
                parser.error('--points must be at least 1')

        if config.u is not None and not config.u >= 1:
            parser.error(f"--u must be >= 1, got {config.u}")
        if config.tol is not None and not config.tol > 0:
            parser.error(f"--tol must be positive, got {config.tol}")
    except LpVoronoiError as e:
        parser.error(e.describe())
    return config


def _canonical_u(config: RunConfig) -> float:
    if config.u is not None:
        return config.u
    if len(config.sites) != 2:
        raise NoSites('give exactly two --site values or --u')
    return canonicalize(config.sites[0], config.sites[1]).u


def _finite_p(config: RunConfig) -> float:
    if not config.exponent.is_finite:
        raise InvalidExponent(f"{config.subcommand} sampling needs a finite nonzero p, got {config.exponent}")
    return config.exponent.p


def _on_line(point: Vec2, line: str, u: float) -> bool:
    axis, value = line.split('=')
    target = {'-u': -u, '0': 0.0, 'u': u, '-1': -1.0, '1': 1.0}[value]
    return (point.x if axis == 'x' else point.y) == target


def _run_render(config: RunConfig) -> None:
    owner_map = render_owners(config.sites, config.exponent, config.grid)
    if config.output.lower().endswith('.pgm'):
        write_pgm(owner_map, config.output)
    else:
        write_ppm(owner_map, config.output)
    if config.mask_output:
        write_pgm(owner_map, config.mask_output)
    print(f"wrote {config.output} ({config.grid.width}x{config.grid.height}, "
          f"{len(config.sites)} sites, {config.exponent})")


def _run_bisector(config: RunConfig) -> None:
    if config.line is not None:
        p = _finite_p(config)
        u = _canonical_u(config)
        print('x,y,line,gap,log_gap')
        for point in special_line_points(p, u):
            if not _on_line(point.point, config.line, u):
                continue
            gap = '' if point.gap is None else f"{point.gap:.17g}"
            log_gap = '' if point.log_gap is None else f"{point.log_gap:.17g}"
            print(f"{point.point.x:.17g},{point.point.y:.17g},{config.line},{gap},{log_gap}")
        return

    if not config.exponent.is_finite:
        if config.exponent.kind is not ExponentKind.GEOMETRIC_ZERO or len(config.sites) != 2:
            raise InvalidExponent('the analytic bisector needs p=0 and two sites')
        for line in l0_bisector(config.sites[0], config.sites[1]).describe():
            print(line)
        return

    p = _finite_p(config)
    u = _canonical_u(config)
    if config.cell is not None:
        samples = [sample_bisector_y(config.x, p, config.cell, u, tol=config.tol)]
    else:
        samples, failures = sample_cells(p, u, tol=config.tol)
        for cell, x, _ in failures:
            logger.warning("no root in %s at x=%r for p=%r", cell.value, x, p)
    if config.output:
        write_samples_csv(samples, config.output)
        print(f"wrote {len(samples)} samples to {config.output}")
    else:
        sys.stdout.write(samples_frame(samples).to_csv(index=False, float_format='%.17g',
                                                       lineterminator='\n'))


def _run_converge(config: RunConfig) -> None:
    u = _canonical_u(config)
    report = converge_sweep(u, default_x_grid(u, points=config.points),
                            p_list=config.p_list, tol=config.tol)
    write_sweep_csv(report, config.output)
    verdicts = check_monotone(report, final_threshold=config.threshold)
    passed = sum(1 for v in verdicts if v.passed)

    print(f"\n{'=' * 60}")
    print(f"Convergence sweep u={u!r}: {len(report.rows)} rows, "
          f"{len(report.noroot_rows())} without a root")
    print(f"{'=' * 60}")
    for v in verdicts:
        mark = '✅' if v.passed else '❌'
        final = 'n/a' if v.final_deviation is None else f"{v.final_deviation:.3g}"
        detail = f"  {v.reason}" if v.reason else ''
        print(f"{mark} {v.cell.value:<3} x={v.x:<8.4g} p{'+' if v.sign > 0 else '-'}  final={final}{detail}")
    print(f"{'=' * 60}")
    print(f"{passed}/{len(verdicts)} series PASS; report written to {config.output}")


def _run_circle(config: RunConfig) -> None:
    mask = render_circle(config.center, config.radius, config.exponent, config.grid)
    write_pgm(mask, config.output)
    print(f"wrote {config.output} ({int(mask.sum())} curve pixels, {config.exponent})")


def _run_faces(config: RunConfig) -> None:
    counts = face_counts(render_owners(config.sites, config.exponent, config.grid))
    if config.output:
        write_faces_csv(counts, config.output)
    else:
        sys.stdout.write(faces_lines(counts))


_HANDLERS = {
    'render': _run_render,
    'bisector': _run_bisector,
    'converge': _run_converge,
    'circle': _run_circle,
    'faces': _run_faces,
}


def run(config: RunConfig) -> int:
    """Dispatch a parsed config; 0 on success, 1 on domain or I/O errors"""
    try:
        _HANDLERS[config.subcommand](config)
    except LpVoronoiError as e:
        print(f"lpvoronoi: {e.describe()}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"lpvoronoi: io: {e}", file=sys.stderr)
        return 1
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    try:
        settings = get_settings()
    except LpVoronoiError as e:
        print(f"lpvoronoi: {e.describe()}", file=sys.stderr)
        return 2
    logging.basicConfig(
        level=settings.log_level,
        stream=sys.stderr,
        format='%(levelname)s %(name)s: %(message)s',
    )
    config = parse_args(sys.argv[1:] if argv is None else argv)
    return run(config)


if __name__ == '__main__':
    sys.exit(main())
