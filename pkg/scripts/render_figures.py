#!/usr/bin/env python3
"""
Render Figures
Renders the standard diagram and circle set into an output directory:
the two-site pair near p = 0, random sites over a range of exponents and
the unit circles around the corner-point thresholds
"""
import argparse
import sys
import os
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from threading import Lock
from typing import Dict, List, Tuple

import numpy as np

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from lpvoronoi.config import get_settings
from lpvoronoi.errors import LpVoronoiError
from lpvoronoi.geometry.norms import Exponent, Vec2
from lpvoronoi.raster.netpbm import write_pgm, write_ppm
from lpvoronoi.raster.render import Grid, circle_window, face_counts, render_circle, render_owners

PAIR = [Vec2(-2.0, -1.0), Vec2(2.0, 1.0)]
PAIR_EXPONENTS = ['p=0.05', 'p=-0.05', 'p=0']
SCATTER_EXPONENTS = ['p=-inf', 'p=-1', 'p=-0.2', 'p=-0.1', 'p=0', 'p=0.1',
                     'p=0.2', 'p=0.5', 'p=0.7', 'p=1', 'p=2', 'p=inf']
CIRCLE_EXPONENTS = ['p=0.58', 'p=0.43', 'p=-0.55']


def _slug(spec: str) -> str:
    return spec.replace('p=', 'p').replace('-', 'm').replace('.', '_')


class FigureRenderer:
    """Renders diagrams and circles in parallel and reports face counts"""

    def __init__(self, output_dir: Path, size: str, seed: int):
        self.output_dir = output_dir
        self.size = size
        self.seed = seed
        self.print_lock = Lock()  # Lock for thread-safe printing

    def scatter_sites(self, n: int = 8) -> List[Vec2]:
        rng = np.random.default_rng(self.seed)
        return [Vec2(float(x), float(y)) for x, y in rng.uniform(-4, 4, size=(n, 2))]

    def jobs(self) -> List[Tuple[str, str, List[Vec2], str]]:
        """(kind, name, sites, exponent spec) for every figure"""
        jobs = []
        for spec in PAIR_EXPONENTS:
            jobs.append(('diagram', f"pair_{_slug(spec)}", PAIR, spec))
        scatter = self.scatter_sites()
        for spec in SCATTER_EXPONENTS:
            jobs.append(('diagram', f"scatter_{_slug(spec)}", scatter, spec))
        for spec in CIRCLE_EXPONENTS:
            jobs.append(('circle', f"circle_{_slug(spec)}", [Vec2(0.0, 0.0)], spec))
        return jobs

    def render_one(self, kind: str, name: str, sites: List[Vec2], spec: str) -> Tuple[str, Dict[int, int]]:
        e = Exponent.parse(spec)
        if kind == 'circle':
            grid = Grid.from_spec(self.size, circle_window(sites[0], 1.0, e))
            write_pgm(render_circle(sites[0], 1.0, e, grid), self.output_dir / f"{name}.pgm")
            return name, {}
        window = '-6,-3,6,3' if sites is PAIR else '-5,-5,5,5'
        owner_map = render_owners(sites, e, Grid.from_spec(self.size, window))
        write_ppm(owner_map, self.output_dir / f"{name}.ppm")
        write_pgm(owner_map, self.output_dir / f"{name}_mask.pgm")
        return name, face_counts(owner_map)

    def render_all(self, max_workers: int) -> Dict:
        print("=" * 60)
        print("Figure Renderer (Parallel)")
        print("=" * 60)
        print()

        self.output_dir.mkdir(parents=True, exist_ok=True)
        jobs = self.jobs()
        print(f"Rendering {len(jobs)} figures at {self.size} into {self.output_dir} "
              f"(max {max_workers} workers)")
        print()

        stats = {'total': len(jobs), 'rendered': 0, 'failed': 0}
        start_time = time.time()
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            future_to_job = {executor.submit(self.render_one, *job): job for job in jobs}
            completed = 0
            for future in as_completed(future_to_job):
                completed += 1
                name = future_to_job[future][1]
                try:
                    _, counts = future.result()
                    stats['rendered'] += 1
                    faces = ', '.join(f"{site}:{count}" for site, count in sorted(counts.items()))
                    with self.print_lock:
                        print(f"[{completed}/{len(jobs)}] ✅ {name}" + (f"  faces {faces}" if faces else ''))
                except (LpVoronoiError, OSError) as e:
                    stats['failed'] += 1
                    with self.print_lock:
                        print(f"[{completed}/{len(jobs)}] ❌ {name}: {e}")

        elapsed_time = time.time() - start_time
        print("\n" + "=" * 60)
        print("Render Summary")
        print("=" * 60)
        print(f"Total figures: {stats['total']}")
        print(f"✅ Rendered: {stats['rendered']}")
        print(f"❌ Failed: {stats['failed']}")
        print(f"⏱️  Total time: {elapsed_time:.2f} seconds")
        print("=" * 60)
        return stats


def main():
    parser = argparse.ArgumentParser(description='Render the standard Voronoi diagrams and circles')
    parser.add_argument('--output-dir', default='figures', help='Directory for .ppm/.pgm files (default: figures)')
    parser.add_argument('--size', default='512x512', help='Raster size WxH (default: 512x512)')
    parser.add_argument('--seed', type=int, default=7, help='Seed for the scattered sites (default: 7)')
    parser.add_argument('--max-workers', type=int, default=None,
                        help='Maximum number of parallel workers (default: LPV_MAX_WORKERS)')
    args = parser.parse_args()

    max_workers = args.max_workers or get_settings().max_workers
    renderer = FigureRenderer(Path(args.output_dir), args.size, args.seed)
    stats = renderer.render_all(max_workers)
    sys.exit(1 if stats['failed'] else 0)


if __name__ == '__main__':
    main()
