"""
CSV Reports
Bisector samples, convergence sweeps and face counts written with pandas,
floats at 17 significant digits so files round-trip exactly
"""
from pathlib import Path
from typing import Dict, Iterable, Union

import pandas as pd

from lpvoronoi.analysis.convergence import SweepReport
from lpvoronoi.geometry.bisector import BisectorSample

FLOAT_FORMAT = '%.17g'
SAMPLE_COLUMNS = ['p', 'x', 'y', 'cell', 'residual']
SWEEP_COLUMNS = ['p', 'x', 'cell', 'y_p', 'target', 'deviation', 'flag']
FACE_COLUMNS = ['site', 'faces']

PathLike = Union[str, Path]


def samples_frame(samples: Iterable[BisectorSample]) -> pd.DataFrame:
    return pd.DataFrame([sample.to_row() for sample in samples], columns=SAMPLE_COLUMNS)


def sweep_frame(report: SweepReport) -> pd.DataFrame:
    return pd.DataFrame([row.to_row() for row in report.rows], columns=SWEEP_COLUMNS)


def faces_frame(counts: Dict[int, int]) -> pd.DataFrame:
    return pd.DataFrame(
        [{'site': site, 'faces': faces} for site, faces in sorted(counts.items())],
        columns=FACE_COLUMNS,
    )


def _write(frame: pd.DataFrame, path: PathLike) -> None:
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


def write_samples_csv(samples: Iterable[BisectorSample], path: PathLike) -> None:
    """p,x,y,cell,residual"""
    _write(samples_frame(samples), path)


def write_sweep_csv(report: SweepReport, path: PathLike) -> None:
    """p,x,cell,y_p,target,deviation,flag; y_p and deviation are empty on noroot rows"""
    _write(sweep_frame(report), path)


def read_sweep_csv(path: PathLike) -> pd.DataFrame:
    return pd.read_csv(path, float_precision='round_trip')


def write_faces_csv(counts: Dict[int, int], path: PathLike) -> None:
    """site,faces"""
    _write(faces_frame(counts), path)


def faces_lines(counts: Dict[int, int]) -> str:
    """The faces CSV body without header, as printed by the CLI"""
    return faces_frame(counts).to_csv(index=False, header=False, lineterminator='\n')
