"""
Netpbm Output
Binary PGM (P5) for masks and PPM (P6) for owner maps, maxval 255
"""
import colorsys
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from lpvoronoi.raster.render import TIE, OwnerMap

PathLike = Union[str, Path]


def palette(n: int) -> np.ndarray:
    """n RGB colours: site i gets hue i/n at full saturation and value"""
    colours = [colorsys.hsv_to_rgb(i / n, 1.0, 1.0) for i in range(n)]
    return np.array([[round(c * 255) for c in rgb] for rgb in colours], dtype=np.uint8).reshape(n, 3)


def pgm_bytes(image: Union[OwnerMap, np.ndarray]) -> bytes:
    """P5 image; marked pixels are 255. An OwnerMap contributes its bisector mask."""
    mask = image.bisector_mask if isinstance(image, OwnerMap) else np.asarray(image, dtype=bool)
    height, width = mask.shape
    data = np.where(mask, 255, 0).astype(np.uint8)
    return f"P5\n{width} {height}\n255\n".encode('ascii') + data.tobytes()


def ppm_bytes(owner_map: OwnerMap, colours: Optional[np.ndarray] = None) -> bytes:
    """P6 image; TIE and bisector pixels are black"""
    if colours is None:
        colours = palette(owner_map.site_count)
    owners = owner_map.owners
    height, width = owners.shape
    rgb = np.zeros((height, width, 3), dtype=np.uint8)
    filled = (owners != TIE) & ~owner_map.bisector_mask
    rgb[filled] = colours[owners[filled]]
    return f"P6\n{width} {height}\n255\n".encode('ascii') + rgb.tobytes()


def write_pgm(image: Union[OwnerMap, np.ndarray], path: PathLike) -> None:
    with open(path, 'wb') as f:
        f.write(pgm_bytes(image))


def write_ppm(owner_map: OwnerMap, path: PathLike, colours: Optional[np.ndarray] = None) -> None:
    with open(path, 'wb') as f:
        f.write(ppm_bytes(owner_map, colours))


def read_netpbm(path: PathLike) -> Tuple[str, np.ndarray]:
    """Read back a file written here: (magic, pixels) with pixels shaped (h, w) or (h, w, 3)"""
    with open(path, 'rb') as f:
        magic = f.readline().decode('ascii').strip()
        width, height = (int(v) for v in f.readline().decode('ascii').split())
        int(f.readline())
        buf = f.read()
    channels = 3 if magic == 'P6' else 1
    pixels = np.frombuffer(buf, dtype=np.uint8).reshape(height, width, channels)
    return magic, pixels[:, :, 0] if channels == 1 else pixels
