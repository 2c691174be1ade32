"""Pixelwise owner maps, circles, face counts and Netpbm output"""
from lpvoronoi.raster.render import (
    TIE,
    Grid,
    OwnerMap,
    agreement_fraction,
    circle_window,
    count_faces,
    face_counts,
    l0_distance_band,
    render_circle,
    render_owners,
)
from lpvoronoi.raster.netpbm import palette, pgm_bytes, ppm_bytes, read_netpbm, write_pgm, write_ppm
