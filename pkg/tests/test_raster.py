import numpy as np
import pytest

from lpvoronoi.errors import IdenticalSites, InvalidGrid, NoSites
from lpvoronoi.geometry.norms import Exponent, Vec2
from lpvoronoi.raster.netpbm import palette, pgm_bytes, ppm_bytes, read_netpbm, write_pgm, write_ppm
from lpvoronoi.raster.render import (
    TIE,
    Grid,
    agreement_fraction,
    circle_window,
    count_faces,
    default_window,
    face_counts,
    l0_distance_band,
    render_circle,
    render_owners,
)

CANONICAL_WINDOW = '-6,-3,6,3'


class TestGrid:
    def test_centers(self):
        grid = Grid(4, 2, 0, 0, 4, 2)
        assert list(grid.x_centers()) == [0.5, 1.5, 2.5, 3.5]
        assert list(grid.y_centers()) == [1.5, 0.5]
        X, Y = grid.pixel_centers()
        assert X.shape == (2, 4)
        assert Y[0, 0] == 1.5

    def test_from_spec(self):
        grid = Grid.from_spec('512x256', '-6,-3,6,3')
        assert (grid.width, grid.height) == (512, 256)
        assert grid.window == (-6.0, -3.0, 6.0, 3.0)
        assert grid.pixel_size == (12 / 512, 6 / 256)

    @pytest.mark.parametrize('size,window', [
        ('0x5', '0,0,1,1'),
        ('5x5', '1,0,0,1'),
        ('5x5', '0,0,1,0'),
        ('5x5', '0,0,inf,1'),
        ('abc', '0,0,1,1'),
        ('5x5', '0,0,1'),
    ])
    def test_invalid(self, size, window):
        with pytest.raises(InvalidGrid):
            Grid.from_spec(size, window)

    def test_locate(self):
        grid = Grid(4, 4, 0, 0, 4, 4)
        assert grid.locate(Vec2(0.5, 3.5)) == (0, 0)
        assert grid.locate(Vec2(3.9, 0.1)) == (3, 3)
        assert grid.locate(Vec2(4, 0)) == (3, 3)
        assert grid.locate(Vec2(5, 1)) is None

    def test_default_window(self, canonical_sites):
        assert default_window(list(canonical_sites)) == '-6.0,-3.0,6.0,3.0'
        assert default_window([Vec2(1, 1)]) == '0.0,0.0,2.0,2.0'


class TestOwners:
    def test_single_site(self):
        grid = Grid(16, 16, -1, -1, 1, 1)
        owner_map = render_owners([Vec2(0.3, -0.2)], Exponent.finite(0.5), grid)
        assert (owner_map.owners == 0).all()
        assert not owner_map.bisector_mask.any()
        assert face_counts(owner_map) == {0: 1}

    def test_euclidean_half_planes(self):
        a, b = Vec2(-1, -0.5), Vec2(1.2, 0.7)
        grid = Grid(101, 101, -3, -3, 3, 3)
        owner_map = render_owners([a, b], Exponent.finite(2), grid)
        X, Y = grid.pixel_centers()
        dx, dy = b.x - a.x, b.y - a.y
        mx, my = (a.x + b.x) / 2, (a.y + b.y) / 2
        signed = ((X - mx) * dx + (Y - my) * dy) / np.hypot(dx, dy)
        far = np.abs(signed) >= grid.pixel_diagonal
        assert far.sum() > 0.9 * far.size
        expected = np.where(signed < 0, 0, 1)
        assert (owner_map.owners[far] == expected[far]).all()
        assert face_counts(owner_map) == {0: 1, 1: 1}

    @pytest.mark.parametrize('size', ['512x512', '1024x1024'])
    def test_six_faces_under_geometric_zero(self, canonical_sites, size):
        grid = Grid.from_spec(size, CANONICAL_WINDOW)
        owner_map = render_owners(list(canonical_sites), Exponent.geometric_zero(), grid)
        assert face_counts(owner_map) == {0: 3, 1: 3}

    def test_sites_own_their_pixels(self, canonical_sites):
        a, b = canonical_sites
        grid = Grid.from_spec('512x512', CANONICAL_WINDOW)
        owner_map = render_owners([a, b], Exponent.geometric_zero(), grid)
        # a site's own axis lines are at distance 0, so step off them
        assert owner_map.owners[grid.locate(Vec2(a.x - 0.3, a.y - 0.2))] == 0
        assert owner_map.owners[grid.locate(Vec2(b.x + 0.3, b.y + 0.2))] == 1

    def test_origin_pixel_is_a_tie(self, canonical_sites):
        grid = Grid(121, 61, -6, -3, 6, 3)
        owner_map = render_owners(list(canonical_sites), Exponent.geometric_zero(), grid)
        assert owner_map.owners[30, 60] == TIE
        assert owner_map.bisector_mask[30, 60]

    def test_two_euclidean_faces(self, canonical_sites):
        grid = Grid.from_spec('512x512', CANONICAL_WINDOW)
        owner_map = render_owners(list(canonical_sites), Exponent.finite(2), grid)
        assert face_counts(owner_map) == {0: 1, 1: 1}

    @pytest.mark.parametrize('p', [-0.5, -0.05])
    def test_shared_y_splits_faces_for_negative_p(self, p):
        grid = Grid(201, 201, -3, -3, 3, 3)
        owner_map = render_owners([Vec2(-1, 0), Vec2(1, 0)], Exponent.finite(p), grid)
        # the row y = 0 and the column x = 0 are exact ties
        assert (owner_map.owners[100, :] == TIE).all()
        assert (owner_map.owners[:, 100] == TIE).all()
        assert count_faces(owner_map, 0) == 2
        assert count_faces(owner_map, 1) == 2

    def test_order_independence(self, canonical_sites):
        a, b = canonical_sites
        grid = Grid(64, 48, -6, -3, 6, 3)
        e = Exponent.finite(0.3)
        forward = render_owners([a, b], e, grid)
        backward = render_owners([b, a], e, grid)
        relabelled = np.where(backward.owners == TIE, TIE, 1 - backward.owners)
        assert (forward.owners == relabelled).all()
        assert (forward.bisector_mask == backward.bisector_mask).all()

    def test_errors(self):
        grid = Grid(4, 4, 0, 0, 1, 1)
        with pytest.raises(NoSites):
            render_owners([], Exponent.finite(2), grid)
        with pytest.raises(IdenticalSites):
            render_owners([Vec2(0, 0), Vec2(0, 0)], Exponent.finite(2), grid)

    @pytest.mark.parametrize('p', [0.05, -0.05])
    def test_small_p_agrees_with_geometric_zero(self, canonical_sites, p):
        a, b = canonical_sites
        grid = Grid.from_spec('512x512', CANONICAL_WINDOW)
        limit = render_owners([a, b], Exponent.geometric_zero(), grid)
        approx = render_owners([a, b], Exponent.finite(p), grid)
        band = l0_distance_band(grid, a, b, 2 * grid.pixel_diagonal)
        assert 0 < band.mean() < 0.5
        assert agreement_fraction(limit, approx, exclude=band) >= 0.99

    def test_agreement_needs_matching_shapes(self, canonical_sites):
        e = Exponent.finite(2)
        small = render_owners(list(canonical_sites), e, Grid(8, 8, -6, -3, 6, 3))
        large = render_owners(list(canonical_sites), e, Grid(16, 8, -6, -3, 6, 3))
        with pytest.raises(InvalidGrid):
            agreement_fraction(small, large)
        assert agreement_fraction(small, small) == 1.0


class TestCircles:
    # the branches meet the diagonal at r * 2^(-1/p): about 3.5 for -0.55, 32 for -0.2
    @pytest.mark.parametrize('p,half_width', [(-0.55, 8.0), (-0.2, 100.0)])
    def test_negative_p_stays_outside_the_square(self, p, half_width):
        grid = Grid(401, 401, -half_width, -half_width, half_width, half_width)
        r = 1.0
        mask = render_circle(Vec2(0, 0), r, Exponent.finite(p), grid)
        assert mask.any()
        X, Y = grid.pixel_centers()
        h = grid.pixel_size[0]
        inside_square = (np.abs(X) <= r - h) & (np.abs(Y) <= r - h)
        assert not (mask & inside_square).any()

    @pytest.mark.parametrize('p', [2, 0.58, 0.5, 0.43])
    def test_corner_points_are_on_the_curve(self, p):
        grid = Grid(201, 201, -2, -2, 2, 2)
        mask = render_circle(Vec2(0, 0), 1.0, Exponent.finite(p), grid)
        for corner in (Vec2(1, 0), Vec2(-1, 0), Vec2(0, 1), Vec2(0, -1)):
            row, col = grid.locate(corner)
            assert mask[row - 1:row + 2, col - 1:col + 2].any(), corner

    def test_offset_center(self):
        grid = Grid(101, 101, 0, 0, 10, 10)
        mask = render_circle(Vec2(5, 5), 2.0, Exponent.finite(2), grid)
        X, Y = grid.pixel_centers()
        radius = np.hypot(X[mask] - 5, Y[mask] - 5)
        assert np.all(np.abs(radius - 2.0) <= grid.pixel_diagonal)

    def test_radius_must_be_positive(self):
        with pytest.raises(InvalidGrid):
            render_circle(Vec2(0, 0), 0.0, Exponent.finite(2), Grid(4, 4, 0, 0, 1, 1))

    @pytest.mark.parametrize('e,half', [
        (Exponent.finite(2), 1.5),
        (Exponent.finite(0.5), 1.5),
        (Exponent.pos_inf(), 1.5),
        (Exponent.finite(-0.2), 48.0),
    ])
    def test_circle_window_half_extent(self, e, half):
        xmin, ymin, xmax, ymax = (float(v) for v in circle_window(Vec2(1, -1), 1.0, e).split(','))
        assert (xmax - xmin) / 2 == pytest.approx(half)
        assert (xmin + xmax) / 2 == pytest.approx(1.0)
        assert (ymin + ymax) / 2 == pytest.approx(-1.0)

    def test_circle_window_stays_finite_near_zero(self):
        window = circle_window(Vec2(0, 0), 1.0, Exponent.finite(-1e-6))
        assert all(np.isfinite(float(v)) for v in window.split(','))

    @pytest.mark.parametrize('p', [-0.55, -0.2, -1.0])
    def test_default_window_draws_negative_p_circles(self, p):
        e = Exponent.finite(p)
        grid = Grid.from_spec('201x201', circle_window(Vec2(0, 0), 1.0, e))
        assert render_circle(Vec2(0, 0), 1.0, e, grid).any()


class TestNetpbm:
    def test_palette(self):
        colours = palette(3)
        assert colours.tolist() == [[255, 0, 0], [0, 255, 0], [0, 0, 255]]

    def test_tiny_ppm(self):
        owner_map = render_owners([Vec2(0, 0)], Exponent.finite(2), Grid(2, 2, -1, -1, 1, 1))
        assert ppm_bytes(owner_map) == b'P6\n2 2\n255\n' + bytes([255, 0, 0] * 4)

    def test_empty_pgm(self):
        assert pgm_bytes(np.zeros((2, 3), dtype=bool)) == b'P5\n3 2\n255\n' + bytes(6)

    def test_ties_render_black(self):
        owner_map = render_owners([Vec2(-1, 0), Vec2(1, 0)], Exponent.finite(-0.5),
                                  Grid(21, 21, -3, -3, 3, 3))
        data = ppm_bytes(owner_map)
        header = b'P6\n21 21\n255\n'
        pixels = np.frombuffer(data[len(header):], dtype=np.uint8).reshape(21, 21, 3)
        assert (pixels[10, :] == 0).all()
        assert (pixels[0, 0] == [255, 0, 0]).all()

    def test_files_are_deterministic(self, tmp_path, canonical_sites):
        grid = Grid(64, 32, -6, -3, 6, 3)
        first, second = tmp_path / 'first.ppm', tmp_path / 'second.ppm'
        write_ppm(render_owners(list(canonical_sites), Exponent.geometric_zero(), grid), first)
        write_ppm(render_owners(list(canonical_sites), Exponent.geometric_zero(), grid), second)
        assert first.read_bytes() == second.read_bytes()

        magic, pixels = read_netpbm(first)
        assert magic == 'P6'
        assert pixels.shape == (32, 64, 3)

    def test_mask_from_owner_map(self, tmp_path, canonical_sites):
        owner_map = render_owners(list(canonical_sites), Exponent.finite(2), Grid(32, 16, -6, -3, 6, 3))
        path = tmp_path / 'mask.pgm'
        write_pgm(owner_map, path)
        magic, pixels = read_netpbm(path)
        assert magic == 'P5'
        assert ((pixels == 255) == owner_map.bisector_mask).all()
