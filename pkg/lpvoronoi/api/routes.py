"""
API Routes for the lpvoronoi service
Thin JSON / Netpbm wrappers over the same library calls the CLI makes
"""
import hashlib
from functools import wraps
from time import time
from typing import List, Optional

from flask import Flask, Response, jsonify, request

from lpvoronoi.config import Settings, get_settings
from lpvoronoi.errors import InvalidGrid, InvalidRequest, LpVoronoiError
from lpvoronoi.geometry.bisector import l0_bisector, sample_bisector_y, special_line_points
from lpvoronoi.geometry.canonical import Cell
from lpvoronoi.geometry.norms import Exponent, Vec2, compare_distance, lp_norm
from lpvoronoi.raster.netpbm import ppm_bytes
from lpvoronoi.raster.render import DEFAULT_GRID, Grid, default_window, face_counts, render_owners

# Simple in-memory cache for rendered responses
# Cache structure: {cache_key: {'data': ..., 'expires_at': timestamp}}
_cache = {}
MAX_CACHE_ENTRIES = 128
MAX_PIXELS = 2048 * 2048

ENDPOINTS = [
    '/api/norm?x&y&p',
    '/api/compare?qx&qy&ax&ay&bx&by&p',
    '/api/bisector?ax&ay&bx&by',
    '/api/sample?u&p&cell&x[&tol]',
    '/api/special-lines?u&p',
    '/api/render.ppm?site=x,y[&site=...]&p[&grid=WxH&window=xmin,ymin,xmax,ymax]',
    '/api/faces?site=x,y[&site=...]&p[&grid&window]',
    '/api/cache/clear',
    '/api/cache/stats',
]


def _float_arg(name: str, default: Optional[float] = None) -> float:
    raw = request.args.get(name)
    if raw is None:
        if default is None:
            raise InvalidRequest(f"missing query parameter {name!r}")
        return default
    try:
        return float(raw)
    except ValueError:
        raise InvalidRequest(f"query parameter {name!r} is not a number: {raw!r}")


def _exponent_arg() -> Exponent:
    raw = request.args.get('p')
    if raw is None:
        raise InvalidRequest("missing query parameter 'p'")
    return Exponent.parse(raw)


def _sites_arg() -> List[Vec2]:
    return [Vec2.parse(text) for text in request.args.getlist('site')]


def _grid_arg(sites: List[Vec2]) -> Grid:
    grid = Grid.from_spec(request.args.get('grid', DEFAULT_GRID),
                          request.args.get('window') or default_window(sites))
    if grid.width * grid.height > MAX_PIXELS:
        raise InvalidGrid(f"grid {grid.width}x{grid.height} exceeds {MAX_PIXELS} pixels")
    return grid


def register_routes(app: Flask, settings: Settings):
    """Register all API routes with the Flask app"""

    def generate_cache_key(path):
        """Generate a cache key from path and every (possibly repeated) query parameter"""
        key_parts = [path]
        query_params = sorted(request.args.items(multi=True))
        if query_params:
            key_parts.append(str(tuple(query_params)))
        key_string = '|'.join(key_parts)
        return hashlib.md5(key_string.encode()).hexdigest()

    def get_cached_data(cache_key):
        """Get data from cache if it exists and hasn't expired"""
        if cache_key in _cache:
            cached = _cache[cache_key]
            if time() < cached['expires_at']:
                return cached['data']
            del _cache[cache_key]
        return None

    def set_cached_data(cache_key, data, ttl):
        """Store data, dropping expired entries and then the oldest past MAX_CACHE_ENTRIES"""
        now = time()
        for key in [key for key, value in _cache.items() if now >= value['expires_at']]:
            del _cache[key]
        _cache.pop(cache_key, None)
        while _cache and len(_cache) >= MAX_CACHE_ENTRIES:
            del _cache[next(iter(_cache))]
        _cache[cache_key] = {
            'data': data,
            'expires_at': now + ttl
        }

    def to_response(data):
        if isinstance(data, tuple):
            body, mimetype = data
            return Response(body, mimetype=mimetype)
        return jsonify(data)

    def cached_endpoint(f):
        """Cache successful responses; errors propagate and are never cached"""
        @wraps(f)
        def decorated_function(*args, **kwargs):
            if not settings.enable_cache:
                return to_response(f(*args, **kwargs))
            cache_key = generate_cache_key(request.path)
            cached_result = get_cached_data(cache_key)
            if cached_result is not None:
                return to_response(cached_result)
            result = f(*args, **kwargs)
            set_cached_data(cache_key, result, settings.cache_ttl)
            return to_response(result)
        return decorated_function

    @app.errorhandler(LpVoronoiError)
    def handle_domain_error(e):
        return jsonify({'error': str(e), 'type': type(e).__name__, 'module': e.module}), 400

    @app.route('/')
    def index():
        """List the available endpoints"""
        return jsonify({'service': 'lpvoronoi', 'endpoints': ENDPOINTS})

    @app.route('/api/norm')
    @cached_endpoint
    def get_norm():
        """Distance of (x, y) from the origin"""
        e = _exponent_arg()
        v = Vec2(_float_arg('x'), _float_arg('y'))
        return {'value': lp_norm(v, e), 'exponent': str(e)}

    @app.route('/api/compare')
    @cached_endpoint
    def get_compare():
        """Which site is closer to q"""
        e = _exponent_arg()
        q = Vec2(_float_arg('qx'), _float_arg('qy'))
        a = Vec2(_float_arg('ax'), _float_arg('ay'))
        b = Vec2(_float_arg('bx'), _float_arg('by'))
        return {'ordering': compare_distance(q, a, b, e).value, 'exponent': str(e)}

    @app.route('/api/bisector')
    @cached_endpoint
    def get_bisector():
        """Analytic L_0 bisector of two sites"""
        a = Vec2(_float_arg('ax'), _float_arg('ay'))
        b = Vec2(_float_arg('bx'), _float_arg('by'))
        return l0_bisector(a, b).to_dict()

    @app.route('/api/sample')
    @cached_endpoint
    def get_sample():
        """One numeric bisector point in a grey cell"""
        p = _float_arg('p')
        cell = Cell.parse(request.args.get('cell', ''))
        sample = sample_bisector_y(_float_arg('x'), p, cell, _float_arg('u'),
                                   tol=_float_arg('tol', settings.tol))
        return sample.to_row()

    @app.route('/api/special-lines')
    @cached_endpoint
    def get_special_lines():
        """Bisector points on the grid lines"""
        points = special_line_points(_float_arg('p'), _float_arg('u'))
        return {'points': [
            {'x': pt.point.x, 'y': pt.point.y, 'line': pt.tag, 'gap': pt.gap, 'log_gap': pt.log_gap}
            for pt in points
        ]}

    @app.route('/api/render.ppm')
    @cached_endpoint
    def get_render():
        """Owner map as binary PPM"""
        sites = _sites_arg()
        owner_map = render_owners(sites, _exponent_arg(), _grid_arg(sites))
        return (ppm_bytes(owner_map), 'image/x-portable-pixmap')

    @app.route('/api/faces')
    @cached_endpoint
    def get_faces():
        """Face count per site"""
        sites = _sites_arg()
        counts = face_counts(render_owners(sites, _exponent_arg(), _grid_arg(sites)))
        return {'faces': {str(site): n for site, n in counts.items()}}

    @app.route('/api/cache/clear')
    def clear_cache():
        """Clear the cache"""
        cache_size = len(_cache)
        _cache.clear()
        return jsonify({
            'message': 'Cache cleared',
            'cleared_entries': cache_size
        })

    @app.route('/api/cache/stats')
    def cache_stats():
        """Get cache statistics"""
        now = time()
        active_entries = sum(1 for value in _cache.values() if now < value['expires_at'])
        return jsonify({
            'enabled': settings.enable_cache,
            'total_entries': len(_cache),
            'active_entries': active_entries,
            'expired_entries': len(_cache) - active_entries,
            'cache_ttl_seconds': settings.cache_ttl,
        })


def create_app(settings: Optional[Settings] = None) -> Flask:
    """Flask app with all routes registered"""
    app = Flask(__name__)
    app.config['JSON_SORT_KEYS'] = False
    register_routes(app, settings or get_settings())
    return app
