"""HTTP service over the library"""
from lpvoronoi.api.routes import create_app, register_routes
