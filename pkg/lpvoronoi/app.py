#!/usr/bin/env python3
"""
Flask Web Application for lpvoronoi
Serve with `gunicorn lpvoronoi.app:app` or run directly for local use
"""
import os
import sys

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from lpvoronoi.api.routes import create_app
from lpvoronoi.config import get_settings

app = create_app()

if __name__ == '__main__':
    settings = get_settings()

    print(f"\n{'='*60}")
    print("lpvoronoi service")
    print(f"{'='*60}")
    print(f"Server starting on http://{settings.host}:{settings.port}")
    print(f"Endpoint list: http://{settings.host}:{settings.port}/")
    print(f"{'='*60}\n")

    app.run(debug=settings.debug, host=settings.host, port=settings.port)
