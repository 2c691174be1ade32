#!/usr/bin/env python3
"""
Check Setup - Verify environment, settings and the numeric stack
"""
import sys
from pathlib import Path
from dotenv import load_dotenv

_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(_ROOT))
load_dotenv(_ROOT / ".env")

print("=" * 60)
print("Setup Check")
print("=" * 60)
print()

# .env is optional; every setting has a default
env_file_exists = (_ROOT / ".env").exists()
if env_file_exists:
    print("✅ .env file found")
else:
    print("⚠️  No .env file, using process environment and defaults")

# Check packages
print("\n" + "=" * 60)
print("Checking Packages")
print("=" * 60)
print()

missing = []
for name in ('numpy', 'scipy', 'pandas', 'flask', 'dotenv'):
    try:
        module = __import__(name)
        print(f"✅ {name} {getattr(module, '__version__', '')}".rstrip())
    except ImportError:
        print(f"❌ {name} not installed")
        missing.append(name)

if missing:
    print("\n   Run: pip install -r requirements.txt")
    print()
    exit(1)

# Check settings
print("\n" + "=" * 60)
print("Checking Settings")
print("=" * 60)
print()

from lpvoronoi.config import Settings
from lpvoronoi.errors import ConfigError

try:
    settings = Settings.from_env()
except ConfigError as e:
    print(f"❌ {e.describe()}")
    print("   Fix the LPV_* variables in your .env file")
    exit(1)

print(f"✅ LPV_TOL: {settings.tol:g}")
print(f"✅ LPV_FINAL_THRESHOLD: {settings.final_threshold:g}")
print(f"✅ LPV_MAX_WORKERS: {settings.max_workers}")
print(f"✅ LPV_LOG_LEVEL: {settings.log_level}")
print(f"✅ ENABLE_CACHE: {settings.enable_cache} (ttl {settings.cache_ttl}s)")

# Smoke test: the canonical pair under L_0 has three faces per site
print("\n" + "=" * 60)
print("Smoke Test")
print("=" * 60)
print()

try:
    from lpvoronoi.geometry.norms import Exponent, Vec2
    from lpvoronoi.raster.render import Grid, face_counts, render_owners

    grid = Grid.from_spec('256x256', '-6,-3,6,3')
    counts = face_counts(render_owners([Vec2(-2, -1), Vec2(2, 1)], Exponent.geometric_zero(), grid))
    if counts == {0: 3, 1: 3}:
        print("✅ L_0 diagram of (-2,-1), (2,1) has 3 + 3 faces")
    else:
        print(f"❌ Unexpected face counts: {counts}")
        exit(1)
except Exception as e:
    print(f"❌ Smoke test failed: {e}")
    exit(1)

print("\n" + "=" * 60)
print("✅ Setup check complete!")
print("=" * 60)
