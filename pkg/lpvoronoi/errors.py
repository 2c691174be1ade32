"""
Error types for the lpvoronoi package
Every error is a ValueError carrying the name of the module that raised it
"""


class LpVoronoiError(ValueError):
    """Base class for all expected (domain) errors"""

    module = 'lpvoronoi'

    def describe(self) -> str:
        """One-line diagnostic used by the CLI and the HTTP service"""
        return f"{self.module}: {type(self).__name__}: {self}"


class ConfigError(LpVoronoiError):
    module = 'config'


# norms
class InvalidExponent(LpVoronoiError):
    module = 'norms'


class NonFiniteInput(LpVoronoiError):
    module = 'norms'


class EmptyVector(LpVoronoiError):
    module = 'norms'


# canonical
class DegeneratePair(LpVoronoiError):
    module = 'canonical'


class IdenticalSites(LpVoronoiError):
    module = 'canonical'


class PoleAtSite(LpVoronoiError):
    module = 'canonical'


class PoleAtUnit(LpVoronoiError):
    module = 'canonical'


class AsymptoteError(LpVoronoiError):
    module = 'canonical'


class PointOutsideCell(LpVoronoiError):
    module = 'canonical'


class InvalidHalfWidth(LpVoronoiError):
    module = 'canonical'


# bisector
class NoRootInCell(LpVoronoiError):
    module = 'bisector'


class InvalidCell(LpVoronoiError):
    module = 'bisector'


# convergence
class InsufficientData(LpVoronoiError):
    module = 'convergence'


# raster
class NoSites(LpVoronoiError):
    module = 'raster'


class InvalidGrid(LpVoronoiError):
    module = 'raster'


# service
class InvalidRequest(LpVoronoiError):
    module = 'service'
