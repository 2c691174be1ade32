"""
lpvoronoi
L_p and geometric L_0 Voronoi diagrams: distances, bisectors, convergence
checks as p -> 0, and pixelwise rendering
"""
__version__ = '0.1.0'
