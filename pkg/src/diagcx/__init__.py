"""Diagonal complexes of punctured and symmetric surfaces.

Construction and exhaustive verification at desk scale: associahedra,
cyclohedra, barycentric label posets, the puncture-forgetting projection
and its fibers, the half-surgery maps and the discrete Morse matching that
contracts their preimages.
"""

__version__ = "0.1.0"
