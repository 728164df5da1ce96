"""Twisted (co)homology, intersections of cycles with local coefficients, and orthogonal tensor invariants."""
__version__ = "0.1.0"
