"""Exact intersection theory for the space of six lines in the projective plane.

The compactified moduli space of six-line arrangements is a 4-fold with 15
singular points, each admitting a small resolution by a P^1 or a P^2 fiber.
This package builds the Chow ring of every such resolution over the integers,
certifies the rank and torsion claims, computes the boundary complex and its
homology, and evaluates intersection numbers of boundary, psi, delta and
canonical classes.  Everything is exact; no floating point anywhere.
"""

__version__ = "0.1.0"
