"""Exact-arithmetic tropical Hodge theory toolkit.

Chow rings of unimodular Bergman fans with Poincare duality / Hard Lefschetz /
Hodge-Riemann verification, tropical cohomology and Steenbrink complexes of
compactified polyhedral complexes, abstract Hodge-Lefschetz structures, and a
triangulation toolkit certified by exact rational linear programming.
"""

__version__ = "0.1.0"
