"""Solvers for the eccentricity shortest path problem.

Exact solvers parameterized by feedback-vertex, disjoint-paths and
split-vertex deletion sets, a (1+eps)-approximation, a brute-force oracle,
and a hardness-instance generator, cross-validated against each other.
"""

__version__ = "0.1.0"
