"""Exact analysis of rotation pairs from angle triplets: traces, minimal
polynomials, finite-group closure, orbit density and SO(4) transport."""

__version__ = "0.1.0"
